//! Numerical continuation of strands along paths in the parameter domain.
//!
//! Closed-form strands are evaluated directly; root strands are tracked by an
//! Euler predictor on the root ODE with a Newton corrector on the polynomial.
//! Steps are accepted only when every strand moves by less than a quarter of
//! the running minimum separation (so crossings cannot slip between samples)
//! and the configuration stays separated above `eps_track`; otherwise the
//! step is bisected.

use num_complex::Complex64;

use crate::error::Partner;
use crate::motion::{self, MotionFamily, StrandSpec};
use crate::path::Path;
use crate::sphere::{chordal_finite, chordal_to_infinity, Configuration, SpherePoint};
use crate::{Error, Result, Tolerances};

/// Sampled trajectories of all strands (frozen punctures included as constant
/// strands) along one path.
#[derive(Clone, Debug)]
pub struct StrandTracks {
    times: Vec<f64>,
    /// `positions[strand][sample]`.
    positions: Vec<Vec<Complex64>>,
    min_separation: f64,
    path: Path,
    /// Strand specs for on-track refinement; absent for synthetic tracks.
    specs: Option<Vec<StrandSpec>>,
}

impl StrandTracks {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn strand_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self, strand: usize) -> &[Complex64] {
        &self.positions[strand]
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Build tracks from explicit samples (used for synthetic test data);
    /// validates the track invariants.
    pub fn from_samples(
        path: Path,
        times: Vec<f64>,
        positions: Vec<Vec<Complex64>>,
        tol: &Tolerances,
    ) -> Result<StrandTracks> {
        if times.len() < 2 {
            return Err(Error::InvalidDomain {
                reason: "tracks need at least two samples".to_string(),
            });
        }
        for w in times.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidDomain {
                    reason: "track times must increase".to_string(),
                });
            }
        }
        for p in &positions {
            if p.len() != times.len() {
                return Err(Error::InvalidDomain {
                    reason: "track length mismatch".to_string(),
                });
            }
        }
        let min_separation = min_separation_over(&positions, &times);
        if min_separation <= tol.eps_track {
            return Err(Error::CollisionDetected {
                t: 0.0,
                i: 0,
                j: Partner::Puncture(1),
            });
        }
        Ok(StrandTracks {
            times,
            positions,
            min_separation,
            path,
            specs: None,
        })
    }

    /// Position of a strand at an arbitrary path time. Closed-form strands
    /// evaluate exactly; root strands Newton-correct from the nearest sample;
    /// synthetic tracks interpolate linearly.
    pub fn position_at(&self, strand: usize, t: f64, tol: &Tolerances) -> Result<Complex64> {
        if strand >= self.positions.len() {
            return Err(Error::IndexOutOfRange {
                index: strand,
                len: self.positions.len(),
            });
        }
        if strand == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if strand == 1 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let idx = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.positions[strand][i]),
            Err(i) => i,
        };
        let (lo, hi) = (idx.saturating_sub(1), idx.min(self.times.len() - 1));
        match self.specs.as_ref().map(|s| &s[strand - 2]) {
            Some(StrandSpec::ClosedForm(e)) => Ok(e.eval(self.path.point(t))),
            Some(StrandSpec::AlgebraicRoot { coeffs, .. }) => {
                let seed = if (t - self.times[lo]).abs() < (self.times[hi] - t).abs() {
                    self.positions[strand][lo]
                } else {
                    self.positions[strand][hi]
                };
                motion::newton_root(coeffs, self.path.point(t), seed, tol)
            }
            None => {
                let (t0, t1) = (self.times[lo], self.times[hi]);
                let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
                Ok(self.positions[strand][lo] * (1.0 - w) + self.positions[strand][hi] * w)
            }
        }
    }

    /// The configuration at the end of the path.
    pub fn end_configuration(&self, tol: &Tolerances) -> Result<Configuration> {
        let pts: Vec<SpherePoint> = self
            .positions
            .iter()
            .map(|p| SpherePoint::Finite(*p.last().unwrap()))
            .collect();
        crate::sphere::make_configuration(&pts, tol)
    }

    /// Start positions of every strand.
    pub fn start_positions(&self) -> Vec<Complex64> {
        self.positions.iter().map(|p| p[0]).collect()
    }

    /// End positions of every strand.
    pub fn end_positions(&self) -> Vec<Complex64> {
        self.positions.iter().map(|p| *p.last().unwrap()).collect()
    }
}

fn separation_at(values: &[Complex64]) -> (f64, usize, Partner) {
    let mut min = f64::INFINITY;
    let mut who = (0usize, Partner::Infinity);
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let d = chordal_finite(values[i], values[j]);
            if d < min {
                min = d;
                who = (i, Partner::Puncture(j));
            }
        }
        let d = chordal_to_infinity(values[i]);
        if d < min {
            min = d;
            who = (i, Partner::Infinity);
        }
    }
    (min, who.0, who.1)
}

fn min_separation_over(positions: &[Vec<Complex64>], times: &[f64]) -> f64 {
    let mut min = f64::INFINITY;
    for s in 0..times.len() {
        let values: Vec<Complex64> = positions.iter().map(|p| p[s]).collect();
        min = min.min(separation_at(&values).0);
    }
    min
}

/// Continue all strands of a family along a path starting at the basepoint.
pub fn continue_strands(
    family: &MotionFamily,
    path: &Path,
    tol: &Tolerances,
) -> Result<StrandTracks> {
    let x0 = family.domain().basepoint();
    if (path.start() - x0).norm() > 1e-9 {
        return Err(Error::OutsideDomain {
            lambda: path.start(),
        });
    }
    let start: Vec<Complex64> = family.base().punctures().to_vec();
    continue_strands_from(family, path, &start, tol)
}

/// Continue all strands along a path from explicit start positions (used to
/// chain continuations across concatenated paths).
pub fn continue_strands_from(
    family: &MotionFamily,
    path: &Path,
    start: &[Complex64],
    tol: &Tolerances,
) -> Result<StrandTracks> {
    let m = family.strand_count();
    if start.len() != m {
        return Err(Error::IndexOutOfRange {
            index: start.len(),
            len: m,
        });
    }
    if !family.domain().contains(path.start()) {
        return Err(Error::OutsideDomain {
            lambda: path.start(),
        });
    }

    let n0 = tol.initial_path_samples.max(8);
    let mut pending: Vec<f64> = (1..=n0).rev().map(|k| k as f64 / n0 as f64).collect();
    let mut times = vec![0.0f64];
    let mut states: Vec<Vec<Complex64>> = vec![start.to_vec()];
    let (mut run_sep, _, _) = separation_at(start);
    if run_sep <= tol.eps_track {
        let (d, i, j) = separation_at(start);
        let _ = d;
        return Err(Error::CollisionDetected { t: 0.0, i, j });
    }

    while let Some(&target) = pending.last() {
        let t_cur = *times.last().unwrap();
        let cur = states.last().unwrap().clone();
        match propose_step(family, path, t_cur, &cur, target, run_sep, tol) {
            Ok(next) => {
                let (sep, i, j) = separation_at(&next);
                if sep <= tol.eps_track {
                    if target - t_cur < tol.min_step {
                        return Err(Error::CollisionDetected { t: target, i, j });
                    }
                    pending.push((t_cur + target) / 2.0);
                    continue;
                }
                // anti-crossing displacement bound
                let max_move = cur
                    .iter()
                    .zip(next.iter())
                    .map(|(&a, &b)| chordal_finite(a, b))
                    .fold(0.0f64, f64::max);
                if max_move >= run_sep.min(sep) / 4.0 {
                    if target - t_cur < tol.min_step {
                        return Err(Error::StepUnderflow { t: target });
                    }
                    pending.push((t_cur + target) / 2.0);
                    continue;
                }
                run_sep = run_sep.min(sep);
                times.push(target);
                states.push(next);
                pending.pop();
            }
            Err(StepTrouble::Fatal(e)) => return Err(e),
            Err(StepTrouble::Retry) => {
                if target - t_cur < tol.min_step {
                    return Err(Error::StepUnderflow { t: target });
                }
                pending.push((t_cur + target) / 2.0);
            }
        }
    }

    // transpose to per-strand tracks
    let mut positions: Vec<Vec<Complex64>> = vec![Vec::with_capacity(times.len()); m];
    for state in &states {
        for (i, &z) in state.iter().enumerate() {
            positions[i].push(z);
        }
    }

    let mut tracks = StrandTracks {
        times,
        positions,
        min_separation: run_sep,
        path: path.clone(),
        specs: Some(family.strands().to_vec()),
    };
    enforce_displacement_invariant(&mut tracks, tol)?;
    Ok(tracks)
}

enum StepTrouble {
    Retry,
    Fatal(Error),
}

fn propose_step(
    family: &MotionFamily,
    path: &Path,
    t_cur: f64,
    cur: &[Complex64],
    target: f64,
    run_sep: f64,
    tol: &Tolerances,
) -> std::result::Result<Vec<Complex64>, StepTrouble> {
    let lam0 = path.point(t_cur);
    let lam1 = path.point(target);
    if !family.domain().contains(lam1) {
        return Err(StepTrouble::Fatal(Error::OutsideDomain { lambda: lam1 }));
    }
    let mut next = Vec::with_capacity(cur.len());
    next.push(Complex64::new(0.0, 0.0));
    next.push(Complex64::new(1.0, 0.0));
    for (k, spec) in family.strands().iter().enumerate() {
        let z_cur = cur[k + 2];
        let z_next = match spec {
            StrandSpec::ClosedForm(e) => {
                let v = e.eval(lam1);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(StepTrouble::Fatal(Error::CollisionAtParameter {
                        i: k + 2,
                        j: Partner::Infinity,
                        lambda: lam1,
                        dist: 0.0,
                    }));
                }
                v
            }
            StrandSpec::AlgebraicRoot { coeffs, .. } => {
                let dz_dl = {
                    let dp_dz = motion::poly_dz(coeffs, lam0, z_cur);
                    if dp_dz.norm() < 1e-14 {
                        return Err(StepTrouble::Retry);
                    }
                    -motion::poly_dlambda(coeffs, lam0, z_cur) / dp_dz
                };
                let z_pred = z_cur + dz_dl * (lam1 - lam0);
                let z_corr = match motion::newton_root(coeffs, lam1, z_pred, tol) {
                    Ok(z) => z,
                    Err(_) => return Err(StepTrouble::Retry),
                };
                // corrector must stay on the predicted branch
                if chordal_finite(z_corr, z_pred) > run_sep / 8.0 {
                    return Err(StepTrouble::Retry);
                }
                z_corr
            }
        };
        next.push(z_next);
    }
    Ok(next)
}

/// Re-check the per-step displacement bound against the final minimum
/// separation and insert midpoints until it holds everywhere.
fn enforce_displacement_invariant(tracks: &mut StrandTracks, tol: &Tolerances) -> Result<()> {
    for _round in 0..48 {
        let bound = tracks.min_separation / 4.0;
        let mut inserts: Vec<(usize, f64)> = Vec::new();
        for s in 0..tracks.times.len() - 1 {
            let worst = (0..tracks.positions.len())
                .map(|i| chordal_finite(tracks.positions[i][s], tracks.positions[i][s + 1]))
                .fold(0.0f64, f64::max);
            if worst >= bound {
                let mid = (tracks.times[s] + tracks.times[s + 1]) / 2.0;
                if tracks.times[s + 1] - tracks.times[s] < tol.min_step {
                    return Err(Error::StepUnderflow { t: mid });
                }
                inserts.push((s + 1, mid));
            }
        }
        if inserts.is_empty() {
            return Ok(());
        }
        // insert from the back so indices stay valid
        for (idx, t) in inserts.into_iter().rev() {
            let mut column = Vec::with_capacity(tracks.positions.len());
            for i in 0..tracks.positions.len() {
                column.push(tracks.position_at(i, t, tol)?);
            }
            tracks.times.insert(idx, t);
            for (i, z) in column.into_iter().enumerate() {
                tracks.positions[i].insert(idx, z);
            }
        }
        tracks.min_separation = min_separation_over(&tracks.positions, &tracks.times);
        if tracks.min_separation <= tol.eps_track {
            return Err(Error::CollisionDetected {
                t: 0.0,
                i: 0,
                j: Partner::Infinity,
            });
        }
    }
    Err(Error::StepUnderflow { t: f64::NAN })
}

/// Minimum over all samples of the pairwise chordal separation, the frozen
/// punctures and the implicit puncture at infinity included.
pub fn min_separation(tracks: &StrandTracks) -> f64 {
    min_separation_over(&tracks.positions, &tracks.times)
}

/// Integer winding number of one strand's track around a center. The path
/// must be closed and the track must stay clear of the center.
pub fn winding_number(
    tracks: &StrandTracks,
    strand: usize,
    center: SpherePoint,
    tol: &Tolerances,
) -> Result<i64> {
    if !tracks.path.is_closed() {
        return Err(Error::NotClosed);
    }
    let c = match center {
        SpherePoint::Finite(z) => z,
        SpherePoint::Infinity => {
            return Err(Error::TooClose {
                dist: f64::INFINITY,
            });
        }
    };
    if strand >= tracks.positions.len() {
        return Err(Error::IndexOutOfRange {
            index: strand,
            len: tracks.positions.len(),
        });
    }
    let track = &tracks.positions[strand];
    let mut min_dist = f64::INFINITY;
    let mut total = 0.0f64;
    for w in track.windows(2) {
        let a = w[0] - c;
        let b = w[1] - c;
        min_dist = min_dist.min(a.norm());
        if a.norm() < tol.eps_track || b.norm() < tol.eps_track {
            return Err(Error::TooClose {
                dist: a.norm().min(b.norm()),
            });
        }
        total += (b / a).arg();
    }
    min_dist = min_dist.min((track[track.len() - 1] - c).norm());
    if min_dist < tol.eps_track {
        return Err(Error::TooClose { dist: min_dist });
    }
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.01 {
        return Err(Error::DegenerateCrossing {
            detail: format!("winding number {turns} is not near an integer"),
        });
    }
    Ok(rounded as i64)
}
