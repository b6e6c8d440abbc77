//! Plane parameter domains with explicit fundamental-group generator loops.
//!
//! Supported shapes: a disk, a once-punctured disk, an annulus, and a disk
//! with finitely many punctures. Each domain carries a basepoint and one
//! generator loop per free generator of its fundamental group; the loop data
//! is explicit so that monodromy handling stays elementary.

use num_complex::Complex64;

use crate::path::{Path, PathPiece};
use crate::{Error, Result, Tolerances};

/// The geometry of a parameter domain.
#[derive(Clone, Debug)]
pub enum DomainShape {
    Disk {
        center: Complex64,
        radius: f64,
    },
    PuncturedDisk {
        center: Complex64,
        radius: f64,
    },
    Annulus {
        center: Complex64,
        inner: f64,
        outer: f64,
    },
    FinitelyPuncturedDisk {
        center: Complex64,
        radius: f64,
        punctures: Vec<Complex64>,
    },
}

impl DomainShape {
    /// Signed clearance from the boundary (positive inside).
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match self {
            DomainShape::Disk { center, radius } => radius - (z - center).norm(),
            DomainShape::PuncturedDisk { center, radius } => {
                let r = (z - center).norm();
                (radius - r).min(r)
            }
            DomainShape::Annulus {
                center,
                inner,
                outer,
            } => {
                let r = (z - center).norm();
                (outer - r).min(r - inner)
            }
            DomainShape::FinitelyPuncturedDisk {
                center,
                radius,
                punctures,
            } => {
                let mut d = radius - (z - center).norm();
                for &p in punctures {
                    d = d.min((z - p).norm());
                }
                d
            }
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.boundary_distance(z) > 0.0
    }

    /// Number of fundamental-group generators.
    pub fn generator_count(&self) -> usize {
        match self {
            DomainShape::Disk { .. } => 0,
            DomainShape::PuncturedDisk { .. } | DomainShape::Annulus { .. } => 1,
            DomainShape::FinitelyPuncturedDisk { punctures, .. } => punctures.len(),
        }
    }

    /// Kind name as used by the definition file format.
    pub fn kind_name(&self) -> &'static str {
        match self {
            DomainShape::Disk { .. } => "disk",
            DomainShape::PuncturedDisk { .. } => "punctured-disk",
            DomainShape::Annulus { .. } => "annulus",
            DomainShape::FinitelyPuncturedDisk { .. } => "finitely-punctured-disk",
        }
    }
}

/// How the generator loops were specified, kept so families can be written
/// back to definition files.
#[derive(Clone, Debug)]
pub enum GeneratorSpec {
    /// Default loops derived from the shape.
    Auto,
    /// Per-puncture lasso routes (waypoints from the basepoint) and loop
    /// radii for a finitely punctured disk.
    Routes {
        waypoints: Vec<Vec<Complex64>>,
        radii: Vec<f64>,
    },
    /// Loops supplied directly (not writable to a definition file).
    Explicit,
}

/// A parameter domain: shape, basepoint, and validated generator loops.
#[derive(Clone, Debug)]
pub struct ParameterDomain {
    shape: DomainShape,
    basepoint: Complex64,
    generators: Vec<Path>,
    generator_spec: GeneratorSpec,
}

const LOOP_VALIDATION_SAMPLES: usize = 512;

impl ParameterDomain {
    pub fn shape(&self) -> &DomainShape {
        &self.shape
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub fn generators(&self) -> &[Path] {
        &self.generators
    }

    pub fn generator(&self, k: usize) -> Result<&Path> {
        self.generators.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            len: self.generators.len(),
        })
    }

    pub fn generator_spec(&self) -> &GeneratorSpec {
        &self.generator_spec
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.shape.contains(z)
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.shape.boundary_distance(z)
    }

    /// A disk: trivial fundamental group, no generators.
    pub fn disk(
        center: Complex64,
        radius: f64,
        basepoint: Complex64,
        tol: &Tolerances,
    ) -> Result<ParameterDomain> {
        let shape = DomainShape::Disk { center, radius };
        Self::with_loops(shape, basepoint, Vec::new(), GeneratorSpec::Auto, tol)
    }

    /// A once-punctured disk; the generator is the circle around the puncture
    /// through the basepoint, counterclockwise.
    pub fn punctured_disk(
        center: Complex64,
        radius: f64,
        basepoint: Complex64,
        tol: &Tolerances,
    ) -> Result<ParameterDomain> {
        let shape = DomainShape::PuncturedDisk { center, radius };
        let loop0 = Path::circle(center, basepoint, 1);
        Self::with_loops(shape, basepoint, vec![loop0], GeneratorSpec::Auto, tol)
    }

    /// An annulus; the generator is the core circle through the basepoint.
    pub fn annulus(
        center: Complex64,
        inner: f64,
        outer: f64,
        basepoint: Complex64,
        tol: &Tolerances,
    ) -> Result<ParameterDomain> {
        if !(0.0 < inner && inner < outer) {
            return Err(Error::InvalidDomain {
                reason: format!(
                    "annulus radii must satisfy 0 < inner < outer (got {inner}, {outer})"
                ),
            });
        }
        let shape = DomainShape::Annulus {
            center,
            inner,
            outer,
        };
        let loop0 = Path::circle(center, basepoint, 1);
        Self::with_loops(shape, basepoint, vec![loop0], GeneratorSpec::Auto, tol)
    }

    /// A disk with finitely many punctures; one counterclockwise lasso per
    /// puncture. Routes (waypoints from the basepoint) and loop radii may be
    /// overridden per puncture; defaults are the straight segment and a
    /// clearance-derived radius.
    pub fn finitely_punctured_disk(
        center: Complex64,
        radius: f64,
        punctures: Vec<Complex64>,
        basepoint: Complex64,
        routes: Option<Vec<Vec<Complex64>>>,
        radii: Option<Vec<f64>>,
        tol: &Tolerances,
    ) -> Result<ParameterDomain> {
        if punctures.is_empty() {
            return Err(Error::InvalidDomain {
                reason: "finitely-punctured disk needs at least one puncture".to_string(),
            });
        }
        let shape = DomainShape::FinitelyPuncturedDisk {
            center,
            radius,
            punctures: punctures.clone(),
        };
        let waypoints = routes.unwrap_or_else(|| vec![Vec::new(); punctures.len()]);
        if waypoints.len() != punctures.len() {
            return Err(Error::InvalidDomain {
                reason: "route count must match puncture count".to_string(),
            });
        }
        let mut loop_radii = Vec::with_capacity(punctures.len());
        for (j, &p) in punctures.iter().enumerate() {
            let given = radii.as_ref().and_then(|r| r.get(j)).copied();
            let r = match given {
                Some(r) if r > 0.0 => r,
                _ => {
                    let mut clear = radius - (p - center).norm();
                    for (k, &q) in punctures.iter().enumerate() {
                        if k != j {
                            clear = clear.min((p - q).norm());
                        }
                    }
                    clear = clear.min((p - basepoint).norm());
                    0.4 * clear
                }
            };
            loop_radii.push(r);
        }
        let mut loops = Vec::with_capacity(punctures.len());
        for (j, &p) in punctures.iter().enumerate() {
            let lasso = Path::lasso(basepoint, &waypoints[j], p, loop_radii[j], 1)?;
            loops.push(lasso);
        }
        Self::with_loops(
            shape,
            basepoint,
            loops,
            GeneratorSpec::Routes {
                waypoints,
                radii: loop_radii,
            },
            tol,
        )
    }

    /// Assemble a domain from explicit generator loops, validating the
    /// basepoint, loop count, loop basing, closedness, and boundary clearance.
    pub fn with_loops(
        shape: DomainShape,
        basepoint: Complex64,
        generators: Vec<Path>,
        generator_spec: GeneratorSpec,
        tol: &Tolerances,
    ) -> Result<ParameterDomain> {
        if shape.boundary_distance(basepoint) <= tol.eps_bd {
            return Err(Error::InvalidDomain {
                reason: "basepoint too close to the domain boundary".to_string(),
            });
        }
        if generators.len() != shape.generator_count() {
            return Err(Error::InvalidDomain {
                reason: format!(
                    "domain kind `{}` needs {} generator loop(s), got {}",
                    shape.kind_name(),
                    shape.generator_count(),
                    generators.len()
                ),
            });
        }
        for (k, g) in generators.iter().enumerate() {
            if !g.is_closed() {
                return Err(Error::InvalidDomain {
                    reason: format!("generator loop {k} is not closed"),
                });
            }
            if (g.start() - basepoint).norm() > 1e-9 {
                return Err(Error::InvalidDomain {
                    reason: format!("generator loop {k} is not based at the basepoint"),
                });
            }
            // tolerate exact hits of the basepoint-through circle construction
            let mut min_clear = f64::INFINITY;
            for s in 0..=LOOP_VALIDATION_SAMPLES {
                let t = s as f64 / LOOP_VALIDATION_SAMPLES as f64;
                min_clear = min_clear.min(shape.boundary_distance(g.point(t)));
            }
            if min_clear < tol.eps_bd {
                return Err(Error::InvalidDomain {
                    reason: format!(
                        "generator loop {k} passes within {min_clear:.3e} of the boundary (need {:.3e})",
                        tol.eps_bd
                    ),
                });
            }
        }
        Ok(ParameterDomain {
            shape,
            basepoint,
            generators,
            generator_spec,
        })
    }

    /// A path from `from` to `to` staying inside the domain, detouring around
    /// punctures and (for the annulus) the inner hole when the straight
    /// segment would leave the domain.
    pub fn route(&self, from: Complex64, to: Complex64, tol: &Tolerances) -> Result<Path> {
        for (name, z) in [("start", from), ("end", to)] {
            if !self.contains(z) {
                let _ = name;
                return Err(Error::OutsideDomain { lambda: z });
            }
        }
        if (from - to).norm() < 1e-15 {
            return Ok(Path::segment(from, to));
        }
        match &self.shape {
            DomainShape::Disk { .. } => Ok(Path::segment(from, to)),
            DomainShape::PuncturedDisk { center, .. } => {
                route_around_points(from, to, &[*center], tol)
            }
            DomainShape::FinitelyPuncturedDisk { punctures, .. } => {
                route_around_points(from, to, punctures, tol)
            }
            DomainShape::Annulus {
                center,
                inner,
                outer,
            } => {
                let clearance = (from - center).norm().min((to - center).norm());
                if segment_point_distance(from, to, *center) > inner + tol.eps_bd {
                    return Ok(Path::segment(from, to));
                }
                // radial move to a safe ring, swing along it, radial move in
                let ring = ((inner + outer) * 0.5).max(clearance.min(outer - tol.eps_bd));
                let a = center + (from - center) / (from - center).norm() * ring;
                let b = center + (to - center) / (to - center).norm() * ring;
                let start_angle = (a - center).arg();
                let mut sweep = (b - center).arg() - start_angle;
                while sweep > std::f64::consts::PI {
                    sweep -= std::f64::consts::TAU;
                }
                while sweep < -std::f64::consts::PI {
                    sweep += std::f64::consts::TAU;
                }
                Path::new(vec![
                    PathPiece::Segment { from, to: a },
                    PathPiece::Arc {
                        center: *center,
                        radius: ring,
                        start_angle,
                        sweep,
                    },
                    PathPiece::Segment { from: b, to },
                ])
            }
        }
    }
}

fn segment_point_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a).re * ab.re) + ((p - a).im * ab.im)) / len2;
    let t = t.clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

/// Straight segment from `from` to `to`, replacing near-puncture passages by
/// half-circle detours. The detour side is chosen deterministically (the side
/// away from the puncture relative to the segment direction).
fn route_around_points(
    from: Complex64,
    to: Complex64,
    obstacles: &[Complex64],
    tol: &Tolerances,
) -> Result<Path> {
    let margin = (4.0 * tol.eps_bd)
        .min((to - from).norm() * 0.25)
        .max(2.0 * tol.eps_bd);
    // find obstacles whose distance to the segment is below the margin,
    // ordered along the segment
    let ab = to - from;
    let len2 = ab.norm_sqr();
    let mut hits: Vec<(f64, Complex64)> = Vec::new();
    for &p in obstacles {
        let t = (((p - from).re * ab.re) + ((p - from).im * ab.im)) / len2;
        if t <= 0.0 || t >= 1.0 {
            continue;
        }
        if (from + ab * t - p).norm() < margin {
            hits.push((t, p));
        }
    }
    if hits.is_empty() {
        return Ok(Path::segment(from, to));
    }
    hits.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut pieces: Vec<PathPiece> = Vec::new();
    let mut cursor = from;
    for (t, p) in hits {
        let foot = from + ab * t;
        let r = margin;
        let dir = ab / ab.norm();
        let entry = p - dir * r + (foot - p) * 0.0; // enter on the approach side
        let exit = p + dir * r;
        // detour over the half circle on the side of the foot point (or +i side
        // when the segment passes through the puncture exactly)
        let side = {
            let off = foot - p;
            if off.norm() > 1e-12 {
                off / off.norm()
            } else {
                dir * Complex64::new(0.0, 1.0)
            }
        };
        let start_angle = (entry - p).arg();
        let mid = p + side * r;
        let mut sweep = angle_sweep(start_angle, (mid - p).arg());
        sweep += angle_sweep((mid - p).arg(), (exit - p).arg());
        pieces.push(PathPiece::Segment {
            from: cursor,
            to: entry,
        });
        pieces.push(PathPiece::Arc {
            center: p,
            radius: r,
            start_angle,
            sweep,
        });
        cursor = exit;
    }
    pieces.push(PathPiece::Segment { from: cursor, to });
    Path::new(pieces)
}

fn angle_sweep(from: f64, to: f64) -> f64 {
    let mut d = to - from;
    while d > std::f64::consts::PI {
        d -= std::f64::consts::TAU;
    }
    while d < -std::f64::consts::PI {
        d += std::f64::consts::TAU;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_has_no_generators() {
        let tol = Tolerances::default();
        let d = ParameterDomain::disk(c(0.0, 0.0), 1.0, c(0.2, 0.1), &tol).unwrap();
        assert_eq!(d.generators().len(), 0);
        assert!(d.contains(c(0.5, 0.0)));
        assert!(!d.contains(c(2.0, 0.0)));
    }

    #[test]
    fn punctured_disk_generator_is_validated() {
        let tol = Tolerances::default();
        let d = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), &tol).unwrap();
        assert_eq!(d.generators().len(), 1);
        let g = d.generator(0).unwrap();
        assert!(g.is_closed());
        assert!((g.start() - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn basepoint_on_puncture_rejected() {
        let tol = Tolerances::default();
        let err = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.0, 0.0), &tol);
        assert!(err.is_err());
    }

    #[test]
    fn annulus_membership() {
        let tol = Tolerances::default();
        let d = ParameterDomain::annulus(c(0.0, 0.0), 0.25, 1.0, c(0.5, 0.0), &tol).unwrap();
        assert!(d.contains(c(0.5, 0.0)));
        assert!(!d.contains(c(0.1, 0.0)));
        assert!(!d.contains(c(1.5, 0.0)));
        assert_eq!(d.generators().len(), 1);
    }

    #[test]
    fn lasso_generators_for_two_punctures() {
        let tol = Tolerances::default();
        let d = ParameterDomain::finitely_punctured_disk(
            c(0.0, 0.0),
            1.0,
            vec![c(-0.4, 0.0), c(0.0, 0.5)],
            c(0.3, -0.2),
            None,
            None,
            &tol,
        )
        .unwrap();
        assert_eq!(d.generators().len(), 2);
        for g in d.generators() {
            assert!(g.is_closed());
        }
    }

    #[test]
    fn route_detours_around_puncture() {
        let tol = Tolerances::default();
        let d = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), &tol).unwrap();
        let p = d.route(c(0.5, 0.0), c(-0.5, 0.0), &tol).unwrap();
        // the straight segment passes through the puncture; the route must not
        let mut min_clear = f64::INFINITY;
        for k in 0..=400 {
            let t = k as f64 / 400.0;
            min_clear = min_clear.min(p.point(t).norm());
        }
        assert!(min_clear > tol.eps_bd, "clearance {min_clear}");
        assert!((p.start() - c(0.5, 0.0)).norm() < 1e-12);
        assert!((p.end() - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn annulus_route_avoids_hole() {
        let tol = Tolerances::default();
        let d = ParameterDomain::annulus(c(0.0, 0.0), 0.25, 1.0, c(0.5, 0.0), &tol).unwrap();
        let p = d.route(c(0.5, 0.0), c(-0.5, 0.0), &tol).unwrap();
        let mut min_r = f64::INFINITY;
        for k in 0..=400 {
            let t = k as f64 / 400.0;
            min_r = min_r.min(p.point(t).norm());
        }
        assert!(min_r > 0.25, "route dipped to radius {min_r}");
    }
}
