//! Motion families: parameterized configurations over a plane domain.
//!
//! A family carries one strand per moving puncture. A strand is either a
//! closed-form rational expression in the parameter or a labeled root of a
//! polynomial whose coefficients are rational in the parameter. Root labels
//! are anchored at the basepoint and propagated only by continuation, so a
//! root strand can never silently jump branches: evaluating it anywhere else
//! without a track is an error.

use num_complex::Complex64;
use serde::Serialize;

use crate::continuation;
use crate::domain::ParameterDomain;
use crate::error::{MotionAxiom, Partner};
use crate::expr::Expr;
use crate::sphere::{self, Configuration, SpherePoint};
use crate::{Error, Result, Tolerances};

/// Carrier of one moving puncture.
#[derive(Clone, Debug)]
pub enum StrandSpec {
    /// A rational expression in the parameter.
    ClosedForm(Expr),
    /// A labeled simple root of `sum_k coeffs[k](lambda) * z^k`; the label is
    /// the root value at the basepoint.
    AlgebraicRoot {
        coeffs: Vec<Expr>,
        base_root: Complex64,
    },
}

impl StrandSpec {
    pub fn algebraic_root(coeffs: Vec<Expr>, base_root: Complex64) -> StrandSpec {
        StrandSpec::AlgebraicRoot { coeffs, base_root }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, StrandSpec::ClosedForm(_))
    }

    /// Value at the family basepoint (exact for root strands by definition).
    pub fn base_value(&self, basepoint: Complex64) -> Complex64 {
        match self {
            StrandSpec::ClosedForm(e) => e.eval(basepoint),
            StrandSpec::AlgebraicRoot { base_root, .. } => *base_root,
        }
    }
}

/// Evaluate the defining polynomial of a root strand.
pub(crate) fn poly_value(coeffs: &[Expr], lambda: Complex64, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c.eval(lambda);
    }
    acc
}

/// d/dz of the defining polynomial.
pub(crate) fn poly_dz(coeffs: &[Expr], lambda: Complex64, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c.eval(lambda) * (k as f64);
    }
    acc
}

/// d/dlambda of the defining polynomial (formal derivative of coefficients).
pub(crate) fn poly_dlambda(coeffs: &[Expr], lambda: Complex64, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c.derivative().eval(lambda);
    }
    acc
}

/// A holomorphic motion of a finite puncture set over a plane domain.
#[derive(Clone, Debug)]
pub struct MotionFamily {
    domain: ParameterDomain,
    base: Configuration,
    strands: Vec<StrandSpec>,
}

impl MotionFamily {
    /// Assemble and check the anchor conditions: strand `i` must evaluate to
    /// `base[i+2]` at the basepoint, and root labels must be simple roots.
    pub fn new(
        domain: ParameterDomain,
        base: Configuration,
        strands: Vec<StrandSpec>,
        tol: &Tolerances,
    ) -> Result<MotionFamily> {
        if strands.len() != base.moving_count() {
            return Err(Error::InvalidDomain {
                reason: format!(
                    "family needs {} strand(s) for this base configuration, got {}",
                    base.moving_count(),
                    strands.len()
                ),
            });
        }
        let x0 = domain.basepoint();
        for (k, s) in strands.iter().enumerate() {
            let v = s.base_value(x0);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteValue { re: v.re, im: v.im });
            }
            let anchor = base.get(k + 2)?;
            if sphere::chordal_finite(v, anchor) > tol.eps_eq {
                return Err(Error::ValidationFailure {
                    axiom: MotionAxiom::BasepointIdentity,
                    detail: format!(
                        "strand {} evaluates to {v} at the basepoint, base puncture is {anchor}",
                        k + 2
                    ),
                    witness: Some(x0),
                });
            }
            if let StrandSpec::AlgebraicRoot { coeffs, base_root } = s {
                let p = poly_value(coeffs, x0, *base_root);
                if p.norm() > 1e-9 {
                    return Err(Error::ValidationFailure {
                        axiom: MotionAxiom::BasepointIdentity,
                        detail: format!(
                            "root label {base_root} is not a root at the basepoint (residual {:.3e})",
                            p.norm()
                        ),
                        witness: Some(x0),
                    });
                }
                let dz = poly_dz(coeffs, x0, *base_root);
                if dz.norm() < 1e-9 {
                    return Err(Error::ValidationFailure {
                        axiom: MotionAxiom::Holomorphy,
                        detail:
                            "root label is not simple at the basepoint (vanishing discriminant)"
                                .to_string(),
                        witness: Some(x0),
                    });
                }
            }
        }
        Ok(MotionFamily {
            domain,
            base,
            strands,
        })
    }

    pub fn domain(&self) -> &ParameterDomain {
        &self.domain
    }

    pub fn base(&self) -> &Configuration {
        &self.base
    }

    pub fn strands(&self) -> &[StrandSpec] {
        &self.strands
    }

    /// Total strand count, the frozen punctures 0 and 1 included.
    pub fn strand_count(&self) -> usize {
        self.base.len()
    }

    pub fn has_algebraic_roots(&self) -> bool {
        self.strands.iter().any(|s| !s.is_closed_form())
    }

    /// The identity family over a domain: every strand constant.
    pub fn identity(
        domain: ParameterDomain,
        base: Configuration,
        tol: &Tolerances,
    ) -> Result<MotionFamily> {
        let strands = (2..base.len())
            .map(|i| Ok(StrandSpec::ClosedForm(Expr::constant(base.get(i)?))))
            .collect::<Result<Vec<_>>>()?;
        MotionFamily::new(domain, base, strands, tol)
    }
}

/// Evaluate the motion at a parameter.
///
/// Closed-form strands evaluate directly. If the family carries root strands,
/// only the basepoint can be evaluated here; everywhere else requires a
/// continuation track (see [`eval_via_continuation`]).
pub fn eval_motion(
    family: &MotionFamily,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Configuration> {
    if !family.domain.contains(lambda) {
        return Err(Error::OutsideDomain { lambda });
    }
    let x0 = family.domain.basepoint();
    if family.has_algebraic_roots() {
        if sphere::chordal_finite(lambda, x0) <= tol.eps_eq {
            return Ok(family.base.clone());
        }
        return Err(Error::UnanchoredRoot);
    }
    let mut values = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for (k, s) in family.strands.iter().enumerate() {
        let v = match s {
            StrandSpec::ClosedForm(e) => e.eval(lambda),
            StrandSpec::AlgebraicRoot { .. } => unreachable!(),
        };
        if v.re.is_nan() || v.im.is_nan() {
            return Err(Error::NonFiniteValue { re: v.re, im: v.im });
        }
        if v.re.is_infinite() || v.im.is_infinite() {
            return Err(Error::CollisionAtParameter {
                i: k + 2,
                j: Partner::Infinity,
                lambda,
                dist: 0.0,
            });
        }
        values.push(v);
    }
    configuration_at(&values, lambda, tol)
}

/// Evaluate at a parameter by continuing along an in-domain route from the
/// basepoint. Works for every strand kind; this is the sanctioned way to
/// evaluate root strands off the basepoint.
pub fn eval_via_continuation(
    family: &MotionFamily,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Configuration> {
    let route = family
        .domain
        .route(family.domain.basepoint(), lambda, tol)?;
    let tracks = continuation::continue_strands(family, &route, tol)?;
    tracks.end_configuration(tol)
}

fn configuration_at(
    values: &[Complex64],
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Configuration> {
    let pts: Vec<SpherePoint> = values.iter().map(|&z| SpherePoint::Finite(z)).collect();
    match sphere::make_configuration(&pts, tol) {
        Ok(cfg) => Ok(cfg),
        Err(Error::SeparationViolation { i, j, dist, .. }) => {
            Err(Error::CollisionAtParameter { i, j, lambda, dist })
        }
        Err(e) => Err(e),
    }
}

/// Numeric outcome of the axiom validation.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// Max chordal deviation from the base configuration at the basepoint.
    pub basepoint_residual: f64,
    /// Min pairwise separation over all samples (infinity included).
    pub injectivity_margin: f64,
    /// Per-strand max circle-mean residual over the samples.
    pub holomorphy_residuals: Vec<f64>,
    /// Whether each strand returned to its base value around every generator.
    pub single_valued: bool,
    pub samples_used: usize,
    /// How samples were drawn, for reproducibility.
    pub sample_rule: String,
    pub circle_radius: f64,
    pub circle_points: usize,
}

/// Low-discrepancy in-domain samples (R2 sequence over the bounding box with
/// boundary-margin rejection).
pub fn domain_samples(domain: &ParameterDomain, count: usize, margin: f64) -> Vec<Complex64> {
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    let (center, half) = match domain.shape() {
        crate::domain::DomainShape::Disk { center, radius } => (*center, *radius),
        crate::domain::DomainShape::PuncturedDisk { center, radius } => (*center, *radius),
        crate::domain::DomainShape::Annulus { center, outer, .. } => (*center, *outer),
        crate::domain::DomainShape::FinitelyPuncturedDisk { center, radius, .. } => {
            (*center, *radius)
        }
    };
    let mut out = Vec::with_capacity(count);
    let mut n = 0u64;
    let mut x = 0.5f64;
    let mut y = 0.5f64;
    while out.len() < count && n < (count as u64) * 1000 + 10_000 {
        x = (x + A1).fract();
        y = (y + A2).fract();
        n += 1;
        let z = center + Complex64::new((2.0 * x - 1.0) * half, (2.0 * y - 1.0) * half);
        if domain.boundary_distance(z) > margin {
            out.push(z);
        }
    }
    out
}

/// Validate the motion axioms numerically.
///
/// Checks, in order: the basepoint identity, injectivity on low-discrepancy
/// samples and along every generator loop, the circle-mean holomorphy
/// residual of each strand, and single-valuedness of each strand around every
/// generator. `sample_budget` is clamped up to 100.
pub fn validate_motion(
    family: &MotionFamily,
    sample_budget: usize,
    tol: &Tolerances,
) -> Result<ValidationReport> {
    let budget = sample_budget.max(100);
    let x0 = family.domain.basepoint();
    let m = family.strand_count();

    // axiom: identity at the basepoint
    let mut basepoint_residual = 0.0f64;
    for (k, s) in family.strands.iter().enumerate() {
        let v = s.base_value(x0);
        let d = sphere::chordal_finite(v, family.base.get(k + 2)?);
        basepoint_residual = basepoint_residual.max(d);
    }
    if basepoint_residual > tol.eps_eq {
        return Err(Error::ValidationFailure {
            axiom: MotionAxiom::BasepointIdentity,
            detail: format!("basepoint residual {basepoint_residual:.3e}"),
            witness: Some(x0),
        });
    }

    let margin = (4.0 * tol.circle_radius).max(tol.eps_bd);
    let samples = domain_samples(&family.domain, budget, margin);
    let mut injectivity_margin = family.base.min_separation();
    let mut holomorphy_residuals = vec![0.0f64; m.saturating_sub(2)];
    let mut sample_values: Vec<(Complex64, Vec<Complex64>)> = Vec::with_capacity(samples.len());

    for &s in &samples {
        let values = strand_values_at(family, s, tol)?;
        sample_values.push((s, values.clone()));
        match configuration_at(&values, s, tol) {
            Ok(cfg) => injectivity_margin = injectivity_margin.min(cfg.min_separation()),
            Err(Error::CollisionAtParameter { i, j, lambda, dist }) => {
                return Err(Error::ValidationFailure {
                    axiom: MotionAxiom::Injectivity,
                    detail: format!(
                        "strands {i} and {j} separated by {dist:.3e} at {}+{}i",
                        lambda.re, lambda.im
                    ),
                    witness: Some(lambda),
                })
            }
            Err(e) => return Err(e),
        }
        let radius = tol
            .circle_radius
            .min(family.domain.boundary_distance(s) / 4.0);
        for k in 0..family.strands.len() {
            let resid = holomorphy_residual(family, k, s, &values, radius, tol)?;
            holomorphy_residuals[k] = holomorphy_residuals[k].max(resid);
            if resid > tol.holomorphy_tol {
                return Err(Error::ValidationFailure {
                    axiom: MotionAxiom::Holomorphy,
                    detail: format!(
                        "strand {} has circle-mean residual {resid:.3e} at {}+{}i",
                        k + 2,
                        s.re,
                        s.im
                    ),
                    witness: Some(s),
                });
            }
        }
    }

    // sampling alone cannot hit an isolated collision parameter; polish the
    // closest approach of every strand pair and fail when it bottoms out at a
    // genuine interior collision
    refine_pair_collisions(family, &sample_values, tol)?;

    // injectivity and single-valuedness along generator loops
    let single_valued = true;
    for (g, looppath) in family.domain.generators().iter().enumerate() {
        let tracks = continuation::continue_strands(family, looppath, tol)?;
        injectivity_margin = injectivity_margin.min(tracks.min_separation());
        for i in 0..m {
            let start = tracks.positions(i)[0];
            let end = *tracks.positions(i).last().unwrap();
            if sphere::chordal_finite(start, end) > tol.eps_sep {
                return Err(Error::ValidationFailure {
                    axiom: MotionAxiom::SingleValuedness,
                    detail: format!(
                        "strand {i} does not return to its base value around generator {g} \
                         (moved {:.3e})",
                        sphere::chordal_finite(start, end)
                    ),
                    witness: Some(looppath.start()),
                });
            }
        }
    }

    Ok(ValidationReport {
        basepoint_residual,
        injectivity_margin,
        holomorphy_residuals,
        single_valued,
        samples_used: samples.len(),
        sample_rule: format!(
            "r2-low-discrepancy over bounding box, boundary margin {margin:.3e}, plus generator loops"
        ),
        circle_radius: tol.circle_radius,
        circle_points: tol.circle_points,
    })
}

/// Values of all strands at a parameter: direct evaluation for closed forms,
/// route continuation for root strands. Index 0 and 1 are the frozen
/// punctures.
pub(crate) fn strand_values_at(
    family: &MotionFamily,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    if !family.has_algebraic_roots() {
        let mut values = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        for s in &family.strands {
            let v = match s {
                StrandSpec::ClosedForm(e) => e.eval(lambda),
                _ => unreachable!(),
            };
            if v.re.is_nan() || v.im.is_nan() {
                return Err(Error::NonFiniteValue { re: v.re, im: v.im });
            }
            values.push(v);
        }
        return Ok(values);
    }
    let route = family
        .domain
        .route(family.domain.basepoint(), lambda, tol)?;
    let tracks = continuation::continue_strands(family, &route, tol)?;
    Ok((0..family.strand_count())
        .map(|i| *tracks.positions(i).last().unwrap())
        .collect())
}

/// Value and parameter-derivative of one strand (frozen punctures included)
/// near a known value, used by the collision polish.
fn strand_value_deriv(
    family: &MotionFamily,
    strand: usize,
    lambda: Complex64,
    seed: Complex64,
    tol: &Tolerances,
) -> Result<(Complex64, Complex64)> {
    match strand {
        0 => Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))),
        1 => Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))),
        _ => match &family.strands[strand - 2] {
            StrandSpec::ClosedForm(e) => Ok((e.eval(lambda), e.derivative().eval(lambda))),
            StrandSpec::AlgebraicRoot { coeffs, .. } => {
                let v = newton_root(coeffs, lambda, seed, tol)?;
                let dz = poly_dz(coeffs, lambda, v);
                if dz.norm() < 1e-14 {
                    return Err(Error::StepUnderflow { t: f64::NAN });
                }
                Ok((v, -poly_dlambda(coeffs, lambda, v) / dz))
            }
        },
    }
}

/// Newton-polish the closest approach of every strand pair, starting from the
/// sample realizing it. A polished collision parameter counts only when it
/// lies genuinely inside the domain (collisions pinned to parameter punctures
/// or the boundary are exactly the excluded ones).
fn refine_pair_collisions(
    family: &MotionFamily,
    sample_values: &[(Complex64, Vec<Complex64>)],
    tol: &Tolerances,
) -> Result<()> {
    if sample_values.is_empty() {
        return Ok(());
    }
    let m = family.strand_count();
    let scale = match family.domain.shape() {
        crate::domain::DomainShape::Disk { radius, .. }
        | crate::domain::DomainShape::PuncturedDisk { radius, .. }
        | crate::domain::DomainShape::FinitelyPuncturedDisk { radius, .. } => *radius,
        crate::domain::DomainShape::Annulus { outer, .. } => *outer,
    };
    let step_cap = 0.05 * scale;
    for i in 0..m {
        for j in (i + 1)..m {
            // best seed sample for this pair
            let (mut lambda, seed_values) = sample_values
                .iter()
                .min_by(|a, b| {
                    let da = (a.1[i] - a.1[j]).norm();
                    let db = (b.1[i] - b.1[j]).norm();
                    da.partial_cmp(&db).unwrap()
                })
                .map(|(l, v)| (*l, v.clone()))
                .unwrap();
            let mut seed_i = seed_values[i];
            let mut seed_j = seed_values[j];
            // iterate to convergence before classifying: collisions pinned to
            // a puncture (where Newton may be merely linear) must be allowed
            // to settle onto it
            let mut closest: Option<(Complex64, f64)> = None;
            for _ in 0..64 {
                if !family.domain.contains(lambda) {
                    break;
                }
                let Ok((vi, di)) = strand_value_deriv(family, i, lambda, seed_i, tol) else {
                    break;
                };
                let Ok((vj, dj)) = strand_value_deriv(family, j, lambda, seed_j, tol) else {
                    break;
                };
                seed_i = vi;
                seed_j = vj;
                let d = vi - vj;
                closest = Some((lambda, sphere::chordal_finite(vi, vj)));
                let dd = di - dj;
                if dd.norm() < 1e-12 {
                    break;
                }
                let mut step = d / dd;
                if step.norm() > step_cap {
                    step *= step_cap / step.norm();
                }
                if step.norm() < 1e-15 * scale {
                    break;
                }
                lambda -= step;
            }
            if let Some((witness, dist)) = closest {
                if dist <= tol.eps_sep && family.domain.boundary_distance(witness) > tol.eps_track {
                    return Err(Error::ValidationFailure {
                        axiom: MotionAxiom::Injectivity,
                        detail: format!(
                            "strands {i} and {j} collide at {}+{}i",
                            witness.re, witness.im
                        ),
                        witness: Some(witness),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Circle-mean holomorphy residual of one strand at one sample point. For a
/// strand holomorphic near the sample the mean over a small circle equals the
/// center value, so the residual vanishes; poles and branch defects show up
/// loudly.
fn holomorphy_residual(
    family: &MotionFamily,
    strand: usize,
    lambda: Complex64,
    values_at_lambda: &[Complex64],
    radius: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if radius <= 0.0 {
        return Ok(0.0);
    }
    let k = tol.circle_points.max(8);
    let center_value = values_at_lambda[strand + 2];
    match &family.strands[strand] {
        StrandSpec::ClosedForm(e) => {
            let mut mean = Complex64::new(0.0, 0.0);
            for j in 0..k {
                let ang = std::f64::consts::TAU * j as f64 / k as f64;
                let v = e.eval(lambda + Complex64::from_polar(radius, ang));
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Ok(f64::INFINITY);
                }
                mean += v;
            }
            mean /= k as f64;
            Ok((mean - center_value).norm())
        }
        StrandSpec::AlgebraicRoot { coeffs, .. } => {
            // walk the circle with Newton correction, seeded at the center value
            let mut mean = Complex64::new(0.0, 0.0);
            let mut z = center_value;
            let steps_per_point = 4;
            let total = k * steps_per_point;
            let mut on_circle_count = 0usize;
            for j in 0..=total {
                let ang = std::f64::consts::TAU * j as f64 / total as f64;
                let lam = lambda + Complex64::from_polar(radius, ang);
                z = newton_root(coeffs, lam, z, tol)?;
                if j % steps_per_point == 0 && j < total {
                    mean += z;
                    on_circle_count += 1;
                }
            }
            // closing the loop must return the same branch
            if (z - {
                let lam = lambda + Complex64::from_polar(radius, 0.0);
                newton_root(coeffs, lam, center_value, tol)?
            })
            .norm()
                > 1e-8
            {
                return Ok(f64::INFINITY);
            }
            mean /= on_circle_count as f64;
            Ok((mean - center_value).norm())
        }
    }
}

pub(crate) fn newton_root(
    coeffs: &[Expr],
    lambda: Complex64,
    seed: Complex64,
    tol: &Tolerances,
) -> Result<Complex64> {
    let mut z = seed;
    for _ in 0..50 {
        let p = poly_value(coeffs, lambda, z);
        let dp = poly_dz(coeffs, lambda, z);
        if dp.norm() < 1e-14 {
            return Err(Error::StepUnderflow { t: f64::NAN });
        }
        let step = p / dp;
        z -= step;
        if step.norm() < tol.newton_tol * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    Err(Error::StepUnderflow { t: f64::NAN })
}

/// Pull a family back along a basepoint-preserving holomorphic map into its
/// domain, given as an expression tree: strands are composed with the map,
/// the base configuration is unchanged.
pub fn pullback(
    family: &MotionFamily,
    f: &Expr,
    new_domain: ParameterDomain,
    tol: &Tolerances,
) -> Result<MotionFamily> {
    let image_base = f.eval(new_domain.basepoint());
    if sphere::chordal_finite(image_base, family.domain.basepoint()) > tol.eps_eq {
        return Err(Error::NotBasepointPreserving { found: image_base });
    }
    // range check on low-discrepancy samples and along the new generators
    let margin = tol.eps_bd.min(1e-6);
    for s in domain_samples(&new_domain, 256, margin) {
        let img = f.eval(s);
        if !img.re.is_finite() || !img.im.is_finite() || !family.domain.contains(img) {
            return Err(Error::RangeEscape { lambda: s });
        }
    }
    for g in new_domain.generators() {
        for j in 0..=256 {
            let t = j as f64 / 256.0;
            let s = g.point(t);
            let img = f.eval(s);
            if !img.re.is_finite() || !img.im.is_finite() || !family.domain.contains(img) {
                return Err(Error::RangeEscape { lambda: s });
            }
        }
    }
    let strands = family
        .strands
        .iter()
        .map(|s| match s {
            StrandSpec::ClosedForm(e) => StrandSpec::ClosedForm(e.substitute(f)),
            StrandSpec::AlgebraicRoot { coeffs, base_root } => StrandSpec::AlgebraicRoot {
                coeffs: coeffs.iter().map(|c| c.substitute(f)).collect(),
                base_root: *base_root,
            },
        })
        .collect();
    MotionFamily::new(new_domain, family.base.clone(), strands, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::expr::parse_expr;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_family_evaluates_to_base() {
        let tol = Tolerances::default();
        let fam = corpus::identity_disk(&tol).unwrap();
        let cfg = eval_motion(&fam, c(0.3, 0.2), &tol).unwrap();
        assert!(cfg.distance(fam.base()) < 1e-15);
    }

    #[test]
    fn winding_family_basepoint_and_interior() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let at_base = eval_motion(&fam, c(0.5, 0.0), &tol).unwrap();
        assert!(at_base.distance(fam.base()) < 1e-15);
        let cfg = eval_motion(&fam, c(0.0, 0.5), &tol).unwrap();
        assert!((cfg.get(2).unwrap() - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn eval_rejects_outside_domain() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        assert!(matches!(
            eval_motion(&fam, c(2.0, 0.0), &tol),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn eval_detects_collision() {
        let tol = Tolerances::default();
        // strands lambda and 3/4: collide at lambda = 3/4
        let fam = corpus::colliding_pair(&tol).unwrap();
        let err = eval_motion(&fam, c(0.75, 0.0), &tol);
        assert!(matches!(err, Err(Error::CollisionAtParameter { .. })));
    }

    #[test]
    fn identity_family_validates_over_every_domain_kind() {
        let tol = Tolerances::default();
        let base = sphere::make_configuration(
            &[
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(1.0, 0.0),
                SpherePoint::finite(-0.5, 0.0),
            ],
            &tol,
        )
        .unwrap();
        let domains = vec![
            ParameterDomain::disk(c(0.0, 0.0), 1.0, c(0.2, 0.1), &tol).unwrap(),
            ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), &tol).unwrap(),
            ParameterDomain::annulus(c(0.0, 0.0), 0.25, 1.0, c(0.5, 0.0), &tol).unwrap(),
            ParameterDomain::finitely_punctured_disk(
                c(0.0, 0.0),
                1.0,
                vec![c(0.0, 0.5), c(-0.4, -0.3)],
                c(0.4, 0.0),
                None,
                None,
                &tol,
            )
            .unwrap(),
        ];
        for domain in domains {
            let fam = MotionFamily::identity(domain, base.clone(), &tol).unwrap();
            let rep = validate_motion(&fam, 100, &tol).unwrap();
            assert!(rep.basepoint_residual == 0.0);
            assert!((rep.injectivity_margin - base.min_separation()).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_passes_for_identity_and_winding() {
        let tol = Tolerances::default();
        for fam in [
            corpus::identity_disk(&tol).unwrap(),
            corpus::winding(&tol).unwrap(),
        ] {
            let rep = validate_motion(&fam, 120, &tol).unwrap();
            assert!(rep.basepoint_residual <= tol.eps_eq);
            assert!(rep.injectivity_margin > tol.eps_sep);
            for r in &rep.holomorphy_residuals {
                assert!(*r < 1e-10, "residual {r}");
            }
        }
    }

    #[test]
    fn validation_margin_of_identity_is_base_separation() {
        let tol = Tolerances::default();
        let fam = corpus::identity_disk(&tol).unwrap();
        let rep = validate_motion(&fam, 120, &tol).unwrap();
        assert!((rep.injectivity_margin - fam.base().min_separation()).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_forced_collision() {
        let tol = Tolerances::default();
        let fam = corpus::colliding_pair(&tol).unwrap();
        let err = validate_motion(&fam, 400, &tol);
        match err {
            Err(Error::ValidationFailure { axiom, .. }) => {
                assert_eq!(axiom, MotionAxiom::Injectivity)
            }
            other => panic!("expected injectivity failure, got {other:?}"),
        }
    }

    #[test]
    fn validation_polish_finds_interior_zero_of_a_strand() {
        let tol = Tolerances::default();
        let domain = ParameterDomain::disk(c(0.0, 0.0), 1.0, c(0.0, 0.0), &tol).unwrap();
        let base = sphere::make_configuration(
            &[
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(1.0, 0.0),
                SpherePoint::finite(-2.2, 0.0),
            ],
            &tol,
        )
        .unwrap();
        // hits the frozen puncture 0 at lambda = 0.55 (and 1 at 8/15), far
        // from any sample
        let strand = StrandSpec::ClosedForm(parse_expr("-2 + 0.1/(lambda - 1/2)").unwrap());
        let fam = MotionFamily::new(domain, base, vec![strand], &tol).unwrap();
        match validate_motion(&fam, 200, &tol) {
            Err(Error::ValidationFailure { axiom, .. }) => {
                assert_eq!(axiom, MotionAxiom::Injectivity)
            }
            other => panic!("expected injectivity failure, got {other:?}"),
        }
    }

    #[test]
    fn root_strand_off_anchor_is_an_error() {
        let tol = Tolerances::default();
        let fam = corpus::root_pair_trivial(&tol).unwrap();
        assert!(matches!(
            eval_motion(&fam, c(0.7, 0.1), &tol),
            Err(Error::UnanchoredRoot)
        ));
        // but the basepoint works
        let cfg = eval_motion(&fam, fam.domain().basepoint(), &tol).unwrap();
        assert!(cfg.distance(fam.base()) < 1e-12);
    }

    #[test]
    fn pullback_by_identity_is_identity() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let f = parse_expr("lambda").unwrap();
        let pb = pullback(&fam, &f, fam.domain().clone(), &tol).unwrap();
        for k in 0..5 {
            let z = c(0.1 + 0.1 * k as f64, 0.05);
            let a = eval_motion(&fam, z, &tol).unwrap();
            let b = eval_motion(&pb, z, &tol).unwrap();
            assert!(a.distance(&b) < 1e-14);
        }
    }

    #[test]
    fn pullback_by_square_composes() {
        let tol = Tolerances::default();
        let pb = corpus::winding_squared(&tol).unwrap();
        let fam = corpus::winding(&tol).unwrap();
        let f = parse_expr("lambda^2").unwrap();
        for k in 1..8 {
            let z = Complex64::from_polar(0.6, 0.7 * k as f64);
            if !pb.domain().contains(z) {
                continue;
            }
            let lhs = eval_motion(&pb, z, &tol).unwrap();
            let rhs = eval_motion(&fam, f.eval(z), &tol).unwrap();
            assert!(lhs.distance(&rhs) < 1e-12);
        }
    }

    #[test]
    fn pullback_by_constant_gives_constant_strands() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let f = parse_expr("1/2").unwrap();
        let new_domain = ParameterDomain::disk(c(0.0, 0.0), 1.0, c(0.1, 0.0), &tol).unwrap();
        let pb = pullback(&fam, &f, new_domain, &tol).unwrap();
        let a = eval_motion(&pb, c(0.4, 0.3), &tol).unwrap();
        assert!(a.distance(fam.base()) < 1e-14);
    }

    #[test]
    fn pullback_rejects_wrong_basepoint() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let f = parse_expr("lambda^2").unwrap();
        // basepoint maps to 0.25 instead of 0.5
        let bad = ParameterDomain::punctured_disk(c(0.0, 0.0), 0.9, c(0.5, 0.0), &tol).unwrap();
        assert!(matches!(
            pullback(&fam, &f, bad, &tol),
            Err(Error::NotBasepointPreserving { .. })
        ));
    }

    #[test]
    fn pullback_rejects_range_escape() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let f = parse_expr("lambda * 4 - 1.5").unwrap();
        let new_domain = ParameterDomain::disk(c(0.5, 0.0), 0.45, c(0.5, 0.0), &tol).unwrap();
        assert!(matches!(
            pullback(&fam, &f, new_domain, &tol),
            Err(Error::RangeEscape { .. })
        ));
    }
}
