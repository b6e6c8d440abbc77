//! The standard example families used across the test suites and the
//! documentation.
//!
//! Each constructor returns a validated-by-construction family; the corpus
//! accessor pairs every family with its expected monodromy verdict so
//! equivalence-style tests can sweep the whole collection.

use num_complex::Complex64;

use crate::domain::ParameterDomain;
use crate::expr::{parse_expr, Expr};
use crate::motion::{pullback, MotionFamily, StrandSpec};
use crate::sphere::{make_configuration, Configuration, SpherePoint};
use crate::{Result, Tolerances};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn config(points: &[Complex64], tol: &Tolerances) -> Result<Configuration> {
    let pts: Vec<SpherePoint> = points.iter().map(|&z| SpherePoint::Finite(z)).collect();
    make_configuration(&pts, tol)
}

/// Identity family over a disk, base `[0, 1, 1/2]`.
pub fn identity_disk(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::disk(c(0.0, 0.0), 1.0, c(0.2, 0.1), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)], tol)?;
    MotionFamily::identity(domain, base, tol)
}

/// Identity family over a punctured disk, base `[0, 1, -1/2]`.
pub fn identity_punctured(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0)], tol)?;
    MotionFamily::identity(domain, base, tol)
}

/// Identity family with no moving punctures, base `[0, 1]`.
pub fn identity_two(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::disk(c(0.0, 0.0), 1.0, c(0.1, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0)], tol)?;
    MotionFamily::identity(domain, base, tol)
}

/// The winding family `W`: over the punctured disk `0 < |lambda| < 1` with
/// basepoint 1/2, the moving puncture is `h(lambda) = lambda`, so it circles
/// the frozen puncture 0 once along the generator. Nontrivial monodromy.
pub fn winding(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)], tol)?;
    let strand = StrandSpec::ClosedForm(parse_expr("lambda")?);
    MotionFamily::new(domain, base, vec![strand], tol)
}

/// The wiggle family: small single-valued stirring of the puncture 1/2 over
/// the punctured disk. Trivial monodromy.
pub fn wiggle(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)], tol)?;
    let strand = StrandSpec::ClosedForm(parse_expr("1/2 + (lambda - 1/2)/10")?);
    MotionFamily::new(domain, base, vec![strand], tol)
}

/// Pullback of the winding family by `lambda^2`: the moving puncture circles
/// 0 twice per generator loop. Nontrivial monodromy.
pub fn winding_squared(tol: &Tolerances) -> Result<MotionFamily> {
    let fam = winding(tol)?;
    let f = parse_expr("lambda^2")?;
    let bp = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let new_domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 0.95, bp, tol)?;
    pullback(&fam, &f, new_domain, tol)
}

/// Pullback of the wiggle family by `lambda^2`. Trivial monodromy.
pub fn wiggle_pulled(tol: &Tolerances) -> Result<MotionFamily> {
    let fam = wiggle(tol)?;
    let f = parse_expr("lambda^2")?;
    let bp = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let new_domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 0.95, bp, tol)?;
    pullback(&fam, &f, new_domain, tol)
}

/// Degenerate pullback of the winding family by a constant map: all strands
/// frozen at their base values. Trivial monodromy.
pub fn constant_pullback(tol: &Tolerances) -> Result<MotionFamily> {
    let fam = winding(tol)?;
    let f = parse_expr("1/2")?;
    let new_domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.25, 0.0), tol)?;
    pullback(&fam, &f, new_domain, tol)
}

/// Invalid family used by failure tests: strands `lambda` and the constant
/// `3/4` collide at `lambda = 3/4`.
pub fn colliding_pair(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.75, 0.0)], tol)?;
    let strands = vec![
        StrandSpec::ClosedForm(parse_expr("lambda")?),
        StrandSpec::ClosedForm(parse_expr("3/4")?),
    ];
    MotionFamily::new(domain, base, strands, tol)
}

/// Algebraic-root family with no branch point in the domain: the two roots of
/// `z^2 - (1/4 + lambda/10)` over the punctured disk, basepoint 1/2. The
/// roots wiggle near +-sqrt(0.3) and cross nothing. Trivial monodromy.
pub fn root_pair_trivial(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), tol)?;
    let r = (0.3f64).sqrt();
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(r, 0.0), c(-r, 0.0)], tol)?;
    let coeffs = vec![
        parse_expr("-(1/4 + lambda/10)")?,
        Expr::real(0.0),
        Expr::real(1.0),
    ];
    let strands = vec![
        StrandSpec::algebraic_root(coeffs.clone(), c(r, 0.0)),
        StrandSpec::algebraic_root(coeffs, c(-r, 0.0)),
    ];
    MotionFamily::new(domain, base, strands, tol)
}

/// Algebraic-root family whose roots `+-lambda/3` both circle the frozen
/// puncture 0 along the generator (the defining polynomial is
/// `z^2 - lambda^2/9`, branch point only at the domain puncture).
/// Nontrivial monodromy; the tracks have the closed form `+-lambda/3`.
pub fn root_pair_winding(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.6, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.0), c(-0.2, 0.0)], tol)?;
    let coeffs = vec![
        parse_expr("-(lambda^2)/9")?,
        Expr::real(0.0),
        Expr::real(1.0),
    ];
    let strands = vec![
        StrandSpec::algebraic_root(coeffs.clone(), c(0.2, 0.0)),
        StrandSpec::algebraic_root(coeffs, c(-0.2, 0.0)),
    ];
    MotionFamily::new(domain, base, strands, tol)
}

/// Roots of `z^2 - lambda/4`, labeled +-1/2 at the basepoint 1. Used by the
/// continuation tests: along the upper half unit circle the roots continue to
/// +-i/2.
pub fn square_root_pair(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 2.0, c(1.0, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0)], tol)?;
    let coeffs = vec![parse_expr("-lambda/4")?, Expr::real(0.0), Expr::real(1.0)];
    let strands = vec![
        StrandSpec::algebraic_root(coeffs.clone(), c(0.5, 0.0)),
        StrandSpec::algebraic_root(coeffs, c(-0.5, 0.0)),
    ];
    MotionFamily::new(domain, base, strands, tol)
}

/// Two moving strands over a disk with two parameter punctures:
/// around the first puncture one strand pushes around the frozen puncture 0,
/// around the second the two moving strands make a full twist around each
/// other. Nontrivial monodromy on both generators.
pub fn exchange_family(tol: &Tolerances) -> Result<MotionFamily> {
    let p1 = c(-0.4, 0.0);
    let p2 = c(0.0, 0.5);
    let domain = ParameterDomain::finitely_punctured_disk(
        c(0.0, 0.0),
        1.2,
        vec![p1, p2],
        c(0.5, 0.0),
        None,
        None,
        tol,
    )?;
    // h2 vanishes exactly at the parameter puncture p1 (never inside the
    // domain); h2 - h3 vanishes exactly at p2.
    let h2 = parse_expr("(lambda + 0.4)/2")?;
    let h3 = parse_expr("(lambda + 0.4)/2 - 0.3*(lambda - 0.5*i)")?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.45, 0.0), c(0.3, 0.15)], tol)?;
    let strands = vec![StrandSpec::ClosedForm(h2), StrandSpec::ClosedForm(h3)];
    MotionFamily::new(domain, base, strands, tol)
}

/// The winding family over an annulus: `h(lambda) = lambda` on
/// `1/4 < |lambda| < 1`. Nontrivial monodromy.
pub fn annulus_winding(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::annulus(c(0.0, 0.0), 0.25, 1.0, c(0.5, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)], tol)?;
    let strand = StrandSpec::ClosedForm(parse_expr("lambda")?);
    MotionFamily::new(domain, base, vec![strand], tol)
}

/// Two gently stirred strands far from everything, over an annulus. Trivial
/// monodromy.
pub fn annulus_calm(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::annulus(c(0.0, 0.0), 0.5, 2.0, c(1.0, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)], tol)?;
    let strands = vec![
        StrandSpec::ClosedForm(parse_expr("2 + (lambda - 1)/10")?),
        StrandSpec::ClosedForm(parse_expr("-2 + (lambda - 1)/12")?),
    ];
    MotionFamily::new(domain, base, strands, tol)
}

/// One barely-moving strand over a disk with two parameter punctures; both
/// generator loops act trivially.
pub fn two_puncture_calm(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::finitely_punctured_disk(
        c(0.0, 0.0),
        1.0,
        vec![c(0.0, 0.5), c(0.0, -0.5)],
        c(0.25, 0.0),
        None,
        None,
        tol,
    )?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)], tol)?;
    let strand = StrandSpec::ClosedForm(parse_expr("1/2 + (lambda - 1/4)/20")?);
    MotionFamily::new(domain, base, vec![strand], tol)
}

/// A strand pushing once around the frozen puncture 1:
/// `h(lambda) = 1 + lambda/2` over the punctured disk. Nontrivial monodromy.
pub fn around_one(tol: &Tolerances) -> Result<MotionFamily> {
    let domain = ParameterDomain::punctured_disk(c(0.0, 0.0), 1.0, c(0.5, 0.0), tol)?;
    let base = config(&[c(0.0, 0.0), c(1.0, 0.0), c(1.25, 0.0)], tol)?;
    let strand = StrandSpec::ClosedForm(parse_expr("1 + lambda/2")?);
    MotionFamily::new(domain, base, vec![strand], tol)
}

/// The full equivalence corpus: `(name, family, expected_trivial)`.
pub fn theorem_a_corpus(tol: &Tolerances) -> Result<Vec<(String, MotionFamily, bool)>> {
    Ok(vec![
        ("identity-disk".into(), identity_disk(tol)?, true),
        ("identity-punctured".into(), identity_punctured(tol)?, true),
        ("identity-two".into(), identity_two(tol)?, true),
        ("wiggle".into(), wiggle(tol)?, true),
        ("winding".into(), winding(tol)?, false),
        ("winding-squared".into(), winding_squared(tol)?, false),
        ("wiggle-pulled".into(), wiggle_pulled(tol)?, true),
        ("constant-pullback".into(), constant_pullback(tol)?, true),
        ("root-pair-trivial".into(), root_pair_trivial(tol)?, true),
        ("root-pair-winding".into(), root_pair_winding(tol)?, false),
        ("exchange".into(), exchange_family(tol)?, false),
        ("annulus-winding".into(), annulus_winding(tol)?, false),
        ("annulus-calm".into(), annulus_calm(tol)?, true),
        ("two-puncture-calm".into(), two_puncture_calm(tol)?, true),
        ("around-one".into(), around_one(tol)?, false),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::validate_motion;

    #[test]
    fn corpus_members_validate() {
        let tol = Tolerances::default();
        for (name, fam, _) in theorem_a_corpus(&tol).unwrap() {
            let rep = validate_motion(&fam, 100, &tol)
                .unwrap_or_else(|e| panic!("{name} failed validation: {e}"));
            assert!(rep.injectivity_margin > tol.eps_sep, "{name}");
        }
    }
}
