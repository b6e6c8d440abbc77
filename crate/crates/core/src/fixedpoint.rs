//! Generic fixed-point iteration `g <- target + K g` against an abstract
//! operator on grid functions. The concrete operator behind the one-point
//! extension machinery is supplied externally; this module exposes the
//! iteration structure, a divergence guard, and an empirical uniqueness
//! probe from several initial functions.

use num_complex::Complex64;

use crate::{Error, Result};

/// A bounded function sampled on a grid (the grid geometry is irrelevant to
/// the iteration itself).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    pub values: Vec<Complex64>,
}

impl GridFn {
    pub fn constant(value: Complex64, len: usize) -> GridFn {
        GridFn {
            values: vec![value; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sup_distance(&self, other: &GridFn) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A continuous self-map of bounded grid functions.
pub trait GridOperator {
    fn apply(&self, g: &GridFn) -> GridFn;
}

/// The zero operator: `g <- target` in one step.
pub struct ZeroOperator;

impl GridOperator for ZeroOperator {
    fn apply(&self, g: &GridFn) -> GridFn {
        GridFn::constant(Complex64::new(0.0, 0.0), g.len())
    }
}

/// `K g = factor * g`.
pub struct ScaledIdentity(pub f64);

impl GridOperator for ScaledIdentity {
    fn apply(&self, g: &GridFn) -> GridFn {
        GridFn {
            values: g.values.iter().map(|z| z * self.0).collect(),
        }
    }
}

/// `K g = g + shift`: operator norm 1, no fixed point of `target + K` unless
/// `target + shift = 0`.
pub struct AffineShift(pub Complex64);

impl GridOperator for AffineShift {
    fn apply(&self, g: &GridFn) -> GridFn {
        GridFn {
            values: g.values.iter().map(|z| z + self.0).collect(),
        }
    }
}

/// A fixed-point problem `g = target + K g`.
pub struct FixedPointProblem<'a> {
    pub target: Complex64,
    pub operator: &'a dyn GridOperator,
    pub tol: f64,
    pub max_iterations: usize,
}

/// Outcome of one iteration run.
#[derive(Clone, Debug)]
pub struct FixedPointOutcome {
    pub solution: GridFn,
    pub iterations: usize,
    /// `sup |g - (target + K g)|` of the returned solution.
    pub residual: f64,
}

/// Iterate `g <- target + K g` from an initial grid function until the
/// sup-norm increment drops below the tolerance.
pub fn fixed_point_iterate(
    problem: &FixedPointProblem<'_>,
    initial: &GridFn,
) -> Result<FixedPointOutcome> {
    let mut g = initial.clone();
    for iter in 1..=problem.max_iterations {
        let mut next = problem.operator.apply(&g);
        for v in &mut next.values {
            *v += problem.target;
        }
        let increment = next.sup_distance(&g);
        g = next;
        if !g.sup_norm().is_finite() {
            return Err(Error::Diverged { iterations: iter });
        }
        if increment < problem.tol {
            let mut image = problem.operator.apply(&g);
            for v in &mut image.values {
                *v += problem.target;
            }
            let residual = image.sup_distance(&g);
            return Ok(FixedPointOutcome {
                solution: g,
                iterations: iter,
                residual,
            });
        }
    }
    Err(Error::Diverged {
        iterations: problem.max_iterations,
    })
}

/// Empirical uniqueness probe: converge from several initials and report the
/// largest pairwise sup-distance of the solutions.
#[derive(Clone, Debug)]
pub struct UniquenessProbe {
    pub max_pairwise: f64,
    pub agrees: bool,
    pub iterations: Vec<usize>,
}

pub fn verify_unique_fixed_point(
    problem: &FixedPointProblem<'_>,
    initials: &[GridFn],
) -> Result<UniquenessProbe> {
    let mut solutions = Vec::with_capacity(initials.len());
    let mut iterations = Vec::with_capacity(initials.len());
    for g0 in initials {
        let out = fixed_point_iterate(problem, g0)?;
        iterations.push(out.iterations);
        solutions.push(out.solution);
    }
    let mut max_pairwise = 0.0f64;
    for i in 0..solutions.len() {
        for j in (i + 1)..solutions.len() {
            max_pairwise = max_pairwise.max(solutions[i].sup_distance(&solutions[j]));
        }
    }
    Ok(UniquenessProbe {
        max_pairwise,
        agrees: max_pairwise < 10.0 * problem.tol,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_operator_converges_in_one_step() {
        let op = ZeroOperator;
        let problem = FixedPointProblem {
            target: c(0.25, -0.5),
            operator: &op,
            tol: 1e-10,
            max_iterations: 10,
        };
        let out = fixed_point_iterate(&problem, &GridFn::constant(c(3.0, 3.0), 16)).unwrap();
        assert!(out.iterations <= 2);
        for v in &out.solution.values {
            assert!((v - c(0.25, -0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn half_identity_converges_to_twice_target() {
        let op = ScaledIdentity(0.5);
        let target = c(0.3, 0.1);
        let problem = FixedPointProblem {
            target,
            operator: &op,
            tol: 1e-10,
            max_iterations: 200,
        };
        let out = fixed_point_iterate(&problem, &GridFn::constant(c(0.0, 0.0), 8)).unwrap();
        for v in &out.solution.values {
            assert!((v - target * 2.0).norm() < 1e-9);
        }
        assert!(out.residual < 1e-10);
    }

    #[test]
    fn contraction_rate_within_factor_two_of_geometric_bound() {
        let q = 0.5;
        let op = ScaledIdentity(q);
        let target = c(1.0, 0.0);
        let tol = 1e-10;
        let problem = FixedPointProblem {
            target,
            operator: &op,
            tol,
            max_iterations: 500,
        };
        let initial = GridFn::constant(c(0.0, 0.0), 4);
        let out = fixed_point_iterate(&problem, &initial).unwrap();
        // a priori: increments shrink by q each step from |target|
        let bound = ((target.norm() / tol).ln() / (1.0 / q).ln()).ceil() as usize + 1;
        assert!(
            out.iterations <= 2 * bound,
            "took {} iterations, bound {}",
            out.iterations,
            bound
        );
    }

    #[test]
    fn norm_one_shift_diverges() {
        let op = AffineShift(c(1.0, 0.0));
        let problem = FixedPointProblem {
            target: c(0.5, 0.0),
            operator: &op,
            tol: 1e-10,
            max_iterations: 50,
        };
        match fixed_point_iterate(&problem, &GridFn::constant(c(0.0, 0.0), 4)) {
            Err(Error::Diverged { iterations: 50 }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn uniqueness_probe_from_three_initials() {
        let op = ScaledIdentity(0.5);
        let problem = FixedPointProblem {
            target: c(0.3, 0.1),
            operator: &op,
            tol: 1e-10,
            max_iterations: 200,
        };
        let initials = [
            GridFn::constant(c(0.0, 0.0), 8),
            GridFn::constant(c(5.0, -5.0), 8),
            GridFn::constant(c(-2.0, 7.0), 8),
        ];
        let probe = verify_unique_fixed_point(&problem, &initials).unwrap();
        assert!(probe.agrees, "max pairwise {}", probe.max_pairwise);
    }
}
