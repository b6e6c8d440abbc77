//! The global tolerance table.
//!
//! Every numeric threshold used by the library lives here, so that a run can
//! be reproduced from the table embedded in its report. Continuation
//! tolerances deliberately dominate the point-equality ones.

use serde::{Deserialize, Serialize};

/// Numeric thresholds shared by all modules. Construct with
/// [`Tolerances::default`] and override individual fields as needed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Chordal distance below which two sphere points are considered equal.
    pub eps_eq: f64,
    /// Minimum pairwise chordal separation of configuration punctures.
    pub eps_sep: f64,
    /// Minimum Möbius determinant modulus.
    pub eps_det: f64,
    /// Minimum clearance of generator loops from the domain boundary.
    pub eps_bd: f64,
    /// Separation floor for strand tracks; below this, crossings are
    /// unreliable and continuation fails loudly.
    pub eps_track: f64,
    /// Radius of the circle used by the circle-mean holomorphy test.
    pub circle_radius: f64,
    /// Number of points on the holomorphy test circle.
    pub circle_points: usize,
    /// Maximum accepted holomorphy residual.
    pub holomorphy_tol: f64,
    /// Initial number of samples per continued path.
    pub initial_path_samples: usize,
    /// Step underflow threshold for adaptive continuation.
    pub min_step: f64,
    /// Newton corrector convergence tolerance for root tracking.
    pub newton_tol: f64,
    /// Tube radius cap for the continuous-motion flow.
    pub eps_tube: f64,
    /// Required margin of a solved new strand to every other strand.
    pub margin_min: f64,
    /// Chordal floor kept between a solved strand and the point at infinity.
    pub infinity_floor: f64,
    /// Fixed-point iteration tolerance.
    pub fixed_point_tol: f64,
    /// Fixed-point iteration cap.
    pub fixed_point_max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_eq: 1e-12,
            eps_sep: 1e-8,
            eps_det: 1e-12,
            eps_bd: 1e-3,
            eps_track: 1e-6,
            circle_radius: 1e-3,
            circle_points: 16,
            holomorphy_tol: 1e-8,
            initial_path_samples: 256,
            min_step: 1e-12,
            newton_tol: 1e-13,
            eps_tube: 0.1,
            margin_min: 0.05,
            infinity_floor: 0.1,
            fixed_point_tol: 1e-10,
            fixed_point_max_iter: 10_000,
        }
    }
}

impl Tolerances {
    /// Override a field by name, as used by `--tolerance KEY=VAL`.
    pub fn set(&mut self, key: &str, value: f64) -> crate::Result<()> {
        match key {
            "eps_eq" => self.eps_eq = value,
            "eps_sep" => self.eps_sep = value,
            "eps_det" => self.eps_det = value,
            "eps_bd" => self.eps_bd = value,
            "eps_track" => self.eps_track = value,
            "circle_radius" => self.circle_radius = value,
            "circle_points" => self.circle_points = value as usize,
            "holomorphy_tol" => self.holomorphy_tol = value,
            "initial_path_samples" => self.initial_path_samples = value as usize,
            "min_step" => self.min_step = value,
            "newton_tol" => self.newton_tol = value,
            "eps_tube" => self.eps_tube = value,
            "margin_min" => self.margin_min = value,
            "infinity_floor" => self.infinity_floor = value,
            "fixed_point_tol" => self.fixed_point_tol = value,
            "fixed_point_max_iter" => self.fixed_point_max_iter = value as usize,
            _ => {
                return Err(crate::Error::UnknownToleranceKey {
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }
}
