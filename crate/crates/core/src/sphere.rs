//! Points of the Riemann sphere, the chordal metric, Möbius normalization,
//! and validated puncture configurations.
//!
//! The point at infinity is always represented symbolically, never as a large
//! float; configurations carry only finite punctures and treat infinity as an
//! implicit frozen puncture.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Partner;
use crate::{Error, Result, Tolerances};

/// A point of the Riemann sphere: a finite complex value or infinity.
#[derive(Clone, Copy, Debug)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    /// Finite point from real and imaginary parts.
    pub fn finite(re: f64, im: f64) -> SpherePoint {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    /// Validated constructor: rejects NaN components.
    pub fn checked(z: Complex64) -> Result<SpherePoint> {
        if z.re.is_nan() || z.im.is_nan() {
            return Err(Error::NonFiniteValue { re: z.re, im: z.im });
        }
        if z.re.is_infinite() || z.im.is_infinite() {
            return Ok(SpherePoint::Infinity);
        }
        Ok(SpherePoint::Finite(z))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// Equality up to a chordal tolerance.
    pub fn eq_within(&self, other: &SpherePoint, tol: f64) -> bool {
        chordal_distance(*self, *other) <= tol
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl std::fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{}+{}i", z.re, z.im),
            SpherePoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Chordal distance between two finite complex numbers, on the sphere of
/// diameter 2: `2|a-b| / sqrt((1+|a|^2)(1+|b|^2))`.
pub fn chordal_finite(a: Complex64, b: Complex64) -> f64 {
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
}

/// Chordal distance from a finite point to infinity: `2 / sqrt(1+|z|^2)`.
pub fn chordal_to_infinity(z: Complex64) -> f64 {
    2.0 / (1.0 + z.norm_sqr()).sqrt()
}

/// Chordal distance between two sphere points. Symmetric, vanishes exactly on
/// coincidence, and is bounded by 2 (antipodal points).
pub fn chordal_distance(a: SpherePoint, b: SpherePoint) -> f64 {
    match (a, b) {
        (SpherePoint::Finite(x), SpherePoint::Finite(y)) => chordal_finite(x, y),
        (SpherePoint::Finite(x), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(x)) => chordal_to_infinity(x),
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
    }
}

/// A Möbius transformation, stored as a determinant-normalized 2x2 complex
/// matrix acting by `z -> (az+b)/(cz+d)`.
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    /// Build from matrix entries, normalizing the determinant to 1.
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        tol: &Tolerances,
    ) -> Result<Mobius> {
        let det = a * d - b * c;
        if det.norm() < tol.eps_det {
            return Err(Error::DegenerateTriple);
        }
        let s = det.sqrt();
        Ok(Mobius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Mobius {
        Mobius {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Apply to a sphere point with the standard conventions at poles and
    /// infinity.
    pub fn apply(&self, p: SpherePoint) -> SpherePoint {
        match p {
            SpherePoint::Infinity => {
                if self.c.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Inverse transformation (determinant already 1).
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Matrix product: `self` after `other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }
}

/// The Möbius transformation sending `(p, q, r)` to `(0, 1, inf)`.
///
/// This realizes the blanket normalization fixing 0, 1, and infinity: the
/// cross-ratio map `z -> ((z-p)(q-r)) / ((z-r)(q-p))`, with the usual
/// degenerations when one of the three points is infinite.
pub fn normalize_mobius(
    p: SpherePoint,
    q: SpherePoint,
    r: SpherePoint,
    tol: &Tolerances,
) -> Result<Mobius> {
    let pairs = [(p, q), (p, r), (q, r)];
    for (x, y) in pairs {
        if chordal_distance(x, y) <= tol.eps_sep {
            return Err(Error::DegenerateTriple);
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let (a, b, c, d) = match (p, q, r) {
        (SpherePoint::Infinity, SpherePoint::Finite(q), SpherePoint::Finite(r)) => {
            // (q - r) / (z - r)
            (Complex64::new(0.0, 0.0), q - r, one, -r)
        }
        (SpherePoint::Finite(p), SpherePoint::Infinity, SpherePoint::Finite(r)) => {
            // (z - p) / (z - r)
            (one, -p, one, -r)
        }
        (SpherePoint::Finite(p), SpherePoint::Finite(q), SpherePoint::Infinity) => {
            // (z - p) / (q - p)
            (one, -p, Complex64::new(0.0, 0.0), q - p)
        }
        (SpherePoint::Finite(p), SpherePoint::Finite(q), SpherePoint::Finite(r)) => {
            ((q - r), -p * (q - r), (q - p), -r * (q - p))
        }
        _ => return Err(Error::DegenerateTriple),
    };
    Mobius::new(a, b, c, d, tol)
}

/// An ordered tuple of pairwise-distinct finite punctures, always beginning
/// with 0 and 1; infinity is an implicit fixed puncture. Strand identity is
/// positional, which is what braids and monodromy require.
#[derive(Clone, Debug, Serialize)]
pub struct Configuration {
    punctures: Vec<Complex64>,
}

impl Configuration {
    /// Number of finite punctures (the two frozen ones included).
    pub fn len(&self) -> usize {
        self.punctures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.punctures.is_empty()
    }

    pub fn punctures(&self) -> &[Complex64] {
        &self.punctures
    }

    pub fn get(&self, i: usize) -> Result<Complex64> {
        self.punctures
            .get(i)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.punctures.len(),
            })
    }

    /// Number of moving punctures (indices `2..len`).
    pub fn moving_count(&self) -> usize {
        self.punctures.len() - 2
    }

    /// Minimum pairwise chordal separation, the implicit puncture at infinity
    /// included.
    pub fn min_separation(&self) -> f64 {
        min_separation_of(&self.punctures)
    }

    /// Drop the final puncture (used by the forgetful map). Errors when only
    /// the frozen punctures remain.
    pub fn drop_last(&self) -> Result<Configuration> {
        if self.punctures.len() <= 2 {
            return Err(Error::IndexOutOfRange {
                index: 2,
                len: self.punctures.len(),
            });
        }
        let mut p = self.punctures.clone();
        p.pop();
        Ok(Configuration { punctures: p })
    }

    /// Append a puncture, revalidating separation.
    pub fn with_appended(&self, z: Complex64, tol: &Tolerances) -> Result<Configuration> {
        let mut pts: Vec<SpherePoint> = self
            .punctures
            .iter()
            .map(|&z| SpherePoint::Finite(z))
            .collect();
        pts.push(SpherePoint::Finite(z));
        make_configuration(&pts, tol)
    }

    /// Chordal distance to another configuration: max over matching indices.
    pub fn distance(&self, other: &Configuration) -> f64 {
        if self.punctures.len() != other.punctures.len() {
            return f64::INFINITY;
        }
        self.punctures
            .iter()
            .zip(other.punctures.iter())
            .map(|(&a, &b)| chordal_finite(a, b))
            .fold(0.0, f64::max)
    }
}

fn min_separation_of(punctures: &[Complex64]) -> f64 {
    let mut min = f64::INFINITY;
    for (i, &a) in punctures.iter().enumerate() {
        for &b in punctures.iter().skip(i + 1) {
            min = min.min(chordal_finite(a, b));
        }
        min = min.min(chordal_to_infinity(a));
    }
    min
}

/// Validate an ordered list of sphere points as a configuration.
///
/// The first two entries must be 0 and 1 (they are snapped exactly); all
/// entries must be finite and pairwise separated by more than `eps_sep` in the
/// chordal metric, the implicit puncture at infinity included.
pub fn make_configuration(points: &[SpherePoint], tol: &Tolerances) -> Result<Configuration> {
    if points.len() < 2 {
        return Err(Error::IndexOutOfRange {
            index: points.len(),
            len: 2,
        });
    }
    let mut punctures = Vec::with_capacity(points.len());
    for (i, pt) in points.iter().enumerate() {
        match pt {
            SpherePoint::Infinity => return Err(Error::InfinitePuncture { index: i }),
            SpherePoint::Finite(z) => {
                if z.re.is_nan() || z.im.is_nan() || z.re.is_infinite() || z.im.is_infinite() {
                    return Err(Error::NonFiniteValue { re: z.re, im: z.im });
                }
                punctures.push(*z);
            }
        }
    }
    for (i, expected) in [(0usize, 0.0f64), (1usize, 1.0f64)] {
        if chordal_finite(punctures[i], Complex64::new(expected, 0.0)) > tol.eps_eq {
            return Err(Error::AnchorMismatch { index: i, expected });
        }
        punctures[i] = Complex64::new(expected, 0.0);
    }
    for i in 0..punctures.len() {
        for j in (i + 1)..punctures.len() {
            let d = chordal_finite(punctures[i], punctures[j]);
            if d <= tol.eps_sep {
                return Err(Error::SeparationViolation {
                    i,
                    j: Partner::Puncture(j),
                    dist: d,
                    min: tol.eps_sep,
                });
            }
        }
        let d = chordal_to_infinity(punctures[i]);
        if d <= tol.eps_sep {
            return Err(Error::SeparationViolation {
                i,
                j: Partner::Infinity,
                dist: d,
                min: tol.eps_sep,
            });
        }
    }
    Ok(Configuration { punctures })
}
