//! Piecewise paths in a plane parameter domain.
//!
//! A path is a chain of line segments and circular arcs parameterized over
//! `[0, 1]`, with equal parameter share per piece. Loops representing
//! fundamental-group generators are paths whose start and end coincide.

use num_complex::Complex64;

use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// One piece of a path.
#[derive(Clone, Debug)]
pub enum PathPiece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    /// Circular arc `center + radius * exp(i*(start_angle + t*sweep))`,
    /// `sweep` signed (positive = counterclockwise).
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl PathPiece {
    pub fn point(&self, t: f64) -> Complex64 {
        match self {
            PathPiece::Segment { from, to } => from + (to - from) * t,
            PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let ang = start_angle + sweep * t;
                center + Complex64::from_polar(*radius, ang)
            }
        }
    }

    /// Derivative with respect to the piece-local parameter.
    pub fn velocity(&self, t: f64) -> Complex64 {
        match self {
            PathPiece::Segment { from, to } => to - from,
            PathPiece::Arc {
                center: _,
                radius,
                start_angle,
                sweep,
            } => {
                let ang = start_angle + sweep * t;
                Complex64::from_polar(*radius, ang) * Complex64::new(0.0, *sweep)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match self {
            PathPiece::Segment { from, to } => (to - from).norm(),
            PathPiece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> PathPiece {
        match self {
            PathPiece::Segment { from, to } => PathPiece::Segment {
                from: *to,
                to: *from,
            },
            PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => PathPiece::Arc {
                center: *center,
                radius: *radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
        }
    }
}

/// A piecewise path, parameterized over `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Path {
    pieces: Vec<PathPiece>,
}

impl Path {
    /// Build from pieces; consecutive endpoints must match exactly enough.
    pub fn new(pieces: Vec<PathPiece>) -> Result<Path> {
        if pieces.is_empty() {
            return Err(Error::InvalidDomain {
                reason: "empty path".to_string(),
            });
        }
        for w in pieces.windows(2) {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > 1e-9 {
                return Err(Error::InvalidDomain {
                    reason: format!("path pieces disconnected (gap {gap:.3e})"),
                });
            }
        }
        Ok(Path { pieces })
    }

    pub fn segment(from: Complex64, to: Complex64) -> Path {
        Path {
            pieces: vec![PathPiece::Segment { from, to }],
        }
    }

    /// Full circle around `center` through `through`, `turns` times
    /// (positive = counterclockwise), based at `through`.
    pub fn circle(center: Complex64, through: Complex64, turns: i32) -> Path {
        let radius = (through - center).norm();
        let start_angle = (through - center).arg();
        Path {
            pieces: vec![PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep: TAU * turns as f64,
            }],
        }
    }

    /// Lasso based at `base`: polyline through `waypoints` to the entry point
    /// of a circle of `radius` around `center`, the full circle (`turns`
    /// signed), then the polyline back.
    pub fn lasso(
        base: Complex64,
        waypoints: &[Complex64],
        center: Complex64,
        radius: f64,
        turns: i32,
    ) -> Result<Path> {
        let last = waypoints.last().copied().unwrap_or(base);
        let dir = center - last;
        if dir.norm() <= radius {
            return Err(Error::InvalidDomain {
                reason: "lasso approach point inside the loop circle".to_string(),
            });
        }
        let entry = center - dir / dir.norm() * radius;
        let mut pieces = Vec::new();
        let mut prev = base;
        for &w in waypoints {
            pieces.push(PathPiece::Segment { from: prev, to: w });
            prev = w;
        }
        pieces.push(PathPiece::Segment {
            from: prev,
            to: entry,
        });
        let start_angle = (entry - center).arg();
        pieces.push(PathPiece::Arc {
            center,
            radius,
            start_angle,
            sweep: TAU * turns as f64,
        });
        let mut back: Vec<PathPiece> = pieces[..pieces.len() - 1]
            .iter()
            .map(|p| p.reversed())
            .collect();
        back.reverse();
        pieces.extend(back);
        Path::new(pieces)
    }

    pub fn pieces(&self) -> &[PathPiece] {
        &self.pieces
    }

    pub fn start(&self) -> Complex64 {
        self.pieces.first().unwrap().start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces.last().unwrap().end()
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() < 1e-9
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length()).sum()
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.pieces.len() as f64;
        let t = t.clamp(0.0, 1.0);
        let scaled = t * n;
        let mut idx = scaled.floor() as usize;
        if idx >= self.pieces.len() {
            idx = self.pieces.len() - 1;
        }
        (idx, scaled - idx as f64)
    }

    /// Point at global parameter `t` in `[0, 1]`.
    pub fn point(&self, t: f64) -> Complex64 {
        let (idx, local) = self.locate(t);
        self.pieces[idx].point(local)
    }

    /// Derivative with respect to the global parameter.
    pub fn velocity(&self, t: f64) -> Complex64 {
        let (idx, local) = self.locate(t);
        self.pieces[idx].velocity(local) * self.pieces.len() as f64
    }

    /// Concatenation; the other path must start where this one ends.
    pub fn then(&self, other: &Path) -> Result<Path> {
        if (self.end() - other.start()).norm() > 1e-9 {
            return Err(Error::InvalidDomain {
                reason: "concatenated paths do not meet".to_string(),
            });
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.clone());
        Path::new(pieces)
    }

    /// Time reversal: `reversed().point(t) == point(1 - t)` exactly.
    pub fn reversed(&self) -> Path {
        let mut pieces: Vec<PathPiece> = self.pieces.iter().map(|p| p.reversed()).collect();
        pieces.reverse();
        Path { pieces }
    }
}
