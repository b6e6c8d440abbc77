//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// The second participant in a separation or collision report: another
/// puncture by index, or the implicit puncture at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    Puncture(usize),
    Infinity,
}

impl std::fmt::Display for Partner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Partner::Puncture(i) => write!(f, "puncture {i}"),
            Partner::Infinity => write!(f, "infinity"),
        }
    }
}

/// Which motion axiom a validation failure violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MotionAxiom {
    /// The motion is the identity at the basepoint.
    BasepointIdentity,
    /// The motion is injective at each parameter.
    Injectivity,
    /// Each strand is holomorphic in the parameter.
    Holomorphy,
    /// Each strand is single-valued over the domain.
    SingleValuedness,
}

impl std::fmt::Display for MotionAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MotionAxiom::BasepointIdentity => "basepoint identity",
            MotionAxiom::Injectivity => "injectivity",
            MotionAxiom::Holomorphy => "holomorphy",
            MotionAxiom::SingleValuedness => "single-valuedness",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate triple: normalization points must be pairwise separated")]
    DegenerateTriple,

    #[error("puncture {index} is the point at infinity")]
    InfinitePuncture { index: usize },

    #[error("puncture {index} must equal {expected} in a normalized configuration")]
    AnchorMismatch { index: usize, expected: f64 },

    #[error("punctures {i} and {j} are only {dist:.3e} apart (minimum {min:.3e})")]
    SeparationViolation {
        i: usize,
        j: Partner,
        dist: f64,
        min: f64,
    },

    #[error("point {}+{}i is not a finite complex number", .re, .im)]
    NonFiniteValue { re: f64, im: f64 },

    #[error("parameter {}+{}i lies outside the domain", .lambda.re, .lambda.im)]
    OutsideDomain { lambda: Complex64 },

    #[error("invalid parameter domain: {reason}")]
    InvalidDomain { reason: String },

    #[error(
        "strands {i} and {j} collide at parameter {}+{}i (separation {dist:.3e})",
        .lambda.re, .lambda.im
    )]
    CollisionAtParameter {
        i: usize,
        j: Partner,
        lambda: Complex64,
        dist: f64,
    },

    #[error("motion axiom violated ({axiom}): {detail}")]
    ValidationFailure {
        axiom: MotionAxiom,
        detail: String,
        witness: Option<Complex64>,
    },

    #[error("map does not preserve the basepoint (image {}+{}i)", .found.re, .found.im)]
    NotBasepointPreserving { found: Complex64 },

    #[error("map leaves the target domain at {}+{}i", .lambda.re, .lambda.im)]
    RangeEscape { lambda: Complex64 },

    #[error(
        "strand evaluation requires a continuation track (algebraic-root strand off its anchor)"
    )]
    UnanchoredRoot,

    #[error("collision between strands {i} and {j} detected at t = {t}")]
    CollisionDetected { t: f64, i: usize, j: Partner },

    #[error("continuation step underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("path is not closed")]
    NotClosed,

    #[error("track passes within {dist:.3e} of the winding center")]
    TooClose { dist: f64 },

    #[error("degenerate crossing: {detail}")]
    DegenerateCrossing { detail: String },

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("monodromy is nontrivial on generator {generator}")]
    NontrivialMonodromy { generator: usize },

    #[error("invalid new puncture: {reason}")]
    InvalidNewPoint { reason: String },

    #[error("no admissible strand found at degree {degree} (best margin {best_margin:.4})")]
    NoStrandFound { degree: usize, best_margin: f64 },

    #[error("extended family has nontrivial monodromy on generator {generator}")]
    NontrivialExtendedMonodromy { generator: usize },

    #[error("tube collapse: separation {separation:.3e} below 4x grid step {grid_step:.3e}")]
    TubeCollapse { separation: f64, grid_step: f64 },

    #[error("flow integration failed: {detail}")]
    FlowBlowup { detail: String },

    #[error("fixed-point iteration diverged after {iterations} iterations")]
    Diverged { iterations: usize },

    #[error("extension stage {stage} failed: {cause}")]
    StageFailure { stage: usize, cause: Box<Error> },

    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("unknown tolerance key `{key}`")]
    UnknownToleranceKey { key: String },
}

impl Error {
    /// Stable machine-readable code for reports and exit-code mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateTriple => "degenerate_triple",
            Error::InfinitePuncture { .. } => "infinite_puncture",
            Error::AnchorMismatch { .. } => "anchor_mismatch",
            Error::SeparationViolation { .. } => "separation_violation",
            Error::NonFiniteValue { .. } => "non_finite_value",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::InvalidDomain { .. } => "invalid_domain",
            Error::CollisionAtParameter { .. } => "collision_at_parameter",
            Error::ValidationFailure { .. } => "validation_failure",
            Error::NotBasepointPreserving { .. } => "not_basepoint_preserving",
            Error::RangeEscape { .. } => "range_escape",
            Error::UnanchoredRoot => "unanchored_root",
            Error::CollisionDetected { .. } => "collision_detected",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::NotClosed => "not_closed",
            Error::TooClose { .. } => "too_close",
            Error::DegenerateCrossing { .. } => "degenerate_crossing",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NontrivialMonodromy { .. } => "nontrivial_monodromy",
            Error::InvalidNewPoint { .. } => "invalid_new_point",
            Error::NoStrandFound { .. } => "no_strand_found",
            Error::NontrivialExtendedMonodromy { .. } => "nontrivial_extended_monodromy",
            Error::TubeCollapse { .. } => "tube_collapse",
            Error::FlowBlowup { .. } => "flow_blowup",
            Error::Diverged { .. } => "diverged",
            Error::StageFailure { .. } => "stage_failure",
            Error::Parse { .. } => "parse_error",
            Error::UnknownToleranceKey { .. } => "unknown_tolerance_key",
        }
    }
}
