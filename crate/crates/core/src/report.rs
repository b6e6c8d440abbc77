//! Serializable report payloads shared by the command-line surface.
//!
//! Reports are plain data with a stable field order, so serialization is
//! byte-reproducible for a fixed seed and configuration.

use serde::Serialize;

use crate::braid::{Crossing, MappingClass};
use crate::continuation::StrandTracks;
use crate::cover::CoverPoint;
use crate::motion::ValidationReport;
use crate::Tolerances;

/// One named check with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// The top-level report schema shared by all subcommands.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub verdicts: Vec<Verdict>,
    pub words: Vec<String>,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<MonodromyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

impl Report {
    pub fn new(seed: u64, tolerances: &Tolerances) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            tolerances: tolerances.clone(),
            verdicts: Vec::new(),
            words: Vec::new(),
            artifacts: Vec::new(),
            validation: None,
            monodromy: None,
            error: None,
        }
    }
}

/// Machine-readable failure cause.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub cause: String,
    pub message: String,
}

impl ErrorReport {
    pub fn from_error(e: &crate::Error) -> ErrorReport {
        ErrorReport {
            cause: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

/// Per-generator monodromy data.
#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    pub generator_words: Vec<String>,
    pub trivial: Vec<bool>,
    pub overall_trivial: bool,
    pub projection_rotation: f64,
}

impl MonodromyReport {
    pub fn from_classes(classes: &[MappingClass], rotation: f64) -> MonodromyReport {
        let generator_words = classes.iter().map(|c| c.word().to_string()).collect();
        let trivial: Vec<bool> = classes.iter().map(|c| c.is_trivial()).collect();
        let overall_trivial = trivial.iter().all(|&t| t);
        MonodromyReport {
            generator_words,
            trivial,
            overall_trivial,
            projection_rotation: rotation,
        }
    }
}

/// Strand tracks as JSON arrays (`[re, im]` pairs per sample).
#[derive(Clone, Debug, Serialize)]
pub struct TracksExport {
    pub times: Vec<f64>,
    pub strands: Vec<Vec<(f64, f64)>>,
    pub min_separation: f64,
    pub crossings: Vec<Crossing>,
}

impl TracksExport {
    pub fn from_tracks(tracks: &StrandTracks, crossings: Vec<Crossing>) -> TracksExport {
        TracksExport {
            times: tracks.times().to_vec(),
            strands: (0..tracks.strand_count())
                .map(|i| tracks.positions(i).iter().map(|z| (z.re, z.im)).collect())
                .collect(),
            min_separation: tracks.min_separation(),
            crossings,
        }
    }
}

/// A cover point as `{word, end}`.
#[derive(Clone, Debug, Serialize)]
pub struct CoverPointExport {
    pub word: String,
    pub end: Vec<(f64, f64)>,
}

impl CoverPointExport {
    pub fn from_point(pt: &CoverPoint) -> CoverPointExport {
        CoverPointExport {
            word: pt.word().to_string(),
            end: pt.end().punctures().iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}
