//! Computational model of holomorphic motions of finite point sets in the
//! Riemann sphere: braid monodromy of a motion, triviality decisions, the
//! covering model of the associated Teichmüller-type spaces over configuration
//! spaces, and constructive extensions (continuous sphere motions, one-point
//! holomorphic extensions, inductive multi-point extension).
//!
//! The crate is organized bottom-up:
//!
//! * [`sphere`] — points of the sphere, the chordal metric, Möbius
//!   normalization, validated configurations;
//! * [`expr`] — rational expression trees in the parameter with a
//!   position-reporting parser;
//! * [`path`] / [`domain`] — piecewise paths and plane parameter domains with
//!   explicit fundamental-group generator loops;
//! * [`motion`] — motion families (closed-form and algebraic-root strands),
//!   axiom validation, pullback;
//! * [`continuation`] — adaptive strand continuation along paths with
//!   certified separation;
//! * [`braid`] — braid extraction from tracks, the word problem, mapping
//!   classes of the punctured sphere, monodromy;
//! * [`cover`] — path lifting, deck transformations, the forgetful map, and
//!   evaluation of the universal motion in the covering model;
//! * [`extend`] — continuous motions of the whole sphere, the new-strand
//!   solver, the inductive extension driver;
//! * [`fixedpoint`] — the generic fixed-point iteration interface;
//! * [`parse`] — the motion definition file format;
//! * [`report`] — serializable report payloads;
//! * [`corpus`] — the standard example families used across the test suite.
//!
//! All types are immutable values and all operations are pure; everything is
//! `Send + Sync` and deterministic given the seeds recorded in reports.

pub mod braid;
pub mod continuation;
pub mod corpus;
pub mod cover;
pub mod domain;
pub mod error;
pub mod expr;
pub mod extend;
pub mod fixedpoint;
pub mod motion;
pub mod parse;
pub mod path;
pub mod report;
pub mod sphere;
pub mod tol;

pub use error::Error;
pub use tol::Tolerances;

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
