//! Geometric harmonic analysis: chord charts, Tonnetz transformations and
//! diagrams, and harmonic-rhythm clocks.
//!
//! Everything here is pure and deterministic.

pub mod chart;
pub mod harmony;
pub mod lattice;
pub mod rhythm;
pub mod svg;
pub mod transform;

pub use chart::{flatten, parse_chart, progression, serialize_chart, ChartDocument, ChartError};
pub use harmony::{ChordSymbol, Key, PitchClass, Quality, RomanLabel, Triad};
pub use transform::{annotate_progression, classify_move, tonnetz_distance, TonnetzMove};
