//! Pitch classes, chord symbols, triads and Roman-numeral labels.
//!
//! Enharmonic spellings collapse to pitch classes for all arithmetic; the
//! spelling written in a chart is kept on [`ChordSymbol`] for display.

mod chord;
mod pitch;
mod roman;

pub use chord::{
    common_tones, parse_chord_symbol, pitch_class_set, triad_of, ChordParseError, ChordSymbol,
    Embellishment, Quality, Triad,
};
pub use pitch::{Accidental, Letter, NoteName, PcSet, PitchClass};
pub use roman::{roman_numeral, Key, Mode, NumeralCase, RomanLabel};
