use std::fmt;

use super::chord::{ChordSymbol, Embellishment, Quality};
use super::pitch::{Accidental, PitchClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Major,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Key {
    pub tonic: PitchClass,
    pub mode: Mode,
}

const MAJOR_SCALE: [u8; 7] = [0, 2, 4, 5, 7, 9, 11];

impl Key {
    pub fn major(tonic: PitchClass) -> Self {
        Key {
            tonic,
            mode: Mode::Major,
        }
    }

    /// Scale degree (1-based) of a pitch class, if diatonic.
    pub fn degree_of(&self, pc: PitchClass) -> Option<u8> {
        let interval = self.tonic.interval_to(pc);
        MAJOR_SCALE
            .iter()
            .position(|&s| s == interval)
            .map(|i| i as u8 + 1)
    }

    pub fn scale(&self) -> [PitchClass; 7] {
        MAJOR_SCALE.map(|s| self.tonic.transpose(s as i32))
    }

    /// Diatonic triad roots I..vii with their qualities (vii is diminished
    /// and reported as `None`).
    pub fn diatonic_triads(&self) -> [(PitchClass, Option<Quality>); 7] {
        let qualities = [
            Some(Quality::Major),
            Some(Quality::Minor),
            Some(Quality::Minor),
            Some(Quality::Major),
            Some(Quality::Major),
            Some(Quality::Minor),
            None,
        ];
        let scale = self.scale();
        std::array::from_fn(|i| (scale[i], qualities[i]))
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tonic.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumeralCase {
    Upper,
    Lower,
}

/// A Roman-numeral chord label relative to a key, e.g. `V7/IV`, `iv`, `bVII`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RomanLabel {
    pub degree: u8,
    pub accidental: Accidental,
    pub case: NumeralCase,
    pub embellishment: Embellishment,
    /// Target of a secondary dominant (`/IV`).
    pub secondary_of: Option<Box<RomanLabel>>,
}

const NUMERALS: [&str; 7] = ["I", "II", "III", "IV", "V", "VI", "VII"];

impl RomanLabel {
    pub fn plain(degree: u8, case: NumeralCase) -> Self {
        RomanLabel {
            degree,
            accidental: Accidental::Natural,
            case,
            embellishment: Embellishment::Plain,
            secondary_of: None,
        }
    }

    pub fn is_secondary(&self) -> bool {
        self.secondary_of.is_some()
    }

    /// True for a plain-degree label such as `V` or `V7`, ignoring accidentals
    /// only when they are natural.
    pub fn is_degree(&self, degree: u8, case: NumeralCase) -> bool {
        self.degree == degree
            && self.case == case
            && self.accidental == Accidental::Natural
            && self.secondary_of.is_none()
    }

    fn write(&self, out: &mut String, unicode: bool) {
        match (self.accidental, unicode) {
            (Accidental::Natural, _) => {}
            (Accidental::Flat, true) => out.push('♭'),
            (Accidental::Sharp, true) => out.push('♯'),
            (acc, false) => out.push_str(acc.ascii()),
        }
        let numeral = NUMERALS[(self.degree - 1) as usize];
        match self.case {
            NumeralCase::Upper => out.push_str(numeral),
            NumeralCase::Lower => out.push_str(&numeral.to_ascii_lowercase()),
        }
        match (self.embellishment, unicode) {
            (Embellishment::Plain, _) => {}
            (Embellishment::Sixth, true) => out.push('⁶'),
            (Embellishment::Seventh, true) => out.push('⁷'),
            (Embellishment::Sixth, false) => out.push('6'),
            (Embellishment::Seventh, false) => out.push('7'),
        }
        if let Some(target) = &self.secondary_of {
            out.push('/');
            target.write(out, unicode);
        }
    }

    /// Typeset form: `♭VII`, `V⁷/IV`.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, true);
        s
    }
}

impl fmt::Display for RomanLabel {
    /// ASCII form: `bVII`, `V7/IV`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, false);
        f.write_str(&s)
    }
}

/// Labels a chord in a major key.
///
/// Non-diatonic roots take the flat of the degree a semitone above, or the
/// sharp of the degree below when that is not diatonic. A major seventh chord
/// on the tonic is read as the secondary dominant `V7/IV`.
pub fn roman_numeral(symbol: &ChordSymbol, key: &Key) -> RomanLabel {
    let root = symbol.root();
    let (degree, accidental) = match key.degree_of(root) {
        Some(d) => (d, Accidental::Natural),
        None => match key.degree_of(root.transpose(1)) {
            Some(d) => (d, Accidental::Flat),
            None => (
                key.degree_of(root.transpose(-1))
                    .expect("a major scale covers every semitone within one step"),
                Accidental::Sharp,
            ),
        },
    };
    let case = match symbol.quality {
        Quality::Major => NumeralCase::Upper,
        Quality::Minor => NumeralCase::Lower,
    };
    if degree == 1
        && accidental == Accidental::Natural
        && case == NumeralCase::Upper
        && symbol.embellishment == Embellishment::Seventh
    {
        return RomanLabel {
            degree: 5,
            accidental: Accidental::Natural,
            case: NumeralCase::Upper,
            embellishment: Embellishment::Seventh,
            secondary_of: Some(Box::new(RomanLabel::plain(4, NumeralCase::Upper))),
        };
    }
    RomanLabel {
        degree,
        accidental,
        case,
        embellishment: symbol.embellishment,
        secondary_of: None,
    }
}
