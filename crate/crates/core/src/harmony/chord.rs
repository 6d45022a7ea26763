use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::pitch::{Accidental, Letter, NoteName, PcSet, PitchClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quality {
    Major,
    Minor,
}

impl Quality {
    pub fn toggled(self) -> Quality {
        match self {
            Quality::Major => Quality::Minor,
            Quality::Minor => Quality::Major,
        }
    }

    fn third(self) -> i32 {
        match self {
            Quality::Major => 4,
            Quality::Minor => 3,
        }
    }
}

/// Added tone on top of the underlying triad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Embellishment {
    Plain,
    /// Adds the major sixth, root + 9.
    Sixth,
    /// Adds the minor seventh, root + 10, for both qualities.
    Seventh,
}

impl Embellishment {
    pub fn tone_above_root(self) -> Option<i32> {
        match self {
            Embellishment::Plain => None,
            Embellishment::Sixth => Some(9),
            Embellishment::Seventh => Some(10),
        }
    }

    fn digit(self) -> &'static str {
        match self {
            Embellishment::Plain => "",
            Embellishment::Sixth => "6",
            Embellishment::Seventh => "7",
        }
    }

    fn superscript(self) -> &'static str {
        match self {
            Embellishment::Plain => "",
            Embellishment::Sixth => "⁶",
            Embellishment::Seventh => "⁷",
        }
    }
}

/// A major or minor triad; the vertex type of the Tonnetz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triad {
    pub root: PitchClass,
    pub quality: Quality,
}

impl Triad {
    pub fn new(root: PitchClass, quality: Quality) -> Self {
        Triad { root, quality }
    }

    pub fn major(root: PitchClass) -> Self {
        Triad::new(root, Quality::Major)
    }

    pub fn minor(root: PitchClass) -> Self {
        Triad::new(root, Quality::Minor)
    }

    pub fn third(self) -> PitchClass {
        self.root.transpose(self.quality.third())
    }

    pub fn fifth(self) -> PitchClass {
        self.root.transpose(7)
    }

    pub fn pitch_classes(self) -> PcSet {
        [self.root, self.third(), self.fifth()]
            .into_iter()
            .collect()
    }

    /// All 24 major and minor triads, majors first, each in root order.
    pub fn all() -> impl Iterator<Item = Triad> {
        [Quality::Major, Quality::Minor]
            .into_iter()
            .flat_map(|q| PitchClass::all().map(move |r| Triad::new(r, q)))
    }

    pub fn transpose(self, semitones: i32) -> Triad {
        Triad::new(self.root.transpose(semitones), self.quality)
    }

    /// Dense index in `0..24` matching the order of [`Triad::all`].
    pub fn index(self) -> usize {
        let base = match self.quality {
            Quality::Major => 0,
            Quality::Minor => 12,
        };
        base + self.root.value() as usize
    }
}

impl fmt::Display for Triad {
    /// Uppercase root for major, lowercase for minor (`A`, `f#`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.root.name();
        match self.quality {
            Quality::Major => f.write_str(name),
            Quality::Minor => f.write_str(&name.to_ascii_lowercase()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordParseError {
    #[error("empty chord token")]
    Empty,
    #[error("unknown root letter '{0}'")]
    UnknownRootLetter(char),
    #[error("malformed accidental in '{0}'")]
    MalformedAccidental(String),
    #[error("bass {bass} is not a member of chord '{token}'")]
    BassNotInChord { token: String, bass: String },
    #[error("unexpected '{trailing}' after chord '{token}'")]
    TrailingGarbage { token: String, trailing: String },
}

/// One parsed chord token from a chart, e.g. `A`, `f#7`, `B/F#`.
///
/// Uppercase root letters are major, lowercase (or an `m` suffix) minor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChordSymbol {
    pub spelling: NoteName,
    pub quality: Quality,
    pub embellishment: Embellishment,
    pub bass: Option<NoteName>,
    /// The token as written in the source.
    pub text: String,
}

impl ChordSymbol {
    /// Builds a symbol whose `text` is its canonical rendering.
    pub fn new(
        spelling: NoteName,
        quality: Quality,
        embellishment: Embellishment,
        bass: Option<NoteName>,
    ) -> Self {
        let mut sym = ChordSymbol {
            spelling,
            quality,
            embellishment,
            bass,
            text: String::new(),
        };
        sym.text = sym.canonical();
        sym
    }

    pub fn parse(token: &str) -> Result<Self, ChordParseError> {
        parse_chord_symbol(token)
    }

    pub fn root(&self) -> PitchClass {
        self.spelling.pitch_class()
    }

    pub fn triad(&self) -> Triad {
        triad_of(self)
    }

    pub fn pitch_classes(&self) -> PcSet {
        pitch_class_set(self)
    }

    /// ASCII canonical form: `f#7`, `B/F#`, `D6`.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let letter = self.spelling.letter.as_char();
        out.push(match self.quality {
            Quality::Major => letter,
            Quality::Minor => letter.to_ascii_lowercase(),
        });
        out.push_str(self.spelling.accidental.ascii());
        out.push_str(self.embellishment.digit());
        if let Some(bass) = self.bass {
            out.push('/');
            out.push_str(&bass.to_string());
        }
        out
    }

    /// Typeset form with Unicode accidentals and superscripts: `f♯⁷`, `B/F♯`.
    pub fn pretty(&self) -> String {
        let root = self.spelling.pretty();
        let mut out = match self.quality {
            Quality::Major => root,
            Quality::Minor => root.to_lowercase(),
        };
        out.push_str(self.embellishment.superscript());
        if let Some(bass) = self.bass {
            out.push('/');
            out.push_str(&bass.pretty());
        }
        out
    }
}

impl fmt::Display for ChordSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for ChordSymbol {
    type Err = ChordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_chord_symbol(s)
    }
}

fn parse_note(
    chars: &mut std::iter::Peekable<std::str::Chars<'_>>,
    token: &str,
) -> Result<(NoteName, bool), ChordParseError> {
    let c = chars.next().ok_or(ChordParseError::Empty)?;
    let letter = Letter::from_char(c).ok_or(ChordParseError::UnknownRootLetter(c))?;
    let lower = c.is_ascii_lowercase();
    let mut accidental = Accidental::Natural;
    if let Some(acc) = chars.peek().and_then(|&c| Accidental::from_char(c)) {
        chars.next();
        accidental = acc;
        if chars
            .peek()
            .and_then(|&c| Accidental::from_char(c))
            .is_some()
        {
            return Err(ChordParseError::MalformedAccidental(token.to_string()));
        }
    }
    Ok((NoteName::new(letter, accidental), lower))
}

/// Parses a chord token: root letter (case gives quality), optional `#`/`b`
/// accidental, optional `m`, optional `6`/`7`, optional `/bass`.
pub fn parse_chord_symbol(token: &str) -> Result<ChordSymbol, ChordParseError> {
    if token.is_empty() {
        return Err(ChordParseError::Empty);
    }
    let mut chars = token.chars().peekable();
    let (spelling, lower) = parse_note(&mut chars, token)?;
    let mut quality = if lower {
        Quality::Minor
    } else {
        Quality::Major
    };
    if chars.peek() == Some(&'m') {
        chars.next();
        quality = Quality::Minor;
    }
    let embellishment = match chars.peek() {
        Some('6') | Some('⁶') => Embellishment::Sixth,
        Some('7') | Some('⁷') => Embellishment::Seventh,
        _ => Embellishment::Plain,
    };
    if embellishment != Embellishment::Plain {
        chars.next();
    }
    let mut bass = None;
    if chars.peek() == Some(&'/') {
        chars.next();
        if chars.peek().is_none() {
            return Err(ChordParseError::TrailingGarbage {
                token: token.to_string(),
                trailing: "/".to_string(),
            });
        }
        let (note, _) = parse_note(&mut chars, token)?;
        bass = Some(note);
    }
    let rest: String = chars.collect();
    if !rest.is_empty() {
        return Err(ChordParseError::TrailingGarbage {
            token: token.to_string(),
            trailing: rest,
        });
    }
    let symbol = ChordSymbol {
        spelling,
        quality,
        embellishment,
        bass,
        text: token.to_string(),
    };
    if let Some(b) = bass {
        if !symbol.pitch_classes().contains(b.pitch_class()) {
            return Err(ChordParseError::BassNotInChord {
                token: token.to_string(),
                bass: b.to_string(),
            });
        }
    }
    Ok(symbol)
}

/// Drops embellishment and bass, keeping root and quality.
pub fn triad_of(symbol: &ChordSymbol) -> Triad {
    Triad::new(symbol.root(), symbol.quality)
}

/// Triad tones plus the embellishment tone, if any.
pub fn pitch_class_set(symbol: &ChordSymbol) -> PcSet {
    let mut set = triad_of(symbol).pitch_classes();
    if let Some(step) = symbol.embellishment.tone_above_root() {
        set.insert(symbol.root().transpose(step));
    }
    set
}

pub fn common_tones(a: &ChordSymbol, b: &ChordSymbol) -> PcSet {
    pitch_class_set(a).intersection(pitch_class_set(b))
}
