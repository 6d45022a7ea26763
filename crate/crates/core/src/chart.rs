//! Text chord charts: song form, sections, measures and timed chords.
//!
//! ```text
//! title: In My Life
//! key: A
//! meter: 4/4
//! form: Verse Bridge Verse
//!
//! [Verse]
//! A | E7 | f#:2 A7:2 | D:2 d:2   # a comment
//! ```
//!
//! A `#` opens a comment only at the start of a line or after whitespace, so
//! `f#` is read as a chord. A token without `:beats` takes whatever the rest of
//! its measure leaves. The token `-` (or `-:beats`) ties over: the previous
//! chord keeps sounding with no new onset.

use std::fmt::Write;

use thiserror::Error;

use crate::harmony::{parse_chord_symbol, ChordParseError, ChordSymbol, Key};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("line {line}: measure {measure} has {actual} beats, meter needs {expected}")]
    MeterMismatch {
        line: usize,
        /// 0-based measure index within its section.
        measure: usize,
        expected: u32,
        actual: u32,
    },
    #[error("form names section '{0}' which is not defined")]
    UnknownSectionInForm(String),
    #[error("line {line}, column {column}: {source}")]
    ChordParseError {
        line: usize,
        column: usize,
        source: ChordParseError,
    },
    #[error("line {line}: section '{name}' is defined twice")]
    DuplicateSection { line: usize, name: String },
    #[error("missing header '{0}'")]
    MissingHeader(&'static str),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordEvent {
    pub symbol: ChordSymbol,
    /// Quarter-note beats, at least 1.
    pub duration: u32,
    /// Continuation of the previous event rather than a new attack.
    pub tied: bool,
}

pub type Measure = Vec<ChordEvent>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub measures: Vec<Measure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedChord {
    pub symbol: ChordSymbol,
    /// Beat index from the start of the section.
    pub onset: u32,
    pub duration: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartDocument {
    pub title: String,
    pub key: Key,
    /// Beats per measure.
    pub meter: u32,
    pub form: Vec<String>,
    /// Sections in file order.
    pub sections: Vec<Section>,
}

impl ChartDocument {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

/// Onsets are running sums of durations. Repeated chords are kept; tied
/// events lengthen the chord they continue.
pub fn flatten(section: &Section) -> Vec<TimedChord> {
    let mut onset = 0;
    let mut out: Vec<TimedChord> = Vec::new();
    for event in section.measures.iter().flatten() {
        if let (true, Some(last)) = (event.tied, out.last_mut()) {
            last.duration += event.duration;
            onset += event.duration;
            continue;
        }
        out.push(TimedChord {
            symbol: event.symbol.clone(),
            onset,
            duration: event.duration,
        });
        onset += event.duration;
    }
    out
}

/// Chord sequence with consecutive identical symbols merged.
pub fn progression(section: &Section) -> Vec<ChordSymbol> {
    let mut out: Vec<ChordSymbol> = Vec::new();
    for event in section.measures.iter().flatten() {
        if out.last() != Some(&event.symbol) {
            out.push(event.symbol.clone());
        }
    }
    out
}

fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = c.is_whitespace();
    }
    line
}

fn parse_key(value: &str, line: usize) -> Result<Key, ChartError> {
    let sym = parse_chord_symbol(value).map_err(|source| ChartError::ChordParseError {
        line,
        column: 1,
        source,
    })?;
    Ok(Key::major(sym.root()))
}

fn parse_meter(value: &str, line: usize) -> Result<u32, ChartError> {
    let numerator = value.split('/').next().unwrap_or("").trim();
    match numerator.parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(ChartError::Syntax {
            line,
            message: format!("bad meter '{value}'"),
        }),
    }
}

fn parse_measure(
    text: &str,
    line: usize,
    column_base: usize,
    meter: u32,
    measure_index: usize,
    previous: Option<&ChordSymbol>,
) -> Result<Measure, ChartError> {
    let mut tokens: Vec<(ChordSymbol, Option<u32>, bool)> = Vec::new();
    let mut offset = 0;
    for raw in text.split_whitespace() {
        let start = text[offset..]
            .find(raw)
            .map(|p| p + offset)
            .unwrap_or(offset);
        offset = start + raw.len();
        let column = column_base + text[..start].chars().count();
        let (chord, beats) = match raw.rsplit_once(':') {
            Some((c, b)) => {
                let beats = b.parse::<u32>().ok().filter(|&n| n >= 1).ok_or_else(|| {
                    ChartError::Syntax {
                        line,
                        message: format!("bad duration in '{raw}'"),
                    }
                })?;
                (c, Some(beats))
            }
            None => (raw, None),
        };
        if chord == "-" {
            let held = tokens
                .last()
                .map(|(s, _, _)| s)
                .or(previous)
                .cloned()
                .ok_or_else(|| ChartError::Syntax {
                    line,
                    message: "tie '-' with no chord to continue".to_string(),
                })?;
            tokens.push((held, beats, true));
            continue;
        }
        let symbol = parse_chord_symbol(chord).map_err(|source| ChartError::ChordParseError {
            line,
            column,
            source,
        })?;
        tokens.push((symbol, beats, false));
    }
    let explicit: u32 = tokens.iter().filter_map(|(_, b, _)| *b).sum();
    let open = tokens.iter().filter(|(_, b, _)| b.is_none()).count();
    let mismatch = |actual| ChartError::MeterMismatch {
        line,
        measure: measure_index,
        expected: meter,
        actual,
    };
    let fill = match open {
        0 => 0,
        1 if explicit < meter => meter - explicit,
        _ => return Err(mismatch(explicit)),
    };
    let measure: Measure = tokens
        .into_iter()
        .map(|(symbol, beats, tied)| ChordEvent {
            symbol,
            duration: beats.unwrap_or(fill),
            tied,
        })
        .collect();
    let total: u32 = measure.iter().map(|e| e.duration).sum();
    if total != meter {
        return Err(mismatch(total));
    }
    Ok(measure)
}

pub fn parse_chart(text: &str) -> Result<ChartDocument, ChartError> {
    let mut title = None;
    let mut key = None;
    let mut meter = None;
    let mut form: Option<Vec<String>> = None;
    let mut sections: Vec<Section> = Vec::new();
    let mut current: Option<Section> = None;
    // Bodies are parsed after the headers are known.
    let mut bodies: Vec<(usize, String, usize)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .map(str::trim)
                .ok_or_else(|| ChartError::Syntax {
                    line: line_no,
                    message: format!("unterminated section header '{trimmed}'"),
                })?;
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(ChartError::Syntax {
                    line: line_no,
                    message: format!("bad section name '{name}'"),
                });
            }
            if let Some(done) = current.take() {
                sections.push(done);
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(ChartError::DuplicateSection {
                    line: line_no,
                    name: name.to_string(),
                });
            }
            current = Some(Section {
                name: name.to_string(),
                measures: Vec::new(),
            });
            continue;
        }
        if current.is_none() {
            let (field, value) = trimmed.split_once(':').ok_or_else(|| ChartError::Syntax {
                line: line_no,
                message: format!("expected 'field: value' header, got '{trimmed}'"),
            })?;
            let value = value.trim();
            match field.trim() {
                "title" => title = Some(value.to_string()),
                "key" => key = Some(parse_key(value, line_no)?),
                "meter" => meter = Some(parse_meter(value, line_no)?),
                "form" => form = Some(value.split_whitespace().map(String::from).collect()),
                other => {
                    return Err(ChartError::Syntax {
                        line: line_no,
                        message: format!("unknown header '{other}'"),
                    })
                }
            }
            continue;
        }
        bodies.push((line_no, line.to_string(), sections.len()));
    }
    if let Some(done) = current.take() {
        sections.push(done);
    }

    let meter = meter.ok_or(ChartError::MissingHeader("meter"))?;
    let key = key.ok_or(ChartError::MissingHeader("key"))?;
    let form = form.ok_or(ChartError::MissingHeader("form"))?;

    for (line_no, body, section_index) in bodies {
        let mut column = 1;
        for piece in body.split('|') {
            if !piece.trim().is_empty() {
                let measures = &mut sections[section_index].measures;
                let previous = measures.last().and_then(|m| m.last()).map(|e| &e.symbol);
                let measure =
                    parse_measure(piece, line_no, column, meter, measures.len(), previous)?;
                measures.push(measure);
            }
            column += piece.chars().count() + 1;
        }
    }

    for name in &form {
        if !sections.iter().any(|s| &s.name == name) {
            return Err(ChartError::UnknownSectionInForm(name.clone()));
        }
    }

    Ok(ChartDocument {
        title: title.unwrap_or_default(),
        key,
        meter,
        form,
        sections,
    })
}

/// Writes a chart in the canonical layout read by [`parse_chart`].
pub fn serialize_chart(doc: &ChartDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "title: {}", doc.title);
    let _ = writeln!(out, "key: {}", doc.key.tonic.name());
    let _ = writeln!(out, "meter: {}/4", doc.meter);
    let _ = writeln!(out, "form: {}", doc.form.join(" "));
    for section in &doc.sections {
        let _ = writeln!(out, "\n[{}]", section.name);
        for line in section.measures.chunks(4) {
            let measures: Vec<String> = line
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|e| {
                            let token = if e.tied { "-" } else { e.symbol.text.as_str() };
                            format!("{token}:{}", e.duration)
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            let _ = writeln!(out, "{}", measures.join(" | "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "title: t\nkey: A\nmeter: 4/4\nform: S\n";

    fn chart(body: &str) -> Result<ChartDocument, ChartError> {
        parse_chart(&format!("{HEADER}[S]\n{body}\n"))
    }

    fn durations(m: &Measure) -> Vec<u32> {
        m.iter().map(|e| e.duration).collect()
    }

    #[test]
    fn form_header() {
        let doc = parse_chart(
            "key: A\nmeter: 4/4\nform: Verse Bridge Verse Bridge Interlude Bridge Coda\n\
             [Verse]\nA\n[Bridge]\nA\n[Interlude]\nA\n[Coda]\nA\n",
        )
        .unwrap();
        assert_eq!(doc.form.len(), 7);
        assert_eq!(doc.sections.len(), 4);
    }

    #[test]
    fn half_note_measure() {
        let doc = chart("f#:2 A7:2").unwrap();
        let m = &doc.sections[0].measures[0];
        assert_eq!(durations(m), vec![2, 2]);
        assert_eq!(m[0].symbol.text, "f#");
    }

    #[test]
    fn bare_token_fills_the_measure() {
        let doc = chart("A | D:2 d").unwrap();
        assert_eq!(durations(&doc.sections[0].measures[0]), vec![4]);
        assert_eq!(durations(&doc.sections[0].measures[1]), vec![2, 2]);
    }

    #[test]
    fn meter_mismatch() {
        assert!(matches!(
            chart("A:3"),
            Err(ChartError::MeterMismatch {
                measure: 0,
                actual: 3,
                ..
            })
        ));
        assert!(matches!(
            chart("A | A:2 E:4"),
            Err(ChartError::MeterMismatch {
                measure: 1,
                actual: 6,
                ..
            })
        ));
        assert!(matches!(
            chart("A B"),
            Err(ChartError::MeterMismatch { .. })
        ));
    }

    #[test]
    fn unknown_and_duplicate_sections() {
        assert_eq!(
            parse_chart("key: A\nmeter: 4\nform: S T\n[S]\nA\n"),
            Err(ChartError::UnknownSectionInForm("T".into()))
        );
        assert!(matches!(
            parse_chart("key: A\nmeter: 4\nform: S\n[S]\nA\n[S]\nE\n"),
            Err(ChartError::DuplicateSection { line: 6, .. })
        ));
    }

    #[test]
    fn chord_error_position() {
        let err = chart("A | E7 | H").unwrap_err();
        match err {
            ChartError::ChordParseError {
                line,
                column,
                source,
            } => {
                assert_eq!(line, 6);
                assert_eq!(column, 10);
                assert_eq!(source, ChordParseError::UnknownRootLetter('H'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_and_sharps() {
        let doc = chart("f#:2 A7:2 # trailing comment\n# whole-line comment\n| C# |").unwrap();
        assert_eq!(doc.sections[0].measures.len(), 2);
        assert_eq!(doc.sections[0].measures[1][0].symbol.text, "C#");
    }

    #[test]
    fn missing_headers() {
        assert_eq!(
            parse_chart("key: A\nform: S\n[S]\nA\n"),
            Err(ChartError::MissingHeader("meter"))
        );
    }

    #[test]
    fn flatten_onsets() {
        let doc = chart("A | E7").unwrap();
        let onsets: Vec<u32> = flatten(&doc.sections[0]).iter().map(|t| t.onset).collect();
        assert_eq!(onsets, vec![0, 4]);
        let doc = chart("D:2 d:2 | A").unwrap();
        let timed: Vec<(String, u32, u32)> = flatten(&doc.sections[0])
            .into_iter()
            .map(|t| (t.symbol.text, t.onset, t.duration))
            .collect();
        assert_eq!(
            timed,
            vec![("D".into(), 0, 2), ("d".into(), 2, 2), ("A".into(), 4, 4)]
        );
    }

    #[test]
    fn ties_extend_the_previous_chord() {
        let doc = chart("D:2 d:2 | A | - E:2 | f#").unwrap();
        let s = &doc.sections[0];
        assert!(s.measures[2][0].tied);
        assert_eq!(s.measures[2][0].symbol.text, "A");
        let timed: Vec<(String, u32, u32)> = flatten(s)
            .into_iter()
            .map(|t| (t.symbol.text, t.onset, t.duration))
            .collect();
        assert_eq!(
            timed,
            vec![
                ("D".into(), 0, 2),
                ("d".into(), 2, 2),
                ("A".into(), 4, 6),
                ("E".into(), 10, 2),
                ("f#".into(), 12, 4)
            ]
        );
        assert_eq!(progression(s).len(), 5);
        assert!(matches!(chart("- | A"), Err(ChartError::Syntax { .. })));
    }

    #[test]
    fn empty_section() {
        let doc = parse_chart("key: A\nmeter: 4\nform: S\n[S]\n").unwrap();
        assert!(flatten(&doc.sections[0]).is_empty());
        assert!(progression(&doc.sections[0]).is_empty());
    }

    #[test]
    fn progression_collapses_held_chords() {
        let doc = chart("A | A").unwrap();
        let p = progression(&doc.sections[0]);
        assert_eq!(p.len(), 1);
        assert_eq!(flatten(&doc.sections[0]).len(), 2);
    }
}
