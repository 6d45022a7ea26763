//! Commands behind the `tonnetz` binary. Each returns a typed error that maps
//! to an exit code, so the commands can also be driven from tests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use tonnetz_chroma::{
    identify_chords, load_wav, render_spectrogram_ppm, write_jsonl, ChordIdConfig, ChromaError,
};
use tonnetz_core::chart::{flatten, parse_chart, progression, ChartDocument, ChartError, Section};
use tonnetz_core::harmony::{parse_chord_symbol, Key};
use tonnetz_core::lattice::{embed_path, render_tonnetz_svg, RenderError, TonnetzRenderOptions};
use tonnetz_core::rhythm::{
    classify_rhythm, clocks_with_cycle, detect_substructures, render_clock_svg, RhythmClock,
    RhythmError,
};
use tonnetz_core::transform::{annotate_progression, ProgressionAnnotation};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Chart { path: PathBuf, source: ChartError },
    #[error("unknown section '{name}' (available: {available})")]
    UnknownSection { name: String, available: String },
    #[error("invalid key '{0}'")]
    BadKey(String),
    #[error("section '{section}': {source}")]
    Rhythm {
        section: String,
        source: RhythmError,
    },
    #[error("section '{section}': {source}")]
    Render {
        section: String,
        source: RenderError,
    },
    #[error("{path}: {source}")]
    Audio { path: PathBuf, source: ChromaError },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 1 reserved for analysis findings, 2 input or usage errors.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_chart(path: &Path) -> Result<ChartDocument> {
    parse_chart(&read(path)?).map_err(|source| CliError::Chart {
        path: path.to_owned(),
        source,
    })
}

pub fn parse_key(text: &str) -> Result<Key> {
    let tonic = text
        .trim()
        .trim_end_matches("major")
        .trim_end_matches("maj")
        .trim();
    let sym = parse_chord_symbol(tonic).map_err(|_| CliError::BadKey(text.to_string()))?;
    if sym.bass.is_some()
        || tonic.chars().any(|c| c.is_ascii_digit())
        || tonic.starts_with(char::is_lowercase)
    {
        return Err(CliError::BadKey(text.to_string()));
    }
    Ok(Key::major(sym.root()))
}

fn find_section<'a>(doc: &'a ChartDocument, name: &str) -> Result<&'a Section> {
    doc.section(name).ok_or_else(|| CliError::UnknownSection {
        name: name.to_string(),
        available: doc
            .sections
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(", "),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnalysisReport {
    pub version: u32,
    pub title: String,
    pub key: String,
    pub meter: u32,
    pub form: Vec<String>,
    pub sections: Vec<SectionReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SectionReport {
    pub name: String,
    pub progression: Vec<String>,
    pub triads: Vec<String>,
    pub moves: Vec<MoveReport>,
    pub roman: Vec<String>,
    pub cadences: Vec<CadenceReport>,
    pub clocks: Vec<ClockReport>,
    pub substructures: SubstructureSummary,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MoveReport {
    pub from: String,
    pub to: String,
    pub arity: u8,
    pub kind: &'static str,
    pub nr: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CadenceReport {
    pub kind: &'static str,
    /// Index of the first chord of the cadence in `progression`.
    pub position: usize,
    pub roman: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ClockReport {
    pub hours: Vec<u32>,
    pub labels: Vec<String>,
    pub class: &'static str,
    pub held_over: bool,
    pub partial: bool,
}

impl ClockReport {
    fn new(c: &RhythmClock) -> Self {
        ClockReport {
            hours: c.hours(),
            labels: c.labels().into_iter().map(String::from).collect(),
            class: classify_rhythm(c).as_str(),
            held_over: c.held_over,
            partial: c.partial,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SubstructureSummary {
    pub distinct: Vec<ClockReport>,
    pub occurrence_sequence: Vec<usize>,
    pub classifications: Vec<&'static str>,
    pub alternations: Vec<AlternationReport>,
    pub reflections: Vec<ReflectionReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AlternationReport {
    pub start: usize,
    pub length: usize,
    pub clocks: [usize; 2],
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReflectionReport {
    pub first: usize,
    pub second: usize,
    pub axis: [u32; 2],
}

fn annotate_section(section: &Section, key: &Key) -> Option<ProgressionAnnotation> {
    let chords = progression(section);
    match chords.len() {
        0 => None,
        1 => Some(ProgressionAnnotation::single(chords[0].clone(), *key)),
        _ => annotate_progression(&chords, key).ok(),
    }
}

pub fn analyze_section(section: &Section, key: &Key, meter: u32) -> Result<SectionReport> {
    let ann = annotate_section(section, key);
    let clocks = section_clocks(section, meter)?;
    let sub = detect_substructures(&clocks);

    let mut progression = Vec::new();
    let mut triads = Vec::new();
    let mut moves = Vec::new();
    let mut roman: Vec<String> = Vec::new();
    let mut cadences = Vec::new();
    if let Some(a) = &ann {
        progression = a.chords.iter().map(|c| c.text.clone()).collect();
        triads = a.chords.iter().map(|c| c.triad().to_string()).collect();
        moves = a
            .moves
            .iter()
            .map(|m| MoveReport {
                from: m.from.to_string(),
                to: m.to.to_string(),
                arity: m.arity,
                kind: m.kind.as_str(),
                nr: m.nr_name.map(|op| op.name()),
            })
            .collect();
        roman = a.roman.iter().map(|r| r.to_string()).collect();
        cadences = a
            .cadences
            .iter()
            .map(|c| CadenceReport {
                kind: c.kind.as_str(),
                position: c.position,
                roman: a.roman[c.position..c.position + c.kind.chord_count()]
                    .iter()
                    .map(|r| r.to_string())
                    .collect(),
            })
            .collect();
    }

    let mut notes = Vec::new();
    if roman.iter().any(|r| r == "bVII") {
        notes.push("bVII is sometimes written VII, reading the passage as Mixolydian".to_string());
    }

    Ok(SectionReport {
        name: section.name.clone(),
        progression,
        triads,
        moves,
        roman,
        cadences,
        clocks: clocks.iter().map(ClockReport::new).collect(),
        substructures: SubstructureSummary {
            distinct: sub.distinct_clocks.iter().map(ClockReport::new).collect(),
            occurrence_sequence: sub.occurrence_sequence.clone(),
            classifications: sub.classifications.iter().map(|c| c.as_str()).collect(),
            alternations: sub
                .alternations
                .iter()
                .map(|a| AlternationReport {
                    start: a.start,
                    length: a.length,
                    clocks: [a.clocks.0, a.clocks.1],
                })
                .collect(),
            reflections: sub
                .reflections
                .iter()
                .map(|r| ReflectionReport {
                    first: r.first,
                    second: r.second,
                    axis: [r.axis_hour, r.axis_hour + clocks[0].hours_per_cycle / 2],
                })
                .collect(),
        },
        notes,
    })
}

/// Two-measure clocks, one hour per beat: 8 hours in 4/4, 6 in 3/4.
pub fn section_clocks(section: &Section, meter: u32) -> Result<Vec<RhythmClock>> {
    clocks_with_cycle(&flatten(section), meter, 2, 2 * meter).map_err(|source| CliError::Rhythm {
        section: section.name.clone(),
        source,
    })
}

pub fn analyze(doc: &ChartDocument, key_override: Option<Key>) -> Result<AnalysisReport> {
    let key = key_override.unwrap_or(doc.key);
    let sections = doc
        .sections
        .iter()
        .map(|s| analyze_section(s, &key, doc.meter))
        .collect::<Result<_>>()?;
    Ok(AnalysisReport {
        version: REPORT_VERSION,
        title: doc.title.clone(),
        key: key.to_string(),
        meter: doc.meter,
        form: doc.form.clone(),
        sections,
    })
}

pub fn report_json(report: &AnalysisReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes the report to `out`, or returns it for stdout.
pub fn cmd_analyze(chart: &Path, key: Option<&str>, out: Option<&Path>) -> Result<String> {
    let doc = load_chart(chart)?;
    let key = key.map(parse_key).transpose()?;
    let json = report_json(&analyze(&doc, key)?)?;
    if let Some(out) = out {
        write(out, json.as_bytes())?;
    }
    Ok(json)
}

pub fn tonnetz_svg(doc: &ChartDocument, section: &str) -> Result<String> {
    let sec = find_section(doc, section)?;
    let render_err = |source| CliError::Render {
        section: section.to_string(),
        source,
    };
    let ann = annotate_section(sec, &doc.key).ok_or(render_err(RenderError::EmptyEmbedding))?;
    let embedding = embed_path(&ann, doc.key.tonic);
    let opts = TonnetzRenderOptions {
        title: Some(format!("{}: {}", doc.title, sec.name)),
        ..Default::default()
    };
    render_tonnetz_svg(&embedding, &opts).map_err(render_err)
}

pub fn cmd_render_tonnetz(chart: &Path, section: &str, out: &Path) -> Result<()> {
    let doc = load_chart(chart)?;
    write(out, tonnetz_svg(&doc, section)?.as_bytes())
}

/// One SVG per distinct clock, named `clock-1.svg` onwards.
pub fn cmd_render_clocks(chart: &Path, section: &str, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let doc = load_chart(chart)?;
    let sec = find_section(&doc, section)?;
    let clocks = section_clocks(sec, doc.meter)?;
    let report = detect_substructures(&clocks);
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_owned(),
        source,
    })?;
    let mut paths = Vec::new();
    for (i, clock) in report.distinct_clocks.iter().enumerate() {
        let path = out_dir.join(format!("clock-{}.svg", i + 1));
        write(&path, render_clock_svg(clock).as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}

/// Returns the JSON lines; writes them to `out` when given.
pub fn cmd_chord_id(
    wav: &Path,
    out: Option<&Path>,
    spectrogram: Option<&Path>,
    cfg: &ChordIdConfig,
) -> Result<String> {
    let audio_err = |source| CliError::Audio {
        path: wav.to_owned(),
        source,
    };
    let audio = load_wav(wav).map_err(audio_err)?;
    let result = identify_chords(&audio, cfg).map_err(audio_err)?;
    let mut lines = Vec::new();
    write_jsonl(&mut lines, &result.segments).expect("writing to a Vec cannot fail");
    if let Some(out) = out {
        write(out, &lines)?;
    }
    if let Some(ppm) = spectrogram {
        write(ppm, &render_spectrogram_ppm(&result.spectrogram))?;
    }
    Ok(String::from_utf8(lines).expect("segment labels are ASCII"))
}
