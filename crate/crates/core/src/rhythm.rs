//! Harmonic-rhythm clocks.
//!
//! A section is tiled into windows of `window_measures` measures. Each window
//! becomes a clock with one hour per beat (8 hours for two 4/4 measures),
//! hour 0 at the top, and a mark at every chord onset inside the window.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::chart::TimedChord;
use crate::svg::{escape, num, SvgDoc};

pub const DEFAULT_HOURS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClockOnset {
    pub hour: u32,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhythmClock {
    pub hours_per_cycle: u32,
    /// Beats per measure; one hour per beat.
    pub meter: u32,
    /// Sorted by hour, hours distinct.
    pub onsets: Vec<ClockOnset>,
    /// A chord from the previous window is still sounding at hour 0.
    pub held_over: bool,
    /// The window runs past the end of the section.
    pub partial: bool,
}

impl RhythmClock {
    pub fn new(hours_per_cycle: u32, meter: u32, mut onsets: Vec<ClockOnset>) -> Self {
        onsets.sort_by_key(|o| o.hour);
        RhythmClock {
            hours_per_cycle,
            meter,
            onsets,
            held_over: false,
            partial: false,
        }
    }

    pub fn hours(&self) -> Vec<u32> {
        self.onsets.iter().map(|o| o.hour).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.onsets.iter().map(|o| o.label.as_str()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.onsets.is_empty()
    }

    /// Two clocks are the same substructure when hours and labels agree.
    pub fn same_pattern(&self, other: &RhythmClock) -> bool {
        self.hours_per_cycle == other.hours_per_cycle && self.onsets == other.onsets
    }

    /// Gaps between successive onsets, wrapping around the cycle.
    pub fn cyclic_gaps(&self) -> Vec<u32> {
        let hours = self.hours();
        match hours.len() {
            0 => Vec::new(),
            n => (0..n)
                .map(|i| {
                    let next = if i + 1 < n {
                        hours[i + 1]
                    } else {
                        hours[0] + self.hours_per_cycle
                    };
                    next - hours[i]
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RhythmError {
    #[error("{meter} beats x {window_measures} measures does not fill a {hours}-hour clock")]
    WindowMismatch {
        meter: u32,
        window_measures: u32,
        hours: u32,
    },
}

/// Clocks over two-measure 8-hour windows (or `window_measures` windows).
pub fn clocks_for(
    timed: &[TimedChord],
    meter: u32,
    window_measures: u32,
) -> Result<Vec<RhythmClock>, RhythmError> {
    clocks_with_cycle(timed, meter, window_measures, DEFAULT_HOURS)
}

pub fn clocks_with_cycle(
    timed: &[TimedChord],
    meter: u32,
    window_measures: u32,
    hours_per_cycle: u32,
) -> Result<Vec<RhythmClock>, RhythmError> {
    if meter * window_measures != hours_per_cycle || hours_per_cycle == 0 {
        return Err(RhythmError::WindowMismatch {
            meter,
            window_measures,
            hours: hours_per_cycle,
        });
    }
    let total: u32 = timed
        .iter()
        .map(|t| t.onset + t.duration)
        .max()
        .unwrap_or(0);
    let windows = total.div_ceil(hours_per_cycle) as usize;
    let mut clocks: Vec<RhythmClock> = (0..windows)
        .map(|_| RhythmClock::new(hours_per_cycle, meter, Vec::new()))
        .collect();
    for t in timed {
        let w = (t.onset / hours_per_cycle) as usize;
        clocks[w].onsets.push(ClockOnset {
            hour: t.onset % hours_per_cycle,
            label: t.symbol.text.clone(),
        });
    }
    for (w, clock) in clocks.iter_mut().enumerate() {
        let start = w as u32 * hours_per_cycle;
        clock.onsets.sort_by_key(|o| o.hour);
        clock.held_over = clock.onsets.first().map(|o| o.hour) != Some(0)
            && timed
                .iter()
                .any(|t| t.onset < start && t.onset + t.duration > start);
        clock.partial = start + hours_per_cycle > total;
    }
    Ok(clocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RhythmClass {
    WholeNote,
    HalfNote,
    Mixed,
    Continuation,
}

impl RhythmClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RhythmClass::WholeNote => "whole-note",
            RhythmClass::HalfNote => "half-note",
            RhythmClass::Mixed => "mixed",
            RhythmClass::Continuation => "continuation",
        }
    }
}

/// Whole-note when every cyclic gap is one measure, half-note when every gap
/// is half a measure.
pub fn classify_rhythm(clock: &RhythmClock) -> RhythmClass {
    let gaps = clock.cyclic_gaps();
    if gaps.is_empty() {
        return RhythmClass::Continuation;
    }
    let whole = clock.meter;
    if gaps.iter().all(|&g| g == whole) {
        RhythmClass::WholeNote
    } else if whole.is_multiple_of(2) && gaps.iter().all(|&g| g == whole / 2) {
        RhythmClass::HalfNote
    } else {
        RhythmClass::Mixed
    }
}

/// Mirror image through the line joining `axis_hour` and the opposite hour.
pub fn reflect_clock(clock: &RhythmClock, axis_hour: u32) -> RhythmClock {
    let n = clock.hours_per_cycle as i64;
    let onsets = clock
        .onsets
        .iter()
        .map(|o| ClockOnset {
            hour: (2 * axis_hour as i64 - o.hour as i64).rem_euclid(n) as u32,
            label: o.label.clone(),
        })
        .collect();
    RhythmClock {
        held_over: clock.held_over,
        partial: clock.partial,
        ..RhythmClock::new(clock.hours_per_cycle, clock.meter, onsets)
    }
}

/// A stretch of the occurrence sequence alternating between two clocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternation {
    /// Window index where the run begins.
    pub start: usize,
    pub length: usize,
    /// Distinct-clock indices, in the order they first appear in the run.
    pub clocks: (usize, usize),
}

/// Two distinct clocks whose hour sets are mirror images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionPair {
    pub first: usize,
    pub second: usize,
    /// The mirror passes through this hour and the one opposite it.
    pub axis_hour: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstructureReport {
    pub distinct_clocks: Vec<RhythmClock>,
    /// For each window, the index of its clock in `distinct_clocks`.
    pub occurrence_sequence: Vec<usize>,
    pub alternations: Vec<Alternation>,
    pub reflections: Vec<ReflectionPair>,
    pub classifications: Vec<RhythmClass>,
}

pub fn detect_substructures(clocks: &[RhythmClock]) -> SubstructureReport {
    let mut distinct: Vec<RhythmClock> = Vec::new();
    let mut occurrence = Vec::with_capacity(clocks.len());
    for clock in clocks {
        let idx = match distinct.iter().position(|d| d.same_pattern(clock)) {
            Some(i) => i,
            None => {
                distinct.push(clock.clone());
                distinct.len() - 1
            }
        };
        occurrence.push(idx);
    }

    let alternations = find_alternations(&occurrence);

    let mut reflections = Vec::new();
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            let (a, b) = (&distinct[i], &distinct[j]);
            if a.hours_per_cycle != b.hours_per_cycle || a.is_empty() || a.hours() == b.hours() {
                continue;
            }
            // axes h and h + n/2 describe the same mirror
            for axis in 0..a.hours_per_cycle.div_ceil(2) {
                if reflect_clock(a, axis).hours() == b.hours() {
                    reflections.push(ReflectionPair {
                        first: i,
                        second: j,
                        axis_hour: axis,
                    });
                }
            }
        }
    }

    let classifications = distinct.iter().map(classify_rhythm).collect();
    SubstructureReport {
        distinct_clocks: distinct,
        occurrence_sequence: occurrence,
        alternations,
        reflections,
        classifications,
    }
}

/// Maximal runs `a b a b ...` of length at least 3 with `a != b`.
fn find_alternations(seq: &[usize]) -> Vec<Alternation> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i + 2 < seq.len() {
        if seq[i] != seq[i + 1] && seq[i + 2] == seq[i] {
            let mut end = i + 3;
            while end < seq.len() && seq[end] == seq[end - 2] {
                end += 1;
            }
            runs.push(Alternation {
                start: i,
                length: end - i,
                clocks: (seq[i], seq[i + 1]),
            });
            i = end - 1;
        } else {
            i += 1;
        }
    }
    runs
}

const CLOCK_CSS: &str = ".clock-rim{fill:#fff;stroke:#333;stroke-width:2}\
.clock-tick{stroke:#333;stroke-width:1.5}\
.clock-hour{font:10px sans-serif;fill:#777}\
.clock-onset{fill:#d22}\
.clock-shape{fill:none;stroke:#d22;stroke-width:1.5}\
.clock-label{font:bold 16px serif;fill:#111}";

/// Clock face: rim, one tick per hour (hour 0 at the top, clockwise), a dot
/// per onset and the chord label outside the rim.
pub fn render_clock_svg(clock: &RhythmClock) -> String {
    let (cx, cy, r) = (100.0, 100.0, 70.0);
    let n = clock.hours_per_cycle.max(1) as f64;
    let at = |hour: f64, radius: f64| {
        let angle = 2.0 * PI * hour / n;
        (cx + radius * angle.sin(), cy - radius * angle.cos())
    };
    let mut doc = SvgDoc::new(0.0, 0.0, 200.0, 200.0);
    doc.style(CLOCK_CSS);
    doc.push(format!(
        r#"<circle class="clock-rim" cx="{}" cy="{}" r="{}"/>"#,
        num(cx),
        num(cy),
        num(r)
    ));
    for h in 0..clock.hours_per_cycle {
        let (x1, y1) = at(h as f64, r - 8.0);
        let (x2, y2) = at(h as f64, r);
        doc.push(format!(
            r#"<line class="clock-tick" data-hour="{h}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        ));
        let (hx, hy) = at(h as f64, r - 16.0);
        doc.text("clock-hour", hx, hy, &h.to_string());
    }
    if clock.onsets.len() > 1 {
        let pts: Vec<String> = clock
            .onsets
            .iter()
            .map(|o| {
                let (x, y) = at(o.hour as f64, r);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        doc.push(format!(
            r#"<polygon class="clock-shape" points="{}"/>"#,
            pts.join(" ")
        ));
    }
    for o in &clock.onsets {
        let (x, y) = at(o.hour as f64, r);
        doc.push(format!(
            r#"<circle class="clock-onset" data-hour="{}" cx="{}" cy="{}" r="4"/>"#,
            o.hour,
            num(x),
            num(y)
        ));
    }
    for o in &clock.onsets {
        let (x, y) = at(o.hour as f64, r + 16.0);
        doc.push(format!(
            r#"<text class="clock-label" data-hour="{}" x="{}" y="{}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
            o.hour,
            num(x),
            num(y),
            escape(&o.label)
        ));
    }
    doc.finish()
}

/// Counts windows per distinct clock; handy for summaries.
pub fn occurrence_counts(report: &SubstructureReport) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for &i in &report.occurrence_sequence {
        *counts.entry(i).or_insert(0) += 1;
    }
    counts
}
