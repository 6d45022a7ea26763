//! Chroma folding and template matching.

use std::fmt;
use std::io::Write;

use tonnetz_core::harmony::{PitchClass, Triad};

use crate::logfreq::LOWEST_NOTE;

pub type ChromaFrame = [f64; 12];

/// Sums activations of every MIDI note sharing a pitch class.
pub fn chroma_fold(activations: &[f64]) -> ChromaFrame {
    let mut c = [0.0; 12];
    for (i, &a) in activations.iter().enumerate() {
        c[(LOWEST_NOTE as usize + i) % 12] += a;
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChordLabel {
    Triad(Triad),
    NoChord,
}

impl fmt::Display for ChordLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChordLabel::Triad(t) => write!(f, "{t}"),
            ChordLabel::NoChord => f.write_str("N"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChordSegment {
    pub label: ChordLabel,
    pub start_s: f64,
    pub end_s: f64,
}

impl ChordSegment {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"label\":\"{}\",\"start_s\":{:.3},\"end_s\":{:.3}}}",
            self.label, self.start_s, self.end_s
        )
    }
}

pub fn write_jsonl<W: Write>(mut out: W, segments: &[ChordSegment]) -> std::io::Result<()> {
    for s in segments {
        writeln!(out, "{}", s.to_json())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchConfig {
    /// Frames below this fraction of the loudest frame's chroma energy become "N".
    pub energy_threshold: f64,
    /// Majority-filter length in frames; 1 disables smoothing.
    pub smoothing: usize,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            energy_threshold: 1e-4,
            smoothing: 5,
        }
    }
}

fn template(t: Triad) -> ChromaFrame {
    let mut v = [0.0; 12];
    for pc in t.pitch_classes().iter() {
        v[pc.value() as usize] = 1.0;
    }
    v
}

fn cosine(a: &ChromaFrame, b: &ChromaFrame) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Best triad by cosine similarity; ties go to the earlier triad (majors first, by root).
pub fn best_triad(chroma: &ChromaFrame) -> (Triad, f64) {
    let mut best = (
        Triad::new(PitchClass::C, tonnetz_core::Quality::Major),
        f64::NEG_INFINITY,
    );
    for t in Triad::all() {
        let s = cosine(chroma, &template(t));
        if s > best.1 {
            best = (t, s);
        }
    }
    best
}

pub fn frame_labels(chroma: &[ChromaFrame], energy_threshold: f64) -> Vec<ChordLabel> {
    let energy: Vec<f64> = chroma.iter().map(|c| c.iter().sum()).collect();
    let max = energy.iter().cloned().fold(0.0, f64::max);
    chroma
        .iter()
        .zip(&energy)
        .map(|(c, &e)| {
            if max == 0.0 || e < energy_threshold * max {
                ChordLabel::NoChord
            } else {
                ChordLabel::Triad(best_triad(c).0)
            }
        })
        .collect()
}

/// Centred majority vote over `width` frames; the centre label wins ties.
pub fn majority_smooth(labels: &[ChordLabel], width: usize) -> Vec<ChordLabel> {
    if width <= 1 {
        return labels.to_vec();
    }
    let half = width / 2;
    (0..labels.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(labels.len());
            let window = &labels[lo..hi];
            let count = |l: &ChordLabel| window.iter().filter(|x| *x == l).count();
            let mut best = labels[i];
            let mut best_count = count(&best);
            for l in window {
                let c = count(l);
                if c > best_count {
                    best = *l;
                    best_count = c;
                }
            }
            best
        })
        .collect()
}

/// `boundaries` holds one more entry than `chroma`: frame `i` spans
/// `boundaries[i]..boundaries[i + 1]`.
pub fn match_chords(
    chroma: &[ChromaFrame],
    boundaries: &[f64],
    cfg: &MatchConfig,
) -> Vec<ChordSegment> {
    assert_eq!(
        boundaries.len(),
        chroma.len() + 1,
        "need one boundary per frame edge"
    );
    let labels = majority_smooth(&frame_labels(chroma, cfg.energy_threshold), cfg.smoothing);
    let mut segments: Vec<ChordSegment> = Vec::new();
    for (i, label) in labels.into_iter().enumerate() {
        match segments.last_mut() {
            Some(last) if last.label == label => last.end_s = boundaries[i + 1],
            _ => segments.push(ChordSegment {
                label,
                start_s: boundaries[i],
                end_s: boundaries[i + 1],
            }),
        }
    }
    segments
}
