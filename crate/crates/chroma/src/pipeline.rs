use crate::audio::AudioBuffer;
use crate::chords::{chroma_fold, match_chords, ChordSegment, ChromaFrame, MatchConfig};
use crate::dictionary::{NoteDictionary, DEFAULT_DECAY, DEFAULT_HARMONICS};
use crate::error::Result;
use crate::logfreq::{LogFreqFrame, LogFreqMap};
use crate::nnls::{NnlsConfig, NnlsSolver};
use crate::stft::{stft, Spectrogram, StftConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordIdConfig {
    pub stft: StftConfig,
    pub harmonics: usize,
    pub decay: f64,
    pub nnls: NnlsConfig,
    pub matching: MatchConfig,
}

impl Default for ChordIdConfig {
    fn default() -> Self {
        Self {
            stft: StftConfig::default(),
            harmonics: DEFAULT_HARMONICS,
            decay: DEFAULT_DECAY,
            nnls: NnlsConfig::default(),
            matching: MatchConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChordIdOutput {
    pub spectrogram: Spectrogram,
    pub log_frames: Vec<LogFreqFrame>,
    pub chroma: Vec<ChromaFrame>,
    pub segments: Vec<ChordSegment>,
}

/// Frame edges: 0, midpoints between frame centres, end of audio.
pub fn frame_boundaries(spec: &Spectrogram, duration: f64) -> Vec<f64> {
    let n = spec.frames.len();
    let mut b = Vec::with_capacity(n + 1);
    b.push(0.0);
    for i in 1..n {
        b.push(0.5 * (spec.frame_center(i - 1) + spec.frame_center(i)));
    }
    b.push(duration);
    b
}

pub fn identify_chords(audio: &AudioBuffer, cfg: &ChordIdConfig) -> Result<ChordIdOutput> {
    let spectrogram = stft(audio, &cfg.stft)?;
    let map = LogFreqMap::new(spectrogram.sample_rate, spectrogram.window_size);
    let dict = NoteDictionary::new(cfg.harmonics, cfg.decay);
    let solver = NnlsSolver::new(&dict, cfg.nnls);
    let log_frames: Vec<LogFreqFrame> = spectrogram.frames.iter().map(|f| map.apply(f)).collect();
    let chroma: Vec<ChromaFrame> = log_frames
        .iter()
        .map(|f| chroma_fold(&solver.solve(f).activations))
        .collect();
    let boundaries = frame_boundaries(&spectrogram, audio.duration());
    let segments = match_chords(&chroma, &boundaries, &cfg.matching);
    Ok(ChordIdOutput {
        spectrogram,
        log_frames,
        chroma,
        segments,
    })
}
