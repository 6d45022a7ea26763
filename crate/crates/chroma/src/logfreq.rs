//! Semitone-resolution log-frequency mapping.

use crate::stft::Spectrogram;

pub const LOWEST_NOTE: u8 = 24;
pub const HIGHEST_NOTE: u8 = 96;
pub const NOTE_BINS: usize = (HIGHEST_NOTE - LOWEST_NOTE + 1) as usize;

/// Salience per MIDI note 24..=96.
pub type LogFreqFrame = Vec<f64>;

pub fn midi_frequency(note: f64) -> f64 {
    440.0 * 2f64.powf((note - 69.0) / 12.0)
}

pub fn frequency_to_midi(freq: f64) -> f64 {
    69.0 + 12.0 * (freq / 440.0).log2()
}

pub fn note_of_bin(bin: usize) -> u8 {
    LOWEST_NOTE + bin as u8
}

/// Sparse triangular filterbank from FFT bins to note bins.
#[derive(Debug, Clone)]
pub struct LogFreqMap {
    /// For each note bin, the (fft bin, weight) pairs feeding it.
    pub filters: Vec<Vec<(usize, f64)>>,
}

impl LogFreqMap {
    pub fn new(sample_rate: u32, window: usize) -> Self {
        let fft_bins = window / 2 + 1;
        let hz_per_bin = sample_rate as f64 / window as f64;
        let filters = (0..NOTE_BINS)
            .map(|n| {
                let centre = (LOWEST_NOTE as usize + n) as f64;
                let lo = (midi_frequency(centre - 1.0) / hz_per_bin).floor() as usize;
                let hi =
                    ((midi_frequency(centre + 1.0) / hz_per_bin).ceil() as usize).min(fft_bins - 1);
                (lo.max(1)..=hi)
                    .filter_map(|k| {
                        let d = frequency_to_midi(k as f64 * hz_per_bin) - centre;
                        let w = 1.0 - d.abs();
                        (w > 0.0).then_some((k, w))
                    })
                    .collect()
            })
            .collect();
        Self { filters }
    }

    pub fn apply(&self, magnitudes: &[f64]) -> LogFreqFrame {
        self.filters
            .iter()
            .map(|f| f.iter().map(|&(k, w)| w * magnitudes[k]).sum())
            .collect()
    }
}

pub fn log_freq_map(spec: &Spectrogram) -> Vec<LogFreqFrame> {
    let map = LogFreqMap::new(spec.sample_rate, spec.window_size);
    spec.frames.iter().map(|f| map.apply(f)).collect()
}
