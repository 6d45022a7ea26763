//! Deterministic harmonic test signals.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audio::AudioBuffer;
use crate::logfreq::midi_frequency;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneSpec {
    pub harmonics: usize,
    pub decay: f64,
    pub sample_rate: u32,
    /// Peak amplitude of the rendered buffer.
    pub peak: f64,
}

impl Default for ToneSpec {
    fn default() -> Self {
        Self {
            harmonics: 6,
            decay: 0.8,
            sample_rate: 22050,
            peak: 0.8,
        }
    }
}

fn render_notes(notes: &[u8], seconds: f64, spec: &ToneSpec) -> Vec<f64> {
    let n = (seconds * spec.sample_rate as f64).round() as usize;
    let nyquist = spec.sample_rate as f64 / 2.0;
    let mut out = vec![0.0; n];
    for &note in notes {
        let f0 = midi_frequency(note as f64);
        for k in 1..=spec.harmonics {
            let f = f0 * k as f64;
            if f >= nyquist {
                break;
            }
            let amp = spec.decay.powi(k as i32 - 1);
            let w = 2.0 * PI * f / spec.sample_rate as f64;
            for (i, s) in out.iter_mut().enumerate() {
                *s += amp * (w * i as f64).sin();
            }
        }
    }
    out
}

/// Consecutive chords, each held for `seconds`, normalized to `spec.peak`.
pub fn synth_sequence(chords: &[Vec<u8>], seconds: f64, spec: &ToneSpec) -> AudioBuffer {
    let mut samples: Vec<f64> = chords
        .iter()
        .flat_map(|notes| render_notes(notes, seconds, spec))
        .collect();
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        samples.iter_mut().for_each(|s| *s *= spec.peak / peak);
    }
    AudioBuffer::new(samples, spec.sample_rate)
}

pub fn synth_chord(notes: &[u8], seconds: f64, spec: &ToneSpec) -> AudioBuffer {
    synth_sequence(&[notes.to_vec()], seconds, spec)
}

/// Adds uniform white noise at the given signal-to-noise ratio.
pub fn add_noise(audio: &AudioBuffer, snr_db: f64, seed: u64) -> AudioBuffer {
    let power = audio.samples.iter().map(|s| s * s).sum::<f64>() / audio.len().max(1) as f64;
    // uniform on [-h, h] has variance h^2 / 3
    let h = (3.0 * power / 10f64.powf(snr_db / 10.0)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = audio
        .samples
        .iter()
        .map(|s| s + if h > 0.0 { rng.gen_range(-h..=h) } else { 0.0 })
        .collect();
    AudioBuffer::new(samples, audio.sample_rate)
}
