//! Short-time Fourier magnitudes.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::AudioBuffer;
use crate::error::{ChromaError, Result};

pub const DEFAULT_WINDOW: usize = 4096;
pub const DEFAULT_HOP: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StftConfig {
    pub window: usize,
    pub hop: usize,
    /// First-order pre-emphasis `y[n] = x[n] - c*x[n-1]`; 0 disables it.
    pub pre_emphasis: f64,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            hop: DEFAULT_HOP,
            pre_emphasis: 0.0,
        }
    }
}

/// `frames[f][b]`, with `window / 2 + 1` bins per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub frames: Vec<Vec<f64>>,
    pub frame_hop: usize,
    pub window_size: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn bins(&self) -> usize {
        self.window_size / 2 + 1
    }

    pub fn bin_frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.sample_rate as f64 / self.window_size as f64
    }

    /// Centre of frame `f` in seconds.
    pub fn frame_center(&self, f: usize) -> f64 {
        (f * self.frame_hop + self.window_size / 2) as f64 / self.sample_rate as f64
    }
}

/// Periodic Hann window.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

pub fn frame_count(len: usize, window: usize, hop: usize) -> usize {
    if len < window {
        0
    } else {
        (len - window) / hop + 1
    }
}

/// Magnitudes are scaled so a sinusoid of amplitude `a` at a bin centre peaks at `a`.
pub fn stft(audio: &AudioBuffer, cfg: &StftConfig) -> Result<Spectrogram> {
    if cfg.window < 2 || cfg.hop == 0 {
        return Err(ChromaError::InvalidParameter(format!(
            "window {} / hop {}",
            cfg.window, cfg.hop
        )));
    }
    if audio.len() < cfg.window {
        return Err(ChromaError::TooShort {
            len: audio.len(),
            window: cfg.window,
        });
    }
    let signal: Vec<f64> = if cfg.pre_emphasis != 0.0 {
        let x = &audio.samples;
        (0..x.len())
            .map(|i| {
                x[i] - if i > 0 {
                    cfg.pre_emphasis * x[i - 1]
                } else {
                    0.0
                }
            })
            .collect()
    } else {
        audio.samples.clone()
    };

    let win = hann(cfg.window);
    let scale = 2.0 / win.iter().sum::<f64>();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(cfg.window);
    let bins = cfg.window / 2 + 1;
    let n_frames = frame_count(signal.len(), cfg.window, cfg.hop);
    let mut buf = vec![Complex::new(0.0, 0.0); cfg.window];
    let mut frames = Vec::with_capacity(n_frames);
    for f in 0..n_frames {
        let start = f * cfg.hop;
        for (i, slot) in buf.iter_mut().enumerate() {
            *slot = Complex::new(signal[start + i] * win[i], 0.0);
        }
        fft.process(&mut buf);
        let mut mags: Vec<f64> = buf[..bins].iter().map(|c| c.norm() * scale).collect();
        // DC has no mirrored partner.
        mags[0] *= 0.5;
        frames.push(mags);
    }
    Ok(Spectrogram {
        frames,
        frame_hop: cfg.hop,
        window_size: cfg.window,
        sample_rate: audio.sample_rate,
    })
}
