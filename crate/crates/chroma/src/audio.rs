//! WAV ingestion and export.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{ChromaError, Result};

/// Mono audio normalized to [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn silence(seconds: f64, sample_rate: u32) -> Self {
        let n = (seconds * sample_rate as f64).round() as usize;
        Self::new(vec![0.0; n], sample_rate)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

fn map_hound(err: hound::Error) -> ChromaError {
    match err {
        // the file already opened, so a failed read means it ends early
        hound::Error::IoError(e) => ChromaError::CorruptHeader(e.to_string()),
        hound::Error::FormatError(msg) => ChromaError::CorruptHeader(msg.into()),
        hound::Error::Unsupported => ChromaError::UnsupportedFormat("not PCM".into()),
        other => ChromaError::UnsupportedFormat(other.to_string()),
    }
}

/// Reads 16-bit PCM WAV with one or two channels; stereo is averaged to mono.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let file = File::open(path)?;
    read_wav(BufReader::new(file))
}

pub fn read_wav<R: Read>(reader: R) -> Result<AudioBuffer> {
    let mut reader = WavReader::new(reader).map_err(map_hound)?;
    let spec = reader.spec();
    if spec.sample_format != SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(ChromaError::UnsupportedFormat(format!(
            "{}-bit {:?}, expected 16-bit PCM",
            spec.bits_per_sample, spec.sample_format
        )));
    }
    let channels = spec.channels as usize;
    if !(1..=2).contains(&channels) {
        return Err(ChromaError::UnsupportedFormat(format!(
            "{channels} channels"
        )));
    }
    let raw: Vec<i16> = reader
        .samples::<i16>()
        .collect::<std::result::Result<_, _>>()
        .map_err(map_hound)?;
    let samples = raw
        .chunks_exact(channels)
        .map(|frame| frame.iter().map(|&s| s as f64 / 32768.0).sum::<f64>() / channels as f64)
        .collect();
    Ok(AudioBuffer::new(samples, spec.sample_rate))
}

/// Writes mono 16-bit PCM, clipping to full scale.
pub fn write_wav(path: impl AsRef<Path>, audio: &AudioBuffer) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: audio.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let encode = |e: hound::Error| ChromaError::Encode(e.to_string());
    let mut writer = WavWriter::create(path, spec).map_err(encode)?;
    for &s in &audio.samples {
        let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer.write_sample(v).map_err(encode)?;
    }
    writer.finalize().map_err(encode)
}
