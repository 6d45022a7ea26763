//! Chord identification from audio: STFT, semitone log-frequency bins, NNLS
//! note activations against a harmonic dictionary, chroma templates.

pub mod audio;
pub mod chords;
pub mod dictionary;
pub mod error;
pub mod logfreq;
pub mod nnls;
pub mod pipeline;
pub mod ppm;
pub mod stft;
pub mod synth;

pub use audio::{load_wav, write_wav, AudioBuffer};
pub use chords::{chroma_fold, match_chords, write_jsonl, ChordLabel, ChordSegment, MatchConfig};
pub use dictionary::NoteDictionary;
pub use error::{ChromaError, Result};
pub use logfreq::log_freq_map;
pub use nnls::{nnls_activations, NnlsConfig, NnlsSolution, NnlsSolver};
pub use pipeline::{identify_chords, ChordIdConfig, ChordIdOutput};
pub use ppm::render_spectrogram_ppm;
pub use stft::{stft, Spectrogram, StftConfig};
