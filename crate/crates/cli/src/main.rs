use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tonnetz_chroma::{ChordIdConfig, MatchConfig, NnlsConfig, StftConfig};
use tonnetz_cli::{cmd_analyze, cmd_chord_id, cmd_render_clocks, cmd_render_tonnetz, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "tonnetz",
    version,
    about = "Tonnetz and harmonic-rhythm analysis of chord charts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze every section of a chart and emit a JSON report.
    Analyze {
        chart: PathBuf,
        /// Override the chart's key, e.g. `A` or `Bb major`.
        #[arg(long)]
        key: Option<String>,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a section's chord path on the Tonnetz as SVG.
    RenderTonnetz {
        chart: PathBuf,
        #[arg(long)]
        section: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one clock SVG per distinct harmonic-rhythm pattern.
    RenderClocks {
        chart: PathBuf,
        #[arg(long)]
        section: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Estimate chord segments from a 16-bit PCM WAV file.
    ChordId {
        wav: PathBuf,
        /// JSON-lines output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the magnitude spectrogram as a binary PPM.
        #[arg(long)]
        spectrogram: Option<PathBuf>,
        #[arg(long, default_value_t = 4096)]
        window: usize,
        #[arg(long, default_value_t = 2048)]
        hop: usize,
        /// Pre-emphasis coefficient applied before the STFT.
        #[arg(long, default_value_t = 0.0)]
        pre_emphasis: f64,
        #[arg(long, default_value_t = 8)]
        harmonics: usize,
        #[arg(long, default_value_t = 0.8)]
        decay: f64,
        /// Frames quieter than this fraction of the loudest become "N".
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
        /// Majority-vote smoothing length in frames.
        #[arg(long, default_value_t = 5)]
        smoothing: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { chart, key, out } => {
            let json = cmd_analyze(&chart, key.as_deref(), out.as_deref())?;
            if out.is_none() {
                let _ = std::io::stdout().write_all(json.as_bytes());
            }
        }
        Command::RenderTonnetz {
            chart,
            section,
            out,
        } => cmd_render_tonnetz(&chart, &section, &out)?,
        Command::RenderClocks {
            chart,
            section,
            out_dir,
        } => {
            for p in cmd_render_clocks(&chart, &section, &out_dir)? {
                println!("{}", p.display());
            }
        }
        Command::ChordId {
            wav,
            out,
            spectrogram,
            window,
            hop,
            pre_emphasis,
            harmonics,
            decay,
            threshold,
            smoothing,
        } => {
            let cfg = ChordIdConfig {
                stft: StftConfig {
                    window,
                    hop,
                    pre_emphasis,
                },
                harmonics,
                decay,
                nnls: NnlsConfig::default(),
                matching: MatchConfig {
                    energy_threshold: threshold,
                    smoothing,
                },
            };
            let lines = cmd_chord_id(&wav, out.as_deref(), spectrogram.as_deref(), &cfg)?;
            if out.is_none() {
                let _ = std::io::stdout().write_all(lines.as_bytes());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tonnetz: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
