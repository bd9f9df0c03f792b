mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Artificial-noise precoding and wiretap polar code simulator.
#[derive(Debug, Parser)]
#[command(name = "anpolar", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// TOML configuration file, or a manifest from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mc,
    Ga,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate C_B, C_E and C_S over a grid of signal powers.
    CapacitySweep {
        #[command(flatten)]
        common: Common,
    },
    /// Optimal signal/artificial-noise power split for one channel pair.
    PowerOpt {
        #[command(flatten)]
        common: Common,
        /// Legitimate channel, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h: Option<Vec<f64>>,
        /// Eavesdropper channel, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        g: Option<Vec<f64>>,
        #[arg(long)]
        sigma_b_sq: Option<f64>,
        #[arg(long)]
        sigma_e_sq: Option<f64>,
        #[arg(long)]
        p_t: Option<f64>,
    },
    /// Build a polar code construction and write its cache record.
    Construct {
        #[command(flatten)]
        common: Common,
        /// Block length exponent: N = 2^n.
        #[arg(long)]
        n: u32,
        /// Design SNR (linear, P / sigma^2).
        #[arg(long)]
        snr: f64,
        #[arg(long, value_enum, default_value = "ga")]
        method: Method,
        /// Monte-Carlo blocks.
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
        /// Also select the k most reliable indices.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Known-eavesdropper-CSI bit-error-rate experiment.
    SimulateCsi {
        #[command(flatten)]
        common: Common,
    },
    /// Eavesdropper-distribution-only bit-error-rate experiment.
    SimulateCdi {
        #[command(flatten)]
        common: Common,
    },
}

/// Exit status 2: bad input, detected before any computation.
/// Exit status 3: failure while computing or writing results.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

pub fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CapacitySweep { common } => commands::capacity_sweep(&common),
        Command::PowerOpt {
            common,
            h,
            g,
            sigma_b_sq,
            sigma_e_sq,
            p_t,
        } => commands::power_opt(
            &common,
            config::InlinePair {
                h,
                g,
                sigma_b_sq,
                sigma_e_sq,
                p_t,
            },
        ),
        Command::Construct {
            common,
            n,
            snr,
            method,
            samples,
            k,
        } => commands::construct(&common, n, snr, method, samples, k),
        Command::SimulateCsi { common } => commands::simulate_csi(&common),
        Command::SimulateCdi { common } => commands::simulate_cdi(&common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
