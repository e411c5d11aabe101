//! Subcommand-driven entry point for the inventory-variation analytics
//! toolkit. The only module with side effects: everything below parses
//! inputs, runs the pure analysis crates, and writes plot-ready reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "invar",
    version,
    about = "Inventory-variation analytics: panels, spectra, strategy classification, causality and herding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by the analysis subcommands.
#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Trade tape CSV (timestamp,stock,buyer,seller,price,volume).
    #[arg(long)]
    input: PathBuf,
    /// Stock symbol; may be omitted when the tape carries exactly one.
    #[arg(long)]
    stock: Option<String>,
    /// Calendar year to analyze; defaults to every year present.
    #[arg(long)]
    year: Option<i32>,
    /// Session open (HH:MM or HH:MM:SS).
    #[arg(long, default_value = "09:00")]
    session_open: String,
    /// Session close.
    #[arg(long, default_value = "17:30")]
    session_close: String,
    /// Activity filter: minimum distinct trading days per firm and year.
    #[arg(long, default_value_t = 200)]
    min_days: usize,
    /// Activity filter: minimum transactions per firm and year.
    #[arg(long, default_value_t = 1000)]
    min_transactions: usize,
    /// Root seed; all derived randomness flows from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build inventory panels and return series from a trade tape.
    Ingest {
        #[command(flatten)]
        common: InputArgs,
        /// Sampling horizon, e.g. 15m, 30m, 1d, 5d.
        #[arg(long, default_value = "15m")]
        horizon: String,
    },
    /// Correlation spectrum with random-matrix and shuffling thresholds.
    Spectrum {
        #[command(flatten)]
        common: InputArgs,
        #[arg(long, default_value = "1d")]
        horizon: String,
        /// Shuffle replicates for the null spectrum.
        #[arg(long, default_value_t = 100)]
        shuffles: usize,
    },
    /// One-factor fits, strategy labels, size proxies, sorted matrix.
    Classify {
        #[command(flatten)]
        common: InputArgs,
        #[arg(long, default_value = "1d")]
        horizon: String,
    },
    /// Year-to-year strategy-group transition probabilities.
    Transitions {
        #[command(flatten)]
        common: InputArgs,
    },
    /// Lagged cross-correlation and integrated causality per firm.
    Causality {
        #[command(flatten)]
        common: InputArgs,
        #[arg(long, default_value = "15m")]
        horizon: String,
    },
    /// Herding ledger, summary tables and daily timeline.
    Herd {
        #[command(flatten)]
        common: InputArgs,
        #[arg(long, default_value = "1d")]
        horizon: String,
        /// Binomial test significance level.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Generate synthetic oracle data from a JSON config.
    Synth {
        /// Generator configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Trades per firm and interval on the emitted tape.
        #[arg(long, default_value_t = 1)]
        trades_per_interval: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Entire pipeline: ingest, spectrum, classify, causality, herding,
    /// and transitions when multiple years are present.
    Full {
        #[command(flatten)]
        common: InputArgs,
        /// Intraday horizon for panels, causality and herding.
        #[arg(long, default_value = "15m")]
        horizon: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        shuffles: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Ingest { common, horizon } => pipeline::ingest(&common, &horizon),
        Command::Spectrum {
            common,
            horizon,
            shuffles,
        } => pipeline::spectrum(&common, &horizon, shuffles),
        Command::Classify { common, horizon } => pipeline::classify_cmd(&common, &horizon),
        Command::Transitions { common } => pipeline::transitions(&common),
        Command::Causality { common, horizon } => pipeline::causality_cmd(&common, &horizon),
        Command::Herd {
            common,
            horizon,
            alpha,
        } => pipeline::herd(&common, &horizon, alpha),
        Command::Synth {
            config,
            trades_per_interval,
            out,
        } => pipeline::synth(&config, trades_per_interval, &out),
        Command::Full {
            common,
            horizon,
            alpha,
            shuffles,
        } => pipeline::full(&common, &horizon, alpha, shuffles),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
