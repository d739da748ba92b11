//! Command-line front-end: single-point bounds, parameter sweeps, spectrum
//! generation and oracle verification, all emitting CSV.
//!
//! Exit status is 0 on success, 1 when a bound fails or verification finds a
//! violation, and 2 for invalid input.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use typebound::oracle::DEFAULT_OUTPUT_BUDGET;
use typebound::spectrum::DEFAULT_MAX_DIMENSION;

pub use config::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// An error that ends the run with `code`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<typebound::Error> for CliError {
    fn from(e: typebound::Error) -> Self {
        CliError::input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "typebound",
    version,
    about = "Error-probability bounds for binary linear codes"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TYPEBOUND_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate bounds at one channel point.
    Bound(RunArgs),
    /// Evaluate bounds along a parameter sweep.
    Sweep(RunArgs),
    /// Brute-force a weight spectrum from a generator matrix.
    Spectrum(SpectrumArgs),
    /// Compare bounds with the exact or simulated ML error of a small code.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Config,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub generator: Option<PathBuf>,
    /// Built-in code: hamming, bch15, rep:N or spc:N.
    #[arg(long)]
    pub code: Option<String>,
    /// Spectrum CSV to write; a `.json` sidecar is written beside it.
    #[arg(long)]
    pub output: PathBuf,
    /// Largest dimension enumerated.
    #[arg(long, default_value_t = DEFAULT_MAX_DIMENSION)]
    pub max_k: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub generator: Option<PathBuf>,
    /// Built-in code: hamming, bch15, rep:N or spc:N.
    #[arg(long)]
    pub code: Option<String>,
    /// Spectrum used by the bounds instead of the brute-forced one.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long)]
    pub channel: String,
    /// Comma-separated grid values.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p0: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub bounds: Option<Vec<String>>,
    #[arg(long)]
    pub rect_sigma: Option<f64>,
    /// exact, sim or both.
    #[arg(long, default_value = "exact")]
    pub oracle: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest number of output vectors the exact oracle enumerates.
    #[arg(long, default_value_t = DEFAULT_OUTPUT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn execute(
    command: &Command,
    messages: &mut Vec<String>,
) -> Result<(commands::Output, Option<PathBuf>), CliError> {
    match command {
        Command::Bound(args) | Command::Sweep(args) => {
            let base = match &args.config {
                Some(path) => Config::load(path)?,
                None => Config::default(),
            };
            let cfg = base.overlay(args.settings.clone());
            let out = if matches!(command, Command::Bound(_)) {
                commands::bound(&cfg, messages)?
            } else {
                commands::sweep(&cfg, messages)?
            };
            Ok((out, args.output.clone()))
        }
        Command::Spectrum(args) => Ok((commands::spectrum(args)?, None)),
        Command::Verify(args) => Ok((commands::verify(args, messages)?, args.output.clone())),
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_INPUT;
        }
    };
    let mut messages = Vec::new();
    let result = pool.install(|| execute(&cli.command, &mut messages));
    for m in &messages {
        let _ = writeln!(stderr, "error: {m}");
    }
    match result {
        Ok((out, path)) => {
            let written = match path {
                Some(p) => fs::write(&p, &out.text).map_err(|e| format!("{}: {e}", p.display())),
                None => stdout
                    .write_all(out.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INPUT;
            }
            out.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
