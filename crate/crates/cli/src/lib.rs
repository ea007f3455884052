//! Command-line front end: `noisyvqe <command> [--config FILE] [--set K=V]...`.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{ConfigError, ExperimentConfig};
use output::OutputDir;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STALLED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "noisyvqe", version, about = "Noisy ADAPT-VQE simulation and noise analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML experiment config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one config key; repeatable, applied in order.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Exact ground and highest energies of the active-space Hamiltonian.
    Fci,
    /// Grow an ADAPT ansatz and store the full record.
    Adapt,
    /// Energy accuracy over the p grid for every ansatz prefix.
    Sweep,
    /// Noise susceptibility and linear p_c estimate per prefix.
    Susceptibility,
    /// Linear zero-noise extrapolation over the p grid.
    Zne,
    /// Linear and swept p_c for every truncation of the ansatz.
    TruncateScan,
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Core(noisyvqe::Error),
    Io(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<noisyvqe::Error> for CliError {
    fn from(e: noisyvqe::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use noisyvqe::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_OTHER,
            CliError::Core(e) => match e.root() {
                E::Parse { .. } | E::NonHermitian { .. } | E::InvalidArgument(_) | E::InvalidProbability(_) => {
                    EXIT_CONFIG
                }
                E::TooLarge { .. } => EXIT_RESOURCE,
                E::NumericIntegrity(_) | E::NonFiniteObjective { .. } => EXIT_NUMERIC,
                _ => EXIT_OTHER,
            },
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = ExperimentConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let out = OutputDir::create(&cli.out, &cfg.hash())?;
    out.write_resolved_config(&cfg.to_toml())?;
    let run = || match cli.command {
        Command::Fci => commands::fci(&cfg, &out),
        Command::Adapt => commands::adapt(&cfg, &out),
        Command::Sweep => commands::sweep(&cfg, &out),
        Command::Susceptibility => commands::susceptibility(&cfg, &out),
        Command::Zne => commands::zne(&cfg, &out),
        Command::TruncateScan => commands::truncate_scan(&cfg, &out),
    };
    match cli.workers {
        Some(0) => Err(CliError::Config(ConfigError {
            key: Some("workers".into()),
            message: "must be at least 1".into(),
        })),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
