//! `fibpow`: runs the computational steps, writes JSON-lines certificates and
//! re-checks them offline.

pub mod cert;
pub mod commands;
pub mod config;
mod error;
pub mod verify;

pub use cert::{CertWriter, Certificate, Stage};
pub use config::FileConfig;
pub use error::{CliError, EXIT_COMPUTE, EXIT_CONFIG, EXIT_IO, EXIT_VERIFY};

use arith::Exec;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "fibpow", version, about = "Perfect powers in the Fibonacci and Lucas sequences")]
pub struct Cli {
    /// Optional `key = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Working precision in bits for real arithmetic.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Run every stage on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Suppress progress on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Witness primes showing F_n or L_n is not a perfect power, per index.
    Scan(ScanArgs),
    /// Kraus certificates for a range of exponents.
    Kraus(KrausArgs),
    /// The residue-class sieve for one exponent, with checkpoints.
    Sieve(SieveArgs),
    /// Upper bound for the index from the Thue-equation constant.
    Bounds(BoundsArgs),
    /// Three-logarithm conditions and the exponent reduction.
    Threelog {
        #[command(subcommand)]
        cmd: ThreelogCmd,
    },
    /// Runs the desk-scale chain and writes every certificate.
    Certify(CertifyArgs),
    /// Re-checks a certificate file without repeating searches.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub min_n: Option<u64>,
    #[arg(long)]
    pub max_n: Option<u64>,
    #[arg(long)]
    pub l_budget: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KrausArgs {
    /// `fib`, `lucas` or `both`.
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub p_min: Option<u64>,
    #[arg(long)]
    pub p_max: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub l_max: Option<u64>,
    #[arg(long)]
    pub patience: Option<usize>,
    /// Session state, rewritten atomically after every stage.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint if it exists.
    #[arg(long)]
    pub resume: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ThreelogCmd {
    /// Evaluates the conditions for a JSON parameter block.
    Check {
        #[arg(long)]
        params: PathBuf,
        /// `proposition`, `theorem` or `conjunction`.
        #[arg(long)]
        reading: Option<String>,
    },
    /// Runs the iterated exponent reduction and emits its trace.
    Reduce {
        #[arg(long)]
        seq: Option<String>,
        /// Lower bound for `log y`.
        #[arg(long)]
        log_y: Option<String>,
        #[arg(long)]
        reading: Option<String>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub max_n: Option<u64>,
    #[arg(long)]
    pub p_max: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

/// Settings shared by every subcommand after merging flags and file.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub threads: usize,
    pub precision: usize,
    pub exec: Exec,
    pub quiet: bool,
    pub file: FileConfig,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let default_threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let threads = file.pick(cli.threads, "threads", default_threads)?;
        if threads == 0 {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        let precision = file.pick(cli.precision, "precision", bounds::DEFAULT_PRECISION)?;
        if !(64..=bounds::MAX_PRECISION).contains(&precision) {
            return Err(CliError::Config(format!("precision must lie in 64..={}", bounds::MAX_PRECISION)));
        }
        let sequential = cli.sequential || file.get::<bool>("sequential")?.unwrap_or(false);
        let quiet = cli.quiet || file.get::<bool>("quiet")?.unwrap_or(false);
        let exec = if sequential || threads == 1 { Exec::Sequential } else { Exec::Parallel };
        Ok(RunConfig { threads, precision, exec, quiet, file })
    }

    pub fn progress(&self, msg: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(&cli)?;
    let (threads, exec, precision) = (cfg.threads, cfg.exec, cfg.precision);
    exec.with_threads(threads, move || bounds::with_precision(precision, || commands::dispatch(&cli.command, &cfg)))
}
