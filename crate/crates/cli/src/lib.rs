//! The `cmnorm` command line: argument parsing, dispatch and output.
//!
//! Every subcommand produces [`OutputRecord`]s. With `--format json` each
//! record is printed as one JSON line with the fields `command`, `inputs`,
//! `result`, `status` (`PASS`, `FAIL` or `INFO`) and `provenance`.

pub mod commands;
pub mod record;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cmnorm_core::classpoly::PolyCache;

pub use record::{OutputRecord, Status};

use commands::Bounds;

/// Exit code for a failed check or computation.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for invalid arguments.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(anyhow::Error),
}

impl CliError {
    pub fn failed(e: impl Into<anyhow::Error>) -> Self {
        CliError::Failed(e.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Failed(e) => write!(f, "computation failed: {e:#}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Mod3,
    Claim235,
    Squares,
    Conjecture,
    LvOracle,
    J1728,
    SsCensus,
}

#[derive(Debug, Parser)]
#[command(name = "cmnorm", version, about = "Hilbert class polynomials and norms of singular moduli")]
pub struct Cli {
    /// Directory holding cached class polynomials.
    #[arg(long, global = true, env = "CMNORM_CACHE", default_value = "./hd-cache")]
    pub cache_dir: PathBuf,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Output format; csv applies to `table` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Hilbert class polynomial of discriminant -D.
    Hilbert {
        #[arg(value_name = "D")]
        d: u64,
    },
    /// Factor N(j) for discriminants -3 f^2, f = 1..=f_max.
    Table {
        #[arg(long, default_value_t = 50)]
        f_max: u64,
    },
    /// Run one verification.
    Check {
        which: CheckName,
        /// Largest |D| for mod3, squares and j1728.
        #[arg(long)]
        d_max: Option<u64>,
        /// Largest conductor for claim235 and conjecture.
        #[arg(long)]
        f_max: Option<u64>,
        /// Primes for lv-oracle and ss-census, comma separated.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// The exponent n of lv-oracle.
        #[arg(long)]
        exponent: Option<u32>,
    },
    /// Find a discriminant whose singular moduli are not S-units.
    Witness {
        /// Comma-separated primes.
        #[arg(value_name = "S")]
        s: String,
    },
}

/// Runs the parsed command, writing to `out`, and returns the exit code.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<i32, CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    if cli.format == Format::Csv && !matches!(cli.command, Command::Table { .. }) {
        return Err(CliError::Usage("csv output is only available for `table`".into()));
    }
    let cache = PolyCache::with_dir(&cli.cache_dir).map_err(CliError::failed)?;
    log::debug!("class polynomial cache at {}", cli.cache_dir.display());

    let record = match cli.command {
        Command::Hilbert { d } => commands::hilbert(d, &cache)?,
        Command::Table { f_max } => {
            let rows = commands::table_rows(f_max, &cache)?;
            match cli.format {
                Format::Text => {
                    for (f, norm) in &rows {
                        writeln!(out, "{f}: {}", norm.factorization).map_err(CliError::failed)?;
                    }
                    return Ok(0);
                }
                Format::Csv => {
                    writeln!(out, "f,norm").map_err(CliError::failed)?;
                    for (f, norm) in &rows {
                        writeln!(out, "{f},{}", norm.factorization).map_err(CliError::failed)?;
                    }
                    return Ok(0);
                }
                Format::Json => commands::table_record(f_max, &rows),
            }
        }
        Command::Check { which, d_max, f_max, primes, exponent } => {
            let b = Bounds { d_max, f_max, primes, exponent };
            match which {
                CheckName::Mod3 => commands::check_mod3(&b, &cache)?,
                CheckName::Claim235 => commands::check_claim235(&b, &cache)?,
                CheckName::Squares => commands::check_squares(&b, &cache)?,
                CheckName::Conjecture => commands::check_conjecture(&b, &cache)?,
                CheckName::LvOracle => commands::check_lv_oracle(&b, &cache)?,
                CheckName::J1728 => commands::check_j1728(&b, &cache)?,
                CheckName::SsCensus => commands::check_ss_census(&b)?,
            }
        }
        Command::Witness { s } => commands::witness(&s, &cache)?,
    };
    match cli.format {
        Format::Json => writeln!(out, "{}", record.to_json()),
        _ => write!(out, "{}", record.to_text()),
    }
    .map_err(CliError::failed)?;
    Ok(if record.status == Status::Fail { EXIT_FAIL } else { 0 })
}
