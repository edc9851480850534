//! `zgunits`: scan finite groups for unit witnesses, classify unit orders and
//! certify the free-product and Hydra relations.
//!
//! Reports go to stdout, progress to stderr. Exit status is 0 only when every
//! check passed.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use zgunits_core::report::{explain, verify_poly, KSelector, OutputFormat};
use zgunits_core::{scan, CoeffRing, RunConfig};

#[derive(Parser)]
#[command(
    name = "zgunits",
    version,
    about = "Units of integral group rings: order classification and free-product certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every (witness, k) of a group and run the certifiers
    Scan {
        /// Group name (S4, D6, S3xS3, ...), JSON spec, or `catalog`
        #[arg(long, default_value = "catalog")]
        group: String,
        /// Coefficients: `int` or `gf:<p>`
        #[arg(long, default_value = "int")]
        ring: CoeffRing,
        /// `all` or a comma-separated list of steps
        #[arg(long, default_value = "all")]
        k: KSelector,
        /// Maximum syllables per word in the freeness sweep
        #[arg(long, default_value_t = zgunits_core::free::DEFAULT_MAX_SYLLABLES)]
        max_syllables: usize,
        /// Exponent bound for infinite-order letters
        #[arg(long, default_value_t = zgunits_core::free::DEFAULT_EXP_BOUND)]
        exp_bound: i64,
        /// Keep one witness `a` per conjugacy class of <a>
        #[arg(long)]
        dedup: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Worker threads (defaults to the available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Exact sweeps of the cyclotomic polynomial identities
    VerifyPoly {
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        /// Bound on the exponents j, l, s of the non-vanishing products
        #[arg(long, default_value_t = 3)]
        jls_max: usize,
        /// Replace F_{m,k} with a wrong polynomial to exercise the failure path
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Show one record with the clause behind each verdict
    Explain {
        #[arg(long)]
        group: String,
        /// Cycle notation, 1-based
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "int")]
        ring: CoeffRing,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Scan {
            group,
            ring,
            k,
            max_syllables,
            exp_bound,
            dedup,
            format,
            jobs,
        } => {
            let config = RunConfig {
                group,
                ring,
                k,
                max_syllables,
                exp_bound,
                dedup,
                format: match format {
                    Format::Json => OutputFormat::Json,
                    Format::Md => OutputFormat::Markdown,
                },
                jobs: jobs.unwrap_or_else(default_jobs),
            };
            let report = scan(&config, |msg| eprintln!("{msg}")).context("scan failed")?;
            writeln!(stdout, "{}", report.render())?;
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::VerifyPoly {
            n_max,
            jls_max,
            inject_fault,
        } => {
            eprintln!("sweeping n <= {n_max}, j, l, s <= {jls_max}");
            let report = verify_poly(n_max, jls_max, inject_fault)?;
            writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Explain {
            group,
            a,
            b,
            k,
            ring,
        } => {
            let text = explain(&group, &a, &b, k, ring)?;
            write!(stdout, "{text}")?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
