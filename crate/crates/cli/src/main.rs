//! `toroidal-verify`: batch identity checks for the deformed double-loop
//! algebra, its formal flow series, and its oscillator realization.
//!
//! Exit codes: `0` every case passed, `1` at least one case failed, `2`
//! the configuration was unusable.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use toroidal_cli::config::{resolve, Overrides};
use toroidal_cli::{emit_report, run_suites};

/// Exhaustive identity checks for a deformed double-loop algebra and its
/// oscillator realization.
#[derive(Debug, Parser)]
#[command(name = "toroidal-verify", version)]
struct Cli {
    /// Suites to run (comma-separated tokens; default: all twelve)
    #[arg(long, value_delimiter = ',', value_name = "TOKENS")]
    suite: Vec<String>,

    /// Convention shifts to sweep (comma-separated integers)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "LIST")]
    epsilon: Vec<i64>,

    /// Cocycle coupling as a rational; any of --mu/--ell/--alpha/--beta
    /// collapses the parameter sweep to a single (patched) point
    #[arg(long, allow_hyphen_values = true, value_name = "RAT")]
    mu: Option<String>,

    /// Level scalar (must be nonzero)
    #[arg(long, allow_hyphen_values = true, value_name = "RAT")]
    ell: Option<String>,

    /// Charge offset of the lattice vacua
    #[arg(long, allow_hyphen_values = true, value_name = "RAT")]
    alpha: Option<String>,

    /// Weight scalar of the derivation eigenvalues
    #[arg(long, allow_hyphen_values = true, value_name = "RAT")]
    beta: Option<String>,

    /// Half-width of the exhaustive label/coefficient box
    #[arg(long = "index-box", value_name = "N")]
    index_box: Option<i64>,

    /// Maximum total degree of module test vectors
    #[arg(long = "degree-cap", value_name = "N")]
    degree_cap: Option<usize>,

    /// Truncation order of the formal-series suites
    #[arg(long, value_name = "N")]
    order: Option<u32>,

    /// Seed of the deterministic test-vector sampler
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Report encoding: `text` or `json`
    #[arg(long, value_name = "FORMAT")]
    report: Option<String>,

    /// TOML configuration file (flags override file values)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Coefficient algebra: `sl2`, `abelian`, or a TOML descriptor path
    #[arg(long, value_name = "SPEC")]
    algebra: Option<String>,

    /// Run the named suite with its documented fault injection; the run is
    /// then expected to fail (exit 1) — this exercises the detection path
    #[arg(long = "fault-inject", value_name = "SUITE")]
    fault_inject: Option<String>,

    /// Write the report to a file instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ov = Overrides {
        suites: cli.suite,
        epsilon: cli.epsilon,
        mu: cli.mu,
        ell: cli.ell,
        alpha: cli.alpha,
        beta: cli.beta,
        index_box: cli.index_box,
        degree_cap: cli.degree_cap,
        order: cli.order,
        seed: cli.seed,
        report: cli.report,
        algebra: cli.algebra,
        fault_inject: cli.fault_inject,
    };
    let cfg = match resolve(cli.config.as_deref(), &ov) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let start = Instant::now();
    let report = run_suites(&cfg);
    let bytes = emit_report(&report, cfg.report_format);

    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &bytes) {
            eprintln!("error: cannot write report to {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        use std::io::Write as _;
        std::io::stdout()
            .write_all(&bytes)
            .expect("standard output is writable");
    }
    // Timing goes to stderr only, keeping the report bytes canonical.
    eprintln!(
        "# {} cases, {} failed, {:.2?}",
        report.total(),
        report.failed(),
        start.elapsed()
    );

    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
