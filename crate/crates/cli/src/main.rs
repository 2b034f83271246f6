//! `radcom` — scenario-driven experiments for robust radar/comm OFDM
//! power allocation.
//!
//! Every subcommand reads a scenario JSON file, computes deterministically,
//! and writes one text document (CSV, or JSON for `verify`) to `--out` or
//! stdout. Exit codes: 0 success, 2 configuration error, 3 verification
//! failure, 1 internal numeric failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radcom_cli::experiments::{
    plan, run_snr_sweep, run_tradeoff, run_width_sweep, spectrum_report,
};
use radcom_cli::verification::run_verifications;
use radcom_core::scenario::Scenario;
use radcom_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "radcom",
    version,
    about = "Robust radar/comm OFDM power-allocation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the robust allocation and its information metrics
    Plan(CommonArgs),
    /// Sweep the SNR knob and compare robust and non-robust designs
    SweepSnr(CommonArgs),
    /// Sweep the uncertainty width of a fixed bound family
    SweepWidth(CommonArgs),
    /// Sweep the communications weight from radar-only to comm-only
    Tradeoff(CommonArgs),
    /// Report per-subcarrier spectral approximation errors
    VerifySpectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluate a uniform allocation instead of the robust one
        #[arg(long)]
        uniform: bool,
    },
    /// Run every verification check and emit a JSON report
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of saddle-point samples per side
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Corrupt the solution before checking (negative-control hook)
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the scenario JSON file
    #[arg(long)]
    scenario: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed for sampled checks
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Override the scenario's communications weight
    #[arg(long)]
    wc: Option<f64>,
    /// Override the scenario's power budget
    #[arg(long)]
    budget: Option<f64>,
}

const EXIT_OK: u8 = 0;
const EXIT_INTERNAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Convergence(_) => ExitCode::from(EXIT_INTERNAL),
                _ => ExitCode::from(EXIT_CONFIG),
            }
        }
    }
}

fn execute(cli: Cli) -> Result<u8> {
    let (common, payload, code) = match &cli.command {
        Command::Plan(common) => {
            let scenario = load_scenario(common)?;
            (common, plan(&scenario)?.render(), EXIT_OK)
        }
        Command::SweepSnr(common) => {
            let scenario = load_scenario(common)?;
            (common, run_snr_sweep(&scenario)?.render(), EXIT_OK)
        }
        Command::SweepWidth(common) => {
            let scenario = load_scenario(common)?;
            (common, run_width_sweep(&scenario)?.render(), EXIT_OK)
        }
        Command::Tradeoff(common) => {
            let scenario = load_scenario(common)?;
            (common, run_tradeoff(&scenario)?.render(), EXIT_OK)
        }
        Command::VerifySpectrum { common, uniform } => {
            let scenario = load_scenario(common)?;
            (common, spectrum_report(&scenario, *uniform)?.render(), EXIT_OK)
        }
        Command::Verify {
            common,
            samples,
            inject_fault,
        } => {
            let scenario = load_scenario(common)?;
            let report = run_verifications(&scenario, common.seed, *samples, *inject_fault)?;
            let code = if report.passed {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            };
            (common, report.render(), code)
        }
    };
    write_output(common, &payload)?;
    Ok(code)
}

fn load_scenario(common: &CommonArgs) -> Result<Scenario> {
    let text = fs::read_to_string(&common.scenario).map_err(|e| {
        Error::Config(format!(
            "cannot read scenario {}: {e}",
            common.scenario.display()
        ))
    })?;
    let mut scenario = Scenario::from_json_str(&text)?;
    if let Some(w) = common.wc {
        if !(w.is_finite() && (0.0..=1.0).contains(&w)) {
            return Err(Error::Config(format!("--wc must lie in [0, 1], got {w}")));
        }
        scenario.w_comm = w;
    }
    if let Some(b) = common.budget {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Config(format!(
                "--budget must be positive and finite, got {b}"
            )));
        }
        scenario.budget = b;
    }
    Ok(scenario)
}

fn write_output(common: &CommonArgs, payload: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(payload.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write to stdout: {e}"))),
    }
}
