//! Command-line front end for `ncosc-core`: sweeps, single-point reports,
//! state export and the oracle suite.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{DomainChoice, Overrides, RangeSpec, RunConfig, UsageError};

/// Exit status for a failed validation or runtime error.
pub const EXIT_FAILURE: u8 = 1;
/// Exit status for malformed input.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ncosc", version, about = "Charged oscillator on noncommutative phase space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CSV of information measures over a (θ, η) grid
    Sweep(CommonArgs),
    /// JSON report for one (θ, η)
    Info(CommonArgs),
    /// Export position and momentum wavefunctions
    State(StateArgs),
    /// Run the oracle suite; exit 0 iff every check passes
    Verify(CommonArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Quantum numbers, comma separated, one per axis
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub domain: Option<DomainChoice>,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON config file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Value or min:max:count
    #[arg(long, value_parser = parse_range)]
    pub theta: Option<RangeSpec>,
    /// Value or min:max:count
    #[arg(long, value_parser = parse_range)]
    pub eta: Option<RangeSpec>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Per-axis drive, e.g. `sin:0.3:1.3,const:0.1` or `table:file.csv`
    #[arg(long)]
    pub drive: Option<String>,
    /// Evaluation time
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Grid half extent in Gaussian widths
    #[arg(long)]
    pub grid_sigmas: Option<f64>,
    /// Also compute reports by quadrature of sampled densities
    #[arg(long)]
    pub quadrature: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extra phase rate added to the state, in rad per unit time
    #[arg(long, allow_negative_numbers = true)]
    pub perturb_phase: Option<f64>,
}

fn parse_range(text: &str) -> Result<RangeSpec, String> {
    RangeSpec::parse(text).map_err(|e| e.to_string())
}

impl CommonArgs {
    pub fn resolve(self, n: Option<Vec<u32>>, domain: Option<DomainChoice>) -> anyhow::Result<RunConfig> {
        let overrides = Overrides {
            dim: self.dim,
            theta: self.theta,
            eta: self.eta,
            m: self.m,
            omega0: self.omega0,
            q: self.q,
            hbar: self.hbar,
            drive: self.drive,
            t: self.t,
            grid_points: self.grid_points,
            grid_sigmas: self.grid_sigmas,
            quadrature: self.quadrature,
            out: self.out,
            perturb_phase: self.perturb_phase,
            n,
            domain,
        };
        RunConfig::resolve(self.config.as_deref(), overrides)
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli) -> u8 {
    let outcome = match cli.command {
        Command::Sweep(a) => a.resolve(None, None).and_then(|c| commands::cmd_sweep(&c)).map(|_| true),
        Command::Info(a) => a.resolve(None, None).and_then(|c| commands::cmd_info(&c)).map(|_| true),
        Command::State(s) => s.common.resolve(s.n, s.domain).and_then(|c| commands::cmd_state(&c)).map(|_| true),
        Command::Verify(a) => a.resolve(None, None).and_then(|c| commands::cmd_verify(&c)),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}
