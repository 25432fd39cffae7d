use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spincollapse_core::{Axis, EntropyBase, Mode, PureState};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "spincollapse", version, about = "Entropy-constrained next-axis solver and measurement simulator for spin-1/2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the observer's next measurement axis.
    Solve(SolveArgs),
    /// Tabulate S_f, the constraint residual and S_up over a (theta_f, phi_f) grid.
    Landscape(LandscapeArgs),
    /// Compare the analytic solver with an exhaustive grid search.
    Oracle(OracleArgs),
    /// Simulate a sequence of measurements.
    Simulate(SimulateArgs),
    /// Re-run the command recorded in an output document.
    Replay(ReplayArgs),
}

/// Pre-measurement state, as (rho, tau) or as raw amplitudes.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("state").required(true).args(["rho", "amplitudes"])))]
pub struct StateArgs {
    /// Weight of the upper amplitude, in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,

    /// Relative phase; the state is (sqrt(rho) e^{-i tau}, sqrt(1 - rho)).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, conflicts_with = "amplitudes")]
    #[serde(default)]
    pub tau: f64,

    /// Raw amplitudes `re_up,im_up,re_down,im_down`; normalized and stripped of global phase.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<f64>>,
}

impl StateArgs {
    pub fn state(&self) -> Result<PureState, CliError> {
        match (&self.rho, &self.amplitudes) {
            (Some(rho), None) => Ok(PureState::new(*rho, self.tau)?),
            (None, Some(a)) => {
                if a.len() != 4 {
                    return Err(CliError::Usage(format!(
                        "--amplitudes takes 4 comma-separated numbers, got {}",
                        a.len()
                    )));
                }
                Ok(PureState::from_amplitudes(
                    Complex64::new(a[0], a[1]),
                    Complex64::new(a[2], a[3]),
                )?)
            }
            _ => Err(CliError::Usage(
                "give the state either as --rho/--tau or as --amplitudes".into(),
            )),
        }
    }
}

/// The measured axis and options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CommonArgs {
    /// Colatitude of the measured axis.
    #[arg(long = "theta-i", allow_hyphen_values = true)]
    pub theta_i: f64,

    /// Azimuth of the measured axis.
    #[arg(long = "phi-i", default_value_t = 0.0, allow_hyphen_values = true)]
    #[serde(default)]
    pub phi_i: f64,

    /// Read angle flags in degrees instead of radians.
    #[arg(long)]
    #[serde(default)]
    pub degrees: bool,

    /// Logarithm base for reported entropies: `e` or `2`.
    #[arg(long = "entropy-base", default_value = "e")]
    #[serde(default)]
    pub entropy_base: EntropyBase,

    /// Born probability this close to 0 or 1 counts as an eigenstate.
    #[arg(long, default_value_t = spincollapse_core::DEFAULT_TOL)]
    pub tol: f64,

    /// Output format: `json` or `compact` for documents, `csv` or `tsv` for landscape tables.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,

    /// Write output to this file instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    fn angle(&self, v: f64) -> f64 {
        if self.degrees {
            v.to_radians()
        } else {
            v
        }
    }

    pub fn axis_i(&self) -> Result<Axis, CliError> {
        Ok(Axis::new(self.angle(self.theta_i), self.angle(self.phi_i))?)
    }

    pub fn check_tol(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol < 0.5) {
            return Err(CliError::Usage(format!(
                "--tol must lie in (0, 0.5), got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("grid must look like NxM, got `{s}`"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad grid size `{t}`: {e}"))
        };
        Ok(GridSpec {
            n_theta: parse(a)?,
            n_phi: parse(b)?,
        })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.n_theta, self.n_phi)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,

    /// `strict` or `reflective`.
    #[arg(long, default_value = "strict")]
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct LandscapeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,

    /// Grid size as `n_theta x n_phi`; theta spans [0, pi], phi spans [0, 2 pi).
    #[arg(long, default_value = "50x100")]
    pub grid: GridSpec,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,

    /// Solver mode to compare against; defaults to `reflective` with
    /// --exclude-trivial and `strict` otherwise.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,

    #[arg(long, default_value = "400x800")]
    pub grid: GridSpec,

    /// Keep grid points with |S_f - S_i| at most this.
    #[arg(long = "constraint-tol", default_value_t = 5e-3)]
    pub constraint_tol: f64,

    /// Skip grid points within this angle (radians, or degrees with --degrees) of the measured axis or its antipode.
    #[arg(long = "exclude-trivial")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude_trivial: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,

    #[arg(long, default_value = "strict")]
    #[serde(default)]
    pub mode: Mode,

    #[arg(long, default_value_t = 1)]
    pub steps: usize,

    /// `risk:<name>` (builtins: constant, born-surprise, alignment) or `born`.
    #[arg(long, default_value = "risk:born-surprise")]
    pub outcome: String,

    /// Seed for the Born-rule sampler; required with `--outcome born`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// A document previously written by solve, oracle or simulate.
    pub document: PathBuf,

    #[arg(long)]
    pub out: Option<PathBuf>,
}
