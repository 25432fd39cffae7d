//! Measurement trajectories: at every step the next axis comes from the
//! extremal problem, the outcome from risk minimization (or Born sampling as
//! a reference baseline), and the state collapses onto the matching
//! eigenvector before the next measurement.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{h, EntropyBase};
use crate::error::{Error, Result};
use crate::risk::{risk_by_name, select_outcome, RiskContext, RiskFunction};
use crate::solver::{solve, Mode, SolverConfig};
use crate::spin::{born_up, state_from_eigenvector, Axis, Outcome, PureState};

/// Name recorded in output metadata for the sampling generator.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How the measured spin projection is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeRule {
    /// Minimize the named risk function.
    Risk(String),
    /// Sample from the Born distribution. Baseline for comparison with
    /// standard quantum mechanics; not part of the risk-based model.
    Born { seed: u64 },
}

impl fmt::Display for OutcomeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeRule::Risk(name) => write!(f, "risk:{name}"),
            OutcomeRule::Born { .. } => f.write_str("born"),
        }
    }
}

/// Parses `risk:<name>` or `born`; a Born rule still needs its seed.
impl FromStr for OutcomeRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "born" {
            return Ok(OutcomeRule::Born { seed: 0 });
        }
        match s.strip_prefix("risk:") {
            Some(name) => {
                risk_by_name(name)?;
                Ok(OutcomeRule::Risk(name.to_owned()))
            }
            None => Err(Error::InvalidConfig(format!(
                "outcome rule must be `risk:<name>` or `born`, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub steps: usize,
    pub mode: Mode,
    pub outcome_rule: OutcomeRule,
    pub solver: SolverConfig,
}

impl SimConfig {
    pub fn new(steps: usize, mode: Mode, outcome_rule: OutcomeRule) -> Self {
        SimConfig {
            steps,
            mode,
            outcome_rule,
            solver: SolverConfig::default(),
        }
    }

    pub fn with_base(mut self, base: EntropyBase) -> Self {
        self.solver.base = base;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 1 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        if let OutcomeRule::Risk(name) = &self.outcome_rule {
            risk_by_name(name)?;
        }
        Ok(())
    }
}

/// One measurement event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub index: usize,
    pub state_before: PureState,
    pub axis_measured: Axis,
    pub p_up: f64,
    pub s: Outcome,
    pub state_after: PureState,
    pub axis_next: Axis,
    pub s_i: f64,
    pub s_up_next: f64,
    pub no_collapse: bool,
}

enum Chooser {
    Risk(Box<dyn RiskFunction>),
    Born,
}

impl Chooser {
    fn for_rule(rule: &OutcomeRule) -> Result<Chooser> {
        Ok(match rule {
            OutcomeRule::Risk(name) => Chooser::Risk(risk_by_name(name)?),
            OutcomeRule::Born { .. } => Chooser::Born,
        })
    }
}

/// A single measurement: solve for the next axis, pick the outcome, collapse.
///
/// `rng` is only drawn from under the Born rule, and only when the state
/// actually collapses.
pub fn step<R: Rng + ?Sized>(
    state: &PureState,
    axis_i: &Axis,
    config: &SimConfig,
    rng: &mut R,
) -> Result<TrajectoryStep> {
    let chooser = Chooser::for_rule(&config.outcome_rule)?;
    step_with(0, state, axis_i, config, &chooser, rng)
}

fn step_with<R: Rng + ?Sized>(
    index: usize,
    state: &PureState,
    axis_i: &Axis,
    config: &SimConfig,
    chooser: &Chooser,
    rng: &mut R,
) -> Result<TrajectoryStep> {
    let solution = solve(state, axis_i, config.mode, &config.solver);
    let p_up = born_up(state, axis_i);

    if solution.no_collapse {
        return Ok(TrajectoryStep {
            index,
            state_before: *state,
            axis_measured: *axis_i,
            p_up,
            // The outcome is certain: whichever eigenvector the state already is.
            s: if p_up >= 0.5 { Outcome::Up } else { Outcome::Down },
            state_after: *state,
            axis_next: *axis_i,
            s_i: 0.0,
            s_up_next: 0.0,
            no_collapse: true,
        });
    }

    let axis_next = solution.next_axis();
    let s = match chooser {
        Chooser::Risk(risk) => {
            let ctx = RiskContext {
                state: *state,
                axis_i: *axis_i,
            };
            select_outcome(risk.as_ref(), &axis_next, &ctx)?.s
        }
        Chooser::Born => {
            if rng.gen::<f64>() < p_up {
                Outcome::Up
            } else {
                Outcome::Down
            }
        }
    };

    Ok(TrajectoryStep {
        index,
        state_before: *state,
        axis_measured: *axis_i,
        p_up,
        s,
        state_after: state_from_eigenvector(axis_i, s),
        axis_next,
        s_i: h(p_up) * config.solver.base.scale(),
        s_up_next: solution.objective,
        no_collapse: false,
    })
}

/// Runs `config.steps` measurements; step `k + 1` starts from the collapsed
/// state and next axis of step `k`.
pub fn simulate(
    initial_state: &PureState,
    initial_axis: &Axis,
    config: &SimConfig,
) -> Result<Vec<TrajectoryStep>> {
    config.validate()?;
    let chooser = Chooser::for_rule(&config.outcome_rule)?;
    let mut rng = match config.outcome_rule {
        OutcomeRule::Born { seed } => rng_from_seed(seed),
        OutcomeRule::Risk(_) => rng_from_seed(0),
    };
    let mut out = Vec::with_capacity(config.steps);
    let (mut state, mut axis) = (*initial_state, *initial_axis);
    for index in 0..config.steps {
        let st = step_with(index, &state, &axis, config, &chooser, &mut rng)?;
        state = st.state_after;
        axis = st.axis_next;
        out.push(st);
    }
    Ok(out)
}
