use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use spincollapse_core::oracle::brute_force_oracle;
use spincollapse_core::sim::RNG_NAME;
use spincollapse_core::{
    born_up, constraint_residual, feasible_set, risk_by_name, s_f, s_i, s_up, simulate as run_sim,
    solve as run_solve, Axis, Error, FeasibleSet, Mode, OracleQuery, OracleResult, OutcomeRule,
    PureState, SimConfig, SolverConfig, SolverSolution, SphereGrid, TrajectoryStep,
};

use crate::args::{LandscapeArgs, OracleArgs, SimulateArgs, SolveArgs};
use crate::envelope::{DocFormat, OutputEnvelope, TableFormat};
use crate::{CliError, Output, EXIT_INFEASIBLE, EXIT_OK};

const REFLECTIVE_NOTE: &str =
    "reflective mode excludes the trivial minimizers (the measured axis and its antipode); it extends the literal extremal problem";

#[derive(Serialize)]
struct SolveResults<'a> {
    state: PureState,
    axis_i: Axis,
    p_i: f64,
    s_i: f64,
    #[serde(flatten)]
    solution: &'a SolverSolution,
    feasible_set: Option<FeasibleSet>,
}

fn solver_config(common: &crate::args::CommonArgs) -> Result<SolverConfig, CliError> {
    common.check_tol()?;
    Ok(SolverConfig {
        base: common.entropy_base,
        eigen_tol: common.tol,
        ..SolverConfig::default()
    })
}

fn solve_results<'a>(
    state: PureState,
    axis_i: Axis,
    solution: &'a SolverSolution,
    cfg: &SolverConfig,
) -> SolveResults<'a> {
    SolveResults {
        state,
        axis_i,
        p_i: born_up(&state, &axis_i),
        s_i: s_i(&state, &axis_i, cfg.base),
        solution,
        feasible_set: feasible_set(&state, &axis_i, cfg).ok(),
    }
}

pub fn solve(args: &SolveArgs) -> Result<Output, CliError> {
    let format = DocFormat::parse(args.common.format.as_deref())?;
    let cfg = solver_config(&args.common)?;
    let state = args.state.state()?;
    let axis_i = args.common.axis_i()?;

    let solution = run_solve(&state, &axis_i, args.mode, &cfg);
    let results = solve_results(state, axis_i, &solution, &cfg);
    let mut env = OutputEnvelope::new("solve", args, cfg.base, args.mode, &results)?;
    if solution.no_collapse {
        env.warn("state is an eigenstate of the measured projection: no collapse, axis unchanged");
    }
    if args.mode == Mode::Reflective {
        env.warn(REFLECTIVE_NOTE);
    }
    Ok(Output {
        text: env.render(format)?,
        code: EXIT_OK,
    })
}

fn grid(spec: crate::args::GridSpec, min: usize) -> Result<SphereGrid, CliError> {
    if spec.n_theta < min || spec.n_phi < min {
        return Err(CliError::Usage(format!(
            "grid must be at least {min}x{min}, got {spec}"
        )));
    }
    Ok(SphereGrid::new(spec.n_theta, spec.n_phi))
}

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn landscape(args: &LandscapeArgs) -> Result<Output, CliError> {
    let format = TableFormat::parse(args.common.format.as_deref())?;
    let cfg = solver_config(&args.common)?;
    let state = args.state.state()?;
    let axis_i = args.common.axis_i()?;
    let grid = grid(args.grid, 2)?;
    let d = format.delimiter();

    let rows: Vec<String> = (0..grid.n_theta)
        .into_par_iter()
        .map(|row| {
            let mut text = String::new();
            for col in 0..grid.n_phi {
                let axis_f = grid.axis(row, col);
                let fields = [
                    axis_f.theta(),
                    axis_f.phi(),
                    born_up(&state, &axis_f),
                    s_f(&state, &axis_f, cfg.base),
                    constraint_residual(&state, &axis_i, &axis_f, cfg.base),
                    s_up(&axis_i, &axis_f, cfg.base),
                ];
                let line: Vec<String> = fields.iter().map(|&v| num(v)).collect();
                let _ = writeln!(text, "{}", line.join(&d.to_string()));
            }
            text
        })
        .collect();

    let header = ["theta_f", "phi_f", "p_up", "s_f", "constraint_residual", "s_up"];
    let mut text = header.join(&d.to_string());
    text.push('\n');
    for r in rows {
        text.push_str(&r);
    }
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct Discrepancy {
    /// Oracle objective minus analytic objective.
    objective: f64,
    /// Angle from the oracle's axis to the nearest analytic minimizer.
    angle: f64,
}

#[derive(Serialize)]
struct OracleReport<'a> {
    status: &'static str,
    no_collapse: bool,
    grid: SphereGrid,
    grid_resolution: f64,
    constraint_tol: f64,
    exclude_radius: Option<f64>,
    analytic: SolveResults<'a>,
    oracle: Option<OracleResult>,
    discrepancy: Option<Discrepancy>,
    error: Option<String>,
}

pub fn oracle(args: &OracleArgs) -> Result<Output, CliError> {
    let format = DocFormat::parse(args.common.format.as_deref())?;
    let cfg = solver_config(&args.common)?;
    let state = args.state.state()?;
    let axis_i = args.common.axis_i()?;
    let grid = grid(args.grid, spincollapse_core::oracle::MIN_GRID)?;
    if !(args.constraint_tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--constraint-tol must be positive, got {}",
            args.constraint_tol
        )));
    }
    let exclude = match args.exclude_trivial {
        Some(r) if !(r >= 0.0) => {
            return Err(CliError::Usage(format!(
                "--exclude-trivial must be non-negative, got {r}"
            )))
        }
        Some(r) if args.common.degrees => Some(r.to_radians()),
        other => other,
    };
    let mode = args
        .mode
        .unwrap_or(if exclude.is_some() { Mode::Reflective } else { Mode::Strict });

    let solution = run_solve(&state, &axis_i, mode, &cfg);
    let mut query = OracleQuery::new(grid, args.constraint_tol).in_base(cfg.base);
    query.exclude_radius = exclude;

    let mut report = OracleReport {
        status: "ok",
        no_collapse: solution.no_collapse,
        grid,
        grid_resolution: grid.resolution(),
        constraint_tol: args.constraint_tol,
        exclude_radius: exclude,
        analytic: solve_results(state, axis_i, &solution, &cfg),
        oracle: None,
        discrepancy: None,
        error: None,
    };
    let mut code = EXIT_OK;
    // The oracle uses the same eigenstate threshold as the solver.
    let outcome = if solution.no_collapse {
        Err(Error::NoCollapse)
    } else {
        brute_force_oracle(&state, &axis_i, &query)
    };
    match outcome {
        Ok(res) => {
            let angle = solution
                .minimizers
                .iter()
                .map(|m| m.angle_to(&res.axis))
                .fold(f64::INFINITY, f64::min);
            report.discrepancy = Some(Discrepancy {
                objective: res.objective - solution.objective,
                angle,
            });
            report.oracle = Some(res);
        }
        Err(Error::NoCollapse) => {
            report.status = "no_collapse";
        }
        Err(e @ Error::Infeasible { .. }) => {
            report.status = "infeasible";
            report.error = Some(e.to_string());
            code = EXIT_INFEASIBLE;
        }
        Err(e) => return Err(e.into()),
    }

    let mut env = OutputEnvelope::new("oracle", args, cfg.base, mode, &report)?;
    if solution.no_collapse {
        env.warn("state is an eigenstate of the measured projection: no collapse, axis unchanged");
    }
    if mode == Mode::Reflective {
        env.warn(REFLECTIVE_NOTE);
    }
    if exclude.is_some() {
        env.warn("the oracle reports the global minimum outside the excluded caps, which generally sits on a cap boundary rather than at a reflective-mode critical point");
    }
    Ok(Output {
        text: env.render(format)?,
        code,
    })
}

#[derive(Serialize)]
struct RiskInfo {
    name: String,
    description: String,
    stand_in: bool,
}

#[derive(Serialize)]
struct SimulateResults {
    outcome_rule: String,
    seed: Option<u64>,
    rng: &'static str,
    risk: Option<RiskInfo>,
    steps: usize,
    trajectory: Vec<TrajectoryStep>,
}

pub fn simulate(args: &SimulateArgs) -> Result<Output, CliError> {
    let format = DocFormat::parse(args.common.format.as_deref())?;
    let cfg = solver_config(&args.common)?;
    let state = args.state.state()?;
    let axis_i = args.common.axis_i()?;
    if args.steps < 1 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let rule = match args.outcome.parse::<OutcomeRule>()? {
        OutcomeRule::Born { .. } => match args.seed {
            Some(seed) => OutcomeRule::Born { seed },
            None => {
                return Err(CliError::Usage(
                    "--outcome born needs --seed <u64>".into(),
                ))
            }
        },
        risk => risk,
    };
    let risk = match &rule {
        OutcomeRule::Risk(name) => {
            let r = risk_by_name(name)?;
            Some(RiskInfo {
                name: r.name().to_owned(),
                description: r.description().to_owned(),
                stand_in: true,
            })
        }
        OutcomeRule::Born { .. } => None,
    };

    let sim_cfg = SimConfig {
        steps: args.steps,
        mode: args.mode,
        outcome_rule: rule.clone(),
        solver: cfg,
    };
    let trajectory = run_sim(&state, &axis_i, &sim_cfg)?;
    let results = SimulateResults {
        outcome_rule: rule.to_string(),
        seed: match rule {
            OutcomeRule::Born { seed } => Some(seed),
            OutcomeRule::Risk(_) => None,
        },
        rng: RNG_NAME,
        risk,
        steps: args.steps,
        trajectory,
    };

    let mut env = OutputEnvelope::new("simulate", args, cfg.base, args.mode, &results)?;
    match &rule {
        OutcomeRule::Risk(name) => env.warn(format!(
            "risk function `{name}` is a stand-in: the model leaves the form of the risk function open"
        )),
        OutcomeRule::Born { .. } => env.warn(
            "born outcome rule is a standard quantum mechanics baseline, not the risk-minimizing model",
        ),
    }
    if matches!(rule, OutcomeRule::Risk(_)) && args.seed.is_some() {
        env.warn("--seed is ignored by risk-based outcome selection");
    }
    if args.mode == Mode::Reflective {
        env.warn(REFLECTIVE_NOTE);
    }
    Ok(Output {
        text: env.render(format)?,
        code: EXIT_OK,
    })
}

pub fn replay(path: &Path) -> Result<Output, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let env: OutputEnvelope =
        serde_json::from_str(&text).map_err(|e| CliError::Document(e.to_string()))?;
    let input = env.input;
    let decode = |e: serde_json::Error| CliError::Document(format!("bad input echo: {e}"));
    match env.command.as_str() {
        "solve" => solve(&serde_json::from_value(input).map_err(decode)?),
        "oracle" => oracle(&serde_json::from_value(input).map_err(decode)?),
        "simulate" => simulate(&serde_json::from_value(input).map_err(decode)?),
        other => Err(CliError::Document(format!(
            "cannot replay command `{other}`"
        ))),
    }
}
