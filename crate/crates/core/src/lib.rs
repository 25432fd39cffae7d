//! Entropy-constrained model of the state change at a spin-1/2 projection
//! measurement.
//!
//! Given a pure state and the axis being measured, the observer's next
//! measurement axis is the minimizer of the entropy `S_↑` of the measured
//! eigenbasis relative to the next one, subject to the next axis carrying the
//! same measurement entropy as the current one. The measured outcome is the
//! one of least risk under a pluggable risk function.
//!
//! * [`spin`]: axes, states, σ·n, eigenvectors, Born probabilities.
//! * [`entropy`]: the binary-entropy functionals.
//! * [`solver`]: analytic and numeric solutions of the extremal problem.
//! * [`oracle`]: exhaustive grid search used for validation.
//! * [`risk`]: outcome selection.
//! * [`sim`]: multi-step measurement trajectories.

pub mod entropy;
pub mod error;
pub mod oracle;
pub mod risk;
pub mod sim;
pub mod solver;
pub mod spin;
pub mod vec3;

/// Default absolute tolerance for O(1) double-precision quantities.
pub const DEFAULT_TOL: f64 = 1e-12;

pub use entropy::{binary_entropy, binary_entropy_in, s_down, s_f, s_i, s_up, EntropyBase};
pub use error::{Error, Result};
pub use oracle::{brute_force_oracle, OracleQuery, OracleResult, SphereGrid};
pub use risk::{builtin_risks, risk_by_name, select_outcome, RiskContext, RiskFunction, Selection};
pub use sim::{simulate, step, OutcomeRule, SimConfig, TrajectoryStep};
pub use solver::{
    constraint_residual, critical_points_numeric, feasible_set, is_eigenstate, solve, Extremum,
    ExtremumKind, FeasibleSet, Mode, SolverConfig, SolverSolution,
};
pub use spin::{
    born, born_up, canonicalize_axis, eigenpair, eigenvector, overlap, spin_operator,
    state_from_eigenvector, Axis, Outcome, PureState, SpinOperator, Spinor,
};
pub use vec3::Vec3;
