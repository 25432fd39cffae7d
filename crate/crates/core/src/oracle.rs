//! Exhaustive grid search over next-axis directions, used to validate the
//! analytic solver independently of its geometric construction.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{s_up, EntropyBase};
use crate::error::{Error, Result};
use crate::solver::{constraint_residual, is_eigenstate};
use crate::spin::{canonicalize_axis, Axis, PureState};

pub const MIN_GRID: usize = 8;

/// Uniform `(θ, φ)` grid: θ runs over `[0, π]` inclusive, φ over `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        SphereGrid { n_theta, n_phi }
    }

    pub fn theta(&self, row: usize) -> f64 {
        if self.n_theta < 2 {
            return 0.0;
        }
        PI * row as f64 / (self.n_theta - 1) as f64
    }

    pub fn phi(&self, col: usize) -> f64 {
        TAU * col as f64 / self.n_phi as f64
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Canonical axis at grid cell `(row, col)`.
    pub fn axis(&self, row: usize, col: usize) -> Axis {
        canonicalize_axis(self.theta(row), self.phi(col)).expect("grid angles are finite")
    }

    /// Largest angular gap between neighbouring grid points.
    pub fn resolution(&self) -> f64 {
        let d_theta = PI / (self.n_theta.max(2) - 1) as f64;
        let d_phi = TAU / self.n_phi.max(1) as f64;
        d_theta.max(d_phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleQuery {
    pub grid: SphereGrid,
    /// Keep grid points with `|S_f - S_i|` at most this.
    pub constraint_tol: f64,
    /// Drop points within this angle of `n_i` or `-n_i`.
    pub exclude_radius: Option<f64>,
    pub base: EntropyBase,
}

impl OracleQuery {
    pub fn new(grid: SphereGrid, constraint_tol: f64) -> Self {
        OracleQuery {
            grid,
            constraint_tol,
            exclude_radius: None,
            base: EntropyBase::Nats,
        }
    }

    pub fn excluding(mut self, radius: f64) -> Self {
        self.exclude_radius = Some(radius);
        self
    }

    pub fn in_base(mut self, base: EntropyBase) -> Self {
        self.base = base;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub axis: Axis,
    pub objective: f64,
    pub residual: f64,
    /// Grid points that passed the constraint and exclusion filters.
    pub feasible_points: usize,
    pub grid_points: usize,
}

/// Best feasible grid point for the extremal problem.
///
/// Ties are resolved towards the first point in row-major `(θ, φ)` order, so
/// the answer does not depend on how rows are scheduled across threads.
pub fn brute_force_oracle(
    state: &PureState,
    axis_i: &Axis,
    query: &OracleQuery,
) -> Result<OracleResult> {
    let OracleQuery {
        grid,
        constraint_tol,
        exclude_radius,
        base,
    } = *query;
    if grid.n_theta < MIN_GRID || grid.n_phi < MIN_GRID {
        return Err(Error::GridTooSmall {
            n_theta: grid.n_theta,
            n_phi: grid.n_phi,
            min: MIN_GRID,
        });
    }
    if !(constraint_tol > 0.0) {
        return Err(Error::NonPositive {
            what: "constraint tolerance",
            value: constraint_tol,
        });
    }
    if let Some(r) = exclude_radius {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::NonPositive {
                what: "exclusion radius",
                value: r,
            });
        }
    }
    if is_eigenstate(state, axis_i, crate::DEFAULT_TOL) {
        return Err(Error::NoCollapse);
    }

    let n_i = axis_i.unit_vector();
    let max_dot = exclude_radius.map(f64::cos);

    // (objective, row-major index, residual), reduced lexicographically.
    let rows: Vec<(Option<(f64, usize, f64, Axis)>, usize)> = (0..grid.n_theta)
        .into_par_iter()
        .map(|row| {
            let mut best: Option<(f64, usize, f64, Axis)> = None;
            let mut feasible = 0;
            for col in 0..grid.n_phi {
                let axis = grid.axis(row, col);
                if let Some(limit) = max_dot {
                    if axis.unit_vector().dot(n_i).abs() >= limit {
                        continue;
                    }
                }
                let residual = constraint_residual(state, axis_i, &axis, base);
                if residual.abs() > constraint_tol {
                    continue;
                }
                feasible += 1;
                let objective = s_up(axis_i, &axis, base);
                if best.map_or(true, |(b, ..)| objective < b) {
                    best = Some((objective, row * grid.n_phi + col, residual, axis));
                }
            }
            (best, feasible)
        })
        .collect();

    let feasible_points = rows.iter().map(|(_, f)| f).sum();
    let best = rows
        .into_iter()
        .filter_map(|(b, _)| b)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    match best {
        Some((objective, _, residual, axis)) => Ok(OracleResult {
            axis,
            objective,
            residual,
            feasible_points,
            grid_points: grid.len(),
        }),
        None => Err(Error::Infeasible {
            n_theta: grid.n_theta,
            n_phi: grid.n_phi,
            constraint_tol,
        }),
    }
}
