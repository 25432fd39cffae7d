//! The next-axis extremal problem: minimize `S_↑(n_i, n_f)` over axes `n_f`
//! subject to `S_f(Ψ, n_f) = S_i(Ψ, n_i)`.
//!
//! With `m` the Bloch vector of Ψ, the Born probability along `n` is
//! `(1 + n·m)/2`. Binary entropy is two-to-one, so the constraint is the union
//! of two circles about `m` at Born levels `p_i` and `1 - p_i`, i.e. at
//! colatitudes `β` and `π - β` where `cos β = n_i·m`. `S_↑` depends on `n_f`
//! only through `|n_i·n_f|`, and on either circle `n_i·n_f` is an affine
//! function of `cos ψ` (ψ the azimuth measured from the half-plane holding
//! `n_i`). Its critical points on each circle are therefore the two points in
//! the plane of `m` and `n_i`:
//!
//! * `n_i` and `-n_i`, where `S_↑ = 0`;
//! * the mirror image `r = 2(n_i·m) m - n_i` of `n_i` about `m`, and `-r`,
//!   where `S_↑ = H((1 + |cos 2β|)/2)`.
//!
//! Additional stationary points exist where a circle crosses the great circle
//! `n_i·n_f = 0` (there `S_↑` attains its global maximum `ln 2`); they lie out
//! of plane and are not reported as extrema.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::{s_f, s_i, s_up, EntropyBase};
use crate::error::{Error, Result};
use crate::spin::{born_up, Axis, PureState};
use crate::vec3::Vec3;

/// Which candidate set the minimization ranges over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All axes satisfying the constraint. The global minimizers are `±n_i`.
    #[default]
    Strict,
    /// Excludes `±n_i`; the answer is the mirror image of `n_i` about `m`.
    Reflective,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Reflective => "reflective",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "reflective" => Ok(Mode::Reflective),
            other => Err(Error::InvalidConfig(format!(
                "mode must be `strict` or `reflective`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub base: EntropyBase,
    /// A Born probability this close to 0 or 1 marks an eigenstate.
    pub eigen_tol: f64,
    /// Angles closer than this are equal for tie-breaking and deduplication.
    pub angle_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            base: EntropyBase::Nats,
            eigen_tol: crate::DEFAULT_TOL,
            angle_tol: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn with_base(base: EntropyBase) -> Self {
        SolverConfig {
            base,
            ..Default::default()
        }
    }
}

/// True when measuring along `axis` leaves `state` unchanged.
pub fn is_eigenstate(state: &PureState, axis: &Axis, tol: f64) -> bool {
    let p = born_up(state, axis);
    p <= tol || p >= 1.0 - tol
}

/// `S_f(Ψ, n_f) - S_i(Ψ, n_i)`; zero exactly on the feasible set.
pub fn constraint_residual(
    state: &PureState,
    axis_i: &Axis,
    axis_f: &Axis,
    base: EntropyBase,
) -> f64 {
    s_f(state, axis_f, base) - s_i(state, axis_i, base)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleLevel {
    /// Born probability `born_up(Ψ, n_f)` shared by every axis on the circle.
    pub probability: f64,
    /// Angle between the circle's axes and the Bloch vector.
    pub colatitude: f64,
}

/// Axes satisfying the entropy constraint: one or two circles about the
/// Bloch vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleSet {
    pub bloch: Vec3,
    pub levels: Vec<FeasibleLevel>,
}

impl FeasibleSet {
    /// Point at azimuth `psi` on circle `level`, in a fixed frame about the
    /// Bloch vector that does not depend on the measured axis.
    pub fn point(&self, level: usize, psi: f64) -> Vec3 {
        let (u, w) = orthonormal_frame(self.bloch);
        let (sa, ca) = self.levels[level].colatitude.sin_cos();
        let (sp, cp) = psi.sin_cos();
        self.bloch * ca + (u * cp + w * sp) * sa
    }

    /// `n` evenly spaced axes around circle `level`.
    pub fn sample(&self, level: usize, n: usize) -> Vec<Axis> {
        (0..n)
            .filter_map(|k| Axis::from_vector(self.point(level, TAU * k as f64 / n as f64)).ok())
            .collect()
    }
}

/// Two unit vectors completing `m` to a right-handed orthonormal basis.
fn orthonormal_frame(m: Vec3) -> (Vec3, Vec3) {
    let [x, y, z] = m.0.map(f64::abs);
    let reference = if x <= y && x <= z {
        Vec3::X
    } else if y <= z {
        Vec3::Y
    } else {
        Vec3::Z
    };
    let u = reference
        .cross(m)
        .normalized()
        .expect("reference axis is never parallel to a unit vector's largest component");
    (u, m.cross(u))
}

/// The constraint surface for `(state, axis_i)`.
///
/// Returns [`Error::NoCollapse`] when the state is an eigenstate of the
/// measured projection: the constraint then degenerates to `S_f = 0`.
pub fn feasible_set(state: &PureState, axis_i: &Axis, config: &SolverConfig) -> Result<FeasibleSet> {
    if is_eigenstate(state, axis_i, config.eigen_tol) {
        return Err(Error::NoCollapse);
    }
    let p_i = born_up(state, axis_i);
    let mut levels = vec![level(p_i)];
    if (p_i - 0.5).abs() > config.eigen_tol {
        levels.push(level(1.0 - p_i));
    }
    Ok(FeasibleSet {
        bloch: state.bloch_vector(),
        levels,
    })
}

fn level(probability: f64) -> FeasibleLevel {
    FeasibleLevel {
        probability,
        colatitude: (2.0 * probability - 1.0).clamp(-1.0, 1.0).acos(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

/// A critical point of `S_↑` restricted to its feasible circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub axis: Axis,
    pub s_up: f64,
    pub kind: ExtremumKind,
    /// Born level of the circle the point lies on.
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSolution {
    /// Sorted by the canonical tie-break (smaller θ, then smaller φ).
    pub minimizers: Vec<Axis>,
    pub objective: f64,
    pub extrema: Vec<Extremum>,
    pub no_collapse: bool,
    pub mode: Mode,
}

impl SolverSolution {
    /// The canonical representative among tied minimizers.
    pub fn next_axis(&self) -> Axis {
        self.minimizers[0]
    }
}

/// Solves the extremal problem analytically.
pub fn solve(state: &PureState, axis_i: &Axis, mode: Mode, config: &SolverConfig) -> SolverSolution {
    if is_eigenstate(state, axis_i, config.eigen_tol) {
        return SolverSolution {
            minimizers: vec![*axis_i],
            objective: 0.0,
            extrema: Vec::new(),
            no_collapse: true,
            mode,
        };
    }

    let m = state.bloch_vector();
    let n_i = axis_i.unit_vector();
    let cos_beta = n_i.dot(m);
    debug_assert!(
        n_i.cross(m).norm() > 0.0,
        "parallel Bloch vector and axis imply an eigenstate"
    );
    let p_i = born_up(state, axis_i);
    let mirror = m * (2.0 * cos_beta) - n_i;
    let mirror_axis = Axis::from_vector(mirror).expect("mirror of a unit vector is a unit vector");
    let mirror_anti =
        Axis::from_vector(-mirror).expect("mirror of a unit vector is a unit vector");
    let mirror_s_up = s_up(axis_i, &mirror_axis, config.base);
    let mirror_anti_s_up = s_up(axis_i, &mirror_anti, config.base);

    // Classification along the circle: n_i·n_f is maximal at ψ = 0 and minimal
    // at ψ = π, and S_↑ decreases in |n_i·n_f|.
    let kind_at = |at_zero: bool, d: f64| {
        if (at_zero && d > 0.0) || (!at_zero && d < 0.0) {
            ExtremumKind::Min
        } else {
            ExtremumKind::Max
        }
    };
    let cos_2beta = n_i.dot(mirror);
    let candidates = [
        Extremum {
            axis: *axis_i,
            s_up: 0.0,
            kind: ExtremumKind::Min,
            level: p_i,
        },
        Extremum {
            axis: mirror_axis,
            s_up: mirror_s_up,
            kind: kind_at(false, cos_2beta),
            level: p_i,
        },
        Extremum {
            axis: axis_i.antipode(),
            s_up: 0.0,
            kind: ExtremumKind::Min,
            level: 1.0 - p_i,
        },
        Extremum {
            axis: mirror_anti,
            s_up: mirror_anti_s_up,
            kind: kind_at(true, -cos_2beta),
            level: 1.0 - p_i,
        },
    ];
    let mut extrema: Vec<Extremum> = Vec::with_capacity(4);
    for c in candidates {
        if !extrema
            .iter()
            .any(|e| e.axis.angle_to(&c.axis) <= config.angle_tol)
        {
            extrema.push(c);
        }
    }

    let (mut minimizers, objective) = match mode {
        Mode::Strict => (vec![*axis_i, axis_i.antipode()], 0.0),
        Mode::Reflective => {
            let best = mirror_s_up.min(mirror_anti_s_up);
            let mut picks = Vec::with_capacity(2);
            for (axis, value) in [(mirror_axis, mirror_s_up), (mirror_anti, mirror_anti_s_up)] {
                if value <= best + crate::DEFAULT_TOL {
                    picks.push(axis);
                }
            }
            (picks, best)
        }
    };
    minimizers.sort_by(|a, b| a.tie_break_cmp(b, config.angle_tol));
    minimizers.dedup_by(|a, b| a.angle_to(b) <= config.angle_tol);

    SolverSolution {
        minimizers,
        objective,
        extrema,
        no_collapse: false,
        mode,
    }
}

/// Stationary point of `S_↑` on a feasible circle located numerically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub axis: Axis,
    pub s_up: f64,
    pub kind: ExtremumKind,
    pub level: f64,
    /// Bisection steps used to refine the bracket.
    pub iterations: usize,
}

/// Samples per circle used to bracket sign changes of the azimuthal slope.
const AZIMUTH_SAMPLES: usize = 720;
const AZIMUTH_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 200;

/// Numeric counterpart of [`solve`] that makes no use of the in-plane
/// structure.
///
/// Each feasible circle is parametrized by its azimuth ψ in a frame fixed by
/// the Bloch vector alone. Every point of the parametrization satisfies the
/// constraint, so the problem reduces to one coordinate. The slope of `S_↑`
/// along ψ is bracketed on a uniform scan and each sign change is refined by
/// bisection to `|Δψ| < 1e-10` (at most 200 steps). All stationary points are
/// returned, including the out-of-plane maxima at `S_↑ = ln 2`.
pub fn critical_points_numeric(
    state: &PureState,
    axis_i: &Axis,
    config: &SolverConfig,
) -> Result<Vec<CriticalPoint>> {
    let set = feasible_set(state, axis_i, config)?;
    let n_i = axis_i.unit_vector();
    let mut out = Vec::new();

    for (idx, lvl) in set.levels.iter().enumerate() {
        let (u, w) = orthonormal_frame(set.bloch);
        let sa = lvl.colatitude.sin();
        // dS/dψ has the sign of (1 - 2q) q', with q = (1 + n_i·n_f)/2.
        let slope = |psi: f64| {
            let n_f = set.point(idx, psi);
            let (sp, cp) = psi.sin_cos();
            let tangent = (w * cp - u * sp) * sa;
            let q = (1.0 + n_i.dot(n_f)) / 2.0;
            (1.0 - 2.0 * q) * n_i.dot(tangent) / 2.0
        };
        let step = TAU / AZIMUTH_SAMPLES as f64;
        let mut prev = slope(0.0);
        for k in 1..=AZIMUTH_SAMPLES {
            let psi = step * k as f64;
            let cur = slope(psi);
            let falling = prev < 0.0 && cur >= 0.0;
            let rising = prev > 0.0 && cur <= 0.0;
            if falling || rising {
                let (mut lo, mut hi) = (psi - step, psi);
                let mut iterations = 0;
                while hi - lo > AZIMUTH_TOL && iterations < MAX_ITERATIONS {
                    let mid = 0.5 * (lo + hi);
                    if (slope(mid) < 0.0) == falling {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    iterations += 1;
                }
                let axis = Axis::from_vector(set.point(idx, 0.5 * (lo + hi)))?;
                out.push(CriticalPoint {
                    axis,
                    s_up: s_up(axis_i, &axis, config.base),
                    kind: if falling {
                        ExtremumKind::Min
                    } else {
                        ExtremumKind::Max
                    },
                    level: lvl.probability,
                    iterations,
                });
            }
            prev = cur;
        }
    }
    Ok(out)
}

/// Closed-form objective of the mirror points, `H((1 + |cos 2β|)/2)`.
pub fn mirror_objective(state: &PureState, axis_i: &Axis, base: EntropyBase) -> f64 {
    let beta = axis_i.unit_vector().angle_to(state.bloch_vector());
    crate::entropy::h((1.0 + (2.0 * beta).cos().abs()) / 2.0) * base.scale()
}

/// Colatitude of the mirror point about the Bloch vector equals `β`, so its
/// angular distance from `n_i` is `2β` and from `-n_i` is `π - 2β`.
pub fn mirror_separation(state: &PureState, axis_i: &Axis) -> f64 {
    let beta = axis_i.unit_vector().angle_to(state.bloch_vector());
    (2.0 * beta).min(PI - 2.0 * beta).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::binary_entropy;
    use crate::spin::canonicalize_axis;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn axis(t: f64, p: f64) -> Axis {
        canonicalize_axis(t, p).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn assert_axes(got: &[Axis], want: &[(f64, f64)]) {
        assert_eq!(got.len(), want.len(), "{got:?}");
        for (g, &(t, p)) in got.iter().zip(want) {
            assert!(
                g.angle_to(&axis(t, p)) < 1e-9,
                "got {g}, want ({t}, {p})"
            );
        }
    }

    #[test]
    fn residual_examples() {
        let st = PureState::new(0.3, 1.0).unwrap();
        let a = axis(1.0, 2.0);
        let b = EntropyBase::Nats;
        assert_eq!(constraint_residual(&st, &a, &a, b), 0.0);
        assert_abs_diff_eq!(
            constraint_residual(&st, &a, &a.antipode(), b),
            0.0,
            epsilon = 1e-12
        );
        let z_up = PureState::new(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            constraint_residual(&z_up, &axis(FRAC_PI_3, 0.0), &Axis::Z, b),
            -binary_entropy(0.75).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn feasible_set_two_levels() {
        let z_up = PureState::new(1.0, 0.0).unwrap();
        let set = feasible_set(&z_up, &axis(FRAC_PI_3, 0.0), &cfg()).unwrap();
        assert_eq!(set.levels.len(), 2);
        assert_abs_diff_eq!(set.levels[0].probability, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(set.levels[1].probability, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(set.levels[0].colatitude, FRAC_PI_3, epsilon = 1e-12);
        assert_abs_diff_eq!(set.levels[1].colatitude, 2.0 * FRAC_PI_3, epsilon = 1e-12);
        assert!((set.bloch - Vec3::Z).norm() < 1e-12);
    }

    #[test]
    fn feasible_set_single_great_circle() {
        let x_up = PureState::new(0.5, 0.0).unwrap();
        let set = feasible_set(&x_up, &Axis::Z, &cfg()).unwrap();
        assert_eq!(set.levels.len(), 1);
        assert_abs_diff_eq!(set.levels[0].colatitude, FRAC_PI_2, epsilon = 1e-12);
        assert!((set.bloch - Vec3::X).norm() < 1e-12);
    }

    #[test]
    fn feasible_set_of_eigenstate_signals_no_collapse() {
        let z_up = PureState::new(1.0, 0.0).unwrap();
        assert_eq!(feasible_set(&z_up, &Axis::Z, &cfg()), Err(Error::NoCollapse));
    }

    #[test]
    fn sampled_circle_points_satisfy_constraint() {
        let st = PureState::new(0.8, 2.0).unwrap();
        let ai = axis(2.2, 0.4);
        let set = feasible_set(&st, &ai, &cfg()).unwrap();
        for lvl in 0..set.levels.len() {
            for a in set.sample(lvl, 64) {
                assert!(constraint_residual(&st, &ai, &a, EntropyBase::Nats).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn strict_on_great_circle() {
        let x_up = PureState::new(0.5, 0.0).unwrap();
        let sol = solve(&x_up, &Axis::Z, Mode::Strict, &cfg());
        assert!(!sol.no_collapse);
        assert_axes(&sol.minimizers, &[(0.0, 0.0), (PI, 0.0)]);
        assert_eq!(sol.objective, 0.0);
        // Coinciding levels: the mirror points are ±n_i themselves.
        assert_eq!(sol.extrema.len(), 2);
    }

    #[test]
    fn strict_general_position() {
        let z_up = PureState::new(1.0, 0.0).unwrap();
        let sol = solve(&z_up, &axis(FRAC_PI_3, 0.0), Mode::Strict, &cfg());
        assert_axes(&sol.minimizers, &[(FRAC_PI_3, 0.0), (2.0 * FRAC_PI_3, PI)]);
        assert_eq!(sol.objective, 0.0);
        assert_eq!(sol.extrema.len(), 4);
    }

    #[test]
    fn reflective_general_position() {
        let z_up = PureState::new(1.0, 0.0).unwrap();
        let sol = solve(&z_up, &axis(FRAC_PI_3, 0.0), Mode::Reflective, &cfg());
        assert_axes(&sol.minimizers, &[(FRAC_PI_3, PI), (2.0 * FRAC_PI_3, 0.0)]);
        assert_abs_diff_eq!(sol.objective, binary_entropy(0.25).unwrap(), epsilon = 1e-12);
        // cos 2β = -1/2 < 0: the mirror points are local minima on their circles.
        for e in &sol.extrema {
            assert_eq!(e.kind, ExtremumKind::Min);
        }
    }

    #[test]
    fn reflective_mirror_is_maximum_when_cos_2beta_positive() {
        // β = π/6: cos 2β = 1/2.
        let z_up = PureState::new(1.0, 0.0).unwrap();
        let sol = solve(&z_up, &axis(PI / 6.0, 0.0), Mode::Reflective, &cfg());
        let kinds: Vec<_> = sol.extrema.iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            [
                ExtremumKind::Min,
                ExtremumKind::Max,
                ExtremumKind::Min,
                ExtremumKind::Max
            ]
        );
        assert_axes(&sol.minimizers, &[(PI / 6.0, PI), (5.0 * PI / 6.0, 0.0)]);
    }

    #[test]
    fn eigenstate_is_a_fixed_point() {
        let z_up = PureState::new(1.0, 0.0).unwrap();
        for mode in [Mode::Strict, Mode::Reflective] {
            let sol = solve(&z_up, &Axis::Z, mode, &cfg());
            assert!(sol.no_collapse);
            assert_eq!(sol.minimizers, vec![Axis::Z]);
            assert_eq!(sol.objective, 0.0);
            assert!(sol.extrema.is_empty());
        }
        // Down eigenstate of the measured axis.
        let z_down = PureState::new(0.0, 0.0).unwrap();
        assert!(solve(&z_down, &Axis::Z, Mode::Strict, &cfg()).no_collapse);
    }

    #[test]
    fn numeric_path_finds_the_analytic_extrema() {
        let st = PureState::new(0.83, 1.7).unwrap();
        let ai = axis(2.4, 5.1);
        let sol = solve(&st, &ai, Mode::Strict, &cfg());
        let numeric = critical_points_numeric(&st, &ai, &cfg()).unwrap();
        for e in &sol.extrema {
            let hit = numeric
                .iter()
                .find(|c| c.axis.angle_to(&e.axis) < 1e-8)
                .unwrap_or_else(|| panic!("no numeric critical point near {}", e.axis));
            assert_eq!(hit.kind, e.kind, "at {}", e.axis);
            assert!(hit.iterations <= MAX_ITERATIONS);
        }
        let ln2 = std::f64::consts::LN_2;
        for c in &numeric {
            let in_plane = sol.extrema.iter().any(|e| e.axis.angle_to(&c.axis) < 1e-8);
            assert!(in_plane || (c.s_up - ln2).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn mirror_helpers() {
        let z_up = PureState::new(1.0, 0.0).unwrap();
        let a = axis(FRAC_PI_3, 0.0);
        assert_abs_diff_eq!(
            mirror_objective(&z_up, &a, EntropyBase::Nats),
            binary_entropy(0.25).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(mirror_separation(&z_up, &a), FRAC_PI_3, epsilon = 1e-12);
    }

    #[test]
    fn mode_parses() {
        assert_eq!("strict".parse::<Mode>().unwrap(), Mode::Strict);
        assert_eq!("reflective".parse::<Mode>().unwrap(), Mode::Reflective);
        assert!("loose".parse::<Mode>().is_err());
    }
}
