//! Spin-1/2 kinematics: measurement axes, pure states, the projection
//! operator σ·n and its eigenvectors, overlaps and Born probabilities.
//!
//! Phase conventions are fixed so that results are reproducible bit for bit:
//!
//! * eigenvectors of σ(θ, φ) are
//!   `|↑⟩ = (cos(θ/2) e^{-iφ}, sin(θ/2))` and `|↓⟩ = (-sin(θ/2) e^{-iφ}, cos(θ/2))`;
//! * pure states are stored as `(√ρ e^{-iτ}, √(1-ρ))`, i.e. with the second
//!   amplitude real and non-negative.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::vec3::Vec3;

/// Angles closer than this to a pole (or to 2π for the azimuth) are snapped.
const SNAP: f64 = 1e-14;

/// Result of a single spin-projection measurement, `s = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Outcome {
    Up,
    Down,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Up, Outcome::Down];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Up => 1.0,
            Outcome::Down => -1.0,
        }
    }

    pub fn flip(self) -> Outcome {
        match self {
            Outcome::Up => Outcome::Down,
            Outcome::Down => Outcome::Up,
        }
    }
}

impl From<Outcome> for i8 {
    fn from(s: Outcome) -> i8 {
        match s {
            Outcome::Up => 1,
            Outcome::Down => -1,
        }
    }
}

impl TryFrom<i8> for Outcome {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Outcome::Up),
            -1 => Ok(Outcome::Down),
            other => Err(format!("spin projection must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Up => "+1",
            Outcome::Down => "-1",
        })
    }
}

/// A measurement direction on the unit sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
///
/// At the poles the azimuth is meaningless and is stored as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAxis")]
pub struct Axis {
    theta: f64,
    phi: f64,
}

#[derive(Deserialize)]
struct RawAxis {
    theta: f64,
    phi: f64,
}

impl TryFrom<RawAxis> for Axis {
    type Error = Error;
    fn try_from(raw: RawAxis) -> Result<Axis> {
        canonicalize_axis(raw.theta, raw.phi)
    }
}

/// Reduces arbitrary finite angles to the canonical `(θ, φ)` describing the
/// same direction.
pub fn canonicalize_axis(theta_raw: f64, phi_raw: f64) -> Result<Axis> {
    let mut theta = finite("theta", theta_raw)?.rem_euclid(TAU) + 0.0;
    let mut phi = finite("phi", phi_raw)?;
    if theta > PI {
        theta = TAU - theta;
        phi += PI;
    }
    Ok(Axis::snapped(theta, phi))
}

impl Axis {
    /// The z axis, `(0, 0)`.
    pub const Z: Axis = Axis { theta: 0.0, phi: 0.0 };

    pub fn new(theta: f64, phi: f64) -> Result<Axis> {
        canonicalize_axis(theta, phi)
    }

    /// Direction of a non-zero 3-vector.
    pub fn from_vector(v: Vec3) -> Result<Axis> {
        for c in v.0 {
            finite("vector component", c)?;
        }
        let rho = v.x().hypot(v.y());
        if rho == 0.0 && v.z() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Axis::snapped(rho.atan2(v.z()), v.y().atan2(v.x())))
    }

    /// `theta` must already lie in `[0, π]`.
    fn snapped(mut theta: f64, phi: f64) -> Axis {
        // `+ 0.0` turns a `-0.0` left by rem_euclid into `+0.0`.
        let mut phi = phi.rem_euclid(TAU) + 0.0;
        if TAU - phi < SNAP {
            phi = 0.0;
        }
        if theta < SNAP {
            theta = 0.0;
            phi = 0.0;
        } else if PI - theta < SNAP {
            theta = PI;
            phi = 0.0;
        }
        Axis { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn is_pole(&self) -> bool {
        self.theta == 0.0 || self.theta == PI
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn unit_vector(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }

    /// The opposite direction, `(π - θ, φ + π)`.
    pub fn antipode(&self) -> Axis {
        Axis::snapped(PI - self.theta, self.phi + PI)
    }

    /// Great-circle distance to another axis.
    pub fn angle_to(&self, other: &Axis) -> f64 {
        self.unit_vector().angle_to(other.unit_vector())
    }

    /// Canonical ordering used to break ties between equally good axes:
    /// smaller θ first, then smaller φ. Angles closer than `tol` compare equal.
    pub fn tie_break_cmp(&self, other: &Axis, tol: f64) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let by = |a: f64, b: f64| {
            if (a - b).abs() <= tol {
                Ordering::Equal
            } else {
                a.total_cmp(&b)
            }
        };
        by(self.theta, other.theta).then_with(|| by(self.phi, other.phi))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(θ={}, φ={})", self.theta, self.phi)
    }
}

/// A pair of complex amplitudes of unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    up: Complex64,
    down: Complex64,
}

impl Spinor {
    /// Checks normalization to within `1e-12`.
    pub fn new(up: Complex64, down: Complex64) -> Result<Spinor> {
        let n2 = up.norm_sqr() + down.norm_sqr();
        if (n2 - 1.0).abs() > crate::DEFAULT_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Spinor { up, down })
    }

    /// Rescales arbitrary amplitudes to unit norm.
    pub fn normalized(up: Complex64, down: Complex64) -> Result<Spinor> {
        finite("amplitude", up.re + up.im + down.re + down.im)?;
        let n = up.norm_sqr() + down.norm_sqr();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        let k = 1.0 / n.sqrt();
        Ok(Spinor {
            up: up * k,
            down: down * k,
        })
    }

    pub fn up_component(&self) -> Complex64 {
        self.up
    }

    pub fn down_component(&self) -> Complex64 {
        self.down
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }
}

/// Standard inner product `⟨bra|ket⟩`, conjugate-linear in `bra`.
pub fn overlap(bra: &Spinor, ket: &Spinor) -> Complex64 {
    bra.up.conj() * ket.up + bra.down.conj() * ket.down
}

/// A 2×2 complex matrix; constructed here only as σ·n or a Pauli matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOperator {
    m: [[Complex64; 2]; 2],
}

impl SpinOperator {
    pub fn from_entries(m: [[Complex64; 2]; 2]) -> SpinOperator {
        SpinOperator { m }
    }

    pub fn sigma_x() -> SpinOperator {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        SpinOperator { m: [[o, l], [l, o]] }
    }

    pub fn sigma_y() -> SpinOperator {
        let o = Complex64::new(0.0, 0.0);
        SpinOperator {
            m: [[o, -Complex64::i()], [Complex64::i(), o]],
        }
    }

    pub fn sigma_z() -> SpinOperator {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        SpinOperator { m: [[l, o], [o, -l]] }
    }

    pub fn identity() -> SpinOperator {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        SpinOperator { m: [[l, o], [o, l]] }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.m[1][0] - self.m[0][1].conj()).norm() <= tol
            && self.m[0][0].im.abs() <= tol
            && self.m[1][1].im.abs() <= tol
    }

    /// Matrix-vector product; the result is not renormalized.
    pub fn apply(&self, v: &Spinor) -> [Complex64; 2] {
        [
            self.m[0][0] * v.up + self.m[0][1] * v.down,
            self.m[1][0] * v.up + self.m[1][1] * v.down,
        ]
    }

    pub fn matmul(&self, rhs: &SpinOperator) -> SpinOperator {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.m[r][0] * rhs.m[0][c] + self.m[r][1] * rhs.m[1][c];
            }
        }
        SpinOperator { m: out }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SpinOperator) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }
}

/// σ(θ, φ) = σ·n.
pub fn spin_operator(axis: &Axis) -> SpinOperator {
    let (st, ct) = axis.theta.sin_cos();
    let e = Complex64::from_polar(st, -axis.phi);
    SpinOperator {
        m: [
            [Complex64::new(ct, 0.0), e],
            [e.conj(), Complex64::new(-ct, 0.0)],
        ],
    }
}

/// Orthonormal eigenvectors `(|↑⟩, |↓⟩)` of σ(axis) for eigenvalues +1 and -1.
pub fn eigenpair(axis: &Axis) -> (Spinor, Spinor) {
    let (sh, ch) = (axis.theta / 2.0).sin_cos();
    let phase = Complex64::from_polar(1.0, -axis.phi);
    let up = Spinor {
        up: phase * ch,
        down: Complex64::new(sh, 0.0),
    };
    let down = Spinor {
        up: -phase * sh,
        down: Complex64::new(ch, 0.0),
    };
    (up, down)
}

/// Eigenvector of σ(axis) for the given outcome.
pub fn eigenvector(axis: &Axis, s: Outcome) -> Spinor {
    let (up, down) = eigenpair(axis);
    match s {
        Outcome::Up => up,
        Outcome::Down => down,
    }
}

/// A normalized pure state `(√ρ e^{-iτ}, √(1-ρ))`.
///
/// When ρ is 0 or 1 the phase τ carries no information and is stored as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct PureState {
    rho: f64,
    tau: f64,
}

#[derive(Deserialize)]
struct RawState {
    rho: f64,
    tau: f64,
}

impl TryFrom<RawState> for PureState {
    type Error = Error;
    fn try_from(raw: RawState) -> Result<PureState> {
        PureState::new(raw.rho, raw.tau)
    }
}

impl PureState {
    /// ρ within `1e-12` outside `[0, 1]` is clamped; further out is rejected.
    pub fn new(rho: f64, tau: f64) -> Result<PureState> {
        let rho = clamp_probability(finite("rho", rho)?)?;
        let tau = finite("tau", tau)?.rem_euclid(TAU) + 0.0;
        Ok(PureState::canonical(rho, tau))
    }

    fn canonical(rho: f64, tau: f64) -> PureState {
        let mut tau = tau;
        if rho == 0.0 || rho == 1.0 || TAU - tau < SNAP {
            tau = 0.0;
        }
        PureState { rho, tau }
    }

    /// Reduces arbitrary (not necessarily normalized) amplitudes to canonical
    /// form by removing the global phase: the second amplitude is made real
    /// and non-negative, or, when it vanishes, the first is made real positive.
    pub fn from_amplitudes(up: Complex64, down: Complex64) -> Result<PureState> {
        let v = Spinor::normalized(up, down)?;
        PureState::from_spinor(&v)
    }

    pub fn from_spinor(v: &Spinor) -> Result<PureState> {
        let n2 = v.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroState);
        }
        let rho = (v.up.norm_sqr() / n2).clamp(0.0, 1.0);
        if v.down.norm_sqr() == 0.0 {
            return Ok(PureState { rho: 1.0, tau: 0.0 });
        }
        // Rotate the global phase so that the lower amplitude is real positive;
        // the upper one then reads √ρ e^{-iτ}.
        let gauge = v.down.conj() / v.down.norm();
        let a = v.up * gauge;
        let tau = (-a.arg()).rem_euclid(TAU) + 0.0;
        Ok(PureState::canonical(rho, tau))
    }

    /// Pure state with the given Bloch direction.
    pub fn from_bloch(m: Vec3) -> Result<PureState> {
        let axis = Axis::from_vector(m)?;
        Ok(state_from_eigenvector(&axis, Outcome::Up))
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `(√ρ e^{-iτ}, √(1-ρ))`.
    pub fn amplitudes(&self) -> Spinor {
        Spinor {
            up: Complex64::from_polar(self.rho.sqrt(), -self.tau),
            down: Complex64::new((1.0 - self.rho).sqrt(), 0.0),
        }
    }

    /// `(2√(ρ(1-ρ)) cosτ, 2√(ρ(1-ρ)) sinτ, 2ρ - 1)`.
    pub fn bloch_vector(&self) -> Vec3 {
        let r = 2.0 * (self.rho * (1.0 - self.rho)).sqrt();
        let (st, ct) = self.tau.sin_cos();
        Vec3::new(r * ct, r * st, 2.0 * self.rho - 1.0)
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ρ={}, τ={})", self.rho, self.tau)
    }
}

pub fn bloch_vector(state: &PureState) -> Vec3 {
    state.bloch_vector()
}

/// `|⟨↑_axis|Ψ⟩|²` in closed form:
/// `ρ cos²(θ/2) + (1-ρ) sin²(θ/2) + √(ρ(1-ρ)) sinθ cos(φ - τ)`.
pub fn born_up(state: &PureState, axis: &Axis) -> f64 {
    let rho = state.rho;
    let (sh, ch) = (axis.theta / 2.0).sin_cos();
    let p = rho * ch * ch
        + (1.0 - rho) * sh * sh
        + (rho * (1.0 - rho)).sqrt() * axis.theta.sin() * (axis.phi - state.tau).cos();
    p.clamp(0.0, 1.0)
}

/// Born probability of outcome `s` when measuring along `axis`.
pub fn born(state: &PureState, axis: &Axis, s: Outcome) -> f64 {
    let p = born_up(state, axis);
    match s {
        Outcome::Up => p,
        Outcome::Down => 1.0 - p,
    }
}

/// Post-measurement state: the eigenvector of σ(axis) for outcome `s`,
/// reduced to canonical form.
pub fn state_from_eigenvector(axis: &Axis, s: Outcome) -> PureState {
    let (sh, ch) = (axis.theta / 2.0).sin_cos();
    // |↑⟩ = (cos e^{-iφ}, sin), |↓⟩ = e^{iπ}(sin e^{-iφ}, -cos) ~ (sin e^{-i(φ-π)}, cos)
    let (rho, tau) = match s {
        Outcome::Up => (ch * ch, axis.phi),
        Outcome::Down => (sh * sh, axis.phi - PI),
    };
    PureState::canonical(rho.clamp(0.0, 1.0), tau.rem_euclid(TAU))
}

pub(crate) fn clamp_probability(p: f64) -> Result<f64> {
    let slack = crate::DEFAULT_TOL;
    if !(-slack..=1.0 + slack).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}
