//! Shannon entropies of two-outcome Born distributions.
//!
//! All four functionals share one form: the entropy of the distribution
//! `{|a|², |b|²}` formed by the squared overlaps of a vector with the two
//! eigenvectors of a projection operator.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{born_up, eigenpair, overlap, Axis, PureState};

/// Logarithm base used to report entropies. Natural log unless configured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntropyBase {
    #[default]
    #[serde(rename = "e")]
    Nats,
    #[serde(rename = "2")]
    Bits,
}

impl EntropyBase {
    /// Factor converting nats into this base.
    pub fn scale(self) -> f64 {
        match self {
            EntropyBase::Nats => 1.0,
            EntropyBase::Bits => 1.0 / LN_2,
        }
    }

    /// Entropy of the uniform binary distribution in this base.
    pub fn max_binary(self) -> f64 {
        LN_2 * self.scale()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EntropyBase::Nats => "e",
            EntropyBase::Bits => "2",
        }
    }
}

impl fmt::Display for EntropyBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntropyBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "nats" | "ln" => Ok(EntropyBase::Nats),
            "2" | "bits" => Ok(EntropyBase::Bits),
            other => Err(Error::InvalidConfig(format!(
                "entropy base must be `e` or `2`, got `{other}`"
            ))),
        }
    }
}

/// `-p log p - (1-p) log(1-p)` in nats, with `0 log 0 = 0`.
///
/// Probabilities within `1e-12` outside `[0, 1]` are clamped; anything
/// further out is a domain error.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    crate::spin::clamp_probability(p).map(h)
}

pub fn binary_entropy_in(p: f64, base: EntropyBase) -> Result<f64> {
    binary_entropy(p).map(|v| v * base.scale())
}

/// Binary entropy of an already-valid probability.
///
/// Evaluated on `min(p, 1-p)` so that `h(p) == h(1-p)` holds bit for bit.
pub(crate) fn h(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let (a, b) = if p <= 0.5 { (p, 1.0 - p) } else { (1.0 - p, p) };
    let mut s = 0.0;
    if a > 0.0 {
        s -= a * a.ln();
    }
    if b > 0.0 {
        // ln(1 - a) loses nothing when computed as ln_1p(-a).
        s -= b * (-a).ln_1p();
    }
    s
}

/// Entropy of the distribution obtained by measuring `state` along `axis`.
fn measurement_entropy(state: &PureState, axis: &Axis, base: EntropyBase) -> f64 {
    h(born_up(state, axis)) * base.scale()
}

/// Initial entropy `S_i`: measuring the state along the axis the observer
/// actually measures.
pub fn s_i(state: &PureState, axis_i: &Axis, base: EntropyBase) -> f64 {
    measurement_entropy(state, axis_i, base)
}

/// `S_f`: the entropy of the same state with respect to the observer's next
/// axis.
pub fn s_f(state: &PureState, axis_f: &Axis, base: EntropyBase) -> f64 {
    measurement_entropy(state, axis_f, base)
}

/// `S_↑`: entropy of `|↑_i⟩` expanded in the eigenbasis of the next axis,
/// from the squared overlap `|⟨↑_f|↑_i⟩|²`.
pub fn s_up(axis_i: &Axis, axis_f: &Axis, base: EntropyBase) -> f64 {
    let (up_i, _) = eigenpair(axis_i);
    let (up_f, _) = eigenpair(axis_f);
    h(overlap(&up_f, &up_i).norm_sqr()) * base.scale()
}

/// `S_↓`: entropy of `|↓_i⟩` expanded in the eigenbasis of the next axis,
/// from `|⟨↑_f|↓_i⟩|²`. Identical to [`s_up`] as a function.
pub fn s_down(axis_i: &Axis, axis_f: &Axis, base: EntropyBase) -> f64 {
    let (_, down_i) = eigenpair(axis_i);
    let (up_f, _) = eigenpair(axis_f);
    h(overlap(&up_f, &down_i).norm_sqr()) * base.scale()
}

#[cfg(test)]
/// `S_↑` from the geometric identity `|⟨↑_f|↑_i⟩|² = (1 + n_i·n_f)/2`.
pub(crate) fn s_up_geometric(n_i: crate::Vec3, n_f: crate::Vec3, base: EntropyBase) -> f64 {
    h((1.0 + n_i.dot(n_f)) / 2.0) * base.scale()
}
