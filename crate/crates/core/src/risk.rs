//! Outcome selection by minimizing a risk function `R(θ_f, φ_f; s)`.
//!
//! No concrete risk function is known; [`builtin_risks`] provides example
//! stand-ins so the selection machinery can be exercised. Each one is a
//! function of the canonical next axis, which makes it well defined on
//! directions regardless of how the angles were written.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin::{born, Axis, Outcome, PureState};

/// Read-only information about the measurement being resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskContext {
    /// State before the measurement.
    pub state: PureState,
    /// Axis being measured.
    pub axis_i: Axis,
}

pub trait RiskFunction: Send + Sync {
    fn name(&self) -> &str;

    fn description(&self) -> &str;

    /// Risk of outcome `s` when the observer's next axis is `axis_f`.
    fn evaluate(&self, axis_f: &Axis, s: Outcome, ctx: &RiskContext) -> f64;
}

/// Zero for every alternative.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantRisk;

impl RiskFunction for ConstantRisk {
    fn name(&self) -> &str {
        "constant"
    }

    fn description(&self) -> &str {
        "example stand-in: R = 0"
    }

    fn evaluate(&self, _axis_f: &Axis, _s: Outcome, _ctx: &RiskContext) -> f64 {
        0.0
    }
}

/// `-ln P(s)`, the surprise of outcome `s` under the Born rule for the
/// measured axis. Impossible outcomes carry infinite risk.
#[derive(Debug, Clone, Copy, Default)]
pub struct BornSurprise;

impl RiskFunction for BornSurprise {
    fn name(&self) -> &str {
        "born-surprise"
    }

    fn description(&self) -> &str {
        "example stand-in: R = -ln P(s) under the Born rule for the measured axis"
    }

    fn evaluate(&self, _axis_f: &Axis, s: Outcome, ctx: &RiskContext) -> f64 {
        -born(&ctx.state, &ctx.axis_i, s).ln()
    }
}

/// `-s (n_f · m)`: favours the outcome whose sign agrees with the projection
/// of the state's Bloch vector on the next axis.
#[derive(Debug, Clone, Copy, Default)]
pub struct Alignment;

impl RiskFunction for Alignment {
    fn name(&self) -> &str {
        "alignment"
    }

    fn description(&self) -> &str {
        "example stand-in: R = -s (n_f . m)"
    }

    fn evaluate(&self, axis_f: &Axis, s: Outcome, ctx: &RiskContext) -> f64 {
        -s.sign() * axis_f.unit_vector().dot(ctx.state.bloch_vector())
    }
}

/// Wraps a risk function and adds a constant.
pub struct Offset<R> {
    pub inner: R,
    pub offset: f64,
}

impl<R: RiskFunction> RiskFunction for Offset<R> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn description(&self) -> &str {
        self.inner.description()
    }

    fn evaluate(&self, axis_f: &Axis, s: Outcome, ctx: &RiskContext) -> f64 {
        self.inner.evaluate(axis_f, s, ctx) + self.offset
    }
}

pub fn builtin_risks() -> Vec<Box<dyn RiskFunction>> {
    vec![
        Box::new(ConstantRisk),
        Box::new(BornSurprise),
        Box::new(Alignment),
    ]
}

pub fn builtin_names() -> Vec<&'static str> {
    vec!["constant", "born-surprise", "alignment"]
}

pub fn risk_by_name(name: &str) -> Result<Box<dyn RiskFunction>> {
    builtin_risks()
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| Error::UnknownRisk {
            name: name.to_owned(),
            available: builtin_names().join(", "),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Selection {
    pub s: Outcome,
    pub risk: f64,
}

/// The outcome of smaller risk; equal risks resolve to `s = +1`.
///
/// An infinite risk marks an impossible alternative. NaN, `-∞`, or infinite
/// risk for both outcomes is an evaluation error.
pub fn select_outcome(
    risk: &dyn RiskFunction,
    axis_f: &Axis,
    ctx: &RiskContext,
) -> Result<Selection> {
    let up = risk.evaluate(axis_f, Outcome::Up, ctx);
    let down = risk.evaluate(axis_f, Outcome::Down, ctx);
    for v in [up, down] {
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::NonFiniteRisk {
                name: risk.name().to_owned(),
                value: v,
            });
        }
    }
    if up.is_infinite() && down.is_infinite() {
        return Err(Error::NonFiniteRisk {
            name: risk.name().to_owned(),
            value: up,
        });
    }
    Ok(if up <= down {
        Selection {
            s: Outcome::Up,
            risk: up,
        }
    } else {
        Selection {
            s: Outcome::Down,
            risk: down,
        }
    })
}
