//! Gauge functions φ: ℝ⁺ → ℝ⁺ and their derivatives.
//!
//! Every contractive condition in this crate compares distances only after
//! passing them through dφ/dt. A [`Gauge`] packages φ with an optional
//! closed-form derivative; when the derivative is missing a finite
//! difference is used instead.
//!
//! The library contract additionally requires dφ/dt(0) = 0 and
//! dφ/dt(t) > 0 for t > 0. Construction does not enforce this (some gauges
//! are useful for testing even though they break it); problem registration
//! does, through [`Gauge::validate_contract`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Values of the numeric derivative in `[-NEGATIVE_NOISE, 0]` are clamped to zero.
const NEGATIVE_NOISE: f64 = 1e-12;

#[derive(Clone)]
pub struct Gauge {
    phi: ScalarFn,
    dphi: Option<ScalarFn>,
    label: String,
}

impl fmt::Debug for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gauge")
            .field("label", &self.label)
            .field("analytic_derivative", &self.dphi.is_some())
            .finish()
    }
}

impl Gauge {
    pub fn new<F, D>(label: impl Into<String>, phi: F, dphi: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Gauge {
            phi: Arc::new(phi),
            dphi: Some(Arc::new(dphi)),
            label: label.into(),
        }
    }

    /// A gauge whose derivative is always obtained by finite differences.
    pub fn numeric<F>(label: impl Into<String>, phi: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Gauge {
            phi: Arc::new(phi),
            dphi: None,
            label: label.into(),
        }
    }

    /// φ(t) = t³, the gauge of the worked interval example.
    pub fn cubic() -> Self {
        Gauge::new("t^3", |t| t * t * t, |t| 3.0 * t * t)
    }

    pub fn square() -> Self {
        Gauge::new("t^2", |t| t * t, |t| 2.0 * t)
    }

    /// φ(t) = t²/2, so dφ/dt = t and derivative-type conditions reduce to
    /// their classical distance forms.
    pub fn half_square() -> Self {
        Gauge::new("t^2/2", |t| 0.5 * t * t, |t| t)
    }

    /// φ(t) = eᵗ − 1. Note dφ/dt(0) = 1, so this gauge fails the library contract.
    pub fn exp_m1() -> Self {
        Gauge::new("exp(t)-1", f64::exp_m1, f64::exp)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.dphi.is_some()
    }

    /// The same φ with the closed-form derivative dropped.
    pub fn without_derivative(&self) -> Self {
        Gauge {
            phi: Arc::clone(&self.phi),
            dphi: None,
            label: format!("{} (numeric)", self.label),
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    /// dφ/dt at `t`; see [`gauge_derivative`].
    pub fn derivative(&self, t: f64) -> Result<f64> {
        gauge_derivative(self, t)
    }

    /// Checks dφ/dt(0) = 0 and dφ/dt > 0 on `samples` points of (0, upper].
    ///
    /// A finite-difference derivative at 0 is accepted when it is within
    /// 1e-6 of zero.
    pub fn validate_contract(&self, upper: f64, samples: usize) -> Result<()> {
        let at_zero = self.derivative(0.0)?;
        let zero_tol = if self.dphi.is_some() { 0.0 } else { 1e-6 };
        if at_zero.abs() > zero_tol {
            return Err(Error::GaugeContract(format!(
                "gauge `{}` has dphi(0) = {at_zero}, expected 0",
                self.label
            )));
        }
        let samples = samples.max(1);
        for i in 1..=samples {
            let t = upper * i as f64 / samples as f64;
            let d = self.derivative(t)?;
            if d <= 0.0 {
                return Err(Error::GaugeContract(format!(
                    "gauge `{}` has dphi({t}) = {d}, expected > 0",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// Evaluates dφ/dt at `t ≥ 0`.
///
/// Uses the closed-form derivative when the gauge carries one. Otherwise a
/// central difference with step `h = 1e-6·max(1, |t|)`, falling back to a
/// forward difference when `t < h` so φ is never evaluated at negative
/// arguments.
pub fn gauge_derivative(g: &Gauge, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "gauge derivative requested at t = {t}, expected t >= 0"
        )));
    }
    let value = match &g.dphi {
        Some(d) => d(t),
        None => {
            let h = 1e-6 * t.abs().max(1.0);
            if t < h {
                (g.phi(t + h) - g.phi(t)) / h
            } else {
                (g.phi(t + h) - g.phi(t - h)) / (2.0 * h)
            }
        }
    };
    if !value.is_finite() {
        return Err(Error::non_finite(
            format!("dphi of gauge `{}`", g.label),
            format!("t = {t}"),
            value,
        ));
    }
    if (-NEGATIVE_NOISE..0.0).contains(&value) {
        return Ok(0.0);
    }
    Ok(value)
}
