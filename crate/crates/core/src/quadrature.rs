//! Quadrature rules on `[0, 1]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    CompositeTrapezoid,
    GaussLegendre,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::CompositeTrapezoid => "composite_trapezoid",
            RuleKind::GaussLegendre => "gauss_legendre",
        })
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "trapezoid" | "trap" | "composite_trapezoid" => Ok(RuleKind::CompositeTrapezoid),
            "gauss" | "gl" | "gauss_legendre" => Ok(RuleKind::GaussLegendre),
            _ => Err(Error::InvalidParameter(format!(
                "unknown quadrature rule `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, n_nodes: usize) -> Result<Self> {
        match kind {
            RuleKind::CompositeTrapezoid => Self::trapezoid(n_nodes),
            RuleKind::GaussLegendre => Self::gauss_legendre(n_nodes),
        }
    }

    /// Composite trapezoid rule with `n_nodes` equally spaced nodes including 0 and 1.
    pub fn trapezoid(n_nodes: usize) -> Result<Self> {
        check_nodes(n_nodes)?;
        let h = 1.0 / (n_nodes - 1) as f64;
        let nodes = (0..n_nodes)
            .map(|i| if i + 1 == n_nodes { 1.0 } else { i as f64 * h })
            .collect();
        let weights = (0..n_nodes)
            .map(|i| {
                if i == 0 || i + 1 == n_nodes {
                    0.5 * h
                } else {
                    h
                }
            })
            .collect();
        Ok(QuadratureRule {
            kind: RuleKind::CompositeTrapezoid,
            nodes,
            weights,
        })
    }

    /// `n_nodes`-point Gauss–Legendre rule mapped from `[-1, 1]` to `[0, 1]`.
    ///
    /// Roots of Pₙ are found by Newton's method from the Tricomi initial
    /// guesses, with Pₙ and Pₙ' from the three-term recurrence.
    pub fn gauss_legendre(n_nodes: usize) -> Result<Self> {
        check_nodes(n_nodes)?;
        let n = n_nodes;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // x is the i-th largest root; fill symmetric positions.
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Ok(QuadratureRule {
            kind: RuleKind::GaussLegendre,
            nodes,
            weights,
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn check_nodes(n_nodes: usize) -> Result<()> {
    if n_nodes < 2 {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs at least 2 nodes, got {n_nodes}"
        )));
    }
    Ok(())
}

/// `(Pₙ(x), Pₙ'(x))`
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}
