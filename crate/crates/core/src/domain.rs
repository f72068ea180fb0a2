//! Compact interval domains, metrics on them, and self-maps.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type MetricFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Distance function on the real line.
#[derive(Clone, Default)]
pub enum Metric {
    /// `|x - y|`
    #[default]
    Absolute,
    Custom {
        label: String,
        f: MetricFn,
    },
}

impl Metric {
    pub fn custom<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Metric::Custom {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    #[inline]
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        match self {
            Metric::Absolute => (x - y).abs(),
            Metric::Custom { f, .. } => f(x, y),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Metric::Absolute => "abs",
            Metric::Custom { label, .. } => label,
        }
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Metric({})", self.label())
    }
}

/// A closed interval `[lower, upper]` with a metric, sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct MetricDomain {
    lower: f64,
    upper: f64,
    metric: Metric,
    grid_points: usize,
}

impl MetricDomain {
    pub fn new(lower: f64, upper: f64, metric: Metric, grid_points: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::Domain(format!(
                "interval [{lower}, {upper}] must be finite with lower < upper"
            )));
        }
        if grid_points < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points, got {grid_points}"
            )));
        }
        Ok(MetricDomain {
            lower,
            upper,
            metric,
            grid_points,
        })
    }

    /// `[lower, upper]` with the absolute-difference metric.
    pub fn interval(lower: f64, upper: f64, grid_points: usize) -> Result<Self> {
        Self::new(lower, upper, Metric::Absolute, grid_points)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn with_grid_points(&self, grid_points: usize) -> Result<Self> {
        Self::new(self.lower, self.upper, self.metric.clone(), grid_points)
    }

    #[inline]
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        self.metric.distance(x, y)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        let span = self.upper - self.lower;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.upper
                } else {
                    self.lower + span * (i as f64 / (n - 1) as f64)
                }
            })
            .collect()
    }

    /// Checks symmetry (exact), identity and the triangle inequality on
    /// every sampled triple. Returns the first violation found.
    pub fn check_metric_axioms(&self, samples: usize, tol: f64) -> Result<()> {
        let pts = self.with_grid_points(samples.max(2))?.grid();
        for &x in &pts {
            let dxx = self.distance(x, x);
            if dxx != 0.0 {
                return Err(Error::Domain(format!("d({x}, {x}) = {dxx}")));
            }
            for &y in &pts {
                let dxy = self.distance(x, y);
                if dxy < 0.0 || dxy != self.distance(y, x) {
                    return Err(Error::Domain(format!(
                        "metric not symmetric or negative at ({x}, {y})"
                    )));
                }
                for &z in &pts {
                    if dxy > self.distance(x, z) + self.distance(z, y) + tol {
                        return Err(Error::Domain(format!(
                            "triangle inequality fails at ({x}, {y}) via {z}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Diameter δ_d of the domain.
///
/// Exact `upper - lower` for the absolute metric, otherwise the maximum
/// distance over all sampled pairs (an estimate of the supremum).
pub fn delta_d(dom: &MetricDomain) -> f64 {
    match dom.metric() {
        Metric::Absolute => dom.upper() - dom.lower(),
        Metric::Custom { .. } => {
            let pts = dom.grid();
            pts.iter()
                .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
                .map(|(x, y)| dom.distance(x, y))
                .fold(0.0, f64::max)
        }
    }
}

pub type MapFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The operator T whose fixed points are sought.
#[derive(Clone)]
pub struct SelfMap {
    map: MapFn,
    label: String,
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelfMap({})", self.label)
    }
}

impl SelfMap {
    pub fn new<F>(label: impl Into<String>, map: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SelfMap {
            map: Arc::new(map),
            label: label.into(),
        }
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        (self.map)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Verifies `T(x) ∈ [lower, upper]` on every grid point of `dom`.
    pub fn check_closed(&self, dom: &MetricDomain) -> Result<()> {
        for x in dom.grid() {
            let tx = self.apply(x);
            if !tx.is_finite() {
                return Err(Error::non_finite(
                    format!("map `{}`", self.label),
                    format!("x = {x}"),
                    tx,
                ));
            }
            if !dom.contains(tx) {
                return Err(Error::Closedness {
                    step: 0,
                    from: x,
                    to: tx,
                    lower: dom.lower(),
                    upper: dom.upper(),
                });
            }
        }
        Ok(())
    }
}
