//! Problem specifications and the named problem registry.

use std::collections::BTreeMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::domain::{MetricDomain, SelfMap};
use crate::error::{Error, Result};
use crate::gauge::Gauge;

/// Contraction coefficient λ ∈ [0, 1) and interpolation exponent α ∈ (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionParams {
    lambda: f64,
    alpha: f64,
}

impl ContractionParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} must lie in [0, 1)"
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must lie in (0, 1)"
            )));
        }
        Ok(ContractionParams { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Sampling density used when validating a spec at registration.
const VALIDATION_SAMPLES: usize = 201;

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub name: String,
    pub domain: MetricDomain,
    pub map: SelfMap,
    pub gauge: Gauge,
    pub params: ContractionParams,
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        domain: MetricDomain,
        map: SelfMap,
        gauge: Gauge,
        params: ContractionParams,
    ) -> Self {
        ProblemSpec {
            name: name.into(),
            domain,
            map,
            gauge,
            params,
        }
    }

    pub fn with_params(mut self, params: ContractionParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_gauge(mut self, gauge: Gauge) -> Self {
        self.gauge = gauge;
        self
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Result<Self> {
        self.domain = self.domain.with_grid_points(grid_points)?;
        Ok(self)
    }

    /// Checks closedness of the map, the metric axioms on a coarse sample,
    /// and the gauge contract up to the domain diameter.
    pub fn validate(&self) -> Result<()> {
        self.map.check_closed(&self.domain)?;
        self.domain.check_metric_axioms(21, 1e-12)?;
        let diam = crate::domain::delta_d(&self.domain);
        self.gauge.validate_contract(diam, VALIDATION_SAMPLES)
    }
}

/// Thread-safe name → spec map. Registration is serialized by the lock.
#[derive(Debug, Default)]
pub struct Registry {
    problems: RwLock<BTreeMap<String, ProblemSpec>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// A registry preloaded with the built-in problems.
    pub fn new() -> Self {
        let reg = Registry::empty();
        for spec in builtin_problems() {
            reg.register(spec).expect("built-in problems are valid");
        }
        reg
    }

    pub fn register(&self, spec: ProblemSpec) -> Result<()> {
        spec.validate()?;
        let mut problems = self.problems.write().expect("registry lock poisoned");
        if problems.contains_key(&spec.name) {
            return Err(Error::DuplicateProblem(spec.name));
        }
        problems.insert(spec.name.clone(), spec);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<ProblemSpec> {
        self.problems
            .read()
            .expect("registry lock poisoned")
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownProblem(name.to_owned()))
    }

    pub fn names(&self) -> Vec<String> {
        self.problems
            .read()
            .expect("registry lock poisoned")
            .keys()
            .cloned()
            .collect()
    }
}

/// Default grid density per axis for certification.
pub const DEFAULT_GRID: usize = 201;

/// `[0,1]`, `T(x) = x²/3`, `φ(t) = t³`, `λ = α = 1/2`.
pub fn example_2_4() -> ProblemSpec {
    ProblemSpec::new(
        "example-2-4",
        MetricDomain::interval(0.0, 1.0, DEFAULT_GRID).expect("valid interval"),
        SelfMap::new("x^2/3", |x| x * x / 3.0),
        Gauge::cubic(),
        ContractionParams::new(0.5, 0.5).expect("valid params"),
    )
}

/// `T(x) = x/2` on `[0,1]`.
pub fn halving() -> ProblemSpec {
    ProblemSpec::new(
        "halving",
        MetricDomain::interval(0.0, 1.0, DEFAULT_GRID).expect("valid interval"),
        SelfMap::new("x/2", |x| 0.5 * x),
        Gauge::cubic(),
        ContractionParams::new(0.5, 0.5).expect("valid params"),
    )
}

/// `T(x) = x` on `[0,1]`; every point is fixed.
pub fn identity() -> ProblemSpec {
    ProblemSpec::new(
        "identity",
        MetricDomain::interval(0.0, 1.0, DEFAULT_GRID).expect("valid interval"),
        SelfMap::new("x", |x| x),
        Gauge::cubic(),
        ContractionParams::new(0.5, 0.5).expect("valid params"),
    )
}

pub fn builtin_problems() -> Vec<ProblemSpec> {
    vec![example_2_4(), halving(), identity()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_ranges() {
        assert!(ContractionParams::new(0.0, 0.5).is_ok());
        assert!(ContractionParams::new(1.0, 0.5).is_err());
        assert!(ContractionParams::new(-0.1, 0.5).is_err());
        assert!(ContractionParams::new(0.5, 0.0).is_err());
        assert!(ContractionParams::new(0.5, 1.0).is_err());
        assert!(ContractionParams::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn builtin_lookup() {
        let reg = Registry::new();
        let spec = reg.lookup("example-2-4").unwrap();
        assert_eq!(spec.map.apply(1.0), 1.0 / 3.0);
        assert_eq!(spec.params.lambda(), 0.5);
        assert_eq!(spec.params.alpha(), 0.5);
        assert_eq!(reg.names(), ["example-2-4", "halving", "identity"]);
    }

    #[test]
    fn duplicate_and_unknown() {
        let reg = Registry::new();
        assert!(matches!(
            reg.register(example_2_4()),
            Err(Error::DuplicateProblem(n)) if n == "example-2-4"
        ));
        assert!(matches!(
            reg.lookup("nonexistent"),
            Err(Error::UnknownProblem(_))
        ));
    }

    #[test]
    fn registration_enforces_gauge_contract() {
        let reg = Registry::empty();
        let mut spec = example_2_4().with_gauge(Gauge::exp_m1());
        spec.name = "exp-gauge".into();
        assert!(matches!(reg.register(spec), Err(Error::GaugeContract(_))));
    }

    #[test]
    fn registration_enforces_closedness() {
        let reg = Registry::empty();
        let mut spec = example_2_4();
        spec.map = SelfMap::new("2x", |x| 2.0 * x);
        spec.name = "escape".into();
        assert!(matches!(reg.register(spec), Err(Error::Closedness { .. })));
    }

    #[test]
    fn concurrent_registration_keeps_names_unique() {
        let reg = Registry::empty();
        let ok: usize = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8)
                .map(|_| s.spawn(|| reg.register(example_2_4()).is_ok() as usize))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        });
        assert_eq!(ok, 1);
    }
}
