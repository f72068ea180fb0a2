use derivfix::certify::{self, ConditionKind, DEFAULT_TOL};
use derivfix::domain::delta_d;
use derivfix::export::figure1_surfaces;
use derivfix::fredholm::{self, default_rule, fredholm_problem, solve_fredholm as solve};
use derivfix::gauge::Gauge;
use derivfix::picard::{self, apriori_bound_sequence};
use derivfix::problem::{ContractionParams, ProblemSpec, Registry};
use derivfix::quadrature::{QuadratureRule, RuleKind};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(pyderivfix, DerivfixError, PyException);

type Surfaces = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>);

fn py_err(e: derivfix::Error) -> PyErr {
    DerivfixError::new_err(e.to_string())
}

fn condition(name: &str) -> PyResult<ConditionKind> {
    name.parse().map_err(py_err)
}

fn builtin_gauge(name: &str) -> PyResult<Gauge> {
    match name {
        "cubic" => Ok(Gauge::cubic()),
        "square" => Ok(Gauge::square()),
        "half_square" => Ok(Gauge::half_square()),
        "exp_m1" => Ok(Gauge::exp_m1()),
        _ => Err(DerivfixError::new_err(format!(
            "unknown gauge `{name}` (expected cubic, square, half_square or exp_m1)"
        ))),
    }
}

/// A registered self-map problem, optionally with overridden coefficients,
/// grid size or gauge.
#[pyclass(name = "Problem", frozen)]
struct PyProblem {
    spec: ProblemSpec,
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (name, lam=None, alpha=None, grid=None, gauge=None))]
    fn new(
        name: &str,
        lam: Option<f64>,
        alpha: Option<f64>,
        grid: Option<usize>,
        gauge: Option<&str>,
    ) -> PyResult<Self> {
        let mut spec = Registry::new().lookup(name).map_err(py_err)?;
        if lam.is_some() || alpha.is_some() {
            let params = ContractionParams::new(
                lam.unwrap_or(spec.params.lambda()),
                alpha.unwrap_or(spec.params.alpha()),
            )
            .map_err(py_err)?;
            spec = spec.with_params(params);
        }
        if let Some(n) = grid {
            spec = spec.with_grid_points(n).map_err(py_err)?;
        }
        if let Some(g) = gauge {
            spec = spec.with_gauge(builtin_gauge(g)?);
        }
        Ok(PyProblem { spec })
    }

    #[getter]
    fn name(&self) -> String {
        self.spec.name.clone()
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.spec.params.lambda()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.spec.params.alpha()
    }

    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.spec.domain.grid()
    }

    #[getter]
    fn delta_d(&self) -> f64 {
        delta_d(&self.spec.domain)
    }

    fn apply(&self, x: f64) -> f64 {
        self.spec.map.apply(x)
    }

    /// Certifies at the problem's λ, or at `lam` when given.
    #[pyo3(signature = (condition="ibw_derivative", lam=None, tol=DEFAULT_TOL))]
    fn certify(
        &self,
        py: Python<'_>,
        condition: &str,
        lam: Option<f64>,
        tol: f64,
    ) -> PyResult<Report> {
        let kind = self::condition(condition)?;
        let lambda = lam.unwrap_or(self.spec.params.lambda());
        py.detach(|| certify::certify_at(&self.spec, kind, lambda, tol))
            .map(|inner| Report { inner })
            .map_err(py_err)
    }

    /// `(lambda, x, y)` for the pair attaining the grid supremum.
    #[pyo3(signature = (condition="ibw_derivative", alpha=None))]
    fn lambda_min(
        &self,
        py: Python<'_>,
        condition: &str,
        alpha: Option<f64>,
    ) -> PyResult<(f64, f64, f64)> {
        let kind = self::condition(condition)?;
        let alpha = alpha.unwrap_or(self.spec.params.alpha());
        let est = py
            .detach(|| certify::lambda_min(&self.spec, kind, alpha))
            .map_err(py_err)?;
        Ok((est.lambda, est.x, est.y))
    }

    #[pyo3(signature = (alphas, condition="ibw_derivative"))]
    fn alpha_sweep(
        &self,
        py: Python<'_>,
        alphas: Vec<f64>,
        condition: &str,
    ) -> PyResult<Vec<(f64, f64)>> {
        let kind = self::condition(condition)?;
        py.detach(|| certify::alpha_sweep(&self.spec, kind, &alphas))
            .into_iter()
            .map(|(a, est)| est.map(|e| (a, e.lambda)).map_err(py_err))
            .collect()
    }

    #[pyo3(signature = (x0, stop_tol=picard::DEFAULT_STOP_TOL, max_iter=picard::DEFAULT_MAX_ITER))]
    fn iterate(&self, x0: f64, stop_tol: f64, max_iter: usize) -> PyResult<Trace> {
        picard::picard_iterate(&self.spec, x0, stop_tol, max_iter)
            .map(|inner| Trace { inner })
            .map_err(py_err)
    }

    /// `(agree, fixed_points, max_spread)`.
    #[pyo3(signature = (starts, stop_tol=picard::DEFAULT_STOP_TOL))]
    fn uniqueness_probe(
        &self,
        py: Python<'_>,
        starts: Vec<f64>,
        stop_tol: f64,
    ) -> PyResult<(bool, Vec<f64>, f64)> {
        let p = py
            .detach(|| picard::uniqueness_probe(&self.spec, &starts, stop_tol))
            .map_err(py_err)?;
        Ok((p.agree, p.fixed_points, p.max_spread))
    }

    fn apriori_bounds(&self, n_max: usize) -> PyResult<Vec<f64>> {
        Ok(apriori_bound_sequence(&self.spec, n_max)
            .map_err(py_err)?
            .into_iter()
            .map(|b| b.value)
            .collect())
    }

    /// `(xs, lhs, rhs)` with `lhs[i][j]` at `(xs[i], xs[j])`.
    #[pyo3(signature = (n=100))]
    fn surfaces(&self, py: Python<'_>, n: usize) -> PyResult<Surfaces> {
        let s = py
            .detach(|| figure1_surfaces(&self.spec, n))
            .map_err(py_err)?;
        Ok((s.xs, s.lhs, s.rhs))
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem('{}', lam={}, alpha={}, gauge='{}')",
            self.spec.name,
            self.spec.params.lambda(),
            self.spec.params.alpha(),
            self.spec.gauge.label()
        )
    }
}

#[pyclass(name = "CertificationReport", frozen)]
struct Report {
    inner: certify::CertificationReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }

    #[getter]
    fn condition(&self) -> &'static str {
        self.inner.condition.as_str()
    }

    #[getter]
    fn violation_count(&self) -> usize {
        self.inner.violation_count
    }

    /// Recorded violations as `(x, y, lhs, rhs)`, at most 100.
    #[getter]
    fn violations(&self) -> Vec<(f64, f64, f64, f64)> {
        self.inner
            .violations
            .iter()
            .map(|v| (v.x, v.y, v.lhs, v.rhs))
            .collect()
    }

    #[getter]
    fn lambda_min(&self) -> Option<f64> {
        self.inner.lambda_min
    }

    #[getter]
    fn pairs_checked(&self) -> usize {
        self.inner.pairs_checked
    }

    #[getter]
    fn excluded_fixed_points(&self) -> usize {
        self.inner.excluded_fixed_points
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(|e| DerivfixError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "CertificationReport({}, passed={}, violations={})",
            self.inner.condition, self.inner.pass, self.inner.violation_count
        )
    }
}

#[pyclass(name = "IterationTrace", frozen)]
struct Trace {
    inner: picard::IterationTrace,
}

#[pymethods]
impl Trace {
    #[getter]
    fn iterates(&self) -> Vec<f64> {
        self.inner.iterates.clone()
    }

    #[getter]
    fn step_distances(&self) -> Vec<f64> {
        self.inner.step_distances.clone()
    }

    #[getter]
    fn apriori_bounds(&self) -> Vec<f64> {
        self.inner.apriori_bounds.clone()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn fixed_point(&self) -> Option<f64> {
        self.inner.fixed_point
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }
}

#[pyclass(name = "FredholmSolution", frozen)]
struct Solution {
    rule: QuadratureRule,
    inner: fredholm::FredholmSolution,
}

#[pymethods]
impl Solution {
    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.rule.nodes().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.rule.weights().to_vec()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.solution.values.clone()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }
}

#[pyfunction]
fn problems() -> Vec<String> {
    Registry::new().names()
}

#[pyfunction]
fn gauge_derivative(gauge: &str, t: f64) -> PyResult<f64> {
    derivfix::gauge::gauge_derivative(&builtin_gauge(gauge)?, t).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (gauge, target, upper=1.0))]
fn invert_gauge_derivative(gauge: &str, target: f64, upper: f64) -> PyResult<f64> {
    picard::invert_gauge_derivative(&builtin_gauge(gauge)?, target, upper).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (problem, rule="gauss", nodes=None, stop_tol=fredholm::DEFAULT_STOP_TOL, max_iter=fredholm::DEFAULT_MAX_ITER))]
fn solve_fredholm(
    py: Python<'_>,
    problem: &str,
    rule: &str,
    nodes: Option<usize>,
    stop_tol: f64,
    max_iter: usize,
) -> PyResult<Solution> {
    let kind: RuleKind = rule.parse().map_err(py_err)?;
    let rule = match nodes {
        Some(n) => QuadratureRule::new(kind, n).map_err(py_err)?,
        None => default_rule(kind),
    };
    let p = fredholm_problem(problem, rule).map_err(py_err)?;
    let inner = py
        .detach(|| solve(&p, None, stop_tol, max_iter))
        .map_err(py_err)?;
    Ok(Solution {
        rule: p.rule,
        inner,
    })
}

#[pymodule]
fn pyderivfix(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DerivfixError", m.py().get_type::<DerivfixError>())?;
    m.add_class::<PyProblem>()?;
    m.add_class::<Report>()?;
    m.add_class::<Trace>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(problems, m)?)?;
    m.add_function(wrap_pyfunction!(gauge_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(invert_gauge_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(solve_fredholm, m)?)?;
    Ok(())
}
