//! Nonlinear Fredholm integral equations of the second kind,
//!
//! ```text
//! u(t) = v(t) + ∫₀¹ K(t, s, u(s)) ds,
//! ```
//!
//! discretized by Nyström collocation: unknowns live on the quadrature
//! nodes, the integral is replaced by the rule, and the sup metric is taken
//! over nodes. The solution is computed by successive approximation.
//!
//! The kernel-level contractive hypothesis is only checked on samples
//! (given function pairs, or constant functions over the range the solver
//! visits). That is a necessary check, not a proof over all of C[0,1].

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{ConditionEval, ReportParams, Violation, MAX_VIOLATIONS};
use crate::error::{Error, Result};
use crate::gauge::{gauge_derivative, Gauge};
use crate::problem::ContractionParams;
use crate::quadrature::{QuadratureRule, RuleKind};

pub type KernelFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
pub type ForcingFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub const DEFAULT_STOP_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;
pub const DEFAULT_GAUSS_NODES: usize = 64;
pub const DEFAULT_TRAPEZOID_NODES: usize = 129;

#[derive(Clone)]
pub struct FredholmProblem {
    pub name: String,
    kernel: KernelFn,
    forcing: ForcingFn,
    pub gauge: Gauge,
    pub params: ContractionParams,
    pub rule: QuadratureRule,
}

impl fmt::Debug for FredholmProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FredholmProblem")
            .field("name", &self.name)
            .field("gauge", &self.gauge)
            .field("params", &self.params)
            .field("rule", &self.rule.kind())
            .field("n_nodes", &self.rule.n_nodes())
            .finish()
    }
}

impl FredholmProblem {
    pub fn new<K, V>(
        name: impl Into<String>,
        kernel: K,
        forcing: V,
        gauge: Gauge,
        params: ContractionParams,
        rule: QuadratureRule,
    ) -> Self
    where
        K: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        FredholmProblem {
            name: name.into(),
            kernel: Arc::new(kernel),
            forcing: Arc::new(forcing),
            gauge,
            params,
            rule,
        }
    }

    pub fn with_rule(mut self, rule: QuadratureRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_params(mut self, params: ContractionParams) -> Self {
        self.params = params;
        self
    }

    /// The same equation with the kernel multiplied by `c`.
    pub fn scaled_kernel(&self, c: f64) -> Self {
        let k = Arc::clone(&self.kernel);
        FredholmProblem {
            kernel: Arc::new(move |t, s, u| c * k(t, s, u)),
            ..self.clone()
        }
    }

    #[inline]
    pub fn kernel(&self, t: f64, s: f64, u: f64) -> f64 {
        (self.kernel)(t, s, u)
    }

    #[inline]
    pub fn forcing(&self, t: f64) -> f64 {
        (self.forcing)(t)
    }

    /// Samples of the forcing term, the default starting guess.
    pub fn forcing_samples(&self) -> GridFunction {
        GridFunction::sample(&self.rule, |t| self.forcing(t))
    }
}

/// A function represented by its values at the quadrature nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        GridFunction { values }
    }

    pub fn sample<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F) -> Self {
        GridFunction {
            values: rule.nodes().iter().map(|&t| f(t)).collect(),
        }
    }

    pub fn constant(rule: &QuadratureRule, c: f64) -> Self {
        GridFunction {
            values: vec![c; rule.n_nodes()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_for(&self, rule: &QuadratureRule) -> Result<()> {
        if self.len() != rule.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: rule.n_nodes(),
                actual: self.len(),
            });
        }
        if let Some((i, v)) = self.values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::non_finite("grid function", format!("node {i}"), *v));
        }
        Ok(())
    }
}

/// `(Fu)ᵢ = v(tᵢ) + Σⱼ wⱼ K(tᵢ, sⱼ, uⱼ)`
pub fn apply_operator(p: &FredholmProblem, u: &GridFunction) -> Result<GridFunction> {
    u.check_for(&p.rule)?;
    let nodes = p.rule.nodes();
    let weights = p.rule.weights();
    let values = nodes
        .par_iter()
        .map(|&t| -> Result<f64> {
            let mut acc = 0.0;
            for ((&s, &w), &uj) in nodes.iter().zip(weights).zip(&u.values) {
                let k = p.kernel(t, s, uj);
                if !k.is_finite() {
                    return Err(Error::non_finite(
                        format!("kernel of `{}`", p.name),
                        format!("(t, s) = ({t}, {s})"),
                        k,
                    ));
                }
                acc += w * k;
            }
            let v = p.forcing(t);
            if !v.is_finite() {
                return Err(Error::non_finite(
                    format!("forcing of `{}`", p.name),
                    format!("t = {t}"),
                    v,
                ));
            }
            Ok(v + acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridFunction { values })
}

/// `max_i |uᵢ - wᵢ|`
pub fn sup_metric(u: &GridFunction, w: &GridFunction) -> Result<f64> {
    if u.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            actual: w.len(),
        });
    }
    Ok(u.values
        .iter()
        .zip(&w.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredholmSolution {
    pub solution: GridFunction,
    /// `p(u_n, u_{n+1})` for every iteration performed.
    pub steps: Vec<f64>,
    /// `p(u*, F u*)`
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Smallest and largest node value seen across all iterates.
    pub value_range: (f64, f64),
}

impl FredholmSolution {
    pub fn final_step(&self) -> f64 {
        self.steps.last().copied().unwrap_or(0.0)
    }
}

/// Successive approximation `u_{n+1} = F u_n` until the sup-metric step
/// drops below `stop_tol`. Starts from the forcing samples when `u0` is `None`.
///
/// Hitting `max_iter` is not an error: the returned solution has
/// `converged == false` and carries the final step size.
pub fn solve_fredholm(
    p: &FredholmProblem,
    u0: Option<GridFunction>,
    stop_tol: f64,
    max_iter: usize,
) -> Result<FredholmSolution> {
    if !(stop_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stop_tol = {stop_tol} must be > 0"
        )));
    }
    let mut u = u0.unwrap_or_else(|| p.forcing_samples());
    u.check_for(&p.rule)?;
    let mut range = value_range(&u.values, (f64::INFINITY, f64::NEG_INFINITY));
    let mut steps = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let next = apply_operator(p, &u)?;
        let step = sup_metric(&u, &next)?;
        range = value_range(&next.values, range);
        steps.push(step);
        u = next;
        if step < stop_tol {
            converged = true;
            break;
        }
    }
    let fu = apply_operator(p, &u)?;
    let residual = sup_metric(&u, &fu)?;
    Ok(FredholmSolution {
        iterations: steps.len(),
        solution: u,
        steps,
        residual,
        converged,
        value_range: range,
    })
}

fn value_range(values: &[f64], init: (f64, f64)) -> (f64, f64) {
    values
        .iter()
        .fold(init, |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// The kernel-level hypothesis at one `(t, s)`:
///
/// `φ'(|K(t,s,u) - K(t,s,v)|) ≤ λ [φ'(|u - v|)]^α [φ'(|u - Fu|)]^(1-α)`
pub fn check_kernel_condition(
    p: &FredholmProblem,
    t: f64,
    s: f64,
    u_val: f64,
    v_val: f64,
    fu_val: f64,
    tol: f64,
) -> Result<ConditionEval> {
    for (name, x) in [
        ("t", t),
        ("s", s),
        ("u", u_val),
        ("v", v_val),
        ("Fu", fu_val),
    ] {
        if !x.is_finite() {
            return Err(Error::non_finite("kernel condition argument", name, x));
        }
    }
    let ku = p.kernel(t, s, u_val);
    let kv = p.kernel(t, s, v_val);
    if !(ku.is_finite() && kv.is_finite()) {
        return Err(Error::non_finite(
            format!("kernel of `{}`", p.name),
            format!("(t, s) = ({t}, {s})"),
            if ku.is_finite() { kv } else { ku },
        ));
    }
    let g = &p.gauge;
    let alpha = p.params.alpha();
    let lhs = gauge_derivative(g, (ku - kv).abs())?;
    let rhs = p.params.lambda()
        * gauge_derivative(g, (u_val - v_val).abs())?.powf(alpha)
        * gauge_derivative(g, (u_val - fu_val).abs())?.powf(1.0 - alpha);
    Ok(ConditionEval {
        holds: lhs <= rhs + tol,
        lhs,
        rhs,
    })
}

/// Summary of a sampled kernel-condition check. Serializes with the same
/// keys as [`crate::certify::CertificationReport`]; violations carry `t` in
/// `x` and `s` in `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConditionReport {
    pub problem: String,
    pub condition: String,
    pub params: ReportParams,
    pub grid_points: usize,
    pub pairs_checked: usize,
    pub pass: bool,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub lambda_min: Option<f64>,
    /// Sup-metric distance between the largest checked function pair.
    pub delta_d: f64,
    pub excluded_fixed_points: usize,
}

impl KernelConditionReport {
    fn empty(p: &FredholmProblem) -> Self {
        KernelConditionReport {
            problem: p.name.clone(),
            condition: "fredholm_kernel".into(),
            params: ReportParams {
                lambda: p.params.lambda(),
                alpha: p.params.alpha(),
            },
            grid_points: p.rule.n_nodes(),
            pairs_checked: 0,
            pass: true,
            violation_count: 0,
            violations: Vec::new(),
            lambda_min: None,
            delta_d: 0.0,
            excluded_fixed_points: 0,
        }
    }

    fn absorb(&mut self, other: KernelConditionReport) {
        self.pairs_checked += other.pairs_checked;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.delta_d = self.delta_d.max(other.delta_d);
        self.lambda_min = match (self.lambda_min, other.lambda_min) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.pass = self.violation_count == 0;
    }

    fn finish(mut self) -> Self {
        self.violations
            .sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        self.violations.truncate(MAX_VIOLATIONS);
        self.pass = self.violation_count == 0;
        self
    }
}

/// Checks the kernel hypothesis for the pair `(u, w)` at every node pair
/// `(tᵢ, sⱼ)`, with `Fu` computed from `u`.
pub fn sample_kernel_condition(
    p: &FredholmProblem,
    u: &GridFunction,
    w: &GridFunction,
    tol: f64,
) -> Result<KernelConditionReport> {
    u.check_for(&p.rule)?;
    w.check_for(&p.rule)?;
    let fu = apply_operator(p, u)?;
    let nodes = p.rule.nodes();
    let mut report = KernelConditionReport::empty(p);
    report.delta_d = sup_metric(u, w)?;

    let rows: Vec<(Vec<Violation>, usize, Option<f64>)> = nodes
        .par_iter()
        .map(|&t| -> Result<_> {
            let mut violations = Vec::new();
            let mut count = 0;
            let mut best: Option<f64> = None;
            for (j, &s) in nodes.iter().enumerate() {
                let ev =
                    check_kernel_condition(p, t, s, u.values[j], w.values[j], fu.values[j], tol)?;
                if !ev.holds {
                    count += 1;
                    violations.push(Violation {
                        x: t,
                        y: s,
                        lhs: ev.lhs,
                        rhs: ev.rhs,
                        margin: ev.lhs - ev.rhs,
                    });
                }
                let factor = ev.rhs / p.params.lambda();
                if p.params.lambda() > 0.0 && factor > crate::certify::ZERO_FACTOR {
                    let r = ev.lhs / factor;
                    best = Some(best.map_or(r, |b: f64| b.max(r)));
                }
            }
            Ok((violations, count, best))
        })
        .collect::<Result<_>>()?;

    for (violations, count, best) in rows {
        report.pairs_checked += nodes.len();
        report.violation_count += count;
        report.violations.extend(violations);
        report.lambda_min = match (report.lambda_min, best) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
    Ok(report.finish())
}

/// `[lo, hi]` widened by 10% of its width on each side (or by 0.1 when flat).
pub fn padded_range((lo, hi): (f64, f64)) -> (f64, f64) {
    let pad = if hi > lo { 0.1 * (hi - lo) } else { 0.1 };
    (lo - pad, hi + pad)
}

/// Runs [`sample_kernel_condition`] on every ordered pair of constant
/// functions at `levels` equally spaced values across `range`.
pub fn kernel_condition_over_range(
    p: &FredholmProblem,
    range: (f64, f64),
    levels: usize,
    tol: f64,
) -> Result<KernelConditionReport> {
    if levels < 2 || !(range.0 < range.1) {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 levels over a non-empty range, got {levels} over {range:?}"
        )));
    }
    let vals: Vec<f64> = (0..levels)
        .map(|i| range.0 + (range.1 - range.0) * (i as f64 / (levels - 1) as f64))
        .collect();
    let mut report = KernelConditionReport::empty(p);
    for &a in &vals {
        for &b in &vals {
            let u = GridFunction::constant(&p.rule, a);
            let w = GridFunction::constant(&p.rule, b);
            report.absorb(sample_kernel_condition(p, &u, &w, tol)?);
        }
    }
    Ok(report.finish())
}

/// `K(t,s,u) = t·s·u/2`, `v(t) = t`; exact solution `u(t) = 6t/5`.
pub fn linear_test(rule: QuadratureRule) -> FredholmProblem {
    FredholmProblem::new(
        "linear-test",
        |t, s, u| 0.5 * t * s * u,
        |t| t,
        Gauge::half_square(),
        ContractionParams::new(0.75, 0.5).expect("valid params"),
        rule,
    )
}

/// `K(t,s,u) = u`, `v ≡ 1`: the discrete operator has unit gain and no fixed point.
pub fn unit_kernel(rule: QuadratureRule) -> FredholmProblem {
    FredholmProblem::new(
        "unit-kernel",
        |_, _, u| u,
        |_| 1.0,
        Gauge::half_square(),
        ContractionParams::new(0.5, 0.5).expect("valid params"),
        rule,
    )
}

pub const FREDHOLM_PROBLEMS: [&str; 2] = ["linear-test", "unit-kernel"];

/// Built-in integral equations by name.
pub fn fredholm_problem(name: &str, rule: QuadratureRule) -> Result<FredholmProblem> {
    match name {
        "linear-test" => Ok(linear_test(rule)),
        "unit-kernel" => Ok(unit_kernel(rule)),
        _ => Err(Error::UnknownProblem(name.to_owned())),
    }
}

/// Default rule for solving.
pub fn default_rule(kind: RuleKind) -> QuadratureRule {
    let n = match kind {
        RuleKind::GaussLegendre => DEFAULT_GAUSS_NODES,
        RuleKind::CompositeTrapezoid => DEFAULT_TRAPEZOID_NODES,
    };
    QuadratureRule::new(kind, n).expect("default node counts are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(n: usize) -> QuadratureRule {
        QuadratureRule::gauss_legendre(n).unwrap()
    }

    fn zero_kernel(rule: QuadratureRule) -> FredholmProblem {
        FredholmProblem::new(
            "zero",
            |_, _, _| 0.0,
            |t| t,
            Gauge::half_square(),
            ContractionParams::new(0.5, 0.5).unwrap(),
            rule,
        )
    }

    #[test]
    fn zero_kernel_reduces_to_forcing() {
        let p = zero_kernel(gauss(6));
        let u = GridFunction::constant(&p.rule, 7.0);
        let fu = apply_operator(&p, &u).unwrap();
        assert_eq!(fu, GridFunction::sample(&p.rule, |t| t));
    }

    #[test]
    fn unit_kernel_with_zero_forcing_gives_one() {
        let p = FredholmProblem::new(
            "one",
            |_, _, _| 1.0,
            |_| 0.0,
            Gauge::half_square(),
            ContractionParams::new(0.5, 0.5).unwrap(),
            QuadratureRule::trapezoid(11).unwrap(),
        );
        let fu = apply_operator(&p, &GridFunction::constant(&p.rule, 0.0)).unwrap();
        assert!(fu.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn linear_test_exact_solution_is_fixed() {
        let p = linear_test(gauss(8));
        let exact = GridFunction::sample(&p.rule, |t| 1.2 * t);
        let fu = apply_operator(&p, &exact).unwrap();
        assert!(sup_metric(&exact, &fu).unwrap() < 1e-15);
    }

    #[test]
    fn operator_errors() {
        let p = linear_test(gauss(4));
        assert!(matches!(
            apply_operator(&p, &GridFunction::new(vec![0.0; 3])),
            Err(Error::LengthMismatch { .. })
        ));
        let bad = FredholmProblem::new(
            "bad",
            |_, s, _| 1.0 / (s - s),
            |t| t,
            Gauge::half_square(),
            ContractionParams::new(0.5, 0.5).unwrap(),
            gauss(4),
        );
        let err = apply_operator(&bad, &GridFunction::constant(&bad.rule, 0.0)).unwrap_err();
        assert!(err.to_string().contains("(t, s)"), "{err}");
    }

    #[test]
    fn sup_metric_examples() {
        let r = QuadratureRule::trapezoid(11).unwrap();
        let one = GridFunction::constant(&r, 1.0);
        let zero = GridFunction::constant(&r, 0.0);
        assert_eq!(sup_metric(&one, &one).unwrap(), 0.0);
        assert_eq!(sup_metric(&one, &zero).unwrap(), 1.0);
        let a = GridFunction::sample(&r, |t| t);
        let b = GridFunction::sample(&r, |t| t * t);
        assert_eq!(sup_metric(&a, &b).unwrap(), 0.25);
        assert!(sup_metric(&a, &GridFunction::new(vec![0.0])).is_err());
    }

    #[test]
    fn solve_linear_test_gauss_8() {
        let p = linear_test(gauss(8));
        let sol = solve_fredholm(&p, None, DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(sol.converged);
        let exact = GridFunction::sample(&p.rule, |t| 1.2 * t);
        assert!(sup_metric(&sol.solution, &exact).unwrap() <= 1e-10);
        assert!(sol.residual <= DEFAULT_STOP_TOL);
        assert!(sol.iterations <= 60);
    }

    #[test]
    fn trapezoid_refinement_is_second_order() {
        let solve = |n| {
            let p = linear_test(QuadratureRule::trapezoid(n).unwrap());
            solve_fredholm(&p, None, 1e-14, DEFAULT_MAX_ITER)
                .unwrap()
                .solution
                .values
        };
        let (u65, u129, u257) = (solve(65), solve(129), solve(257));
        let diff = |coarse: &[f64], fine: &[f64]| {
            coarse
                .iter()
                .enumerate()
                .map(|(i, c)| (c - fine[2 * i]).abs())
                .fold(0.0, f64::max)
        };
        let ratio = diff(&u65, &u129) / diff(&u129, &u257);
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
        // Slightly above 4: the discrete coefficient is convex in h².
        assert!((ratio - 4.0000916).abs() <= 1e-6, "{ratio}");
    }

    #[test]
    fn solve_zero_kernel_takes_one_step() {
        let p = zero_kernel(gauss(5));
        let sol = solve_fredholm(&p, None, DEFAULT_STOP_TOL, 10).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 1);
        assert_eq!(sol.solution, GridFunction::sample(&p.rule, |t| t));
    }

    #[test]
    fn unit_kernel_does_not_converge() {
        let p = unit_kernel(QuadratureRule::trapezoid(17).unwrap());
        let sol = solve_fredholm(&p, None, DEFAULT_STOP_TOL, 50).unwrap();
        assert!(!sol.converged);
        // u_n ≡ n + 1, each step adds exactly one.
        assert!(sol.steps.iter().all(|s| (s - 1.0).abs() < 1e-12));
        assert!((sol.solution.values[0] - 51.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_condition_pointwise() {
        let p = linear_test(gauss(4));
        let same = check_kernel_condition(&p, 0.3, 0.7, 0.4, 0.4, 0.9, 0.0).unwrap();
        assert_eq!(same.lhs, 0.0);
        assert!(same.holds);

        // t = s = 1, u = 1, v = 0: lhs = 1/2, rhs = (3/4)|1 - Fu|^(1/2)
        for fu in [0.0, 0.5, 1.0 - 4.0 / 9.0, 1.0 + 4.0 / 9.0 + 1e-9, 1.2, 2.0] {
            let ev = check_kernel_condition(&p, 1.0, 1.0, 1.0, 0.0, fu, 1e-12).unwrap();
            let oracle_rhs = 0.75 * (1.0f64 - fu).abs().sqrt();
            assert_eq!(ev.lhs, 0.5);
            assert!((ev.rhs - oracle_rhs).abs() < 1e-15);
            assert_eq!(ev.holds, 0.5 <= oracle_rhs + 1e-12, "fu = {fu}");
        }
        assert!(check_kernel_condition(&p, 1.0, 1.0, f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn constant_kernel_always_holds() {
        let p = FredholmProblem::new(
            "const",
            |_, _, _| 2.0,
            |t| t,
            Gauge::half_square(),
            ContractionParams::new(0.1, 0.5).unwrap(),
            gauss(6),
        );
        let u = GridFunction::sample(&p.rule, |t| t.sin());
        let w = GridFunction::sample(&p.rule, |t| 3.0 * t);
        let report = sample_kernel_condition(&p, &u, &w, 0.0).unwrap();
        assert!(report.pass);
        assert_eq!(report.pairs_checked, 36);
    }

    #[test]
    fn sampled_report_matches_pointwise_oracle() {
        let p = linear_test(gauss(6));
        let one = GridFunction::constant(&p.rule, 1.0);
        let zero = GridFunction::constant(&p.rule, 0.0);
        let report = sample_kernel_condition(&p, &one, &zero, 1e-12).unwrap();
        let fu = apply_operator(&p, &one).unwrap();
        let mut count = 0;
        for &t in p.rule.nodes() {
            for (j, &s) in p.rule.nodes().iter().enumerate() {
                // φ'(q) = q for this gauge
                let lhs = (0.5 * t * s * 1.0 - 0.0).abs();
                let rhs = 0.75 * 1.0f64.sqrt() * (1.0 - fu.values[j]).abs().sqrt();
                if lhs > rhs + 1e-12 {
                    count += 1;
                }
            }
        }
        assert_eq!(report.violation_count, count);
        assert_eq!(report.pass, count == 0);
        assert_eq!(report.pairs_checked, 36);

        let same = sample_kernel_condition(&p, &one, &one, 0.0).unwrap();
        assert!(same.pass);
    }

    #[test]
    fn range_sampling() {
        assert_eq!(padded_range((0.0, 1.0)), (-0.1, 1.1));
        let p = linear_test(gauss(4));
        let report = kernel_condition_over_range(&p, (0.0, 1.2), 4, 1e-12).unwrap();
        assert_eq!(report.pairs_checked, 16 * 16);
        assert!(kernel_condition_over_range(&p, (1.0, 0.0), 4, 0.0).is_err());
    }

    #[test]
    fn unknown_problem() {
        assert!(fredholm_problem("nope", gauss(4)).is_err());
        assert_eq!(
            fredholm_problem("linear-test", gauss(4)).unwrap().name,
            "linear-test"
        );
    }
}
