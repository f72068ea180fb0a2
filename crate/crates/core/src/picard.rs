//! Picard iteration `x_{n+1} = T x_n` with a full trace, the gauge-level
//! a-priori bound `φ'(δ)·λⁿ/(1-λ)`, and multi-start uniqueness probing.
//!
//! The a-priori bound is reproduced as a diagnostic only. It is obtained by
//! applying φ' termwise across the triangle inequality, which does not hold
//! for general gauges (φ(t) = t³ already breaks it), so convergence is
//! always decided by the stopping rule on step distances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::delta_d;
use crate::error::{Error, Result};
use crate::gauge::{gauge_derivative, Gauge};
use crate::problem::ProblemSpec;

pub const DEFAULT_STOP_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Slack around `[lower, upper]` before an iterate counts as escaped.
const ESCAPE_SLACK: f64 = 1e-9;
const BISECTION_STEPS: usize = 60;
const MONOTONE_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// `x_0, x_1, …`; one more entry than `step_distances`.
    pub iterates: Vec<f64>,
    /// `d(x_n, x_{n+1})`
    pub step_distances: Vec<f64>,
    /// `φ'(d(x_n, x_{n+1}))`
    pub gauge_steps: Vec<f64>,
    /// A-priori bound value for each step index n.
    pub apriori_bounds: Vec<f64>,
    pub converged: bool,
    /// Index n of the step with `d(x_n, x_{n+1}) < stop_tol`.
    pub stopped_at: Option<usize>,
    pub fixed_point: Option<f64>,
    /// `d(x*, T x*)` for the last iterate.
    pub residual: f64,
}

impl IterationTrace {
    pub fn steps(&self) -> usize {
        self.step_distances.len()
    }

    pub fn last(&self) -> f64 {
        *self.iterates.last().expect("trace has at least x0")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AprioriBound {
    pub n: usize,
    pub value: f64,
    pub lambda: f64,
    pub gauge_at_diameter: f64,
}

/// Runs the Picard iteration from `x0` until a step shorter than `stop_tol`
/// or `max_iter` map applications.
pub fn picard_iterate(
    spec: &ProblemSpec,
    x0: f64,
    stop_tol: f64,
    max_iter: usize,
) -> Result<IterationTrace> {
    let dom = &spec.domain;
    if !dom.contains(x0) {
        return Err(Error::Domain(format!(
            "start {x0} outside [{}, {}]",
            dom.lower(),
            dom.upper()
        )));
    }
    if !(stop_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stop_tol = {stop_tol} must be > 0"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }
    let g_diam = gauge_derivative(&spec.gauge, delta_d(dom))?;
    let lambda = spec.params.lambda();

    let mut iterates = vec![x0];
    let mut step_distances = Vec::new();
    let mut gauge_steps = Vec::new();
    let mut apriori_bounds = Vec::new();
    let mut stopped_at = None;

    let mut x = x0;
    for n in 0..max_iter {
        let next = apply_checked(spec, x, n + 1)?;
        let dist = dom.distance(x, next);
        iterates.push(next);
        step_distances.push(dist);
        gauge_steps.push(gauge_derivative(&spec.gauge, dist)?);
        apriori_bounds.push(bound_value(g_diam, lambda, n));
        x = next;
        if dist < stop_tol {
            stopped_at = Some(n);
            break;
        }
    }

    let tx = apply_checked(spec, x, iterates.len())?;
    let residual = dom.distance(x, tx);
    let converged = stopped_at.is_some();
    Ok(IterationTrace {
        iterates,
        step_distances,
        gauge_steps,
        apriori_bounds,
        converged,
        stopped_at,
        fixed_point: converged.then_some(x),
        residual,
    })
}

fn apply_checked(spec: &ProblemSpec, x: f64, step: usize) -> Result<f64> {
    let dom = &spec.domain;
    let next = spec.map.apply(x);
    if !next.is_finite() {
        return Err(Error::non_finite(
            format!("map `{}`", spec.map.label()),
            format!("step {step}, x = {x}"),
            next,
        ));
    }
    if next < dom.lower() - ESCAPE_SLACK || next > dom.upper() + ESCAPE_SLACK {
        return Err(Error::Closedness {
            step,
            from: x,
            to: next,
            lower: dom.lower(),
            upper: dom.upper(),
        });
    }
    Ok(next)
}

fn bound_value(gauge_at_diameter: f64, lambda: f64, n: usize) -> f64 {
    let n = i32::try_from(n).unwrap_or(i32::MAX);
    gauge_at_diameter * lambda.powi(n) / (1.0 - lambda)
}

/// `φ'(δ_d(X))·λⁿ/(1-λ)` for `n = 0..=n_max`.
pub fn apriori_bound_sequence(spec: &ProblemSpec, n_max: usize) -> Result<Vec<AprioriBound>> {
    let lambda = spec.params.lambda();
    let gauge_at_diameter = gauge_derivative(&spec.gauge, delta_d(&spec.domain))?;
    Ok((0..=n_max)
        .map(|n| AprioriBound {
            n,
            value: bound_value(gauge_at_diameter, lambda, n),
            lambda,
            gauge_at_diameter,
        })
        .collect())
}

/// Finds `t ∈ [0, upper]` with `φ'(t) = target` by bisection.
///
/// Requires φ' to be strictly increasing on `[0, upper]`, which is checked
/// on a uniform sample.
pub fn invert_gauge_derivative(g: &Gauge, target: f64, upper: f64) -> Result<f64> {
    if !(upper > 0.0 && upper.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "upper = {upper} must be > 0"
        )));
    }
    let mut prev = gauge_derivative(g, 0.0)?;
    let low_value = prev;
    for i in 1..=MONOTONE_SAMPLES {
        let t = upper * i as f64 / MONOTONE_SAMPLES as f64;
        let d = gauge_derivative(g, t)?;
        if d <= prev {
            return Err(Error::GaugeContract(format!(
                "dphi of `{}` is not strictly increasing near t = {t}",
                g.label()
            )));
        }
        prev = d;
    }
    let high_value = prev;
    if !(target >= low_value && target <= high_value) {
        return Err(Error::OutOfRange {
            target,
            low: low_value,
            high: high_value,
        });
    }
    if target == low_value {
        return Ok(0.0);
    }
    if target == high_value {
        return Ok(upper);
    }

    let (mut lo, mut hi) = (0.0, upper);
    let (mut f_lo, mut f_hi) = (low_value - target, high_value - target);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = gauge_derivative(g, mid)? - target;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid < 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

/// Heuristic distance-level reading of the a-priori bound: the `t` with
/// `φ'(t)` equal to the bound at step `n`, capped at the diameter.
pub fn heuristic_distance_bound(spec: &ProblemSpec, n: usize) -> Result<f64> {
    let diam = delta_d(&spec.domain);
    let g_diam = gauge_derivative(&spec.gauge, diam)?;
    let value = bound_value(g_diam, spec.params.lambda(), n);
    if value >= g_diam {
        return Ok(diam);
    }
    invert_gauge_derivative(&spec.gauge, value, diam)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRun {
    pub start: f64,
    pub converged: bool,
    pub fixed_point: Option<f64>,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniquenessProbe {
    pub agree: bool,
    /// Limits of the converged runs, in start order.
    pub fixed_points: Vec<f64>,
    pub max_spread: f64,
    pub runs: Vec<ProbeRun>,
}

/// Iterates from every start and compares the limits. Agreement means all
/// runs converged to points within `10·stop_tol` of each other.
pub fn uniqueness_probe(
    spec: &ProblemSpec,
    starts: &[f64],
    stop_tol: f64,
) -> Result<UniquenessProbe> {
    let traces: Vec<IterationTrace> = starts
        .par_iter()
        .map(|&x0| picard_iterate(spec, x0, stop_tol, DEFAULT_MAX_ITER))
        .collect::<Result<_>>()?;

    let runs: Vec<ProbeRun> = starts
        .iter()
        .zip(&traces)
        .map(|(&start, t)| ProbeRun {
            start,
            converged: t.converged,
            fixed_point: t.fixed_point,
            iterations: t.steps(),
        })
        .collect();
    let fixed_points: Vec<f64> = runs.iter().filter_map(|r| r.fixed_point).collect();
    let max_spread = fixed_points
        .iter()
        .flat_map(|a| {
            fixed_points
                .iter()
                .map(move |b| spec.domain.distance(*a, *b))
        })
        .fold(0.0, f64::max);
    let agree = runs.iter().all(|r| r.converged) && max_spread <= 10.0 * stop_tol;
    Ok(UniquenessProbe {
        agree,
        fixed_points,
        max_spread,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{MetricDomain, SelfMap};
    use crate::problem::{example_2_4, halving, identity, ContractionParams};

    #[test]
    fn example_2_4_iterates_follow_recurrence() {
        let trace =
            picard_iterate(&example_2_4(), 1.0, DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
        let expected = [1.0, 1.0 / 3.0, 1.0 / 27.0, 1.0 / 2187.0];
        for (got, want) in trace.iterates.iter().zip(expected) {
            assert!((got - want).abs() <= 1e-16 * want, "{got} vs {want}");
        }
        let mut x = 1.0f64;
        for &it in &trace.iterates {
            assert_eq!(it, x);
            x = x * x / 3.0;
        }
        assert!(trace.converged);
        assert_eq!(trace.stopped_at, Some(5));
        assert!(trace.fixed_point.unwrap().abs() < 1e-12);
        assert!(trace.residual <= DEFAULT_STOP_TOL);
        for (n, d) in trace.step_distances.iter().enumerate() {
            assert_eq!(*d, (trace.iterates[n] - trace.iterates[n + 1]).abs());
        }
    }

    #[test]
    fn start_at_fixed_point() {
        let trace = picard_iterate(&example_2_4(), 0.0, DEFAULT_STOP_TOL, 10).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.stopped_at, Some(0));
        assert_eq!(trace.fixed_point, Some(0.0));
        assert_eq!(trace.residual, 0.0);
    }

    #[test]
    fn halving_converges_geometrically() {
        let trace = picard_iterate(&halving(), 1.0, 1e-12, DEFAULT_MAX_ITER).unwrap();
        assert!(trace.converged);
        assert!(trace.fixed_point.unwrap().abs() < 1e-11);
        // x_n = 2^-n, the first step below 1e-12 is d(x_n, x_{n+1}) = 2^-(n+1).
        let n = trace.stopped_at.unwrap();
        assert_eq!(n, 39);
        assert_eq!(trace.step_distances[n], 0.5f64.powi(40));
    }

    #[test]
    fn non_convergence_is_reported() {
        let trace = picard_iterate(&halving(), 1.0, 1e-12, 5).unwrap();
        assert!(!trace.converged);
        assert_eq!(trace.fixed_point, None);
        assert_eq!(trace.steps(), 5);
        assert_eq!(trace.residual, 0.5f64.powi(6));
    }

    #[test]
    fn escaping_iterate_is_a_closedness_error() {
        let mut spec = example_2_4();
        spec.map = SelfMap::new("x+0.3", |x| x + 0.3);
        let err = picard_iterate(&spec, 0.5, 1e-12, 100).unwrap_err();
        assert!(matches!(err, Error::Closedness { step: 2, .. }), "{err}");
        let mut spec = example_2_4();
        spec.map = SelfMap::new("nan", |_| f64::NAN);
        assert!(matches!(
            picard_iterate(&spec, 0.5, 1e-12, 100),
            Err(Error::NonFinite { .. })
        ));
        assert!(picard_iterate(&example_2_4(), 2.0, 1e-12, 100).is_err());
        assert!(picard_iterate(&example_2_4(), 0.5, 0.0, 100).is_err());
        assert!(picard_iterate(&example_2_4(), 0.5, 1e-12, 0).is_err());
    }

    #[test]
    fn gauge_steps_contract_along_trajectory() {
        let spec = example_2_4();
        let trace = picard_iterate(&spec, 1.0, DEFAULT_STOP_TOL, DEFAULT_MAX_ITER).unwrap();
        let lambda = spec.params.lambda();
        for w in trace.gauge_steps.windows(2) {
            assert!(w[1] <= lambda * w[0] + 1e-10, "{w:?}");
        }
        for w in trace.apriori_bounds.windows(2) {
            assert_eq!(w[1] / w[0], lambda);
        }
    }

    #[test]
    fn apriori_bound_values() {
        let bounds = apriori_bound_sequence(&example_2_4(), 5).unwrap();
        assert_eq!(bounds[0].value, 6.0);
        assert_eq!(bounds[5].value, 0.1875);
        assert_eq!(bounds[0].gauge_at_diameter, 3.0);
        let zero = example_2_4().with_params(ContractionParams::new(0.0, 0.5).unwrap());
        let bounds = apriori_bound_sequence(&zero, 3).unwrap();
        assert_eq!(bounds[0].value, 3.0);
        assert!(bounds[1..].iter().all(|b| b.value == 0.0));
    }

    #[test]
    fn inversion_examples() {
        let g = Gauge::cubic();
        assert_eq!(invert_gauge_derivative(&g, 3.0, 2.0).unwrap(), 1.0);
        assert_eq!(invert_gauge_derivative(&g, 0.0, 1.0).unwrap(), 0.0);
        let t = invert_gauge_derivative(&g, 0.75, 1.0).unwrap();
        assert!((t - 0.5).abs() <= 1e-12);
        assert!((3.0 * t * t - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn inversion_errors() {
        let g = Gauge::cubic();
        assert!(matches!(
            invert_gauge_derivative(&g, 4.0, 1.0),
            Err(Error::OutOfRange { .. })
        ));
        let wiggly = Gauge::new("sin", |t: f64| 1.0 - t.cos(), f64::sin);
        assert!(matches!(
            invert_gauge_derivative(&wiggly, 0.5, 4.0),
            Err(Error::GaugeContract(_))
        ));
    }

    #[test]
    fn heuristic_distance_bound_is_capped_and_decreasing() {
        let spec = example_2_4();
        assert_eq!(heuristic_distance_bound(&spec, 0).unwrap(), 1.0);
        let b3 = heuristic_distance_bound(&spec, 3).unwrap();
        let b4 = heuristic_distance_bound(&spec, 4).unwrap();
        // 3t² = 6/2^n  ⇒  t = sqrt(2^(1-n))
        assert!((b3 - 0.25f64.sqrt()).abs() < 1e-12);
        assert!(b4 < b3);
    }

    #[test]
    fn uniqueness_probe_examples() {
        let probe = uniqueness_probe(&example_2_4(), &[0.0, 0.5, 1.0], 1e-12).unwrap();
        assert!(probe.agree);
        assert!(probe.fixed_points.iter().all(|p| p.abs() < 1e-12));

        let single = uniqueness_probe(&example_2_4(), &[0.7], 1e-12).unwrap();
        assert!(single.agree);
        assert_eq!(single.max_spread, 0.0);

        let id = uniqueness_probe(&identity(), &[0.2, 0.8], 1e-12).unwrap();
        assert!(!id.agree);
        assert_eq!(id.fixed_points, vec![0.2, 0.8]);
        assert!((id.max_spread - 0.6).abs() < 1e-15);
    }

    #[test]
    fn probe_flags_non_converged_runs() {
        // x ↦ 1 - x oscillates between x and 1 - x.
        let spec = ProblemSpec::new(
            "flip",
            MetricDomain::interval(0.0, 1.0, 11).unwrap(),
            SelfMap::new("1-x", |x| 1.0 - x),
            Gauge::cubic(),
            ContractionParams::new(0.5, 0.5).unwrap(),
        );
        let probe = uniqueness_probe(&spec, &[0.5, 0.1], 1e-12).unwrap();
        assert!(!probe.agree);
        assert!(probe.runs[0].converged);
        assert!(!probe.runs[1].converged);
    }
}
