use derivfix::certify::{certify_at, check_condition, lambda_min, ConditionKind, DEFAULT_TOL};
use derivfix::domain::{delta_d, MetricDomain, SelfMap};
use derivfix::export::{read_csv, write_csv, Table};
use derivfix::fredholm::{apply_operator, linear_test, GridFunction};
use derivfix::gauge::{gauge_derivative, Gauge};
use derivfix::picard::{apriori_bound_sequence, invert_gauge_derivative, picard_iterate};
use derivfix::problem::{example_2_4, ContractionParams, ProblemSpec, Registry};
use derivfix::quadrature::QuadratureRule;
use proptest::prelude::*;

fn affine_spec(slope: f64, offset: f64, grid: usize) -> ProblemSpec {
    ProblemSpec::new(
        "affine",
        MetricDomain::interval(0.0, 1.0, grid).unwrap(),
        SelfMap::new("affine", move |x| slope * x + offset),
        Gauge::cubic(),
        ContractionParams::new(0.5, 0.5).unwrap(),
    )
}

/// Slope in (-0.9, 0.9) and an offset keeping `[0, 1]` invariant.
fn affine_map() -> impl Strategy<Value = (f64, f64)> {
    (-0.9f64..0.9, 0.0f64..1.0).prop_map(|(a, u)| {
        let (lo, hi) = if a >= 0.0 { (0.0, 1.0 - a) } else { (-a, 1.0) };
        (a, lo + u * (hi - lo))
    })
}

fn kind() -> impl Strategy<Value = ConditionKind> {
    prop::sample::select(ConditionKind::ALL.to_vec())
}

#[test]
fn registered_domains_satisfy_metric_axioms() {
    let reg = Registry::new();
    for name in reg.names() {
        let spec = reg.lookup(&name).unwrap();
        spec.domain.check_metric_axioms(41, 1e-12).unwrap();
    }
}

#[test]
fn analytic_and_numeric_derivatives_agree() {
    for g in [Gauge::cubic(), Gauge::square(), Gauge::exp_m1()] {
        let numeric = g.without_derivative();
        for i in 0..=1000 {
            let t = 1e-3 + (1.0 - 1e-3) * i as f64 / 1000.0;
            let a = gauge_derivative(&g, t).unwrap();
            let n = gauge_derivative(&numeric, t).unwrap();
            assert!(
                (a - n).abs() <= 1e-5 * a.abs(),
                "{} at {t}: {a} vs {n}",
                g.label()
            );
        }
    }
}

#[test]
fn reduction_to_classical_condition() {
    let spec = example_2_4().with_gauge(Gauge::half_square());
    for x in spec.domain.grid().into_iter().step_by(4) {
        for y in spec.domain.grid().into_iter().step_by(4) {
            let d = check_condition(&spec, ConditionKind::IbwDerivative, x, y, 0.0).unwrap();
            let c = check_condition(&spec, ConditionKind::Ibw, x, y, 0.0).unwrap();
            assert!((d.lhs - c.lhs).abs() <= 1e-12 && (d.rhs - c.rhs).abs() <= 1e-12);
        }
    }
}

#[test]
fn picard_traces_are_deterministic() {
    let a = picard_iterate(&example_2_4(), 0.77, 1e-12, 100).unwrap();
    let b = picard_iterate(&example_2_4(), 0.77, 1e-12, 100).unwrap();
    assert_eq!(a, b);
    assert!(a
        .iterates
        .iter()
        .zip(&b.iterates)
        .all(|(x, y)| x.to_bits() == y.to_bits()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_d_is_monotone(a in -5.0f64..5.0, w in 0.1f64..5.0, l in 0.0f64..2.0, r in 0.0f64..2.0) {
        let inner = MetricDomain::interval(a, a + w, 11).unwrap();
        let outer = MetricDomain::interval(a - l, a + w + r, 11).unwrap();
        prop_assert!(delta_d(&inner) <= delta_d(&outer));
    }

    #[test]
    fn lambda_min_is_sound((a, b) in affine_map(), kind in kind()) {
        let spec = affine_spec(a, b, 31);
        let est = match lambda_min(&spec, kind, 0.5) {
            Ok(e) => e,
            Err(_) => return Ok(()),
        };
        let above = certify_at(&spec, kind, est.lambda + 1e-9, DEFAULT_TOL).unwrap();
        prop_assert!(above.pass, "kind {kind} lambda {}", est.lambda);
        if est.lambda > 1e-3 {
            let below = certify_at(&spec, kind, (est.lambda - 1e-3).max(0.0), DEFAULT_TOL).unwrap();
            prop_assert!(!below.pass);
        }
    }

    #[test]
    fn certification_is_monotone_in_lambda((a, b) in affine_map(), kind in kind(), l0 in 0.0f64..1.0, dl in 0.0f64..1.0) {
        let spec = affine_spec(a, b, 21);
        let l1 = l0 + (1.0 - l0) * dl;
        let r0 = certify_at(&spec, kind, l0, DEFAULT_TOL).unwrap();
        let r1 = certify_at(&spec, kind, l1, DEFAULT_TOL).unwrap();
        prop_assert!(!r0.pass || r1.pass);
        prop_assert!(r1.violation_count <= r0.violation_count);
    }

    #[test]
    fn gauss_legendre_is_exact(n in 2usize..=24, coeffs in prop::collection::vec(-1.0f64..1.0, 48)) {
        let rule = QuadratureRule::gauss_legendre(n).unwrap();
        let c = &coeffs[..2 * n];
        let got = rule.integrate(|x| c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck));
        let want: f64 = c.iter().enumerate().map(|(k, ck)| ck / (k as f64 + 1.0)).sum();
        prop_assert!((got - want).abs() <= 1e-12, "n {n}: {got} vs {want}");
    }

    #[test]
    fn trapezoid_is_exact_on_affine(n in 2usize..300, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let rule = QuadratureRule::trapezoid(n).unwrap();
        let got = rule.integrate(|x| a + b * x);
        prop_assert!((got - (a + 0.5 * b)).abs() <= 1e-14);
    }

    #[test]
    fn gauge_inversion_round_trips(t in 0.0f64..=1.0) {
        for g in [Gauge::cubic(), Gauge::square(), Gauge::exp_m1()] {
            let back = invert_gauge_derivative(&g, gauge_derivative(&g, t).unwrap(), 1.0).unwrap();
            prop_assert!((back - t).abs() <= 1e-9, "{}: {t} -> {back}", g.label());
        }
    }

    #[test]
    fn apriori_bounds_are_geometric(lambda in 0.01f64..0.99) {
        let spec = example_2_4().with_params(ContractionParams::new(lambda, 0.5).unwrap());
        let b = apriori_bound_sequence(&spec, 30).unwrap();
        for w in b.windows(2) {
            prop_assert!(w[1].value < w[0].value);
            prop_assert!((w[1].value / w[0].value - lambda).abs() <= 1e-14);
        }
    }

    #[test]
    fn converged_traces_have_small_residual(x0 in 0.0f64..=1.0) {
        let t = picard_iterate(&example_2_4(), x0, 1e-12, 10_000).unwrap();
        prop_assert!(t.converged);
        prop_assert!(t.residual <= 1e-12);
    }

    #[test]
    fn kernel_scaling_scales_integral(c in 0.0f64..=1.0, shift in -1.0f64..1.0) {
        let p = linear_test(QuadratureRule::gauss_legendre(8).unwrap());
        let u = GridFunction::sample(&p.rule, |t| t * t + shift);
        let v = p.forcing_samples();
        let full = apply_operator(&p, &u).unwrap();
        let scaled = apply_operator(&p.scaled_kernel(c), &u).unwrap();
        for i in 0..u.len() {
            let want = c * (full.values[i] - v.values[i]);
            let got = scaled.values[i] - v.values[i];
            prop_assert!((got - want).abs() <= 1e-15);
        }
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 3), 0..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let table = Table { header: vec!["a".into(), "b".into(), "c".into()], rows };
        write_csv(&path, &table).unwrap();
        let back = read_csv(&path).unwrap();
        prop_assert_eq!(back.header, table.header);
        for (r, s) in back.rows.iter().zip(&table.rows) {
            for (x, y) in r.iter().zip(s) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
