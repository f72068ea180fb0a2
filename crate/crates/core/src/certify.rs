//! Grid certification of the four contractive conditions.
//!
//! Every condition is written as `lhs ≤ λ · factor`, where `factor` is the
//! right-hand side with the coefficient removed:
//!
//! | kind                | lhs              | factor                                   |
//! |---------------------|------------------|------------------------------------------|
//! | `banach`            | d(Tx,Ty)         | d(x,y)                                   |
//! | `ibw`               | d(Tx,Ty)         | d(x,y)^α · d(x,Tx)^(1-α)                 |
//! | `banach_derivative` | φ'(d(Tx,Ty))     | φ'(d(x,y))                               |
//! | `ibw_derivative`    | φ'(d(Tx,Ty))     | φ'(d(x,y))^α · φ'(d(x,Tx))^(1-α)         |
//!
//! The interpolative kinds are asymmetric in `x` and `y` and only quantify
//! over non-fixed points, so the certifier scans ordered pairs and drops any
//! pair touching a (numerically) fixed point. Results are grid estimates,
//! not proofs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::delta_d;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// A point is treated as fixed when `d(x, Tx) <= FIX_TOL`.
pub const FIX_TOL: f64 = 1e-12;
/// Default comparison slack for `lhs <= rhs + tol`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Factors at or below this are treated as zero by the λ search.
pub const ZERO_FACTOR: f64 = 1e-300;
/// Maximum number of violations kept in a report.
pub const MAX_VIOLATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    Banach,
    Ibw,
    BanachDerivative,
    IbwDerivative,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 4] = [
        ConditionKind::Banach,
        ConditionKind::Ibw,
        ConditionKind::BanachDerivative,
        ConditionKind::IbwDerivative,
    ];

    pub fn is_interpolative(self) -> bool {
        matches!(self, ConditionKind::Ibw | ConditionKind::IbwDerivative)
    }

    pub fn uses_gauge(self) -> bool {
        matches!(
            self,
            ConditionKind::BanachDerivative | ConditionKind::IbwDerivative
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionKind::Banach => "banach",
            ConditionKind::Ibw => "ibw",
            ConditionKind::BanachDerivative => "banach_derivative",
            ConditionKind::IbwDerivative => "ibw_derivative",
        }
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ConditionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown condition `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionEval {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Coefficients as reported; λ may exceed 1 when re-certifying at a
/// searched bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub lambda: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub problem: String,
    pub condition: ConditionKind,
    pub params: ReportParams,
    pub grid_points: usize,
    pub pairs_checked: usize,
    pub pass: bool,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub lambda_min: Option<f64>,
    pub delta_d: f64,
    pub excluded_fixed_points: usize,
}

/// Smallest λ certifying a condition on the grid, with the pair attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub lambda: f64,
    pub x: f64,
    pub y: f64,
}

/// `(lhs, factor)` for one ordered pair, λ factored out.
fn sides(
    spec: &ProblemSpec,
    kind: ConditionKind,
    alpha: f64,
    x: f64,
    y: f64,
) -> Result<(f64, f64)> {
    let dom = &spec.domain;
    let tx = spec.map.apply(x);
    let ty = spec.map.apply(y);
    if !(tx.is_finite() && ty.is_finite()) {
        return Err(Error::non_finite(
            format!("map `{}`", spec.map.label()),
            format!("pair ({x}, {y})"),
            if tx.is_finite() { ty } else { tx },
        ));
    }
    let d_txty = dom.distance(tx, ty);
    let d_xy = dom.distance(x, y);
    let (lhs, factor) = match kind {
        ConditionKind::Banach => (d_txty, d_xy),
        ConditionKind::Ibw => {
            let d_xtx = dom.distance(x, tx);
            (d_txty, d_xy.powf(alpha) * d_xtx.powf(1.0 - alpha))
        }
        ConditionKind::BanachDerivative => {
            let g = &spec.gauge;
            (g.derivative(d_txty)?, g.derivative(d_xy)?)
        }
        ConditionKind::IbwDerivative => {
            let g = &spec.gauge;
            let d_xtx = dom.distance(x, tx);
            (
                g.derivative(d_txty)?,
                g.derivative(d_xy)?.powf(alpha) * g.derivative(d_xtx)?.powf(1.0 - alpha),
            )
        }
    };
    if !(lhs.is_finite() && factor.is_finite()) {
        return Err(Error::non_finite(
            format!("{kind} condition"),
            format!("pair ({x}, {y})"),
            if lhs.is_finite() { factor } else { lhs },
        ));
    }
    Ok((lhs, factor))
}

fn check_in_domain(spec: &ProblemSpec, x: f64, y: f64) -> Result<()> {
    for p in [x, y] {
        if !spec.domain.contains(p) {
            return Err(Error::Domain(format!(
                "point {p} outside [{}, {}]",
                spec.domain.lower(),
                spec.domain.upper()
            )));
        }
    }
    Ok(())
}

/// Evaluates one inequality at `(x, y)` with the problem's own λ and α.
///
/// For the interpolative kinds the caller is responsible for excluding
/// fixed points of T.
pub fn check_condition(
    spec: &ProblemSpec,
    kind: ConditionKind,
    x: f64,
    y: f64,
    tol: f64,
) -> Result<ConditionEval> {
    check_condition_with(
        spec,
        kind,
        spec.params.lambda(),
        spec.params.alpha(),
        x,
        y,
        tol,
    )
}

/// [`check_condition`] with explicit coefficients.
pub fn check_condition_with(
    spec: &ProblemSpec,
    kind: ConditionKind,
    lambda: f64,
    alpha: f64,
    x: f64,
    y: f64,
    tol: f64,
) -> Result<ConditionEval> {
    check_in_domain(spec, x, y)?;
    let (lhs, factor) = sides(spec, kind, alpha, x, y)?;
    let rhs = lambda * factor;
    Ok(ConditionEval {
        holds: lhs <= rhs + tol,
        lhs,
        rhs,
    })
}

#[derive(Default)]
struct Scan {
    pairs: usize,
    violations: Vec<Violation>,
    best: Option<LambdaEstimate>,
    hard: Vec<(f64, f64, f64)>,
}

impl Scan {
    fn merge(mut self, other: Scan) -> Scan {
        self.pairs += other.pairs;
        self.violations.extend(other.violations);
        self.hard.extend(other.hard);
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if b.lambda > a.lambda { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

struct ScanOutcome {
    scan: Scan,
    fixed_points: usize,
}

fn scan_grid(
    spec: &ProblemSpec,
    kind: ConditionKind,
    lambda: f64,
    alpha: f64,
    tol: f64,
) -> Result<ScanOutcome> {
    let grid = spec.domain.grid();
    let fixed: Vec<bool> = grid
        .iter()
        .map(|&x| spec.domain.distance(x, spec.map.apply(x)) <= FIX_TOL)
        .collect();
    let exclude = kind.is_interpolative();

    let rows: Vec<Scan> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &x)| -> Result<Scan> {
            let mut row = Scan::default();
            if exclude && fixed[i] {
                return Ok(row);
            }
            for (j, &y) in grid.iter().enumerate() {
                if exclude && fixed[j] {
                    continue;
                }
                row.pairs += 1;
                let (lhs, factor) = sides(spec, kind, alpha, x, y)?;
                let rhs = lambda * factor;
                if lhs > rhs + tol {
                    row.violations.push(Violation {
                        x,
                        y,
                        lhs,
                        rhs,
                        margin: lhs - rhs,
                    });
                }
                if factor > ZERO_FACTOR {
                    let ratio = lhs / factor;
                    if row.best.is_none_or(|b| ratio > b.lambda) {
                        row.best = Some(LambdaEstimate {
                            lambda: ratio,
                            x,
                            y,
                        });
                    }
                } else if lhs > tol {
                    row.hard.push((x, y, lhs));
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    // Rows arrive in grid order, so the fold is schedule-independent.
    let scan = rows.into_iter().fold(Scan::default(), Scan::merge);
    let fixed_points = if exclude {
        fixed.iter().filter(|&&f| f).count()
    } else {
        0
    };
    Ok(ScanOutcome { scan, fixed_points })
}

/// Certifies `kind` with the problem's own coefficients.
pub fn certify(spec: &ProblemSpec, kind: ConditionKind, tol: f64) -> Result<CertificationReport> {
    certify_at(spec, kind, spec.params.lambda(), tol)
}

/// Certifies `kind` using coefficient `lambda` (any value ≥ 0) and the
/// problem's α.
pub fn certify_at(
    spec: &ProblemSpec,
    kind: ConditionKind,
    lambda: f64,
    tol: f64,
) -> Result<CertificationReport> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda}")));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be >= 0")));
    }
    let alpha = spec.params.alpha();
    let ScanOutcome { scan, fixed_points } = scan_grid(spec, kind, lambda, alpha, tol)?;

    let mut violations = scan.violations;
    violations.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let violation_count = violations.len();
    violations.truncate(MAX_VIOLATIONS);

    let lambda_min = if scan.hard.is_empty() {
        scan.best.map(|b| b.lambda)
    } else {
        None
    };

    Ok(CertificationReport {
        problem: spec.name.clone(),
        condition: kind,
        params: ReportParams { lambda, alpha },
        grid_points: spec.domain.grid_points(),
        pairs_checked: scan.pairs,
        pass: violation_count == 0,
        violation_count,
        violations,
        lambda_min,
        delta_d: delta_d(&spec.domain),
        excluded_fixed_points: fixed_points,
    })
}

/// The supremum over admissible grid pairs of `lhs / factor`.
///
/// `alpha` is only used by the interpolative kinds. The result may exceed 1,
/// meaning no contraction coefficient certifies the condition on this grid.
pub fn lambda_min(spec: &ProblemSpec, kind: ConditionKind, alpha: f64) -> Result<LambdaEstimate> {
    let alpha = if kind.is_interpolative() {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must lie in (0, 1)"
            )));
        }
        alpha
    } else {
        spec.params.alpha()
    };
    let ScanOutcome { scan, .. } = scan_grid(spec, kind, 0.0, alpha, DEFAULT_TOL)?;
    if let Some(&(x, y, lhs)) = scan.hard.first() {
        return Err(Error::NoFiniteCertificate {
            x,
            y,
            lhs,
            count: scan.hard.len(),
        });
    }
    if scan.pairs == 0 {
        return Err(Error::Degenerate(
            "every grid pair was excluded as a fixed point".into(),
        ));
    }
    // Pairs exist but every factor vanished with lhs within tolerance.
    Ok(scan.best.unwrap_or(LambdaEstimate {
        lambda: 0.0,
        x: f64::NAN,
        y: f64::NAN,
    }))
}

/// [`lambda_min`] for each α, in input order. Errors stay per entry.
pub fn alpha_sweep(
    spec: &ProblemSpec,
    kind: ConditionKind,
    alphas: &[f64],
) -> Vec<(f64, Result<LambdaEstimate>)> {
    alphas
        .iter()
        .map(|&a| (a, lambda_min(spec, kind, a)))
        .collect()
}
