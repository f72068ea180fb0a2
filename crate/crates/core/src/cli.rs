//! Command-line front end.
//!
//! Exit codes: 0 pass/converged, 2 certification failure, 3 non-convergence,
//! 64 usage error, 1 internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certify::{alpha_sweep, certify, ConditionKind, DEFAULT_TOL};
use crate::error::Error;
use crate::export::{
    figure1_surfaces, format_number, solution_table, trace_table, write_csv, write_report, Table,
};
use crate::fredholm::{
    fredholm_problem, kernel_condition_over_range, padded_range, solve_fredholm, sup_metric,
    GridFunction, FREDHOLM_PROBLEMS,
};
use crate::picard::{picard_iterate, uniqueness_probe};
use crate::problem::{ContractionParams, ProblemSpec, Registry, DEFAULT_GRID};
use crate::quadrature::{QuadratureRule, RuleKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "derivfix",
    version,
    about = "Certify derivative-type contractions and compute fixed points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a contractive condition on every ordered grid pair.
    Certify(CertifyArgs),
    /// Run the Picard iteration and write its trace.
    Iterate(IterateArgs),
    /// Solve a built-in Fredholm integral equation.
    Fredholm(FredholmArgs),
    /// Write both sides of the derivative-type inequality on (0,1]².
    Figure(FigureArgs),
    /// Estimate the minimal λ for a list of α values.
    Sweep(SweepArgs),
    /// List built-in problems.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConditionArg {
    Banach,
    Ibw,
    BanachDerivative,
    IbwDerivative,
}

impl From<ConditionArg> for ConditionKind {
    fn from(c: ConditionArg) -> Self {
        match c {
            ConditionArg::Banach => ConditionKind::Banach,
            ConditionArg::Ibw => ConditionKind::Ibw,
            ConditionArg::BanachDerivative => ConditionKind::BanachDerivative,
            ConditionArg::IbwDerivative => ConditionKind::IbwDerivative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Gauss,
    Trapezoid,
}

impl From<RuleArg> for RuleKind {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Gauss => RuleKind::GaussLegendre,
            RuleArg::Trapezoid => RuleKind::CompositeTrapezoid,
        }
    }
}

/// Options shared by the commands that work on a registered interval problem.
#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub problem: String,
    /// Override λ (must lie in [0, 1)).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Override α (must lie in (0, 1)).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Reserved for randomized sweeps.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "ibw-derivative")]
    pub condition: ConditionArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// JSON report destination.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub x0: f64,
    #[arg(long, default_value_t = crate::picard::DEFAULT_STOP_TOL)]
    pub stop_tol: f64,
    #[arg(long, default_value_t = crate::picard::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Also iterate from these starts and compare the limits.
    #[arg(long, value_delimiter = ',')]
    pub probe: Vec<f64>,
    /// Trace CSV destination.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FredholmArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long, value_enum, default_value = "gauss")]
    pub rule: RuleArg,
    /// Node count (default 64 for gauss, 129 for trapezoid).
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = crate::fredholm::DEFAULT_STOP_TOL)]
    pub stop_tol: f64,
    #[arg(long, default_value_t = crate::fredholm::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Solution CSV destination.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Kernel-condition JSON destination.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "ibw-derivative")]
    pub condition: ConditionArg,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
    )]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failure that maps to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownProblem(_) | Error::InvalidParameter(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// writing human output to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let registry = Registry::new();
    let result = match cli.command {
        Command::Certify(a) => cmd_certify(&registry, a, out),
        Command::Iterate(a) => cmd_iterate(&registry, a, out),
        Command::Fredholm(a) => cmd_fredholm(a, out),
        Command::Figure(a) => cmd_figure(&registry, a, out),
        Command::Sweep(a) => cmd_sweep(&registry, a, out),
        Command::List => cmd_list(&registry, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if f.code == EXIT_USAGE {
                let _ = writeln!(err, "run `derivfix --help` for usage");
            }
            f.code
        }
    }
}

fn override_params(
    base: ContractionParams,
    lambda: Option<f64>,
    alpha: Option<f64>,
) -> std::result::Result<ContractionParams, Failure> {
    ContractionParams::new(
        lambda.unwrap_or(base.lambda()),
        alpha.unwrap_or(base.alpha()),
    )
    .map_err(|e| Failure::usage(e.to_string()))
}

fn resolve(registry: &Registry, a: &ProblemArgs) -> std::result::Result<ProblemSpec, Failure> {
    let spec = registry.lookup(&a.problem)?;
    let params = override_params(spec.params, a.lambda, a.alpha)?;
    spec.with_params(params)
        .with_grid_points(a.grid)
        .map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_certify(registry: &Registry, a: CertifyArgs, out: &mut dyn Write) -> CmdResult {
    let spec = resolve(registry, &a.problem)?;
    if !(a.tol >= 0.0) {
        return Err(Failure::usage(format!("--tol {} must be >= 0", a.tol)));
    }
    let kind = ConditionKind::from(a.condition);
    let report = certify(&spec, kind, a.tol)?;
    writeln!(
        out,
        "problem {} condition {} lambda {} alpha {} grid {}",
        spec.name, kind, report.params.lambda, report.params.alpha, report.grid_points
    )?;
    writeln!(
        out,
        "pairs checked {}, fixed points excluded {}, delta_d {}",
        report.pairs_checked, report.excluded_fixed_points, report.delta_d
    )?;
    match report.lambda_min {
        Some(l) => writeln!(out, "grid lambda_min {l}")?,
        None => writeln!(out, "grid lambda_min none")?,
    }
    if report.pass {
        writeln!(out, "PASS")?;
    } else {
        writeln!(out, "FAIL: {} violation(s)", report.violation_count)?;
        for v in report.violations.iter().take(5) {
            writeln!(
                out,
                "  x {} y {} lhs {} rhs {} margin {}",
                v.x, v.y, v.lhs, v.rhs, v.margin
            )?;
        }
    }
    if let Some(path) = &a.output {
        write_report(path, &report)?;
    }
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

fn cmd_iterate(registry: &Registry, a: IterateArgs, out: &mut dyn Write) -> CmdResult {
    let spec = resolve(registry, &a.problem)?;
    if !spec.domain.contains(a.x0) {
        return Err(Failure::usage(format!("--x0 {} outside the domain", a.x0)));
    }
    let trace = picard_iterate(&spec, a.x0, a.stop_tol, a.max_iter)?;
    if let Some(path) = &a.output {
        write_csv(path, &trace_table(&trace))?;
    }
    match trace.fixed_point {
        Some(x) => writeln!(
            out,
            "converged after {} step(s): fixed point {:e} residual {:e}",
            trace.steps(),
            x,
            trace.residual
        )?,
        None => writeln!(
            out,
            "not converged after {} step(s): last iterate {:e} last step {:e}",
            trace.steps(),
            trace.last(),
            trace.step_distances.last().copied().unwrap_or(f64::NAN)
        )?,
    }
    let mut code = if trace.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    };
    if !a.probe.is_empty() {
        let probe = uniqueness_probe(&spec, &a.probe, a.stop_tol)?;
        writeln!(
            out,
            "uniqueness probe: agree {} max_spread {:e} limits [{}]",
            probe.agree,
            probe.max_spread,
            probe
                .fixed_points
                .iter()
                .map(|x| format!("{x:e}"))
                .collect::<Vec<_>>()
                .join(", ")
        )?;
        if probe.runs.iter().any(|r| !r.converged) {
            code = EXIT_NOT_CONVERGED;
        }
    }
    Ok(code)
}

fn cmd_fredholm(a: FredholmArgs, out: &mut dyn Write) -> CmdResult {
    let kind = RuleKind::from(a.rule);
    let rule = match a.nodes {
        Some(n) => QuadratureRule::new(kind, n)?,
        None => crate::fredholm::default_rule(kind),
    };
    let p = fredholm_problem(&a.problem, rule)?;
    let params = override_params(p.params, a.lambda, a.alpha)?;
    let p = p.with_params(params);
    let sol = solve_fredholm(&p, None, a.stop_tol, a.max_iter)?;
    writeln!(
        out,
        "problem {} rule {} nodes {}",
        p.name,
        p.rule.kind(),
        p.rule.n_nodes()
    )?;
    if sol.converged {
        writeln!(
            out,
            "converged after {} iteration(s), residual {:e}",
            sol.iterations, sol.residual
        )?;
    } else {
        writeln!(
            out,
            "not converged after {} iteration(s), final step {:e}",
            sol.iterations,
            sol.final_step()
        )?;
    }
    if p.name == "linear-test" {
        let exact = GridFunction::sample(&p.rule, |t| 1.2 * t);
        writeln!(
            out,
            "max error vs 6t/5: {:e}",
            sup_metric(&sol.solution, &exact)?
        )?;
    }
    if let Some(path) = &a.output {
        write_csv(path, &solution_table(&p, &sol.solution))?;
    }
    if let Some(path) = &a.report {
        let report =
            kernel_condition_over_range(&p, padded_range(sol.value_range), 5, DEFAULT_TOL)?;
        writeln!(
            out,
            "sampled kernel condition: pass {} ({} violation(s) over {} checks)",
            report.pass, report.violation_count, report.pairs_checked
        )?;
        write_report(path, &report)?;
    }
    Ok(if sol.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn cmd_figure(registry: &Registry, a: FigureArgs, out: &mut dyn Write) -> CmdResult {
    let spec = registry.lookup(&a.problem)?;
    let params = override_params(spec.params, a.lambda, a.alpha)?;
    let spec = spec.with_params(params);
    if a.n < 2 {
        return Err(Failure::usage(format!("--n {} must be >= 2", a.n)));
    }
    let surf = figure1_surfaces(&spec, a.n)?;
    let bad = surf.violations(a.tol);
    if let Some(path) = &a.output {
        write_csv(path, &surf.to_table())?;
    }
    writeln!(
        out,
        "{} grid points, lhs > rhs + {} at {} point(s)",
        a.n * a.n,
        a.tol,
        bad.len()
    )?;
    if let Some(&(x, y, l, r)) = bad.first() {
        writeln!(out, "  first: x {x} y {y} lhs {l} rhs {r}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(registry: &Registry, a: SweepArgs, out: &mut dyn Write) -> CmdResult {
    let spec = resolve(registry, &a.problem)?;
    if a.alphas.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(Failure::usage("every alpha must lie in (0, 1)"));
    }
    let kind = ConditionKind::from(a.condition);
    let mut table = Table::new(["alpha", "lambda_min"]);
    let mut failed = false;
    for (alpha, est) in alpha_sweep(&spec, kind, &a.alphas) {
        match est {
            Ok(e) => {
                writeln!(
                    out,
                    "alpha {} lambda_min {}",
                    format_number(alpha),
                    format_number(e.lambda)
                )?;
                table.rows.push(vec![alpha, e.lambda]);
            }
            Err(e) => {
                failed = true;
                writeln!(out, "alpha {} error: {e}", format_number(alpha))?;
                table.rows.push(vec![alpha, f64::NAN]);
            }
        }
    }
    if let Some(path) = &a.output {
        write_csv(path, &table)?;
    }
    Ok(if failed { EXIT_INTERNAL } else { EXIT_OK })
}

fn cmd_list(registry: &Registry, out: &mut dyn Write) -> CmdResult {
    for name in registry.names() {
        let spec = registry.lookup(&name)?;
        writeln!(
            out,
            "{name}: T(x) = {} on [{}, {}], gauge {}",
            spec.map.label(),
            spec.domain.lower(),
            spec.domain.upper(),
            spec.gauge.label()
        )?;
    }
    for name in FREDHOLM_PROBLEMS {
        writeln!(out, "{name}: Fredholm integral equation")?;
    }
    Ok(EXIT_OK)
}
