//! Surface data for the interval example and CSV/JSON serialization.
//!
//! CSV numbers are written in scientific notation with 17 significant
//! digits, enough to round-trip any `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{check_condition, ConditionKind};
use crate::error::{Error, Result};
use crate::fredholm::{FredholmProblem, GridFunction};
use crate::picard::IterationTrace;
use crate::problem::ProblemSpec;

/// Both sides of the derivative-type interpolative inequality on
/// `{i/n : i = 1..n}²`. `lhs[i][j]` belongs to `(xs[i], ys[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub lhs: Vec<Vec<f64>>,
    pub rhs: Vec<Vec<f64>>,
}

impl SurfaceGrid {
    /// Grid points where `lhs > rhs + tol`, as `(x, y, lhs, rhs)`.
    pub fn violations(&self, tol: f64) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::new();
        for (i, &x) in self.xs.iter().enumerate() {
            for (j, &y) in self.ys.iter().enumerate() {
                let (l, r) = (self.lhs[i][j], self.rhs[i][j]);
                if l > r + tol {
                    out.push((x, y, l, r));
                }
            }
        }
        out
    }

    pub fn to_table(&self) -> Table {
        let mut table = Table::new(["x", "y", "lhs", "rhs"]);
        for (i, &x) in self.xs.iter().enumerate() {
            for (j, &y) in self.ys.iter().enumerate() {
                table.rows.push(vec![x, y, self.lhs[i][j], self.rhs[i][j]]);
            }
        }
        table
    }
}

/// Evaluates the `ibw_derivative` sides on `(0, 1]²` with an `n × n` grid.
pub fn figure1_surfaces(spec: &ProblemSpec, n: usize) -> Result<SurfaceGrid> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} must be >= 2")));
    }
    if !(spec.domain.lower() <= 0.0 && spec.domain.upper() >= 1.0) {
        return Err(Error::Domain(format!(
            "surface grid needs (0, 1] inside [{}, {}]",
            spec.domain.lower(),
            spec.domain.upper()
        )));
    }
    let xs: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = xs
        .par_iter()
        .map(|&x| -> Result<_> {
            let mut l = Vec::with_capacity(n);
            let mut r = Vec::with_capacity(n);
            for &y in &xs {
                let ev = check_condition(spec, ConditionKind::IbwDerivative, x, y, 0.0)?;
                l.push(ev.lhs);
                r.push(ev.rhs);
            }
            Ok((l, r))
        })
        .collect::<Result<_>>()?;
    let (lhs, rhs) = rows.into_iter().unzip();
    Ok(SurfaceGrid {
        ys: xs.clone(),
        xs,
        lhs,
        rhs,
    })
}

/// A header plus rows of numbers.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Columns `n, x_n, step_distance, gauge_step, apriori_bound`, one row per step.
pub fn trace_table(trace: &IterationTrace) -> Table {
    let mut table = Table::new(["n", "x_n", "step_distance", "gauge_step", "apriori_bound"]);
    for n in 0..trace.steps() {
        table.rows.push(vec![
            n as f64,
            trace.iterates[n],
            trace.step_distances[n],
            trace.gauge_steps[n],
            trace.apriori_bounds[n],
        ]);
    }
    table
}

/// Columns `node, weight, u_value`.
pub fn solution_table(p: &FredholmProblem, u: &GridFunction) -> Table {
    let mut table = Table::new(["node", "weight", "u_value"]);
    for ((&t, &w), &v) in p.rule.nodes().iter().zip(p.rule.weights()).zip(&u.values) {
        table.rows.push(vec![t, w, v]);
    }
    table
}

pub fn write_csv(path: &Path, table: &Table) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(&table.header).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_number(*v)))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let csv_err = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|e| {
                    Error::InvalidParameter(format!("{}: bad number `{f}`: {e}", path.display()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_report<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
}
