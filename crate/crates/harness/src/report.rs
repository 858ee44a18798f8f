//! Experiment reports and their CSV form.
//!
//! Statistics are written with 17 significant digits and `alpha` in its
//! shortest round-trip form, so reading a file back reproduces the report
//! exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ccsketch::EstimatorKind;

use crate::error::{HarnessError, Result};
use crate::experiment::Target;

pub const CSV_HEADER: [&str; 9] =
    ["vector", "target", "estimator", "alpha", "k", "reps", "mse_norm", "bias", "theory_var"];

#[derive(Debug, Clone, PartialEq)]
pub struct MseRow {
    pub vector: String,
    pub target: Target,
    pub estimator: EstimatorKind,
    pub alpha: f64,
    pub k: usize,
    pub reps: usize,
    /// Mean square error over the squared true value.
    pub mse_norm: f64,
    /// Mean error over the true value.
    pub bias: f64,
    /// Predicted asymptotic variance over the squared true value.
    pub theory_var: f64,
}

impl MseRow {
    /// Order by `(vector, target, estimator, alpha, k)`.
    pub fn canonical_cmp(a: &MseRow, b: &MseRow) -> Ordering {
        a.vector
            .cmp(&b.vector)
            .then(a.target.cmp(&b.target))
            .then(a.estimator.cmp(&b.estimator))
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.k.cmp(&b.k))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MseReport {
    pub rows: Vec<MseRow>,
    /// Grid combinations that were skipped, and why.
    pub warnings: Vec<String>,
}

impl MseReport {
    pub fn sort(&mut self) {
        self.rows.sort_by(MseRow::canonical_cmp);
    }
}

fn stat(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(report: &MseReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.vector.clone(),
            r.target.name().to_string(),
            r.estimator.name().to_string(),
            r.alpha.to_string(),
            r.k.to_string(),
            r.reps.to_string(),
            stat(r.mse_norm),
            stat(r.bias),
            stat(r.theory_var),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_csv(report: &MseReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_csv(report, file)
}

pub fn read_csv_from<R: Read>(input: R, label: &Path) -> Result<MseReport> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Parse {
            path: label.to_path_buf(),
            line: 1,
            message: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (n, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = n + 2;
        let err = |message: String| HarnessError::Parse { path: label.to_path_buf(), line, message };
        let field = |i: usize| rec.get(i).ok_or_else(|| err(format!("missing column {}", CSV_HEADER[i])));
        let num = |i: usize| -> Result<f64> {
            let s = field(i)?;
            s.parse().map_err(|_| err(format!("bad {} {s:?}", CSV_HEADER[i])))
        };
        let int = |i: usize| -> Result<usize> {
            let s = field(i)?;
            s.parse().map_err(|_| err(format!("bad {} {s:?}", CSV_HEADER[i])))
        };
        rows.push(MseRow {
            vector: field(0)?.to_string(),
            target: field(1)?.parse().map_err(|e: HarnessError| err(e.to_string()))?,
            estimator: field(2)?.parse().map_err(|e: ccsketch::Error| err(e.to_string()))?,
            alpha: num(3)?,
            k: int(4)?,
            reps: int(5)?,
            mse_norm: num(6)?,
            bias: num(7)?,
            theory_var: num(8)?,
        });
    }
    Ok(MseReport { rows, warnings: Vec::new() })
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<MseReport> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_csv_from(file, path)
}

/// For every `(vector, target, estimator, k)`, the row with the smallest
/// `mse_norm` over alpha; its `alpha` is the argmin. Each group needs at
/// least two distinct alphas. Ties keep the smaller alpha.
pub fn min_mse_curves(report: &MseReport) -> Result<MseReport> {
    let mut groups: BTreeMap<(String, Target, EstimatorKind, usize), Vec<&MseRow>> = BTreeMap::new();
    for r in &report.rows {
        groups.entry((r.vector.clone(), r.target, r.estimator, r.k)).or_default().push(r);
    }
    let mut rows = Vec::new();
    for ((vector, target, estimator, k), mut members) in groups {
        members.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
        members.dedup_by(|a, b| a.alpha == b.alpha);
        if members.len() < 2 {
            return Err(HarnessError::Config(format!(
                "min-MSE curve for {vector}/{target}/{estimator}/k={k} needs at least two alphas"
            )));
        }
        let best = members
            .iter()
            .copied()
            .reduce(|best, r| if r.mse_norm < best.mse_norm { r } else { best })
            .expect("group is nonempty");
        rows.push(best.clone());
    }
    let mut out = MseReport { rows, warnings: report.warnings.clone() };
    out.sort();
    Ok(out)
}
