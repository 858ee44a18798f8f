//! Monte-Carlo accuracy experiments over grids of `(alpha, k, estimator)`.

use std::fmt;
use std::str::FromStr;

use ccsketch::entropy::{renyi_value, tsallis_value};
use ccsketch::{
    derive_seed, exact_moment, exact_renyi, exact_shannon, exact_tsallis, project_vector, renyi_from_moment,
    tsallis_from_moment, EstimatorKind, MomentEstimate, MomentEstimator, ProjectionMode, Skewness, SparseVector,
};
use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::report::{MseReport, MseRow};

/// The quantity whose estimation error a report row measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// `F_alpha` itself.
    Moment,
    Renyi,
    Tsallis,
    /// Shannon entropy estimated by the Rényi entropy at `alpha`.
    ShannonViaRenyi,
    /// Shannon entropy estimated by the Tsallis entropy at `alpha`.
    ShannonViaTsallis,
}

impl Target {
    pub const ALL: [Target; 5] =
        [Target::Moment, Target::Renyi, Target::Tsallis, Target::ShannonViaRenyi, Target::ShannonViaTsallis];

    pub fn name(self) -> &'static str {
        match self {
            Target::Moment => "moment",
            Target::Renyi => "renyi",
            Target::Tsallis => "tsallis",
            Target::ShannonViaRenyi => "shannon_via_renyi",
            Target::ShannonViaTsallis => "shannon_via_tsallis",
        }
    }

    pub fn is_entropy(self) -> bool {
        self != Target::Moment
    }

    /// The exact value for signal `v`.
    pub fn truth(self, v: &SparseVector, alpha: f64) -> ccsketch::Result<f64> {
        match self {
            Target::Moment => Ok(exact_moment(v, alpha)),
            Target::Renyi => exact_renyi(v, alpha),
            Target::Tsallis => exact_tsallis(v, alpha),
            Target::ShannonViaRenyi | Target::ShannonViaTsallis => exact_shannon(v),
        }
    }

    /// The estimate implied by a moment estimate `f_hat`.
    pub fn from_moment(self, f_hat: f64, f1: f64, alpha: f64) -> f64 {
        match self {
            Target::Moment => f_hat,
            Target::Renyi | Target::ShannonViaRenyi => renyi_value(f_hat, f1, alpha),
            Target::Tsallis | Target::ShannonViaTsallis => tsallis_value(f_hat, f1, alpha),
        }
    }

    /// Asymptotic variance of the estimate, before normalization.
    fn predicted_variance(self, moment: &MomentEstimate, f1: f64) -> ccsketch::Result<f64> {
        match self {
            Target::Moment => Ok(moment.predicted_relative_variance * moment.value * moment.value),
            Target::Renyi | Target::ShannonViaRenyi => Ok(renyi_from_moment(moment, f1)?.predicted_variance),
            Target::Tsallis | Target::ShannonViaTsallis => Ok(tsallis_from_moment(moment, f1)?.predicted_variance),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown target {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub vectors: Vec<(String, SparseVector)>,
    pub alphas: Vec<f64>,
    pub ks: Vec<usize>,
    pub estimators: Vec<EstimatorKind>,
    pub targets: Vec<Target>,
    pub repetitions: usize,
    pub seed: u64,
    pub mode: ProjectionMode,
}

impl ExperimentConfig {
    pub const DEFAULT_KS: [usize; 4] = [20, 50, 100, 1000];
    pub const DEFAULT_REPETITIONS: usize = 1000;

    /// Defaults: the tabulated alphas, the default `k` grid, all estimators,
    /// moment and Shannon-via-Rényi targets, `R = 1000`.
    pub fn new(vectors: Vec<(String, SparseVector)>) -> Self {
        Self {
            vectors,
            alphas: ccsketch::supported_alphas().collect(),
            ks: Self::DEFAULT_KS.to_vec(),
            estimators: EstimatorKind::ALL.to_vec(),
            targets: vec![Target::Moment, Target::ShannonViaRenyi],
            repetitions: Self::DEFAULT_REPETITIONS,
            seed: 0,
            mode: ProjectionMode::Streamed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(HarnessError::Config(format!("{what} must not be empty")));
        if self.vectors.is_empty() {
            return empty("vector list");
        }
        if self.alphas.is_empty() {
            return empty("alpha grid");
        }
        if self.ks.is_empty() {
            return empty("k grid");
        }
        if self.estimators.is_empty() {
            return empty("estimator set");
        }
        if self.targets.is_empty() {
            return empty("target set");
        }
        if self.repetitions == 0 {
            return Err(HarnessError::Config("repetitions must be at least 1".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a <= 2.0)) {
            return Err(HarnessError::Config(format!("alpha must lie in (0, 2], got {a}")));
        }
        if self.ks.contains(&0) {
            return Err(HarnessError::Config("k must be at least 1".into()));
        }
        Ok(())
    }
}

/// 64-bit FNV-1a, used to key seeds by vector name.
fn name_key(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed of repetition `rep` in the cell `(vector, alpha, k)`. Keyed by values
/// rather than grid positions, so reordering a grid leaves cells unchanged.
pub fn repetition_seed(master: u64, vector: &str, alpha: f64, k: usize, rep: u64) -> u64 {
    derive_seed(&[master, name_key(vector), alpha.to_bits(), k as u64, rep])
}

/// The sketch seed for a projection kind; skewed and symmetric sketches of
/// one repetition get paired, distinct seeds.
pub fn sketch_seed(rep_seed: u64, skew: Skewness) -> u64 {
    derive_seed(&[rep_seed, skew.beta() as u64])
}

struct Cell<'a> {
    name: &'a str,
    vector: &'a SparseVector,
    alpha: f64,
    k: usize,
    jobs: Vec<(MomentEstimator, Vec<Target>)>,
}

struct Accum {
    sum: f64,
    sum_sq: f64,
}

fn run_cell(cell: &Cell<'_>, cfg: &ExperimentConfig) -> Result<Vec<MseRow>> {
    let v = cell.vector;
    let alpha = cell.alpha;
    let f1 = v.f1();
    let mut truths = Vec::new();
    for (_, targets) in &cell.jobs {
        truths.push(targets.iter().map(|t| t.truth(v, alpha)).collect::<ccsketch::Result<Vec<f64>>>()?);
    }
    let mut acc: Vec<Vec<Accum>> =
        cell.jobs.iter().map(|(_, t)| t.iter().map(|_| Accum { sum: 0.0, sum_sq: 0.0 }).collect()).collect();
    let needs = |skew| cell.jobs.iter().any(|(e, _)| e.kind().skew() == skew);
    let (need_skewed, need_symmetric) = (needs(Skewness::MaxSkewed), needs(Skewness::Symmetric));

    for rep in 0..cfg.repetitions as u64 {
        let rep_seed = repetition_seed(cfg.seed, cell.name, alpha, cell.k, rep);
        let build = |skew| project_vector(v, alpha, skew, cell.k, sketch_seed(rep_seed, skew), cfg.mode);
        let skewed = if need_skewed { Some(build(Skewness::MaxSkewed)?) } else { None };
        let symmetric = if need_symmetric { Some(build(Skewness::Symmetric)?) } else { None };
        for (j, (est, targets)) in cell.jobs.iter().enumerate() {
            let sketch = match est.kind().skew() {
                Skewness::MaxSkewed => skewed.as_ref(),
                Skewness::Symmetric => symmetric.as_ref(),
            }
            .expect("sketch built for every job kind");
            let f_hat = est.estimate(sketch)?.value;
            for (t, target) in targets.iter().enumerate() {
                let err = target.from_moment(f_hat, f1, alpha) - truths[j][t];
                acc[j][t].sum += err;
                acc[j][t].sum_sq += err * err;
            }
        }
    }

    let reps = cfg.repetitions as f64;
    let mut rows = Vec::new();
    for (j, (est, targets)) in cell.jobs.iter().enumerate() {
        let true_moment = MomentEstimate {
            value: exact_moment(v, alpha),
            kind: est.kind(),
            alpha,
            k: cell.k,
            predicted_relative_variance: ccsketch::variance_factor(est.kind(), alpha)? / cell.k as f64,
        };
        for (t, &target) in targets.iter().enumerate() {
            let truth = truths[j][t];
            // Errors are relative to the true value unless it is zero.
            let scale = if truth != 0.0 { truth.abs() } else { 1.0 };
            let a = &acc[j][t];
            rows.push(MseRow {
                vector: cell.name.to_string(),
                target,
                estimator: est.kind(),
                alpha,
                k: cell.k,
                reps: cfg.repetitions,
                mse_norm: a.sum_sq / reps / (scale * scale),
                bias: a.sum / reps / scale,
                theory_var: target.predicted_variance(&true_moment, f1)? / (scale * scale),
            });
        }
    }
    Ok(rows)
}

/// Runs every valid cell of the grid. Estimator/alpha/k combinations the
/// estimator does not support, and entropy targets at `alpha = 1`, are
/// skipped and listed in the report's warnings. Rows come out sorted by
/// `(vector, target, estimator, alpha, k)`.
pub fn run_mse_experiment(cfg: &ExperimentConfig) -> Result<MseReport> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    let mut cells = Vec::new();
    for (name, vector) in &cfg.vectors {
        for &alpha in &cfg.alphas {
            for &k in &cfg.ks {
                let mut jobs = Vec::new();
                for &kind in &cfg.estimators {
                    let est = match MomentEstimator::new(kind, alpha, k) {
                        Ok(e) => e,
                        Err(e) => {
                            let w = format!("skipping {kind} at alpha {alpha}, k {k}: {e}");
                            if !warnings.contains(&w) {
                                warnings.push(w);
                            }
                            continue;
                        }
                    };
                    let targets: Vec<Target> = cfg
                        .targets
                        .iter()
                        .copied()
                        .filter(|t| {
                            let ok = !(t.is_entropy() && alpha == 1.0);
                            if !ok {
                                let w = format!("skipping {t} at alpha 1: the entropies need alpha != 1");
                                if !warnings.contains(&w) {
                                    warnings.push(w);
                                }
                            }
                            ok
                        })
                        .collect();
                    if !targets.is_empty() {
                        jobs.push((est, targets));
                    }
                }
                if !jobs.is_empty() {
                    cells.push(Cell { name, vector, alpha, k, jobs });
                }
            }
        }
    }
    let per_cell: Vec<Result<Vec<MseRow>>> = cells.par_iter().map(|c| run_cell(c, cfg)).collect();
    let mut rows = Vec::new();
    for r in per_cell {
        rows.extend(r?);
    }
    let mut report = MseReport { rows, warnings };
    report.sort();
    Ok(report)
}
