//! Recovering the frequency moment `F_(alpha)` from projected samples.
//!
//! Skewed sketches store factored samples `x'_j ~ S(alpha, 1, F cos(rho alpha))`.
//! Every estimator here accounts for that constant, so the returned value
//! estimates `F` itself. Products are evaluated in log-space.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::sketch::ProjectionSketch;
use crate::stable::{check_alpha, hm_variance_factor, quantile_constants, variance_factor, SkewAngle, Skewness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    /// Geometric mean over a skewed sketch.
    Gm,
    /// Harmonic mean over a skewed sketch, `alpha < 1` only.
    Hm,
    /// Optimal quantile over a skewed sketch, tabulated alphas only.
    Oq,
    /// Geometric mean over a symmetric sketch.
    GmSym,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [EstimatorKind::Gm, EstimatorKind::Hm, EstimatorKind::Oq, EstimatorKind::GmSym];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Gm => "gm",
            EstimatorKind::Hm => "hm",
            EstimatorKind::Oq => "oq",
            EstimatorKind::GmSym => "sym-gm",
        }
    }

    /// The projection law this estimator reads.
    pub fn skew(self) -> Skewness {
        match self {
            EstimatorKind::GmSym => Skewness::Symmetric,
            _ => Skewness::MaxSkewed,
        }
    }

    /// Whether the estimator is defined at `alpha`.
    pub fn supports(self, alpha: f64) -> bool {
        variance_factor(self, alpha).is_ok()
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gm" => Ok(EstimatorKind::Gm),
            "hm" => Ok(EstimatorKind::Hm),
            "oq" => Ok(EstimatorKind::Oq),
            "sym-gm" | "gm-sym" => Ok(EstimatorKind::GmSym),
            other => Err(Error::param(format!("unknown estimator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: f64,
    pub kind: EstimatorKind,
    pub alpha: f64,
    pub k: usize,
    /// `V / k`: predicted `Var(F_hat) / F^2`.
    pub predicted_relative_variance: f64,
}

/// The geometric-mean normalizer `D_gm` for skewed samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmNormalizer {
    pub alpha: f64,
    pub k: usize,
    pub kappa: f64,
    pub d_gm: f64,
    // ln(D_gm cos(kappa pi / 2)): the normalizer for factored samples.
    ln_factored: f64,
}

/// `k ln[(2/pi) sin(pi alpha / 2k) Gamma(1 - 1/k) Gamma(alpha / k)]`, shared by
/// both geometric-mean normalizers.
fn ln_gm_core(alpha: f64, k: usize) -> f64 {
    let kf = k as f64;
    kf * (FRAC_2_PI.ln() + (PI * alpha / (2.0 * kf)).sin().ln() + ln_gamma(1.0 - 1.0 / kf) + ln_gamma(alpha / kf))
}

impl GmNormalizer {
    pub fn new(alpha: f64, k: usize) -> Result<Self> {
        check_alpha(alpha, Skewness::MaxSkewed)?;
        if k < 2 {
            return Err(Error::param("gm estimator needs k >= 2"));
        }
        let kappa = if alpha < 1.0 { alpha } else { 2.0 - alpha };
        let kf = k as f64;
        let ln_factored = kf * (kappa * FRAC_PI_2 / kf).cos().ln() + ln_gm_core(alpha, k);
        let d_gm = (ln_factored - (kappa * FRAC_PI_2).cos().ln()).exp();
        Ok(Self { alpha, k, kappa, d_gm, ln_factored })
    }
}

/// A reusable estimator with its normalizing constants computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimator {
    kind: EstimatorKind,
    alpha: f64,
    k: usize,
    variance_factor: f64,
    rule: Rule,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Rule {
    /// `exp((alpha/k) sum ln|x| - ln_norm)`
    GeometricMean { ln_norm: f64 },
    /// `numerator / sum |x|^-alpha`
    HarmonicMean { numerator: f64 },
    /// `x_(m)^alpha / denom`
    Quantile { m: usize, ln_denom: f64 },
}

impl MomentEstimator {
    pub fn new(kind: EstimatorKind, alpha: f64, k: usize) -> Result<Self> {
        check_alpha(alpha, kind.skew())?;
        if k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        let variance_factor = variance_factor(kind, alpha)?;
        let rule = match kind {
            EstimatorKind::Gm => Rule::GeometricMean { ln_norm: GmNormalizer::new(alpha, k)?.ln_factored },
            EstimatorKind::GmSym => {
                if k < 2 {
                    return Err(Error::param("sym-gm estimator needs k >= 2"));
                }
                Rule::GeometricMean { ln_norm: ln_gm_core(alpha, k) }
            }
            EstimatorKind::Hm => {
                let kf = k as f64;
                // cos(alpha pi / 2) is already carried by the factored samples.
                let correction = 1.0 - hm_variance_factor(alpha) / kf;
                Rule::HarmonicMean { numerator: kf * (-ln_gamma(1.0 + alpha)).exp() * correction }
            }
            EstimatorKind::Oq => {
                let qc = quantile_constants(alpha)?;
                let deferred = SkewAngle::new(alpha, Skewness::MaxSkewed).deferred_scale(alpha);
                Rule::Quantile { m: quantile_index(qc.q_star, k), ln_denom: alpha * qc.w_alpha.ln() + deferred.ln() }
            }
        };
        Ok(Self { kind, alpha, k, variance_factor, rule })
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Estimate from samples as stored in a sketch of the matching kind.
    /// Reorders `samples` when the rule needs an order statistic.
    pub fn estimate_samples(&self, samples: &mut [f64]) -> Result<f64> {
        if samples.len() != self.k {
            return Err(Error::param(format!("expected {} samples, got {}", self.k, samples.len())));
        }
        let alpha = self.alpha;
        match self.rule {
            Rule::GeometricMean { ln_norm } => {
                let mut log_sum = 0.0;
                for (j, &x) in samples.iter().enumerate() {
                    if x == 0.0 {
                        return Err(Error::DegenerateSketch(j));
                    }
                    log_sum += x.abs().ln();
                }
                Ok((alpha / self.k as f64 * log_sum - ln_norm).exp())
            }
            Rule::HarmonicMean { numerator } => {
                let mut inv_sum = 0.0;
                for (j, &x) in samples.iter().enumerate() {
                    if x == 0.0 {
                        return Err(Error::DegenerateSketch(j));
                    }
                    inv_sum += (-alpha * x.abs().ln()).exp();
                }
                Ok(numerator / inv_sum)
            }
            Rule::Quantile { m, ln_denom } => {
                let (_, q, _) = samples.select_nth_unstable_by(m - 1, |a, b| a.abs().total_cmp(&b.abs()));
                let q = q.abs();
                if q == 0.0 {
                    return Ok(0.0);
                }
                Ok((alpha * q.ln() - ln_denom).exp())
            }
        }
    }

    pub fn estimate(&self, sketch: &ProjectionSketch) -> Result<MomentEstimate> {
        if sketch.skew() != self.kind.skew() {
            return Err(Error::param(format!(
                "{} estimator needs a {} sketch, got {}",
                self.kind,
                self.kind.skew(),
                sketch.skew()
            )));
        }
        if sketch.alpha().to_bits() != self.alpha.to_bits() || sketch.k() != self.k {
            return Err(Error::param("sketch alpha or k does not match the estimator"));
        }
        let mut x = sketch.x();
        let value = self.estimate_samples(&mut x)?;
        Ok(MomentEstimate {
            value,
            kind: self.kind,
            alpha: self.alpha,
            k: self.k,
            predicted_relative_variance: self.variance_factor / self.k as f64,
        })
    }
}

/// 1-based rank `ceil(q k)`, clamped to `[1, k]`. A 1e-9 slack absorbs
/// representation error in `q k` (e.g. `0.108 * 1000`).
pub fn quantile_index(q: f64, k: usize) -> usize {
    let m = (q * k as f64 - 1e-9).ceil();
    (m.max(1.0) as usize).min(k)
}

pub fn estimate(kind: EstimatorKind, sketch: &ProjectionSketch) -> Result<MomentEstimate> {
    MomentEstimator::new(kind, sketch.alpha(), sketch.k())?.estimate(sketch)
}

pub fn estimate_gm(sketch: &ProjectionSketch) -> Result<MomentEstimate> {
    estimate(EstimatorKind::Gm, sketch)
}

pub fn estimate_hm(sketch: &ProjectionSketch) -> Result<MomentEstimate> {
    if sketch.alpha() >= 1.0 {
        return Err(Error::domain(format!("hm estimator requires alpha < 1, got {}", sketch.alpha())));
    }
    estimate(EstimatorKind::Hm, sketch)
}

pub fn estimate_oq(sketch: &ProjectionSketch) -> Result<MomentEstimate> {
    estimate(EstimatorKind::Oq, sketch)
}

pub fn estimate_gm_sym(sketch: &ProjectionSketch) -> Result<MomentEstimate> {
    estimate(EstimatorKind::GmSym, sketch)
}
