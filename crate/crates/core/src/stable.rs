//! Maximally-skewed and symmetric stable laws.
//!
//! `S(alpha, beta, F)` here has characteristic function
//! `exp(-F |t|^alpha (1 - i beta sign(t) tan(pi alpha / 2)))`, so `F` is the
//! scale raised to the power `alpha`. Projections of a nonnegative vector `A`
//! onto i.i.d. `S(alpha, 1, 1)` entries are `S(alpha, 1, sum A_i^alpha)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::tape::RandomTape;

/// Skewness parameter; only the two values used by the sketches are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Skewness {
    /// `beta = 0`.
    Symmetric,
    /// `beta = 1`.
    MaxSkewed,
}

impl Skewness {
    pub fn beta(self) -> f64 {
        match self {
            Skewness::Symmetric => 0.0,
            Skewness::MaxSkewed => 1.0,
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            Skewness::Symmetric => 0,
            Skewness::MaxSkewed => 1,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Skewness::Symmetric),
            1 => Some(Skewness::MaxSkewed),
            _ => None,
        }
    }
}

impl fmt::Display for Skewness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Skewness::Symmetric => "symmetric",
            Skewness::MaxSkewed => "skewed",
        })
    }
}

impl std::str::FromStr for Skewness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" | "sym" => Ok(Skewness::Symmetric),
            "skewed" | "cc" => Ok(Skewness::MaxSkewed),
            other => Err(Error::param(format!("unknown skewness {other:?}"))),
        }
    }
}

pub(crate) fn check_alpha(alpha: f64, skew: Skewness) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::param(format!("alpha must lie in (0, 2], got {alpha}")));
    }
    if skew == Skewness::MaxSkewed && alpha == 1.0 {
        return Err(Error::param("alpha = 1 is not supported for the skewed law; the first moment is exact"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    skew: Skewness,
    scale: f64,
}

impl StableParams {
    pub fn new(alpha: f64, skew: Skewness, scale: f64) -> Result<Self> {
        check_alpha(alpha, skew)?;
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::param(format!("scale must be finite and >= 0, got {scale}")));
        }
        Ok(Self { alpha, skew, scale })
    }

    pub fn standard(alpha: f64, skew: Skewness) -> Result<Self> {
        Self::new(alpha, skew, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn skew(&self) -> Skewness {
        self.skew
    }

    pub fn beta(&self) -> f64 {
        self.skew.beta()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// The shift `rho` of the sampler's uniform angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewAngle {
    rho: f64,
}

impl SkewAngle {
    pub fn new(alpha: f64, skew: Skewness) -> Self {
        let rho = match skew {
            Skewness::Symmetric => 0.0,
            Skewness::MaxSkewed if alpha < 1.0 => FRAC_PI_2,
            Skewness::MaxSkewed => FRAC_PI_2 * (2.0 - alpha) / alpha,
        };
        Self { rho }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `cos(rho * alpha)`: the scale carried by factored samples. Equal to
    /// `cos(kappa pi / 2)` with `kappa = alpha` below 1 and `2 - alpha` above.
    pub fn deferred_scale(&self, alpha: f64) -> f64 {
        (self.rho * alpha).cos()
    }
}

/// Chambers-Mallows-Stuck transform with constants hoisted for a fixed `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmsSampler {
    alpha: f64,
    rho: f64,
    inv_alpha: f64,
    tail_exp: f64,
    // cos(rho alpha)^(1/alpha), divided out of factored samples to get S(alpha, beta, 1)
    unfactor: f64,
}

impl CmsSampler {
    pub fn new(alpha: f64, skew: Skewness) -> Result<Self> {
        check_alpha(alpha, skew)?;
        let angle = SkewAngle::new(alpha, skew);
        let inv_alpha = 1.0 / alpha;
        Ok(Self {
            alpha,
            rho: angle.rho(),
            inv_alpha,
            tail_exp: (1.0 - alpha) / alpha,
            unfactor: angle.deferred_scale(alpha).powf(inv_alpha),
        })
    }

    /// `Z' = Z cos^(1/alpha)(rho alpha) ~ S(alpha, beta, cos(rho alpha))` from explicit `(U, W)`.
    #[inline]
    pub fn factored_from(&self, u: f64, w: f64) -> f64 {
        let shifted = self.alpha * (u + self.rho);
        let log_mag = self.tail_exp * ((u - shifted).cos().ln() - w.ln()) - self.inv_alpha * u.cos().ln();
        shifted.sin() * log_mag.exp()
    }

    /// `Z ~ S(alpha, beta, 1)` from explicit `(U, W)`.
    #[inline]
    pub fn standard_from(&self, u: f64, w: f64) -> f64 {
        self.factored_from(u, w) / self.unfactor
    }

    #[inline]
    pub fn factored(&self, tape: &mut RandomTape) -> f64 {
        let (u, w) = tape.next_angle_exp();
        self.factored_from(u, w)
    }

    #[inline]
    pub fn standard(&self, tape: &mut RandomTape) -> f64 {
        let (u, w) = tape.next_angle_exp();
        self.standard_from(u, w)
    }

    /// `cos^(1/alpha)(rho alpha)`, the ratio `Z' / Z`.
    pub fn unfactor(&self) -> f64 {
        self.unfactor
    }
}

/// One draw of `S(alpha, beta, scale)`; consumes one tape position.
pub fn sample_stable(params: &StableParams, tape: &mut RandomTape) -> f64 {
    let sampler = CmsSampler::new(params.alpha, params.skew).expect("StableParams are validated on construction");
    let z = sampler.standard(tape);
    if params.scale == 1.0 {
        z
    } else {
        z * params.scale.powf(1.0 / params.alpha)
    }
}

/// One draw of `Z cos^(1/alpha)(rho alpha)`, i.e. the law scaled by `cos(rho alpha)`.
/// For the symmetric law this coincides with [`sample_stable`].
pub fn sample_stable_factored(params: &StableParams, tape: &mut RandomTape) -> f64 {
    let sampler = CmsSampler::new(params.alpha, params.skew).expect("StableParams are validated on construction");
    let z = sampler.factored(tape);
    if params.scale == 1.0 {
        z
    } else {
        z * params.scale.powf(1.0 / params.alpha)
    }
}

/// Optimal-quantile constants for one tabulated `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileConstants {
    pub alpha: f64,
    /// Quantile level minimizing the asymptotic variance.
    pub q_star: f64,
    /// The `q_star`-quantile of `|S(alpha, 1, 1)|`.
    pub w_alpha: f64,
    /// Asymptotic variance factor (variance times `k`, at `F = 1`).
    pub v_oq: f64,
}

const fn row(alpha: f64, q_star: f64, w_alpha: f64, v_oq: f64) -> QuantileConstants {
    QuantileConstants { alpha, q_star, w_alpha, v_oq }
}

pub const QUANTILE_TABLE: [QuantileConstants; 10] = [
    row(0.80, 0.108, 2.256365, 0.15465894),
    row(0.90, 0.101, 5.400842, 0.04116676),
    row(0.95, 0.098, 11.74773, 0.01059831),
    row(0.98, 0.0944, 30.82616, 0.001724739),
    row(0.989, 0.0941, 56.86694, 0.0005243589),
    row(1.011, 0.8904, 58.83961, 0.0005554749),
    row(1.02, 0.8799, 32.76892, 0.001901498),
    row(1.05, 0.855, 13.61799, 0.01298757),
    row(1.10, 0.827, 7.206345, 0.05717725),
    row(1.20, 0.799, 4.011459, 0.2516604),
];

/// The tabulated alphas, ascending.
pub fn supported_alphas() -> impl Iterator<Item = f64> {
    QUANTILE_TABLE.iter().map(|r| r.alpha)
}

pub fn quantile_constants(alpha: f64) -> Result<QuantileConstants> {
    if let Some(r) = QUANTILE_TABLE.iter().find(|r| (r.alpha - alpha).abs() < 1e-9) {
        return Ok(*r);
    }
    let below = QUANTILE_TABLE.iter().rev().find(|r| r.alpha < alpha).map(|r| r.alpha);
    let above = QUANTILE_TABLE.iter().find(|r| r.alpha > alpha).map(|r| r.alpha);
    Err(Error::UnsupportedAlpha { alpha, below, above })
}

/// `V` such that `Var(F_hat) ~ V F^2 / k` for large `k`.
pub fn variance_factor(kind: EstimatorKind, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::param(format!("alpha must lie in (0, 2], got {alpha}")));
    }
    let pi2 = PI * PI;
    match kind {
        EstimatorKind::Gm => {
            if alpha < 1.0 {
                Ok(pi2 / 6.0 * (1.0 - alpha * alpha))
            } else if alpha > 1.0 {
                Ok(pi2 / 6.0 * (alpha - 1.0) * (5.0 - alpha))
            } else {
                Err(Error::domain("gm estimator is undefined at alpha = 1"))
            }
        }
        EstimatorKind::Hm => {
            if alpha >= 1.0 {
                return Err(Error::domain(format!("hm estimator requires alpha < 1, got {alpha}")));
            }
            Ok(hm_variance_factor(alpha))
        }
        EstimatorKind::Oq => Ok(quantile_constants(alpha)?.v_oq),
        EstimatorKind::GmSym => Ok(pi2 / 12.0 * (2.0 + alpha * alpha)),
    }
}

/// `2 Gamma^2(1 + alpha) / Gamma(1 + 2 alpha) - 1`.
pub(crate) fn hm_variance_factor(alpha: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    (2.0 * ln_gamma(1.0 + alpha) - ln_gamma(1.0 + 2.0 * alpha)).exp() * 2.0 - 1.0
}
