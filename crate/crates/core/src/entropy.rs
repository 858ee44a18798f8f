//! Entropies of nonnegative vectors: exact oracles, plug-in estimators built
//! on moment estimates, and Monte-Carlo selection of the exponent used to
//! approximate Shannon entropy.
//!
//! Logarithms are natural throughout.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::accumulator::ExactSum;
use crate::error::{Error, Result};
use crate::estimators::{EstimatorKind, MomentEstimate, MomentEstimator};
use crate::montecarlo::{project_vector, ProjectionMode};
use crate::stable::variance_factor;
use crate::tape::derive_seed;

/// The logarithm used by every entropy in this crate.
#[inline]
pub fn log(x: f64) -> f64 {
    x.ln()
}

/// A nonnegative signal stored as sorted `(index, value)` pairs without zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dimension: u64,
    entries: Vec<(u64, f64)>,
    f1: f64,
}

impl SparseVector {
    /// Builds a vector from `(index, value)` pairs. Repeated indices are summed
    /// and zero values dropped.
    pub fn new<I>(dimension: u64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        if dimension == 0 {
            return Err(Error::param("dimension must be at least 1"));
        }
        let mut raw: Vec<(u64, f64)> = Vec::new();
        for (index, value) in entries {
            if index >= dimension {
                return Err(Error::OutOfBounds { index, dimension });
            }
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::domain(format!("entry {index} must be finite and nonnegative, got {value}")));
            }
            raw.push((index, value));
        }
        raw.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(u64, f64)> = Vec::with_capacity(raw.len());
        let mut run = ExactSum::new();
        let mut current = None;
        for (i, v) in raw {
            if current != Some(i) {
                if let Some(prev) = current {
                    merged.push((prev, run.value()));
                }
                current = Some(i);
                run = ExactSum::new();
            }
            run.add(v);
        }
        if let Some(prev) = current {
            merged.push((prev, run.value()));
        }
        merged.retain(|&(_, v)| v > 0.0);
        let mut f1 = ExactSum::new();
        merged.iter().for_each(|&(_, v)| f1.add(v));
        Ok(Self { dimension, entries: merged, f1: f1.value() })
    }

    /// Dense constructor: index `i` holds `values[i]`.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        Self::new(values.len() as u64, values.iter().enumerate().map(|(i, &v)| (i as u64, v)))
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `c * A`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.dimension, self.entries.iter().map(|&(i, v)| (i, v * c)))
    }

    fn require_mass(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::domain("entropy of an all-zero vector is undefined"))
        } else {
            Ok(())
        }
    }
}

/// `sum_i A[i]^alpha` over the nonzero entries.
pub fn exact_moment(v: &SparseVector, alpha: f64) -> f64 {
    let mut s = ExactSum::new();
    for &(_, a) in &v.entries {
        s.add(if alpha == 1.0 { a } else { a.powf(alpha) });
    }
    s.value()
}

pub fn exact_shannon(v: &SparseVector) -> Result<f64> {
    v.require_mass()?;
    let f1 = v.f1;
    let mut h = 0.0;
    for &(_, a) in &v.entries {
        let p = a / f1;
        h -= p * log(p);
    }
    Ok(h)
}

fn check_entropy_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha must be positive, got {alpha}")));
    }
    if alpha == 1.0 {
        return Err(Error::domain("alpha = 1 is the Shannon limit; use the Shannon entropy directly"));
    }
    Ok(())
}

/// `log(F_alpha / F1^alpha) / (1 - alpha)`.
pub fn renyi_value(f_alpha: f64, f1: f64, alpha: f64) -> f64 {
    (log(f_alpha) - alpha * log(f1)) / (1.0 - alpha)
}

/// `(1 - F_alpha / F1^alpha) / (alpha - 1)`.
pub fn tsallis_value(f_alpha: f64, f1: f64, alpha: f64) -> f64 {
    (1.0 - (log(f_alpha) - alpha * log(f1)).exp()) / (alpha - 1.0)
}

/// `sum_i p_i^alpha`; equals `F_alpha / F1^alpha` without forming either.
fn power_sum(v: &SparseVector, alpha: f64) -> f64 {
    let mut s = ExactSum::new();
    for &(_, a) in &v.entries {
        s.add((a / v.f1).powf(alpha));
    }
    s.value()
}

pub fn exact_renyi(v: &SparseVector, alpha: f64) -> Result<f64> {
    check_entropy_alpha(alpha)?;
    v.require_mass()?;
    Ok(log(power_sum(v, alpha)) / (1.0 - alpha))
}

pub fn exact_tsallis(v: &SparseVector, alpha: f64) -> Result<f64> {
    check_entropy_alpha(alpha)?;
    v.require_mass()?;
    Ok((1.0 - power_sum(v, alpha)) / (alpha - 1.0))
}

/// Which entropy an estimate targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntropyTarget {
    Renyi,
    Tsallis,
    ShannonViaRenyi,
    ShannonViaTsallis,
}

impl EntropyTarget {
    pub fn name(self) -> &'static str {
        match self {
            EntropyTarget::Renyi => "renyi",
            EntropyTarget::Tsallis => "tsallis",
            EntropyTarget::ShannonViaRenyi => "shannon_via_renyi",
            EntropyTarget::ShannonViaTsallis => "shannon_via_tsallis",
        }
    }
}

impl fmt::Display for EntropyTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The entropy family used to approximate Shannon entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Renyi,
    Tsallis,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Renyi => "renyi",
            Route::Tsallis => "tsallis",
        }
    }

    pub fn shannon_target(self) -> EntropyTarget {
        match self {
            Route::Renyi => EntropyTarget::ShannonViaRenyi,
            Route::Tsallis => EntropyTarget::ShannonViaTsallis,
        }
    }

    /// The entropy of this family at `alpha` computed from a moment.
    pub fn value(self, f_alpha: f64, f1: f64, alpha: f64) -> f64 {
        match self {
            Route::Renyi => renyi_value(f_alpha, f1, alpha),
            Route::Tsallis => tsallis_value(f_alpha, f1, alpha),
        }
    }

    pub fn exact(self, v: &SparseVector, alpha: f64) -> Result<f64> {
        match self {
            Route::Renyi => exact_renyi(v, alpha),
            Route::Tsallis => exact_tsallis(v, alpha),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "renyi" => Ok(Route::Renyi),
            "tsallis" => Ok(Route::Tsallis),
            other => Err(Error::param(format!("unknown route {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub target: EntropyTarget,
    pub alpha: f64,
    pub kind: EstimatorKind,
    pub k: usize,
    /// Delta-method variance of `value`.
    pub predicted_variance: f64,
    /// `H_alpha - H` or `T_alpha - H`; only for Shannon targets with a known signal.
    pub predicted_intrinsic_bias: Option<f64>,
}

fn check_plugin(f_hat: &MomentEstimate, f1: f64) -> Result<()> {
    check_entropy_alpha(f_hat.alpha)?;
    if !(f_hat.value > 0.0 && f_hat.value.is_finite()) {
        return Err(Error::domain(format!("moment estimate must be positive, got {}", f_hat.value)));
    }
    if !(f1 > 0.0 && f1.is_finite()) {
        return Err(Error::domain(format!("first moment must be positive, got {f1}")));
    }
    Ok(())
}

pub fn renyi_from_moment(f_hat: &MomentEstimate, f1: f64) -> Result<EntropyEstimate> {
    check_plugin(f_hat, f1)?;
    let a = f_hat.alpha;
    Ok(EntropyEstimate {
        value: renyi_value(f_hat.value, f1, a),
        target: EntropyTarget::Renyi,
        alpha: a,
        kind: f_hat.kind,
        k: f_hat.k,
        predicted_variance: f_hat.predicted_relative_variance / ((1.0 - a) * (1.0 - a)),
        predicted_intrinsic_bias: None,
    })
}

pub fn tsallis_from_moment(f_hat: &MomentEstimate, f1: f64) -> Result<EntropyEstimate> {
    check_plugin(f_hat, f1)?;
    let a = f_hat.alpha;
    let ratio = (log(f_hat.value) - a * log(f1)).exp();
    Ok(EntropyEstimate {
        value: tsallis_value(f_hat.value, f1, a),
        target: EntropyTarget::Tsallis,
        alpha: a,
        kind: f_hat.kind,
        k: f_hat.k,
        predicted_variance: ratio * ratio * f_hat.predicted_relative_variance / ((a - 1.0) * (a - 1.0)),
        predicted_intrinsic_bias: None,
    })
}

/// Shannon entropy approximated by the Rényi or Tsallis entropy at `f_hat.alpha`.
/// With `oracle`, the estimate carries the bias that remains for infinite `k`.
pub fn shannon_via(
    f_hat: &MomentEstimate,
    f1: f64,
    route: Route,
    oracle: Option<&SparseVector>,
) -> Result<EntropyEstimate> {
    let mut est = match route {
        Route::Renyi => renyi_from_moment(f_hat, f1)?,
        Route::Tsallis => tsallis_from_moment(f_hat, f1)?,
    };
    est.target = route.shannon_target();
    est.predicted_intrinsic_bias = match oracle {
        Some(v) => Some(intrinsic_bias(v, f_hat.alpha, route)?),
        None => None,
    };
    Ok(est)
}

/// `H_alpha - H` (Rényi route) or `T_alpha - H` (Tsallis route).
pub fn intrinsic_bias(v: &SparseVector, alpha: f64, route: Route) -> Result<f64> {
    Ok(route.exact(v, alpha)? - exact_shannon(v)?)
}

/// Result of [`select_optimal_alpha`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSelection {
    pub alpha_star: f64,
    /// `(alpha, empirical MSE of the Shannon estimate)` in grid order.
    pub curve: Vec<(f64, f64)>,
}

/// Monte-Carlo search for the exponent whose Shannon estimate has the
/// smallest mean square error against the exact entropy of `v`.
///
/// Repetition `r` projects with seed `derive_seed(&[seed, r])` at every grid
/// point, so grid points are compared on common random numbers. Ties keep the
/// earlier grid point.
#[allow(clippy::too_many_arguments)]
pub fn select_optimal_alpha(
    v: &SparseVector,
    k: usize,
    kind: EstimatorKind,
    route: Route,
    alpha_grid: &[f64],
    repetitions: usize,
    seed: u64,
    mode: ProjectionMode,
) -> Result<AlphaSelection> {
    if alpha_grid.is_empty() {
        return Err(Error::param("alpha grid is empty"));
    }
    if repetitions < 100 {
        return Err(Error::param(format!("at least 100 repetitions are required, got {repetitions}")));
    }
    let mut estimators = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        check_entropy_alpha(alpha)?;
        variance_factor(kind, alpha)?;
        estimators.push(MomentEstimator::new(kind, alpha, k)?);
    }
    let h = exact_shannon(v)?;
    let f1 = v.f1();

    let per_rep: Vec<Result<Vec<f64>>> = (0..repetitions as u64)
        .into_par_iter()
        .map(|r| {
            let rep_seed = derive_seed(&[seed, r]);
            estimators
                .iter()
                .map(|est| {
                    let sketch = project_vector(v, est.alpha(), kind.skew(), k, rep_seed, mode)?;
                    let f_hat = est.estimate(&sketch)?;
                    let e = shannon_via(&f_hat, f1, route, None)?.value - h;
                    Ok(e * e)
                })
                .collect()
        })
        .collect();

    let mut sums = vec![0.0; alpha_grid.len()];
    for rep in per_rep {
        for (s, e2) in sums.iter_mut().zip(rep?) {
            *s += e2;
        }
    }
    let curve: Vec<(f64, f64)> = alpha_grid.iter().zip(&sums).map(|(&a, &s)| (a, s / repetitions as f64)).collect();
    let mut best = curve[0];
    for &point in &curve[1..] {
        if point.1 < best.1 {
            best = point;
        }
    }
    Ok(AlphaSelection { alpha_star: best.0, curve })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::EstimatorKind;
    use proptest::prelude::*;

    fn v123() -> SparseVector {
        SparseVector::from_dense(&[1.0, 2.0, 3.0]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn moment(value: f64, alpha: f64) -> MomentEstimate {
        MomentEstimate { value, kind: EstimatorKind::Gm, alpha, k: 100, predicted_relative_variance: 0.01 }
    }

    #[test]
    fn sparse_vector_normalizes_entries() {
        let v = SparseVector::new(10, [(5, 1.0), (2, 0.0), (5, 2.0), (1, 4.0)]).unwrap();
        assert_eq!(v.entries(), &[(1, 4.0), (5, 3.0)]);
        assert_eq!(v.f1(), 7.0);
        assert_eq!(v.nnz(), 2);
        assert!(SparseVector::new(3, [(3, 1.0)]).is_err());
        assert!(SparseVector::new(3, [(1, -1.0)]).is_err());
        assert!(SparseVector::new(3, [(1, f64::NAN)]).is_err());
        assert!(SparseVector::new(0, []).is_err());
    }

    #[test]
    fn moments() {
        assert_eq!(exact_moment(&v123(), 2.0), 14.0);
        assert_eq!(exact_moment(&v123(), 1.0), v123().f1());
        let ones = SparseVector::from_dense(&[1.0; 4]).unwrap();
        for a in [0.3, 0.95, 1.05, 2.0] {
            assert_eq!(exact_moment(&ones, a), 4.0);
        }
    }

    #[test]
    fn shannon_examples() {
        let ones = SparseVector::from_dense(&[1.0; 4]).unwrap();
        assert!(close(exact_shannon(&ones).unwrap(), 4f64.ln(), 1e-15));
        assert_eq!(exact_shannon(&SparseVector::from_dense(&[5.0, 0.0, 0.0]).unwrap()).unwrap(), 0.0);
        let expect = 6f64.ln() - 2f64.ln() / 3.0 - 3f64.ln() / 2.0;
        assert!(close(exact_shannon(&v123()).unwrap(), expect, 1e-15));
        assert!((expect - 1.011404).abs() < 1e-6);
        assert!(exact_shannon(&SparseVector::from_dense(&[0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn renyi_and_tsallis_examples() {
        let ones = SparseVector::from_dense(&[1.0; 4]).unwrap();
        for a in [0.5, 0.95, 2.0] {
            assert!(close(exact_renyi(&ones, a).unwrap(), 4f64.ln(), 1e-14));
        }
        assert!(close(exact_renyi(&v123(), 2.0).unwrap(), (36.0f64 / 14.0).ln(), 1e-15));
        assert!(close(exact_tsallis(&ones, 2.0).unwrap(), 0.75, 1e-15));
        assert!(close(exact_tsallis(&v123(), 2.0).unwrap(), 1.0 - 14.0 / 36.0, 1e-15));
        let point = SparseVector::from_dense(&[5.0, 0.0, 0.0]).unwrap();
        for a in [0.5, 0.95, 1.05, 2.0] {
            assert!(exact_tsallis(&point, a).unwrap().abs() < 1e-14);
            assert!(exact_renyi(&point, a).unwrap().abs() < 1e-13);
        }
        assert!(matches!(exact_renyi(&v123(), 1.0), Err(Error::Domain(_))));
        assert!(matches!(exact_tsallis(&v123(), 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn plug_in_examples() {
        let r = renyi_from_moment(&moment(14.0, 2.0), 6.0).unwrap();
        assert!(close(r.value, (36.0f64 / 14.0).ln(), 1e-15));
        assert_eq!(r.target, EntropyTarget::Renyi);
        assert!(r.predicted_intrinsic_bias.is_none());
        let t = tsallis_from_moment(&moment(14.0, 2.0), 6.0).unwrap();
        assert!(close(t.value, 1.0 - 14.0 / 36.0, 1e-15));
        let f1 = 7.5f64;
        let at = |a: f64| moment(f1.powf(a), a);
        assert!(renyi_from_moment(&at(0.95), f1).unwrap().value.abs() < 1e-12);
        assert!(tsallis_from_moment(&at(1.05), f1).unwrap().value.abs() < 1e-12);
        assert!(renyi_from_moment(&moment(0.0, 0.9), 1.0).is_err());
        assert!(renyi_from_moment(&moment(1.0, 0.9), 0.0).is_err());
    }

    #[test]
    fn predicted_variance_composition() {
        let f = MomentEstimate {
            value: 3.0,
            kind: EstimatorKind::Oq,
            alpha: 0.989,
            k: 20,
            predicted_relative_variance: 0.0005243589 / 20.0,
        };
        let r = renyi_from_moment(&f, 2.0).unwrap();
        assert!((r.predicted_variance - 0.0005243589 / 20.0 / (0.011 * 0.011)).abs() < 1e-12);
        assert!((r.predicted_variance - 0.2167).abs() < 1e-3);
        let t = tsallis_from_moment(&f, 2.0).unwrap();
        let ratio = 3.0 / 2f64.powf(0.989);
        assert!(close(t.predicted_variance, ratio * ratio * 0.0005243589 / 20.0 / (0.011 * 0.011), 1e-12));
    }

    #[test]
    fn shannon_via_carries_route_and_bias() {
        let v = v123();
        let a = 0.95;
        let f = moment(exact_moment(&v, a), a);
        let r = shannon_via(&f, v.f1(), Route::Renyi, Some(&v)).unwrap();
        let t = shannon_via(&f, v.f1(), Route::Tsallis, Some(&v)).unwrap();
        assert_eq!(r.target, EntropyTarget::ShannonViaRenyi);
        assert_eq!(t.target, EntropyTarget::ShannonViaTsallis);
        let h = exact_shannon(&v).unwrap();
        assert!(close(r.predicted_intrinsic_bias.unwrap(), exact_renyi(&v, a).unwrap() - h, 1e-15));
        assert!(close(t.predicted_intrinsic_bias.unwrap(), exact_tsallis(&v, a).unwrap() - h, 1e-15));
        assert!(shannon_via(&f, v.f1(), Route::Renyi, None).unwrap().predicted_intrinsic_bias.is_none());
        let plain = renyi_from_moment(&f, v.f1()).unwrap();
        assert_eq!(plain.predicted_variance, r.predicted_variance);
        assert_eq!("tsallis".parse::<Route>().unwrap(), Route::Tsallis);
        assert!("shannon".parse::<Route>().is_err());
    }

    #[test]
    fn optimal_alpha_argument_checks() {
        let v = v123();
        let grid = [0.95];
        let sel =
            select_optimal_alpha(&v, 20, EstimatorKind::Oq, Route::Renyi, &grid, 100, 3, ProjectionMode::Streamed)
                .unwrap();
        assert_eq!(sel.alpha_star, 0.95);
        assert_eq!(sel.curve.len(), 1);
        assert!(sel.curve[0].1 >= 0.0);
        let bad = |g: &[f64], kind, reps| {
            select_optimal_alpha(&v, 20, kind, Route::Renyi, g, reps, 3, ProjectionMode::Streamed)
        };
        assert!(bad(&[], EstimatorKind::Gm, 100).is_err());
        assert!(bad(&[0.95], EstimatorKind::Gm, 99).is_err());
        assert!(bad(&[0.85], EstimatorKind::Oq, 100).is_err());
        assert!(bad(&[1.05], EstimatorKind::Hm, 100).is_err());
        assert!(bad(&[1.0], EstimatorKind::GmSym, 100).is_err());
    }

    #[test]
    fn optimal_alpha_is_deterministic() {
        let v = SparseVector::from_dense(&[4.0, 1.0, 9.0, 2.0, 2.0]).unwrap();
        let grid = [0.9, 0.95, 1.05];
        let run = || {
            select_optimal_alpha(
                &v,
                20,
                EstimatorKind::Gm,
                Route::Renyi,
                &grid,
                100,
                17,
                ProjectionMode::Distributional,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    fn positive_vector() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop_oneof![Just(0.0), 0.5..1000.0f64], 1..40)
            .prop_filter("some mass", |v| v.iter().any(|&x| x > 0.0))
    }

    proptest! {
        #[test]
        fn plug_in_with_true_moment_is_exact(values in positive_vector(), ai in 0usize..6) {
            let alpha = [0.5, 0.8, 0.95, 1.05, 1.2, 2.0][ai];
            let v = SparseVector::from_dense(&values).unwrap();
            let f = moment(exact_moment(&v, alpha), alpha);
            let r = renyi_from_moment(&f, v.f1()).unwrap().value;
            let t = tsallis_from_moment(&f, v.f1()).unwrap().value;
            prop_assert!(close(r, exact_renyi(&v, alpha).unwrap(), 1e-12));
            prop_assert!(close(t, exact_tsallis(&v, alpha).unwrap(), 1e-12));
        }

        #[test]
        fn renyi_approaches_shannon(values in prop::collection::vec(1.0..10.0f64, 2..40)) {
            // Relative gap at 1 +- 1e-3 for signals whose counts stay within a factor of 10.
            let v = SparseVector::from_dense(&values).unwrap();
            let h = exact_shannon(&v).unwrap();
            for eps in [1e-3, -1e-3] {
                let gap = (exact_renyi(&v, 1.0 + eps).unwrap() - h).abs();
                prop_assert!(gap < 1e-3 * h, "gap {} h {}", gap, h);
            }
        }

        #[test]
        fn renyi_gap_is_first_order(values in positive_vector()) {
            // |H_(1+e) - H| ~ |e| Var(log p) / 2 for any signal.
            let v = SparseVector::from_dense(&values).unwrap();
            let h = exact_shannon(&v).unwrap();
            let f1 = v.f1();
            let varentropy: f64 = v.entries().iter().map(|&(_, a)| {
                let p = a / f1;
                p * (p.ln() + h).powi(2)
            }).sum();
            let spread = v.entries().iter().map(|&(_, a)| (a / f1).ln().abs()).fold(0.0, f64::max);
            for eps in [1e-3f64, -1e-3, 1e-4, -1e-4] {
                let gap = (exact_renyi(&v, 1.0 + eps).unwrap() - h).abs();
                prop_assert!(gap <= eps.abs() * varentropy / 2.0 + eps * eps * spread.powi(3) + 1e-12);
            }
        }

        #[test]
        fn entropy_bounds_and_monotonicity(values in positive_vector()) {
            let v = SparseVector::from_dense(&values).unwrap();
            let h = exact_shannon(&v).unwrap();
            prop_assert!(h >= -1e-15);
            prop_assert!(h <= (v.nnz() as f64).ln() + 1e-12);
            let grid = [0.5, 0.8, 0.9, 0.95, 0.98, 0.989, 1.011, 1.02, 1.05, 1.1, 1.2, 2.0];
            let hs: Vec<f64> = grid.iter().map(|&a| exact_renyi(&v, a).unwrap()).collect();
            for w in hs.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-10);
            }
        }

        #[test]
        fn scaling_leaves_entropy_unchanged(values in positive_vector(), c in 0.1..50.0f64) {
            let v = SparseVector::from_dense(&values).unwrap();
            let w = v.scaled(c).unwrap();
            prop_assert!(close(exact_shannon(&w).unwrap(), exact_shannon(&v).unwrap(), 1e-12));
            prop_assert!(close(exact_moment(&w, 0.95), c.powf(0.95) * exact_moment(&v, 0.95), 1e-12));
        }
    }
}
