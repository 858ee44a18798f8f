//! Turnstile stream ingestion into a `k`-dimensional stable projection.
//!
//! Each update `(i, I)` adds `r_ij * I` to every `x_j`, where `r_ij` is
//! regenerated from the tape at counter `i * k + j`. The projection matrix is
//! never stored. Skewed sketches hold samples of `S(alpha, 1, F cos(rho alpha))`
//! (the factored form); the `cos(rho alpha)` constant is reported by
//! [`ProjectionSketch::deferred_scale`] and folded into the estimators.
//!
//! Coordinates are accumulated exactly (see [`ExactSum`]), so the sketch of a
//! stream does not depend on update order and merging is exact.
//!
//! Estimates are meaningful when the underlying signal is nonnegative at
//! query time; negative intermediate values are allowed and never checked.

use crate::accumulator::ExactSum;
use crate::error::{Error, Result};
use crate::stable::{check_alpha, CmsSampler, SkewAngle, Skewness};
use crate::tape::RandomTape;

pub const MAGIC: &[u8; 4] = b"CCSK";
pub const FORMAT_VERSION: u16 = 1;
/// Bytes before the `x` block.
pub const HEADER_LEN: usize = 4 + 2 + 1 + 8 + 4 + 8 + 8 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnstileUpdate {
    pub index: u64,
    pub increment: f64,
}

impl TurnstileUpdate {
    pub fn new(index: u64, increment: f64) -> Self {
        Self { index, increment }
    }
}

/// `r_ij` for a sketch with `k` columns: a draw of the (factored, when skewed)
/// stable law at tape counter `i * k + j`.
pub fn projection_entry(seed: u64, i: u64, j: u64, k: u64, alpha: f64, skew: Skewness) -> Result<f64> {
    if j >= k {
        return Err(Error::OutOfBounds { index: j, dimension: k });
    }
    let sampler = CmsSampler::new(alpha, skew)?;
    let counter = i
        .checked_mul(k)
        .and_then(|c| c.checked_add(j))
        .ok_or_else(|| Error::param("tape counter i * k + j overflows u64"))?;
    Ok(sampler.factored(&mut RandomTape::at(seed, counter)))
}

#[derive(Clone)]
pub struct ProjectionSketch {
    alpha: f64,
    skew: Skewness,
    k: usize,
    seed: u64,
    dimension: u64,
    sampler: CmsSampler,
    tape: RandomTape,
    acc: Vec<ExactSum>,
    f1: ExactSum,
    update_count: u64,
}

impl std::fmt::Debug for ProjectionSketch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProjectionSketch")
            .field("alpha", &self.alpha)
            .field("skew", &self.skew)
            .field("k", &self.k)
            .field("seed", &self.seed)
            .field("dimension", &self.dimension)
            .field("f1", &self.f1())
            .field("update_count", &self.update_count)
            .finish_non_exhaustive()
    }
}

/// Equal parameters, counters and observable `x` values.
impl PartialEq for ProjectionSketch {
    fn eq(&self, other: &Self) -> bool {
        self.alpha.to_bits() == other.alpha.to_bits()
            && self.skew == other.skew
            && self.k == other.k
            && self.seed == other.seed
            && self.dimension == other.dimension
            && self.update_count == other.update_count
            && self.f1().to_bits() == other.f1().to_bits()
            && self.acc.iter().zip(&other.acc).all(|(a, b)| a.value().to_bits() == b.value().to_bits())
    }
}

impl ProjectionSketch {
    pub fn new(alpha: f64, skew: Skewness, k: usize, seed: u64, dimension: u64) -> Result<Self> {
        check_alpha(alpha, skew)?;
        if k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if k > u32::MAX as usize {
            return Err(Error::param("k must fit in 32 bits"));
        }
        if dimension == 0 {
            return Err(Error::param("dimension must be at least 1"));
        }
        if dimension.checked_mul(k as u64).is_none() {
            return Err(Error::param("dimension * k must fit in 64 bits"));
        }
        Ok(Self {
            alpha,
            skew,
            k,
            seed,
            dimension,
            sampler: CmsSampler::new(alpha, skew)?,
            tape: RandomTape::new(seed),
            acc: vec![ExactSum::new(); k],
            f1: ExactSum::new(),
            update_count: 0,
        })
    }

    /// Rebuilds a sketch from stored state, e.g. after deserialization.
    pub fn from_parts(
        alpha: f64,
        skew: Skewness,
        seed: u64,
        dimension: u64,
        x: &[f64],
        f1: f64,
        update_count: u64,
    ) -> Result<Self> {
        let mut s = Self::new(alpha, skew, x.len(), seed, dimension)?;
        if let Some(bad) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!("x[{bad}] is not finite")));
        }
        s.acc = x.iter().map(|&v| ExactSum::from_value(v)).collect();
        s.f1 = ExactSum::from_value(f1);
        s.update_count = update_count;
        Ok(s)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn skew(&self) -> Skewness {
        self.skew
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    /// Exact running sum of all increments: the first frequency moment.
    pub fn f1(&self) -> f64 {
        self.f1.value()
    }

    /// `cos(rho alpha)`, the scale the stored samples carry on top of `F`.
    /// Always 1 for symmetric sketches.
    pub fn deferred_scale(&self) -> f64 {
        SkewAngle::new(self.alpha, self.skew).deferred_scale(self.alpha)
    }

    /// The projected samples.
    pub fn x(&self) -> Vec<f64> {
        self.acc.iter().map(ExactSum::value).collect()
    }

    pub fn update(&mut self, index: u64, increment: f64) -> Result<()> {
        if index >= self.dimension {
            return Err(Error::OutOfBounds { index, dimension: self.dimension });
        }
        if !increment.is_finite() {
            return Err(Error::param(format!("increment must be finite, got {increment}")));
        }
        if increment != 0.0 {
            let base = index * self.k as u64;
            for (j, acc) in self.acc.iter_mut().enumerate() {
                let c = base + j as u64;
                let (u, w) = self.tape.angle_exp_at(c);
                acc.add(self.sampler.factored_from(u, w) * increment);
            }
            self.f1.add(increment);
        }
        self.update_count += 1;
        Ok(())
    }

    pub fn apply(&mut self, u: TurnstileUpdate) -> Result<()> {
        self.update(u.index, u.increment)
    }

    pub fn extend<I: IntoIterator<Item = TurnstileUpdate>>(&mut self, updates: I) -> Result<()> {
        updates.into_iter().try_for_each(|u| self.apply(u))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        let mut diffs = Vec::new();
        if self.alpha.to_bits() != other.alpha.to_bits() {
            diffs.push(format!("alpha {} vs {}", self.alpha, other.alpha));
        }
        if self.skew != other.skew {
            diffs.push(format!("kind {} vs {}", self.skew, other.skew));
        }
        if self.k != other.k {
            diffs.push(format!("k {} vs {}", self.k, other.k));
        }
        if self.seed != other.seed {
            diffs.push(format!("seed {} vs {}", self.seed, other.seed));
        }
        if self.dimension != other.dimension {
            diffs.push(format!("dimension {} vs {}", self.dimension, other.dimension));
        }
        if diffs.is_empty() {
            Ok(())
        } else {
            Err(Error::Incompatible(diffs.join(", ")))
        }
    }

    /// Adds `other` into `self`; the result is the sketch of both streams.
    pub fn merge_from(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.acc.iter_mut().zip(&other.acc) {
            a.merge(b);
        }
        self.f1.merge(&other.f1);
        self.update_count += other.update_count;
        Ok(())
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    pub fn serialized_len(&self) -> usize {
        HEADER_LEN + 8 * self.k
    }

    /// Little-endian container: magic, version, kind, alpha, k, seed,
    /// dimension, update count, f1, then the `k` samples.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.push(self.skew.tag());
        out.extend_from_slice(&self.alpha.to_le_bytes());
        out.extend_from_slice(&(self.k as u32).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.dimension.to_le_bytes());
        out.extend_from_slice(&self.update_count.to_le_bytes());
        out.extend_from_slice(&self.f1().to_le_bytes());
        for v in self.x() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = u16::from_le_bytes(r.array()?);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let tag = r.take(1)?[0];
        let skew = Skewness::from_tag(tag).ok_or_else(|| Error::Format(format!("unknown kind tag {tag}")))?;
        let alpha = f64::from_le_bytes(r.array()?);
        let k = u32::from_le_bytes(r.array()?) as usize;
        let seed = u64::from_le_bytes(r.array()?);
        let dimension = u64::from_le_bytes(r.array()?);
        let update_count = u64::from_le_bytes(r.array()?);
        let f1 = f64::from_le_bytes(r.array()?);
        let expected = HEADER_LEN + 8 * k;
        if bytes.len() != expected {
            return Err(Error::Format(format!("expected {expected} bytes for k = {k}, found {}", bytes.len())));
        }
        let x: Vec<f64> = (0..k).map(|_| r.array().map(f64::from_le_bytes)).collect::<Result<_>>()?;
        Self::from_parts(alpha, skew, seed, dimension, &x, f1, update_count).map_err(|e| Error::Format(e.to_string()))
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(Error::Format(format!("truncated at byte {}", self.pos)));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sketch(alpha: f64, skew: Skewness, k: usize, seed: u64, updates: &[(u64, f64)]) -> ProjectionSketch {
        let mut s = ProjectionSketch::new(alpha, skew, k, seed, 64).unwrap();
        for &(i, v) in updates {
            s.update(i, v).unwrap();
        }
        s
    }

    fn bits(s: &ProjectionSketch) -> Vec<u64> {
        s.x().iter().map(|v| v.to_bits()).collect()
    }

    #[test]
    fn new_sketch_is_empty() {
        let s = ProjectionSketch::new(0.95, Skewness::MaxSkewed, 20, 7, 65536).unwrap();
        assert!(s.x().iter().all(|&v| v == 0.0));
        assert_eq!(s.f1(), 0.0);
        assert_eq!(s.x().len(), 20);
        assert!(ProjectionSketch::new(1.011, Skewness::MaxSkewed, 100, 1, 10).is_ok());
        assert!(matches!(ProjectionSketch::new(1.0, Skewness::MaxSkewed, 20, 7, 10), Err(Error::Parameter(_))));
        assert!(ProjectionSketch::new(0.9, Skewness::MaxSkewed, 0, 7, 10).is_err());
        assert!(ProjectionSketch::new(0.9, Skewness::MaxSkewed, 5, 7, 0).is_err());
        assert!(ProjectionSketch::new(0.9, Skewness::MaxSkewed, 5, 7, u64::MAX).is_err());
    }

    #[test]
    fn projection_entries_are_deterministic() {
        let a = projection_entry(7, 3, 4, 10, 0.8, Skewness::MaxSkewed).unwrap();
        let b = projection_entry(7, 3, 4, 10, 0.8, Skewness::MaxSkewed).unwrap();
        let c = projection_entry(7, 3, 5, 10, 0.8, Skewness::MaxSkewed).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_ne!(a, c);
        assert!(projection_entry(7, 3, 10, 10, 0.8, Skewness::MaxSkewed).is_err());
    }

    #[test]
    fn skewed_entries_below_one_are_nonnegative() {
        for i in 0..200 {
            for j in 0..20 {
                assert!(projection_entry(1, i, j, 20, 0.8, Skewness::MaxSkewed).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn update_uses_projection_entries() {
        let s = sketch(0.9, Skewness::MaxSkewed, 8, 3, &[(5, 2.0)]);
        for (j, v) in s.x().iter().enumerate() {
            let r = projection_entry(3, 5, j as u64, 8, 0.9, Skewness::MaxSkewed).unwrap();
            assert_eq!(v.to_bits(), (2.0 * r).to_bits());
        }
        assert_eq!(s.update_count(), 1);
    }

    #[test]
    fn insert_then_delete_cancels() {
        let s = sketch(0.95, Skewness::MaxSkewed, 16, 9, &[(3, 5.0), (3, -5.0)]);
        assert!(s.x().iter().all(|&v| v == 0.0));
        assert_eq!(s.f1(), 0.0);
        assert_eq!(s.update_count(), 2);
    }

    #[test]
    fn increments_are_linear() {
        let a = sketch(1.2, Skewness::MaxSkewed, 16, 9, &[(7, 2.0)]);
        let b = sketch(1.2, Skewness::MaxSkewed, 16, 9, &[(7, 1.0), (7, 1.0)]);
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn out_of_range_index() {
        let mut s = ProjectionSketch::new(0.9, Skewness::MaxSkewed, 4, 1, 10).unwrap();
        assert!(matches!(s.update(10, 1.0), Err(Error::OutOfBounds { .. })));
        assert!(s.update(9, 1.0).is_ok());
        assert!(s.update(0, f64::NAN).is_err());
    }

    #[test]
    fn merge_rules() {
        let a = sketch(0.9, Skewness::MaxSkewed, 8, 1, &[(1, 3.0)]);
        let empty = ProjectionSketch::new(0.9, Skewness::MaxSkewed, 8, 1, 64).unwrap();
        assert_eq!(a.merge(&empty).unwrap(), a);
        let other_seed = ProjectionSketch::new(0.9, Skewness::MaxSkewed, 8, 2, 64).unwrap();
        assert!(matches!(a.merge(&other_seed), Err(Error::Incompatible(_))));
        let other_kind = ProjectionSketch::new(0.9, Skewness::Symmetric, 8, 1, 64).unwrap();
        assert!(matches!(a.merge(&other_kind), Err(Error::Incompatible(_))));
    }

    #[test]
    fn serialization_layout() {
        let s = sketch(0.95, Skewness::MaxSkewed, 20, 11, &[(1, 2.0), (4, 7.5)]);
        let bytes = s.to_bytes();
        assert_eq!(bytes.len(), 51 + 8 * 20);
        assert_eq!(&bytes[..4], b"CCSK");
        assert_eq!(u16::from_le_bytes([bytes[4], bytes[5]]), 1);
        assert_eq!(bytes[6], 1);
        assert_eq!(f64::from_le_bytes(bytes[7..15].try_into().unwrap()), 0.95);
        assert_eq!(u32::from_le_bytes(bytes[15..19].try_into().unwrap()), 20);
        let x0 = f64::from_le_bytes(bytes[51..59].try_into().unwrap());
        assert_eq!(x0.to_bits(), s.x()[0].to_bits());
        let back = ProjectionSketch::from_bytes(&bytes).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn corrupted_containers_are_rejected() {
        let s = sketch(0.95, Skewness::MaxSkewed, 4, 11, &[(1, 2.0)]);
        let good = s.to_bytes();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(ProjectionSketch::from_bytes(&bad), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(ProjectionSketch::from_bytes(&bad), Err(Error::Format(_))));
        assert!(matches!(ProjectionSketch::from_bytes(&good[..good.len() - 1]), Err(Error::Format(_))));
        assert!(matches!(ProjectionSketch::from_bytes(&good[..10]), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[6] = 9;
        assert!(matches!(ProjectionSketch::from_bytes(&bad), Err(Error::Format(_))));
        let mut bad = good;
        bad[7..15].copy_from_slice(&1.0f64.to_le_bytes());
        assert!(matches!(ProjectionSketch::from_bytes(&bad), Err(Error::Format(_))));
    }

    fn stream() -> impl Strategy<Value = Vec<(u64, f64)>> {
        prop::collection::vec((0u64..64, -50i32..50).prop_map(|(i, v)| (i, v as f64 * 0.75)), 0..40)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn merge_equals_concatenation(s1 in stream(), s2 in stream(), skewed in any::<bool>()) {
            let (alpha, skew) = if skewed { (0.95, Skewness::MaxSkewed) } else { (1.3, Skewness::Symmetric) };
            let a = sketch(alpha, skew, 12, 5, &s1);
            let b = sketch(alpha, skew, 12, 5, &s2);
            let whole: Vec<_> = s1.iter().chain(&s2).copied().collect();
            let c = sketch(alpha, skew, 12, 5, &whole);
            let merged = a.merge(&b).unwrap();
            prop_assert_eq!(bits(&merged), bits(&c));
            prop_assert_eq!(merged.f1().to_bits(), c.f1().to_bits());
            prop_assert_eq!(merged.update_count(), c.update_count());
        }

        #[test]
        fn order_does_not_matter(s1 in stream()) {
            let mut rev = s1.clone();
            rev.reverse();
            let a = sketch(0.9, Skewness::MaxSkewed, 12, 5, &s1);
            let b = sketch(0.9, Skewness::MaxSkewed, 12, 5, &rev);
            prop_assert_eq!(bits(&a), bits(&b));
        }

        #[test]
        fn round_trip_is_bitwise(s1 in stream(), seed in any::<u64>()) {
            let a = sketch(1.05, Skewness::MaxSkewed, 9, seed, &s1);
            let back = ProjectionSketch::from_bytes(&a.to_bytes()).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_bytes(), a.to_bytes());
        }

        #[test]
        fn f1_counts_nonnegative_signals(s1 in prop::collection::vec((0u64..64, 0u32..100), 0..40)) {
            let ups: Vec<(u64, f64)> = s1.iter().map(|&(i, v)| (i, v as f64)).collect();
            let s = sketch(0.8, Skewness::MaxSkewed, 3, 1, &ups);
            let brute: f64 = ups.iter().map(|u| u.1).sum();
            prop_assert_eq!(s.f1(), brute);
        }
    }
}
