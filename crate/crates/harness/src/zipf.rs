//! Zipf-shaped synthetic signals standing in for word-frequency data.

use std::fmt;
use std::str::FromStr;

use ccsketch::SparseVector;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};

/// `D,s,M`: dimension, exponent and total mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfSpec {
    pub dimension: u64,
    pub exponent: f64,
    pub mass: f64,
}

impl ZipfSpec {
    pub fn new(dimension: u64, exponent: f64, mass: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(HarnessError::Config("zipf dimension must be at least 1".into()));
        }
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(HarnessError::Config(format!("zipf exponent must be nonnegative, got {exponent}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(HarnessError::Config(format!("zipf mass must be positive, got {mass}")));
        }
        Ok(Self { dimension, exponent, mass })
    }
}

impl fmt::Display for ZipfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.dimension, self.exponent, self.mass)
    }
}

impl FromStr for ZipfSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HarnessError::Config(format!("expected D,s,M, got {s:?}"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [d, e, m] = parts[..] else {
            return Err(bad());
        };
        let d: f64 = d.parse().map_err(|_| bad())?;
        if d.fract() != 0.0 || d < 0.0 || d > u64::MAX as f64 {
            return Err(bad());
        }
        ZipfSpec::new(d as u64, e.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)
    }
}

/// The value of rank `r` (0-based) is `M (r+1)^-s / sum_t (t+1)^-s`, rounded to
/// the nearest integer with halves rounded up. Ranks are placed at indices by a
/// permutation drawn from `seed`; the multiset of values does not depend on it.
pub fn synthesize_zipf(spec: ZipfSpec, seed: u64) -> SparseVector {
    let d = spec.dimension as usize;
    let weights: Vec<f64> = (1..=d).map(|r| (r as f64).powf(-spec.exponent)).collect();
    // Smallest weights first so the normalizer loses little to rounding.
    let total: f64 = weights.iter().rev().sum();
    let mut positions: Vec<u64> = (0..spec.dimension).collect();
    positions.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let entries = weights.iter().zip(positions).map(|(w, i)| (i, (spec.mass * w / total + 0.5).floor()));
    SparseVector::new(spec.dimension, entries).expect("values are finite and nonnegative")
}
