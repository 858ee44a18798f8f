//! Counter-based random tape.
//!
//! Every position on the tape is addressed by `(seed, counter)` and yields
//! two 64-bit words, so any variate can be regenerated without replaying
//! the ones before it. Projection entries rely on this: entry `(i, j)` of
//! the conceptual `D x k` matrix is a pure function of the seed and of
//! `i * k + j`.
//!
//! # Bit layout
//!
//! ```text
//! mix(z)   = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!            z ^= z >> 27; z *= 0x94D049BB133111EB; z ^ (z >> 31)
//! key      = mix(seed + GOLDEN)                      GOLDEN = 0x9E3779B97F4A7C15
//! word(c,l)= mix(key + (2c + l + 1) * GOLDEN)        l in {0, 1}, wrapping u64 arithmetic
//! open(w)  = ((w >> 12) + 0.5) * 2^-52               in (0, 1), never 0 or 1
//! U        = pi * (open(word(c,0)) - 0.5)            uniform(-pi/2, pi/2)
//! W        = -ln(open(word(c,1)))                    exponential(1)
//! ```

use std::f64::consts::PI;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maps a 64-bit word to the open interval (0, 1) using its top 52 bits.
/// Every result is exact, so the endpoints are unreachable.
#[inline]
pub fn open_unit(word: u64) -> f64 {
    ((word >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Folds a list of words into one seed; distinct lists give unrelated seeds.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h = mix(parts.len() as u64 ^ 0x6A09_E667_F3BC_C909);
    for &p in parts {
        h = mix(h.wrapping_add(GOLDEN) ^ mix(p.wrapping_add(GOLDEN)));
    }
    h
}

/// A reproducible, random-access source of uniform-angle and exponential variates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTape {
    seed: u64,
    key: u64,
    counter: u64,
}

impl RandomTape {
    pub fn new(seed: u64) -> Self {
        Self::at(seed, 0)
    }

    /// A tape positioned at `counter`.
    pub fn at(seed: u64, counter: u64) -> Self {
        Self { seed, key: mix(seed.wrapping_add(GOLDEN)), counter }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn seek(&mut self, counter: u64) {
        self.counter = counter;
    }

    /// Raw word at `(counter, lane)` without moving the tape.
    #[inline]
    pub fn word(&self, counter: u64, lane: u64) -> u64 {
        let n = counter.wrapping_mul(2).wrapping_add(lane).wrapping_add(1);
        mix(self.key.wrapping_add(n.wrapping_mul(GOLDEN)))
    }

    /// Both words at the current position; advances by one.
    #[inline]
    pub fn next_words(&mut self) -> (u64, u64) {
        let c = self.counter;
        self.counter = c.wrapping_add(1);
        (self.word(c, 0), self.word(c, 1))
    }

    /// `(U, W)` at `counter` with `U ~ uniform(-pi/2, pi/2)` and `W ~ exp(1)`.
    #[inline]
    pub fn angle_exp_at(&self, counter: u64) -> (f64, f64) {
        let u = open_unit(self.word(counter, 0));
        let w = open_unit(self.word(counter, 1));
        (PI * (u - 0.5), -w.ln())
    }

    /// [`Self::angle_exp_at`] the current position; advances by one.
    #[inline]
    pub fn next_angle_exp(&mut self) -> (f64, f64) {
        let c = self.counter;
        self.counter = c.wrapping_add(1);
        self.angle_exp_at(c)
    }
}
