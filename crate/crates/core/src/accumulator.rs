//! Exact summation of `f64` values.
//!
//! A fixed-point two's-complement integer wide enough to hold any finite
//! double (units of `2^-1074`) plus 64 bits of carry headroom. Adding is
//! exact, so the accumulated value does not depend on the order of the
//! addends, and two accumulators merge exactly. Reading the value rounds the
//! exact sum once, to nearest with ties to even.

const WORDS: usize = 34;
const MANTISSA_BITS: u32 = 52;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactSum {
    words: [u64; WORDS],
    // NaN and infinities are kept apart from the exact part.
    special: u64,
}

impl Default for ExactSum {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for ExactSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExactSum({:e})", self.value())
    }
}

impl ExactSum {
    pub const fn new() -> Self {
        Self { words: [0; WORDS], special: 0 }
    }

    pub fn from_value(v: f64) -> Self {
        let mut s = Self::new();
        s.add(v);
        s
    }

    fn special_value(&self) -> f64 {
        f64::from_bits(self.special)
    }

    pub fn add(&mut self, v: f64) {
        if v == 0.0 {
            return;
        }
        if !v.is_finite() {
            let acc = self.special_value() + v;
            self.special = acc.to_bits();
            return;
        }
        let bits = v.to_bits();
        let exp_field = ((bits >> MANTISSA_BITS) & 0x7ff) as u32;
        let frac = bits & ((1u64 << MANTISSA_BITS) - 1);
        let (mant, pos) = if exp_field == 0 { (frac, 0) } else { (frac | (1u64 << MANTISSA_BITS), exp_field - 1) };
        let word = (pos / 64) as usize;
        let shift = pos % 64;
        let lo = mant << shift;
        let hi = if shift == 0 { 0 } else { mant >> (64 - shift) };
        if v < 0.0 {
            self.sub_at(word, lo, hi);
        } else {
            self.add_at(word, lo, hi);
        }
    }

    fn add_at(&mut self, word: usize, lo: u64, hi: u64) {
        let (s, c0) = self.words[word].overflowing_add(lo);
        self.words[word] = s;
        let (s, c1) = self.words[word + 1].overflowing_add(hi);
        let (s, c2) = s.overflowing_add(c0 as u64);
        self.words[word + 1] = s;
        let mut carry = c1 || c2;
        let mut i = word + 2;
        while carry && i < WORDS {
            let (s, c) = self.words[i].overflowing_add(1);
            self.words[i] = s;
            carry = c;
            i += 1;
        }
    }

    fn sub_at(&mut self, word: usize, lo: u64, hi: u64) {
        let (s, b0) = self.words[word].overflowing_sub(lo);
        self.words[word] = s;
        let (s, b1) = self.words[word + 1].overflowing_sub(hi);
        let (s, b2) = s.overflowing_sub(b0 as u64);
        self.words[word + 1] = s;
        let mut borrow = b1 || b2;
        let mut i = word + 2;
        while borrow && i < WORDS {
            let (s, b) = self.words[i].overflowing_sub(1);
            self.words[i] = s;
            borrow = b;
            i += 1;
        }
    }

    /// Adds another accumulator exactly.
    pub fn merge(&mut self, other: &ExactSum) {
        let mut carry = false;
        for (a, &b) in self.words.iter_mut().zip(other.words.iter()) {
            let (s, c1) = a.overflowing_add(b);
            let (s, c2) = s.overflowing_add(carry as u64);
            *a = s;
            carry = c1 || c2;
        }
        if other.special != 0 {
            let acc = self.special_value() + other.special_value();
            self.special = acc.to_bits();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.special == 0 && self.words.iter().all(|&w| w == 0)
    }

    /// The exact sum rounded to the nearest `f64`.
    pub fn value(&self) -> f64 {
        if self.special != 0 {
            return self.special_value();
        }
        let negative = self.words[WORDS - 1] >> 63 == 1;
        let mut mag = self.words;
        if negative {
            let mut carry = true;
            for w in mag.iter_mut() {
                let (s, c) = (!*w).overflowing_add(carry as u64);
                *w = s;
                carry = c;
            }
        }
        let Some(top) = mag.iter().rposition(|&w| w != 0) else {
            return 0.0;
        };
        let msb = top as u32 * 64 + (63 - mag[top].leading_zeros());
        let magnitude = if msb <= MANTISSA_BITS {
            // Subnormal or lowest normal binade: the integer is the bit pattern.
            f64::from_bits(mag[0])
        } else {
            let low = msb - MANTISSA_BITS;
            let mut m = extract_bits(&mag, low, MANTISSA_BITS + 1);
            let round = bit(&mag, low - 1);
            let sticky = low >= 2 && any_below(&mag, low - 1);
            let mut exp_field = low + 1;
            if round && (sticky || m & 1 == 1) {
                m += 1;
                if m == 1u64 << (MANTISSA_BITS + 1) {
                    m >>= 1;
                    exp_field += 1;
                }
            }
            if exp_field >= 0x7ff {
                f64::INFINITY
            } else {
                f64::from_bits(((exp_field as u64) << MANTISSA_BITS) | (m & ((1u64 << MANTISSA_BITS) - 1)))
            }
        };
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

fn bit(words: &[u64; WORDS], pos: u32) -> bool {
    (words[(pos / 64) as usize] >> (pos % 64)) & 1 == 1
}

/// `n <= 64` bits starting at `pos`.
fn extract_bits(words: &[u64; WORDS], pos: u32, n: u32) -> u64 {
    let w = (pos / 64) as usize;
    let s = pos % 64;
    let mut v = words[w] >> s;
    if s != 0 && w + 1 < WORDS {
        v |= words[w + 1] << (64 - s);
    }
    if n == 64 {
        v
    } else {
        v & ((1u64 << n) - 1)
    }
}

/// Whether any bit strictly below `pos` is set.
fn any_below(words: &[u64; WORDS], pos: u32) -> bool {
    let w = (pos / 64) as usize;
    let s = pos % 64;
    if words[..w].iter().any(|&x| x != 0) {
        return true;
    }
    s != 0 && words[w] & ((1u64 << s) - 1) != 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Shewchuk's exact partials summation with a final correctly rounded
    /// pass, as in CPython's `math.fsum`. Independent of the fixed-point path.
    fn fsum(values: &[f64]) -> f64 {
        let mut partials: Vec<f64> = Vec::new();
        for &x0 in values {
            let mut x = x0;
            let mut i = 0;
            for j in 0..partials.len() {
                let mut y = partials[j];
                if x.abs() < y.abs() {
                    std::mem::swap(&mut x, &mut y);
                }
                let hi = x + y;
                let lo = y - (hi - x);
                if lo != 0.0 {
                    partials[i] = lo;
                    i += 1;
                }
                x = hi;
            }
            partials.truncate(i);
            partials.push(x);
        }
        let mut n = partials.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = partials[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = partials[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }

    fn sum(values: &[f64]) -> f64 {
        let mut s = ExactSum::new();
        values.iter().for_each(|&v| s.add(v));
        s.value()
    }

    #[test]
    fn single_values_round_trip() {
        for &v in &[
            1.0,
            -1.0,
            0.1,
            -3.5e300,
            f64::MAX,
            -f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
            -5e-324,
            f64::from_bits(0x000f_ffff_ffff_ffff),
            123456.789,
        ] {
            assert_eq!(ExactSum::from_value(v).value().to_bits(), v.to_bits(), "{v:e}");
        }
        assert_eq!(ExactSum::new().value(), 0.0);
    }

    #[test]
    fn cancellation_is_exact() {
        assert_eq!(sum(&[1e100, 1.0, -1e100]), 1.0);
        assert_eq!(sum(&[0.1, 0.2, -0.3]), fsum(&[0.1, 0.2, -0.3]));
        assert_eq!(sum(&[3.0, -3.0]), 0.0);
        assert!(!ExactSum::from_value(2.0).is_zero());
    }

    #[test]
    fn ties_round_to_even() {
        // 1 + 2^-53 is a tie between 1 and 1 + 2^-52.
        assert_eq!(sum(&[1.0, 2f64.powi(-53)]), 1.0);
        let up = 1.0 + 2f64.powi(-52);
        assert_eq!(sum(&[up, 2f64.powi(-53)]), 1.0 + 2.0 * 2f64.powi(-52));
        // A sticky bit breaks the tie upward.
        assert_eq!(sum(&[1.0, 2f64.powi(-53), 2f64.powi(-100)]), up);
    }

    #[test]
    fn overflow_goes_to_infinity() {
        assert_eq!(sum(&[f64::MAX, f64::MAX]), f64::INFINITY);
        assert_eq!(sum(&[-f64::MAX, -f64::MAX]), f64::NEG_INFINITY);
        assert_eq!(sum(&[f64::MAX, f64::MAX, -f64::MAX]), f64::MAX);
    }

    #[test]
    fn non_finite_values_propagate() {
        assert_eq!(sum(&[1.0, f64::INFINITY]), f64::INFINITY);
        assert!(sum(&[f64::INFINITY, f64::NEG_INFINITY]).is_nan());
    }

    fn any_double() -> impl Strategy<Value = f64> {
        prop_oneof![
            -1e6..1e6f64,
            any::<f64>().prop_filter("finite", |v| v.is_finite() && v.abs() < 1e300),
            (-1000i32..1000).prop_map(f64::from),
        ]
    }

    proptest! {
        #[test]
        fn matches_fsum(values in prop::collection::vec(any_double(), 0..60)) {
            // An exact zero is always +0 here; the oracle may keep a sign.
            let (a, b) = (sum(&values), fsum(&values));
            if b == 0.0 {
                prop_assert_eq!(a.to_bits(), 0);
            } else {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }

        #[test]
        fn order_and_grouping_do_not_matter(values in prop::collection::vec(any_double(), 1..60), split in 0usize..60) {
            let split = split.min(values.len());
            let mut rev = values.clone();
            rev.reverse();
            let mut a = ExactSum::new();
            values[..split].iter().for_each(|&v| a.add(v));
            let mut b = ExactSum::new();
            values[split..].iter().for_each(|&v| b.add(v));
            a.merge(&b);
            prop_assert_eq!(a.value().to_bits(), sum(&rev).to_bits());
            prop_assert_eq!(a.value().to_bits(), sum(&values).to_bits());
        }
    }
}
