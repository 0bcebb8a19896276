//! Accumulators.
//!
//! [`ExactSum`] keeps a list of non-overlapping partials (Shewchuk's
//! expansion, the scheme behind Python's `math.fsum`), so the rounded total
//! is the correctly rounded value of the exact sum of everything added. The
//! total therefore does not depend on the order or grouping of the additions,
//! which is what makes segment-parallel runs, resumed runs and differently
//! partitioned runs agree to the last bit.
//!
//! [`WeightSum`] is a fixed-point integer accumulator for sums of von Mangoldt
//! weights. Every `log p` as an `f64` is an integer multiple of 2^-60, so the
//! window sums can be added and subtracted without any rounding at all.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExactSum {
    partials: Vec<f64>,
    #[serde(default)]
    nonfinite: Option<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds an accumulator from persisted partials.
    pub fn from_partials(partials: &[f64]) -> Self {
        let mut sum = Self::new();
        for &p in partials {
            sum.add(p);
        }
        sum
    }

    pub fn partials(&self) -> &[f64] {
        &self.partials
    }

    #[inline]
    pub fn add(&mut self, mut x: f64) {
        if !x.is_finite() {
            self.nonfinite = Some(self.nonfinite.unwrap_or(0.0) + x);
            return;
        }
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        if !x.is_finite() {
            // Overflow of an intermediate partial.
            self.nonfinite = Some(self.nonfinite.unwrap_or(0.0) + x);
            self.partials.truncate(i);
            return;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    /// Adds the exact product `a * b` (both halves of the rounded product).
    #[inline]
    pub fn add_product(&mut self, a: f64, b: f64) {
        let (p, e) = two_product(a, b);
        self.add(p);
        if e != 0.0 {
            self.add(e);
        }
    }

    pub fn merge(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
        if let Some(v) = other.nonfinite {
            self.nonfinite = Some(self.nonfinite.unwrap_or(0.0) + v);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.nonfinite.is_none()
    }

    /// Correctly rounded value of the exact sum.
    pub fn value(&self) -> f64 {
        if let Some(v) = self.nonfinite {
            return v;
        }
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // Round-half-even correction when the remaining partials push the
        // tail past the halfway point.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }
}

/// Error-free product: `a * b == p + e` exactly.
#[inline]
pub fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

const WEIGHT_SCALE: f64 = (1u64 << 60) as f64;

/// Exact fixed-point sum of weights in units of 2^-60.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WeightSum(i128);

impl WeightSum {
    pub const ZERO: WeightSum = WeightSum(0);

    #[inline]
    pub fn units(weight: f64) -> i128 {
        let scaled = weight * WEIGHT_SCALE;
        debug_assert!(
            scaled.fract() == 0.0,
            "weight {weight} is not a multiple of 2^-60"
        );
        scaled as i128
    }

    #[inline]
    pub fn add(&mut self, weight: f64) {
        self.0 += Self::units(weight);
    }

    #[inline]
    pub fn sub(&mut self, weight: f64) {
        self.0 -= Self::units(weight);
    }

    pub fn merge(&mut self, other: WeightSum) {
        self.0 += other.0;
    }

    pub fn raw(self) -> i128 {
        self.0
    }

    /// Nearest `f64` to the exact sum.
    #[inline]
    pub fn value(self) -> f64 {
        (self.0 as f64) / WEIGHT_SCALE
    }
}

impl std::iter::Sum<f64> for WeightSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut s = WeightSum::ZERO;
        for w in iter {
            s.add(w);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancels_exactly() {
        let mut s = ExactSum::new();
        for x in [1e100, 1.0, -1e100, 1e-100] {
            s.add(x);
        }
        assert_eq!(s.value(), 1.0 + 1e-100);
        assert_eq!(ExactSum::new().value(), 0.0);
    }

    #[test]
    fn product_is_exact() {
        let a = 1.0 + f64::EPSILON;
        let mut s = ExactSum::new();
        s.add_product(a, a);
        s.add(-1.0);
        s.add(-2.0 * f64::EPSILON);
        assert_eq!(s.value(), f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn overflow_is_reported() {
        let mut s = ExactSum::new();
        s.add(f64::MAX);
        s.add(f64::MAX);
        assert!(!s.is_finite());
        assert!(s.value().is_infinite());
    }

    #[test]
    fn weight_sum_round_trip() {
        let mut w = WeightSum::ZERO;
        let logs: Vec<f64> = (2..200u32).map(|p| (p as f64).ln()).collect();
        for &l in &logs {
            w.add(l);
        }
        for &l in logs.iter().rev() {
            w.sub(l);
        }
        assert_eq!(w, WeightSum::ZERO);
    }

    proptest! {
        #[test]
        fn order_independent(mut xs in prop::collection::vec(-1e20f64..1e20, 1..60), seed in any::<u64>()) {
            let mut a = ExactSum::new();
            for &x in &xs { a.add(x); }
            // deterministic shuffle
            let mut state = seed | 1;
            for i in (1..xs.len()).rev() {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                xs.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let (left, right) = xs.split_at(xs.len() / 2);
            let mut b = ExactSum::new();
            for &x in left { b.add(x); }
            let mut c = ExactSum::new();
            for &x in right { c.add(x); }
            b.merge(&c);
            prop_assert_eq!(a.value().to_bits(), b.value().to_bits());
            let restored = ExactSum::from_partials(a.partials());
            prop_assert_eq!(restored.value().to_bits(), a.value().to_bits());
        }
    }
}
