use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::ExactSum;

/// Largest supported moment exponent.
pub const MAX_K: u32 = 16;

pub fn validate_ks(ks: &[u32]) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::Usage("at least one exponent k is required".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > MAX_K) {
        return Err(Error::Usage(format!(
            "exponent k = {k} outside 1..={MAX_K}"
        )));
    }
    Ok(())
}

/// Per-k exact partial sums for one stretch of the x-range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentAccumulator {
    pub ks: Vec<u32>,
    pub partials: Vec<ExactSum>,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl MomentAccumulator {
    pub fn new(ks: &[u32], x_lo: f64, x_hi: f64) -> Self {
        MomentAccumulator {
            ks: ks.to_vec(),
            partials: vec![ExactSum::new(); ks.len()],
            x_lo,
            x_hi,
        }
    }

    fn max_k(&self) -> usize {
        self.ks.iter().copied().max().unwrap_or(0) as usize
    }

    /// Adds `∫_a^b base^k dx` for a constant integrand. The length `b − a` is
    /// split into its exact two-term form, so cutting a piece in two never
    /// changes the accumulated value.
    #[inline]
    pub fn add_constant(&mut self, base: f64, a: f64, b: f64) {
        let (len, err) = two_sum(b, -a);
        let mut pow = [1.0f64; MAX_K as usize + 1];
        for j in 1..=self.max_k() {
            pow[j] = pow[j - 1] * base;
        }
        for (sum, &k) in self.partials.iter_mut().zip(&self.ks) {
            let p = pow[k as usize];
            sum.add_product(p, len);
            if err != 0.0 {
                sum.add_product(p, err);
            }
        }
    }

    /// Adds `∫_a^b (s − δx)^k dx`.
    #[inline]
    pub fn add_linear(&mut self, s: f64, delta: f64, a: f64, b: f64) {
        let mut out = [0.0f64; MAX_K as usize + 1];
        linear_piece(s, delta, a, b, self.max_k(), &mut out);
        for (sum, &k) in self.partials.iter_mut().zip(&self.ks) {
            sum.add(out[k as usize]);
        }
    }

    /// Folds in the accumulator of the following stretch.
    pub fn merge(&mut self, other: &MomentAccumulator) {
        debug_assert_eq!(self.ks, other.ks);
        for (a, b) in self.partials.iter_mut().zip(&other.partials) {
            a.merge(b);
        }
        self.x_lo = self.x_lo.min(other.x_lo);
        self.x_hi = self.x_hi.max(other.x_hi);
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.partials
            .iter()
            .zip(&self.ks)
            .map(|(s, k)| {
                let v = s.value();
                if s.is_finite() && v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NumericRange(format!(
                        "moment k = {k} overflowed on [{}, {}]",
                        self.x_lo, self.x_hi
                    )))
                }
            })
            .collect()
    }
}

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// `∫_a^b (s − δx)^k dx` for every `k ≤ max_k`, written into `out[k]`.
///
/// With `u = s − δa` and `v = s − δb` the antiderivative difference
/// `(u^{k+1} − v^{k+1}) / ((k+1)δ)` equals `(b − a)/(k+1) · Σ_j u^j v^{k−j}`,
/// which avoids dividing a cancelling difference by a small `δ`.
#[inline]
pub fn linear_piece(s: f64, delta: f64, a: f64, b: f64, max_k: usize, out: &mut [f64]) {
    let u = (-delta).mul_add(a, s);
    let v = (-delta).mul_add(b, s);
    let len = b - a;
    let mut upow = 1.0;
    let mut h = 1.0;
    out[0] = len;
    for (k, slot) in out.iter_mut().enumerate().take(max_k + 1).skip(1) {
        upow *= u;
        h = upow + v * h;
        *slot = len * h / (k as f64 + 1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_exponents() {
        assert!(validate_ks(&[]).is_err());
        assert!(validate_ks(&[0]).is_err());
        assert!(validate_ks(&[17]).is_err());
        assert!(validate_ks(&[1, 2, 16]).is_ok());
    }

    #[test]
    fn constant_piece_split_is_exact() {
        let mut whole = MomentAccumulator::new(&[2, 3], 0.0, 1.0);
        whole.add_constant(-1.7, 0.1, 0.9);
        let mut split = MomentAccumulator::new(&[2, 3], 0.0, 1.0);
        split.add_constant(-1.7, 0.1, 0.3);
        split.add_constant(-1.7, 0.3, 0.9);
        assert_eq!(whole.values().unwrap(), split.values().unwrap());
    }

    #[test]
    fn linear_piece_matches_antiderivative() {
        let (s, d, a, b) = (3.0, 0.5, 1.0, 2.0);
        let mut out = [0.0; 7];
        linear_piece(s, d, a, b, 6, &mut out);
        for (k, got) in out.iter().enumerate() {
            let f = |x: f64| -(s - d * x).powi(k as i32 + 1) / ((k as f64 + 1.0) * d);
            let expect = f(b) - f(a);
            assert!((got - expect).abs() <= 1e-14 * expect.abs(), "k={k}");
        }
    }

    #[test]
    fn overflow_is_numeric_range() {
        let mut acc = MomentAccumulator::new(&[16], 0.0, 1.0);
        acc.add_constant(1e30, 0.0, 1.0);
        assert!(matches!(acc.values(), Err(Error::NumericRange(_))));
    }
}
