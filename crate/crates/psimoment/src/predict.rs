//! Asymptotic main terms for the window moments.
//!
//! All closed forms go through `I_m(T) = ∫_0^T t^m e^t dt`: substituting
//! `x = E·h·e^t` turns `∫ (log(x/(E h)))^{m} dx` into `E h · I_m(t)`.

use crate::error::{Error, Result};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Normalization constants, all derived from Euler's constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c0: f64,
    /// `2π e^{C₀ − 1}`
    pub e: f64,
    /// `1 − C₀ − log 2π`
    pub b: f64,
}

impl Constants {
    pub fn new() -> Self {
        let c0 = EULER_GAMMA;
        let two_pi = 2.0 * std::f64::consts::PI;
        Constants {
            c0,
            e: two_pi * (c0 - 1.0).exp(),
            b: 1.0 - c0 - two_pi.ln(),
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}

/// Gaussian moment `(k − 1)!!` for even `k`, zero for odd `k`.
pub fn mu(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    (1..k).step_by(2).map(f64::from).product()
}

/// `I_m(T) = ∫_0^T t^m e^t dt`, also for negative `T`.
///
/// For `T >= −2` this sums `Σ_j T^{m+j+1} / ((m+j+1) j!)`, whose terms are all
/// positive for `T >= 0`. Below that the recurrence
/// `I_m = T^m e^T − m I_{m−1}`, `I_0 = e^T − 1` is used; it cancels badly
/// near `T = 0` but is stable for large negative `T`.
pub fn poly_exp_integral(t: f64, m: u32) -> f64 {
    if t >= -2.0 {
        poly_exp_series(t, m)
    } else {
        poly_exp_recurrence(t, m)
    }
}

fn poly_exp_series(t: f64, m: u32) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let mut power = t.powi(m as i32 + 1); // t^{m+1} t^j / j!
    let mut sum = 0.0;
    let mut j = 0u32;
    loop {
        let term = power / f64::from(m + j + 1);
        sum += term;
        j += 1;
        if term.abs() <= 1e-18 * sum.abs() && f64::from(j) > t.abs() {
            return sum;
        }
        power *= t / f64::from(j);
    }
}

fn poly_exp_recurrence(t: f64, m: u32) -> f64 {
    let et = t.exp();
    let mut value = et - 1.0;
    let mut tp = 1.0;
    for j in 1..=m {
        tp *= t;
        value = tp * et - f64::from(j) * value;
    }
    value
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericRange(format!(
            "main term overflows f64 ({v})"
        )))
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k > crate::accumulator::MAX_K {
        return Err(Error::Domain(format!("exponent k = {k} outside 1..=16")));
    }
    Ok(())
}

/// `μ_k h^{k/2+1} ∫_E^{X/h} (log(x/E))^{k/2} dx`.
pub fn thm_i_main(x: f64, h: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    if !(h > 0.0) || !(x > 0.0) {
        return Err(Error::Domain(format!(
            "need X, h > 0, got X = {x}, h = {h}"
        )));
    }
    let c = Constants::new();
    let ratio = x / h;
    // X/h = E up to rounding counts as the empty integral.
    if ratio < c.e * (1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::Domain(format!(
            "X/h = {ratio} is below E = {}; the integral is empty",
            c.e
        )));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let t = (ratio / c.e).ln().max(0.0);
    let m = k / 2;
    finite(mu(k) * h.powi(m as i32 + 1) * c.e * poly_exp_integral(t, m))
}

/// `μ_k/(k/2+1) · X^{k/2+1} δ^{k/2} (log(1/(Eδ)))^{k/2}`.
pub fn thm_ii_main(x: f64, delta: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    let c = Constants::new();
    if !(delta > 0.0) || delta >= 1.0 / c.e {
        return Err(Error::Domain(format!(
            "need 0 < delta < 1/E = {}, got {delta}",
            1.0 / c.e
        )));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let m = (k / 2) as i32;
    let log = (1.0 / (c.e * delta)).ln();
    finite(mu(k) / f64::from(m as u32 + 1) * x.powi(m + 1) * delta.powi(m) * log.powi(m))
}

/// `μ_k h^{k/2} ∫_1^N (log(x/h) + B)^{k/2} dx` with the signed integrand,
/// integrated from 1.
pub fn ms_main_term(n: f64, h: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    if !(n >= 1.0) || !(h >= 1.0) {
        return Err(Error::Domain(format!(
            "need N, h >= 1, got N = {n}, h = {h}"
        )));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let c = Constants::new();
    let m = k / 2;
    let scale = c.e * h;
    let upper = poly_exp_integral((n / scale).ln(), m);
    let lower = poly_exp_integral(-scale.ln(), m);
    finite(mu(k) * h.powi(m as i32) * scale * (upper - lower))
}

/// Variance of `ψ(x+h) − ψ(x)` for `x <= N`: the Gaussian prediction
/// `h log(N/h)` next to Cramér's `h log N`.
pub fn cramer_variance(n: f64, h: f64) -> Result<(f64, f64)> {
    if !(h >= 1.0) || h > n {
        return Err(Error::Domain(format!(
            "need 1 <= h <= N, got N = {n}, h = {h}"
        )));
    }
    Ok((h * (n / h).ln(), h * n.ln()))
}

const SIMPSON_MAX_DEPTH: u32 = 50;
const SIMPSON_MAX_EVALS: u64 = 50_000_000;

/// Adaptive Simpson estimate of `∫_a^b f` to relative tolerance `tol`.
/// `b < a` gives the signed (negated) integral.
pub fn quadrature_oracle(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if b < a {
        return quadrature_oracle(f, b, a, tol).map(|v| -v);
    }
    if a == b {
        return Ok(0.0);
    }
    let mut q = Simpson { f, evals: 3 };
    let fa = (q.f)(a);
    let fb = (q.f)(b);
    let fm = (q.f)(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Coarse pass for the scale of the answer, then refine against it.
    let rough = q.run(a, b, fa, fm, fb, whole, tol * whole.abs(), 12, false)?;
    if !rough.is_finite() {
        return Err(Error::Accuracy(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let target = tol * rough.abs().max(f64::MIN_POSITIVE);
    let value = q.run(a, b, fa, fm, fb, whole, target, SIMPSON_MAX_DEPTH, true)?;
    if !value.is_finite() {
        return Err(Error::Accuracy(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    Ok(value)
}

struct Simpson<F> {
    f: F,
    evals: u64,
}

impl<F: Fn(f64) -> f64> Simpson<F> {
    #[allow(clippy::too_many_arguments)]
    fn run(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
        strict: bool,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let flm = (self.f)(0.5 * (a + m));
        let frm = (self.f)(0.5 * (m + b));
        self.evals += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * eps {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 || self.evals > SIMPSON_MAX_EVALS || !delta.is_finite() {
            if !strict && delta.is_finite() {
                return Ok(left + right);
            }
            return Err(Error::Accuracy(format!(
                "no convergence on [{a}, {b}] within {SIMPSON_MAX_DEPTH} halvings"
            )));
        }
        let l = self.run(a, m, fa, flm, fm, left, eps / 2.0, depth - 1, strict)?;
        let r = self.run(m, b, fm, frm, fb, right, eps / 2.0, depth - 1, strict)?;
        Ok(l + r)
    }
}
