//! Brute-force oracles. Nothing here goes through the sieve or the sweep.

#![allow(dead_code)]

/// Λ(n) by trial division.
pub fn lambda_naive(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = n;
            while m.is_multiple_of(p) {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln()
}

/// `lam[n] = Λ(n)` for `0 <= n <= max`.
pub fn lambda_table(max: u64) -> Vec<f64> {
    (0..=max).map(lambda_naive).collect()
}

/// Kahan-summed prefix sums: `psi[n] = ψ(n)`.
pub fn psi_table(lam: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(lam.len());
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &l in lam {
        let y = l - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
        out.push(s);
    }
    out
}

/// `Σ_{n=1}^{X} (Σ_{m=n+1}^{n+h} Λ(m) − h)^k` by the O(X·h) double loop.
pub fn moment_sum_naive(x: u64, h: u64, ks: &[u32], lam: &[f64]) -> Vec<f64> {
    let mut sums = vec![(0.0f64, 0.0f64); ks.len()];
    for n in 1..=x {
        let mut s = 0.0;
        for m in n + 1..=n + h {
            s += lam[m as usize];
        }
        let base = s - h as f64;
        for (acc, &k) in sums.iter_mut().zip(ks) {
            let term = base.powi(k as i32);
            let y = term - acc.1;
            let t = acc.0 + y;
            acc.1 = (t - acc.0) - y;
            acc.0 = t;
        }
    }
    sums.into_iter().map(|s| s.0).collect()
}

/// `∫_1^X (ψ(upper(x)) − ψ(x) − drift(x))^k dx` by the midpoint rule on
/// cells of width `step`. Cells where `⌊x⌋` or `⌊upper(x)⌋` changes are
/// bisected until the jump is pinned to within 1e-11.
pub fn riemann(
    x_max: f64,
    step: f64,
    upper: impl Fn(f64) -> f64,
    drift: impl Fn(f64) -> f64,
    ks: &[u32],
    psi: &[f64],
) -> Vec<f64> {
    let key = |x: f64| (x.floor() as usize, upper(x).floor() as usize);
    let value = |x: f64| {
        let (lo, hi) = key(x);
        psi[hi] - psi[lo] - drift(x)
    };
    let mut sums = vec![0.0f64; ks.len()];
    let mut comp = vec![0.0f64; ks.len()];
    let mut add = |v: f64, w: f64, sums: &mut Vec<f64>| {
        for (i, &k) in ks.iter().enumerate() {
            let y = v.powi(k as i32) * w - comp[i];
            let t = sums[i] + y;
            comp[i] = (t - sums[i]) - y;
            sums[i] = t;
        }
    };
    let mut stack = Vec::new();
    let cells = ((x_max - 1.0) / step).ceil() as u64;
    for i in 0..cells {
        let a = 1.0 + i as f64 * step;
        let b = (a + step).min(x_max);
        stack.push((a, b));
        while let Some((a, b)) = stack.pop() {
            // The right end is excluded: S is right-continuous.
            let b_in = b - (b - a) * 1e-9;
            if key(a) == key(b_in) || b - a < 1e-11 {
                let mid = 0.5 * (a + b);
                add(value(mid), b - a, &mut sums);
            } else {
                let mid = 0.5 * (a + b);
                stack.push((mid, b));
                stack.push((a, mid));
            }
        }
    }
    sums
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}
