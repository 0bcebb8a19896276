//! Segmented sieve for the von Mangoldt function.
//!
//! A segment `(lo, hi]` is sieved with the odd base primes up to `sqrt(hi)`;
//! surviving odd integers are primes, and higher prime powers `p^m` are few
//! enough that they are enumerated directly and merged in. Each segment is a
//! pure function of its bounds and the base primes, so segments can be
//! sieved on any number of threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::WeightSum;

/// Default number of integers sieved per segment.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

/// `n = p^m` carrying `Λ(n) = log p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEvent {
    pub n: u64,
    pub weight: f64,
}

/// Half-open integer range `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub lo: u64,
    pub hi: u64,
}

impl Segment {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyDomain(format!("segment ({lo}, {hi}] is empty")));
        }
        Ok(Segment { lo, hi })
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    /// Splits `(lo, hi]` into consecutive pieces of at most `size` integers.
    pub fn split(self, size: u64) -> impl Iterator<Item = Segment> {
        let size = size.max(1);
        let Segment { lo, hi } = self;
        let count = (hi - lo).div_ceil(size);
        (0..count).map(move |i| {
            let a = lo + i * size;
            Segment {
                lo: a,
                hi: (a + size).min(hi),
            }
        })
    }
}

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone)]
pub struct BasePrimes {
    limit: u64,
    primes: Vec<u64>,
}

impl BasePrimes {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Base primes large enough to sieve any segment ending at or below `hi`.
    pub fn for_range(hi: u64) -> BasePrimes {
        small_primes(isqrt(hi).max(2)).expect("limit is at least 2")
    }

    pub fn covers(&self, hi: u64) -> bool {
        self.limit >= isqrt(hi)
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Sieve of Eratosthenes up to `limit`.
pub fn small_primes(limit: u64) -> Result<BasePrimes> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!("no primes up to {limit}")));
    }
    let n = usize::try_from(limit)
        .map_err(|_| Error::Domain(format!("base prime limit {limit} too large")))?;
    let mut composite = vec![false; n + 1];
    let mut p = 2;
    while p * p <= n {
        if !composite[p] {
            for m in (p * p..=n).step_by(p) {
                composite[m] = true;
            }
        }
        p += 1;
    }
    let primes = (2..=n)
        .filter(|&i| !composite[i])
        .map(|i| i as u64)
        .collect();
    Ok(BasePrimes { limit, primes })
}

/// Von Mangoldt events for every prime power in `seg`, in increasing order.
pub fn lambda_segment(seg: Segment, base: &BasePrimes) -> Result<Vec<LambdaEvent>> {
    let required = isqrt(seg.hi);
    if base.limit < required {
        return Err(Error::BaseTooSmall {
            have: base.limit,
            required,
        });
    }
    let Segment { lo, hi } = seg;
    let len = usize::try_from(hi - lo)
        .map_err(|_| Error::Domain(format!("segment ({lo}, {hi}] too long")))?;
    // composite[i] describes n = lo + 1 + i; only odd n are ever marked.
    let mut composite = vec![false; len];
    let mut powers: Vec<(u64, u64)> = Vec::new();

    for &p in &base.primes {
        let Some(sq) = p.checked_mul(p) else { break };
        if sq > hi {
            break;
        }
        let mut pw = sq;
        loop {
            if pw > lo {
                powers.push((pw, p));
            }
            match pw.checked_mul(p) {
                Some(next) if next <= hi => pw = next,
                _ => break,
            }
        }
        if p == 2 {
            continue;
        }
        let first = (lo / p + 1) * p;
        let mut m = first.max(sq);
        if m % 2 == 0 {
            m += p;
        }
        let step = 2 * p;
        while m <= hi {
            composite[(m - lo - 1) as usize] = true;
            m += step;
        }
    }
    powers.sort_unstable();

    let mut out = Vec::with_capacity(estimate_count(lo, hi) + powers.len());
    let mut pending = powers.into_iter().peekable();
    let mut push_powers_below = |n: u64, out: &mut Vec<LambdaEvent>| {
        while let Some(&(pw, p)) = pending.peek() {
            if pw >= n {
                break;
            }
            out.push(LambdaEvent {
                n: pw,
                weight: (p as f64).ln(),
            });
            pending.next();
        }
    };

    if lo < 2 && hi >= 2 {
        out.push(LambdaEvent {
            n: 2,
            weight: std::f64::consts::LN_2,
        });
    }
    // First odd n above max(lo, 2).
    let mut n = (lo + 1).max(3) | 1;
    while n <= hi {
        if !composite[(n - lo - 1) as usize] {
            push_powers_below(n, &mut out);
            out.push(LambdaEvent {
                n,
                weight: (n as f64).ln(),
            });
        }
        n += 2;
    }
    push_powers_below(u64::MAX, &mut out);
    Ok(out)
}

fn estimate_count(lo: u64, hi: u64) -> usize {
    let mid = ((lo + hi) / 2).max(3) as f64;
    ((hi - lo) as f64 / mid.ln() * 1.2) as usize + 16
}

/// Anything that can hand out Λ events over a range. The sieve is the real
/// source; tests inject others.
pub trait LambdaSource: Sync {
    fn events(&self, range: Segment) -> Result<Vec<LambdaEvent>>;
}

impl LambdaSource for BasePrimes {
    fn events(&self, range: Segment) -> Result<Vec<LambdaEvent>> {
        lambda_segment(range, self)
    }
}

/// Exact `ψ(n)` as a fixed-point weight sum, sieved segment by segment.
pub fn psi_exact<S: LambdaSource + ?Sized>(
    n: u64,
    source: &S,
    segment_size: u64,
) -> Result<WeightSum> {
    if n < 2 {
        return Ok(WeightSum::ZERO);
    }
    let segments: Vec<Segment> = Segment { lo: 1, hi: n }.split(segment_size).collect();
    let parts = segments
        .into_par_iter()
        .map(|seg| {
            source
                .events(seg)
                .map(|ev| ev.iter().map(|e| e.weight).sum::<WeightSum>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = WeightSum::ZERO;
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

/// Chebyshev's `ψ(x) = Σ_{n ≤ x} Λ(n)`.
pub fn psi(x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("psi needs x >= 1, got {x}")));
    }
    let n = x.floor() as u64;
    let base = BasePrimes::for_range(n);
    let value = psi_exact(n, &base, DEFAULT_SEGMENT_SIZE)?.value();
    rh_monitor(x, value);
    Ok(value)
}

/// Soft sanity check `|ψ(x) − x| ≤ 3 √x log² x` on `10³ ≤ x ≤ 10⁸`. Logs a
/// warning when the bound is exceeded; returns whether it held.
pub fn rh_monitor(x: f64, psi: f64) -> bool {
    if !(1e3..=1e8).contains(&x) {
        return true;
    }
    let bound = 3.0 * x.sqrt() * x.ln().powi(2);
    let ok = (psi - x).abs() <= bound;
    if !ok {
        log::warn!(
            "|psi(x) - x| = {} exceeds {bound} at x = {x}",
            (psi - x).abs()
        );
    }
    ok
}
