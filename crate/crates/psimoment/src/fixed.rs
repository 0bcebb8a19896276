//! Moments over fixed-length windows `(x, x + h]`.
//!
//! Two modes share one sweep:
//!
//! * the discrete sum `Σ_{n=1}^{X} (ψ(n+h) − ψ(n) − h)^k` over integer `n`;
//! * the integral `∫_1^X (ψ(x+h) − ψ(x) − h)^k dx`.
//!
//! `ψ(x + h) − ψ(x)` only jumps at `x = m − h` and `x = m` for prime powers
//! `m`, so both reduce to `Σ (S − h)^k · length` over the constant pieces.
//! In the discrete mode every jump is at an integer and the term for `n`
//! holds on `[n, n + 1)`, so the sum is the same sweep run over `[1, X + 1)`.

use crate::accumulator::{validate_ks, MomentAccumulator};
use crate::error::{Error, Result};
use crate::job::{run_job, MomentJob, PlanEntry};
use crate::sieve::{BasePrimes, LambdaSource, Segment, DEFAULT_SEGMENT_SIZE};
use crate::sweep::{Shifted, WindowState};

/// Coordinates stay exactly representable below this bound.
pub const MAX_COORDINATE: u64 = 1 << 53;

/// `Σ_{n=1}^{X} (ψ(n+h) − ψ(n) − h)^k` for integer `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedSum {
    pub x: u64,
    pub h: u64,
    pub ks: Vec<u32>,
    pub segment_size: u64,
}

impl FixedSum {
    pub fn new(x: u64, h: u64, ks: &[u32], segment_size: u64) -> Result<Self> {
        validate_ks(ks)?;
        if h == 0 || h > x {
            return Err(Error::Domain(format!(
                "need 1 <= h <= X, got h = {h}, X = {x}"
            )));
        }
        if x.saturating_add(h) >= MAX_COORDINATE {
            return Err(Error::Domain(format!("X + h = {x} + {h} exceeds 2^53")));
        }
        if segment_size == 0 {
            return Err(Error::Usage("segment size must be positive".into()));
        }
        Ok(FixedSum {
            x,
            h,
            ks: ks.to_vec(),
            segment_size,
        })
    }
}

/// Blocks of consecutive `n` for the discrete sum. Block `[a, b]` needs Λ on
/// `(a, b + h]` and covers x in `[a, b + 1)`.
pub fn partition_plan(x: u64, h: u64, segment_size: u64) -> Vec<PlanEntry> {
    let size = segment_size.max(1);
    let count = x.div_ceil(size);
    (0..count)
        .map(|i| {
            let a = 1 + i * size;
            let b = (a + size - 1).min(x);
            PlanEntry {
                index: i as usize,
                x_lo: a as f64,
                x_hi: (b + 1) as f64,
                lambda: Segment { lo: a, hi: b + h },
            }
        })
        .collect()
}

impl MomentJob for FixedSum {
    fn ks(&self) -> &[u32] {
        &self.ks
    }

    fn plan(&self) -> Vec<PlanEntry> {
        partition_plan(self.x, self.h, self.segment_size)
    }

    fn run_entry(&self, entry: &PlanEntry, source: &dyn LambdaSource) -> Result<MomentAccumulator> {
        sweep_shifted(entry, self.h as f64, &self.ks, source)
    }
}

/// `∫_1^X (ψ(x+h) − ψ(x) − h)^k dx` for real `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedIntegral {
    pub x: f64,
    pub h: f64,
    pub ks: Vec<u32>,
    pub segment_size: u64,
}

impl FixedIntegral {
    pub fn new(x: f64, h: f64, ks: &[u32], segment_size: u64) -> Result<Self> {
        validate_ks(ks)?;
        if !(x >= 1.0) || !(h >= 0.0) || h > x {
            return Err(Error::Domain(format!(
                "need X >= 1 and 0 <= h <= X, got X = {x}, h = {h}"
            )));
        }
        if x + h >= MAX_COORDINATE as f64 {
            return Err(Error::Domain(format!("X + h = {} exceeds 2^53", x + h)));
        }
        if segment_size == 0 {
            return Err(Error::Usage("segment size must be positive".into()));
        }
        Ok(FixedIntegral {
            x,
            h,
            ks: ks.to_vec(),
            segment_size,
        })
    }
}

impl MomentJob for FixedIntegral {
    fn ks(&self) -> &[u32] {
        &self.ks
    }

    /// Intervals `[a, b]` with integer starts `a = 1 + i·size`. The Λ range
    /// `(a, b + h]` is rounded outward by one.
    fn plan(&self) -> Vec<PlanEntry> {
        if self.h == 0.0 || self.x <= 1.0 {
            return Vec::new();
        }
        let size = self.segment_size as f64;
        let count = ((self.x - 1.0) / size).ceil() as u64;
        (0..count)
            .map(|i| {
                let a = 1.0 + i as f64 * size;
                let b = (a + size).min(self.x);
                PlanEntry {
                    index: i as usize,
                    x_lo: a,
                    x_hi: b,
                    lambda: Segment {
                        lo: a as u64,
                        hi: (b + self.h).floor() as u64 + 1,
                    },
                }
            })
            .collect()
    }

    fn run_entry(&self, entry: &PlanEntry, source: &dyn LambdaSource) -> Result<MomentAccumulator> {
        sweep_shifted(entry, self.h, &self.ks, source)
    }
}

fn sweep_shifted(
    entry: &PlanEntry,
    h: f64,
    ks: &[u32],
    source: &dyn LambdaSource,
) -> Result<MomentAccumulator> {
    let events = source.events(entry.lambda)?;
    let mut acc = MomentAccumulator::new(ks, entry.x_lo, entry.x_hi);
    let window = WindowState::new(&events, Shifted { h }, entry.x_lo, entry.x_hi);
    window.for_each_piece(|s, a, b| acc.add_constant(s - h, a, b));
    Ok(acc)
}

/// `M_k(X; h)` as a discrete sum over `n = 1..=X`, one value per entry of `ks`.
pub fn moment_sum(x: u64, h: u64, ks: &[u32]) -> Result<Vec<f64>> {
    let job = FixedSum::new(x, h, ks, DEFAULT_SEGMENT_SIZE)?;
    let base = job.base_primes();
    run_job(&job, &base)?.values()
}

/// `∫_1^X (ψ(x+h) − ψ(x) − h)^k dx`, one value per entry of `ks`.
pub fn moment_integral_fixed(x: f64, h: f64, ks: &[u32]) -> Result<Vec<f64>> {
    let job = FixedIntegral::new(x, h, ks, DEFAULT_SEGMENT_SIZE)?;
    if job.h == 0.0 {
        return Ok(vec![0.0; ks.len()]);
    }
    let base: BasePrimes = job.base_primes();
    run_job(&job, &base)?.values()
}
