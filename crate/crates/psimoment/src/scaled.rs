//! Moments over proportional windows `(x, x + δx]`:
//! `∫_1^X (ψ(x + δx) − ψ(x) − δx)^k dx`.
//!
//! A prime power `m` is in the window while `m/(1+δ) <= x < m`. Between
//! consecutive events the window sum `S` is constant and the integrand is the
//! polynomial `(S − δx)^k`, integrated in closed form.
//!
//! Pieces are additionally cut at every multiple of [`SWEEP_GRID`], and
//! segment boundaries are placed on that grid. A run therefore evaluates the
//! same pieces however it is partitioned, and with exact accumulation the
//! result is bit-identical across partitions and thread counts.

use crate::accumulator::{validate_ks, MomentAccumulator, MAX_K};
use crate::error::{Error, Result};
use crate::fixed::MAX_COORDINATE;
use crate::job::{run_job, MomentJob, PlanEntry};
use crate::sieve::{BasePrimes, LambdaSource, Segment, DEFAULT_SEGMENT_SIZE};
use crate::sum::WeightSum;
use crate::sweep::{Scaled, SweepEvent, WindowState};

/// Spacing of the fixed cut points along x.
pub const SWEEP_GRID: u64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledIntegral {
    pub x: f64,
    pub delta: f64,
    pub ks: Vec<u32>,
    pub segment_size: u64,
}

fn validate(x: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0) || delta > 1.0 {
        return Err(Error::Domain(format!("need 0 < delta <= 1, got {delta}")));
    }
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("need X >= 1, got {x}")));
    }
    if x * (1.0 + delta) >= MAX_COORDINATE as f64 {
        return Err(Error::Domain(format!(
            "(1 + delta) X exceeds 2^53 at X = {x}"
        )));
    }
    Ok(())
}

impl ScaledIntegral {
    /// Segment sizes are rounded up to a multiple of [`SWEEP_GRID`].
    pub fn new(x: f64, delta: f64, ks: &[u32], segment_size: u64) -> Result<Self> {
        validate_ks(ks)?;
        validate(x, delta)?;
        if segment_size == 0 {
            return Err(Error::Usage("segment size must be positive".into()));
        }
        Ok(ScaledIntegral {
            x,
            delta,
            ks: ks.to_vec(),
            segment_size: segment_size.div_ceil(SWEEP_GRID) * SWEEP_GRID,
        })
    }

    fn lambda_hi(&self, b: f64) -> u64 {
        (b * (1.0 + self.delta)).floor() as u64 + 2
    }
}

/// Covering partition of `[1, X]` into `[a, b]` with interior boundaries on
/// multiples of the (grid-aligned) segment size. Interval `[a, b]` needs Λ on
/// `(a, (1+δ) b]`, rounded outward.
pub fn scaled_partition_plan(x: f64, delta: f64, segment_size: u64) -> Result<Vec<PlanEntry>> {
    let job = ScaledIntegral::new(x, delta, &[2], segment_size)?;
    Ok(job.plan())
}

impl MomentJob for ScaledIntegral {
    fn ks(&self) -> &[u32] {
        &self.ks
    }

    fn plan(&self) -> Vec<PlanEntry> {
        if self.x <= 1.0 {
            return Vec::new();
        }
        let size = self.segment_size as f64;
        let mut out = Vec::new();
        let mut a = 1.0;
        while a < self.x {
            let next = ((a / size).floor() + 1.0) * size;
            let b = next.min(self.x);
            out.push(PlanEntry {
                index: out.len(),
                x_lo: a,
                x_hi: b,
                lambda: Segment {
                    lo: a as u64,
                    hi: self.lambda_hi(b),
                },
            });
            a = b;
        }
        out
    }

    fn run_entry(&self, entry: &PlanEntry, source: &dyn LambdaSource) -> Result<MomentAccumulator> {
        let events = source.events(entry.lambda)?;
        let delta = self.delta;
        let mut acc = MomentAccumulator::new(&self.ks, entry.x_lo, entry.x_hi);
        let window = WindowState::new(&events, Scaled { delta }, entry.x_lo, entry.x_hi);
        let grid = SWEEP_GRID as f64;
        window.for_each_piece(|s, a, b| {
            let mut lo = a;
            let mut cut = ((a / grid).floor() + 1.0) * grid;
            while cut < b {
                acc.add_linear(s, delta, lo, cut);
                lo = cut;
                cut += grid;
            }
            acc.add_linear(s, delta, lo, b);
        });
        Ok(acc)
    }
}

/// `M̃_k(X; δ) = ∫_1^X (ψ(x + δx) − ψ(x) − δx)^k dx`, one value per entry of `ks`.
pub fn moment_integral_scaled(x: f64, delta: f64, ks: &[u32]) -> Result<Vec<f64>> {
    let job = ScaledIntegral::new(x, delta, ks, DEFAULT_SEGMENT_SIZE)?;
    let base: BasePrimes = job.base_primes();
    run_job(&job, &base)?.values()
}

/// Every window entry and exit on `[1, X]`, in sweep order (ties leave-first).
pub fn merged_event_stream(
    x: f64,
    delta: f64,
    source: &dyn LambdaSource,
) -> Result<Vec<SweepEvent>> {
    validate(x, delta)?;
    let hi = (x * (1.0 + delta)).floor() as u64 + 2;
    let events = source.events(Segment::new(1, hi)?)?;
    let mut window = WindowState::new(&events, Scaled { delta }, 1.0, x);
    let mut out = Vec::new();
    while let Some(ev) = window.advance() {
        out.push(ev);
    }
    Ok(out)
}

/// Window sum `Σ Λ(m)` over `a < m <= (1+δ) a`, the state a segment starting
/// at `a` is initialized with.
pub fn initial_window_sum(a: f64, delta: f64, source: &dyn LambdaSource) -> Result<f64> {
    validate(a, delta)?;
    let lo = a.floor() as u64;
    let hi = (a * (1.0 + delta)).floor() as u64 + 2;
    let events = source.events(Segment::new(lo, hi)?)?;
    let window = WindowState::new(&events, Scaled { delta }, a, a);
    Ok(window.window_sum())
}

/// Closed-form contribution of one constant-S piece, for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceIntegral {
    pub s: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    /// Indexed by exponent, `0..=max_k`.
    pub contributions: Vec<f64>,
}

impl PieceIntegral {
    pub fn new(s: f64, delta: f64, x_lo: f64, x_hi: f64, max_k: u32) -> Self {
        let max_k = max_k.min(MAX_K) as usize;
        let mut out = [0.0; MAX_K as usize + 1];
        crate::accumulator::linear_piece(s, delta, x_lo, x_hi, max_k, &mut out);
        PieceIntegral {
            s,
            x_lo,
            x_hi,
            contributions: out[..=max_k].to_vec(),
        }
    }
}

/// Total weight entering minus total weight leaving over a stream.
pub fn net_event_weight(events: &[SweepEvent]) -> f64 {
    let mut net = WeightSum::ZERO;
    for e in events {
        match e.kind {
            crate::sweep::EventKind::Enter => net.add(e.weight),
            crate::sweep::EventKind::Leave => net.sub(e.weight),
        }
    }
    net.value()
}
