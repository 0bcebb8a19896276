//! Segment-parallel execution of a moment computation.
//!
//! A job is cut into [`PlanEntry`] pieces that cover the x-range without
//! overlap. Each entry is computed independently from a fresh sieve of its
//! Λ range, so the window is rebuilt exactly at every entry start. Entry
//! results are folded in index order; because the partial sums are exact,
//! the result is the same for any number of worker threads.

use rayon::prelude::*;

use crate::accumulator::MomentAccumulator;
use crate::error::Result;
use crate::sieve::{BasePrimes, LambdaSource, Segment};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    pub index: usize,
    /// x-interval `[x_lo, x_hi]` covered by this entry.
    pub x_lo: f64,
    pub x_hi: f64,
    /// Λ values needed for the entry.
    pub lambda: Segment,
}

pub trait MomentJob: Sync {
    fn ks(&self) -> &[u32];

    fn plan(&self) -> Vec<PlanEntry>;

    fn run_entry(&self, entry: &PlanEntry, source: &dyn LambdaSource) -> Result<MomentAccumulator>;

    /// Largest integer whose Λ value the plan needs.
    fn lambda_limit(&self) -> u64 {
        self.plan().iter().map(|e| e.lambda.hi).max().unwrap_or(2)
    }

    /// Sieve-backed Λ source covering the whole plan.
    fn base_primes(&self) -> BasePrimes {
        BasePrimes::for_range(self.lambda_limit())
    }
}

/// Runs every entry of `job` on the current rayon pool and folds the results
/// in entry order.
pub fn run_job(job: &dyn MomentJob, source: &dyn LambdaSource) -> Result<MomentAccumulator> {
    let plan = job.plan();
    let parts = plan
        .par_iter()
        .map(|entry| job.run_entry(entry, source))
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_ordered(job.ks(), parts))
}

pub fn fold_ordered(
    ks: &[u32],
    parts: impl IntoIterator<Item = MomentAccumulator>,
) -> MomentAccumulator {
    let mut parts = parts.into_iter();
    let Some(mut total) = parts.next() else {
        return MomentAccumulator::new(ks, 1.0, 1.0);
    };
    for p in parts {
        total.merge(&p);
    }
    total
}
