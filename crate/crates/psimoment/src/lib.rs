//! Higher moments of primes in short intervals.
//!
//! The crate computes, from a segmented sieve of the von Mangoldt function,
//!
//! - the discrete moments `Σ_{n ≤ X} (ψ(n+h) − ψ(n) − h)^k`,
//! - the fixed-window integrals `∫_1^X (ψ(x+h) − ψ(x) − h)^k dx`,
//! - the scaled-window integrals `∫_1^X (ψ(x+δx) − ψ(x) − δx)^k dx`,
//!
//! exactly up to floating-point rounding, by sweeping the jump points of the
//! window sums. It also evaluates the conjectured main terms these moments
//! are compared against.
//!
//! ```
//! use psimoment::{moment_integral_scaled, thm_ii_main};
//!
//! let actual = moment_integral_scaled(1e5, 1e-2, &[2]).unwrap()[0];
//! let predicted = thm_ii_main(1e5, 1e-2, 2).unwrap();
//! assert!((actual / predicted - 1.0).abs() < 0.5);
//! ```

// NaN-rejecting `!(x >= a)` guards are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accumulator;
pub mod error;
pub mod fixed;
pub mod job;
pub mod predict;
pub mod report;
pub mod scaled;
pub mod sieve;
pub mod sum;
pub mod sweep;

pub use accumulator::{MomentAccumulator, MAX_K};
pub use error::{Error, Result};
pub use fixed::{moment_integral_fixed, moment_sum, partition_plan, FixedIntegral, FixedSum};
pub use job::{run_job, MomentJob, PlanEntry};
pub use predict::{
    cramer_variance, ms_main_term, mu, poly_exp_integral, quadrature_oracle, thm_i_main,
    thm_ii_main, Constants,
};
pub use report::{reproduce, run, MomentReport, MomentRow, RunConfig, Table};
pub use scaled::{
    merged_event_stream, moment_integral_scaled, scaled_partition_plan, PieceIntegral,
    ScaledIntegral,
};
pub use sieve::{
    lambda_segment, psi, small_primes, BasePrimes, LambdaEvent, LambdaSource, Segment,
};
pub use sum::{ExactSum, WeightSum};
pub use sweep::{EventKind, SweepEvent, WindowState};
