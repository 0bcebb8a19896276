//! Sieve von Mangoldt weights segment by segment and evaluate ψ(x).
//!
//! cargo run --release --example sieve_psi -- 1000000

use psimoment::{lambda_segment, psi, BasePrimes, Segment};

fn main() -> psimoment::Result<()> {
    let limit: u64 = std::env::args()
        .nth(1)
        .map_or(Ok(1_000_000), |s| s.parse())
        .unwrap_or(1_000_000);

    let base = BasePrimes::for_range(limit);
    let first = lambda_segment(Segment::new(1, 30)?, &base)?;
    println!("prime powers up to 30:");
    for e in &first {
        println!("  Λ({:>2}) = {:.6}", e.n, e.weight);
    }

    let mut count = 0usize;
    for seg in Segment::new(1, limit)?.split(1 << 20) {
        count += lambda_segment(seg, &base)?.len();
    }
    let value = psi(limit as f64)?;
    println!("{count} prime powers up to {limit}");
    println!(
        "ψ({limit}) = {value:.6}, ψ(x) − x = {:.3}",
        value - limit as f64
    );
    Ok(())
}
