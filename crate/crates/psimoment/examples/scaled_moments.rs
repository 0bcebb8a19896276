//! Proportional window moments, the event stream behind them, and one piece
//! of the closed-form integration.
//!
//! cargo run --release --example scaled_moments

use psimoment::scaled::net_event_weight;
use psimoment::{
    merged_event_stream, moment_integral_scaled, thm_ii_main, BasePrimes, PieceIntegral,
};

fn main() -> psimoment::Result<()> {
    let stream = merged_event_stream(20.0, 0.5, &BasePrimes::for_range(40))?;
    println!("window events on [1, 20] for delta = 0.5:");
    for e in stream.iter().take(8) {
        println!("  x = {:>7.3}  {:?}  Λ = {:.4}", e.x, e.kind, e.weight);
    }
    println!(
        "  ... {} events, net weight {:.4}",
        stream.len(),
        net_event_weight(&stream)
    );

    let piece = PieceIntegral::new(3.0, 0.5, 4.0, 5.0, 4);
    println!(
        "∫_4^5 (3 − x/2)^k dx for k = 0..=4: {:?}",
        piece.contributions
    );

    let (x, delta) = (1e7, 1e-3);
    let ks = [2, 4, 6];
    let actual = moment_integral_scaled(x, delta, &ks)?;
    println!("X = {x:e}, delta = {delta:e}");
    for (k, a) in ks.iter().zip(actual) {
        let p = thm_ii_main(x, delta, *k)?;
        println!(
            "  k = {k}: actual {a:.4e}, main term {p:.4e}, ratio {:.4}",
            a / p
        );
    }
    Ok(())
}
