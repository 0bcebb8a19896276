//! Fixed-length window moments: the discrete sum over n and the integral over x.
//!
//! cargo run --release --example fixed_moments

use psimoment::{moment_integral_fixed, moment_sum, ms_main_term, thm_i_main};

fn main() -> psimoment::Result<()> {
    let (x, h) = (1_000_000u64, 1_000u64);
    let ks = [2, 4, 6];
    let sum = moment_sum(x, h, &ks)?;
    let integral = moment_integral_fixed(x as f64, h as f64, &ks)?;
    println!("X = {x}, h = {h}");
    println!(
        " k  {:>12}  {:>12}  {:>12}  {:>12}",
        "sum", "integral", "thm_i", "ms"
    );
    for (i, &k) in ks.iter().enumerate() {
        println!(
            "{k:>2}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>12.4e}",
            sum[i],
            integral[i],
            thm_i_main(x as f64, h as f64, k)?,
            ms_main_term(x as f64, h as f64, k)?
        );
    }
    Ok(())
}
