//! Main-term formulas and the quadrature oracle they are checked against.
//!
//! cargo run --release --example predictors

use psimoment::{
    cramer_variance, ms_main_term, mu, poly_exp_integral, quadrature_oracle, thm_i_main,
    thm_ii_main, Constants,
};

fn main() -> psimoment::Result<()> {
    let c = Constants::new();
    println!("E = {:.10}, B = {:.10}", c.e, c.b);
    println!("μ_k for k = 2, 4, 6: {}, {}, {}", mu(2), mu(4), mu(6));

    for k in [2, 4, 6] {
        println!(
            "k = {k}: thm_i(1e10, 1e5) = {:.5e}  ms(1e10, 1e5) = {:.5e}  thm_ii(1e10, 1e-5) = {:.5e}",
            thm_i_main(1e10, 1e5, k)?,
            ms_main_term(1e10, 1e5, k)?,
            thm_ii_main(1e10, 1e-5, k)?
        );
    }

    let closed = poly_exp_integral(2.5, 3);
    let numeric = quadrature_oracle(|t| t.powi(3) * t.exp(), 0.0, 2.5, 1e-14)?;
    println!("∫_0^2.5 t³ eᵗ dt: closed form {closed:.15}, quadrature {numeric:.15}");

    let (gaussian, cramer) = cramer_variance(1e10, 1e5)?;
    println!("variance at N = 1e10, h = 1e5: h log(N/h) = {gaussian:.4e}, h log N = {cramer:.4e}");
    Ok(())
}
