//! Exact Bernoulli numbers, centered-difference coefficients and the
//! sum-of-powers identity behind the end-correction conditions.
//!
//!     cargo run --example bernoulli_table

use sbp_quad::stencil::{bernoulli, central_coefficients, sum_of_powers};

fn main() -> sbp_quad::Result<()> {
    println!("Bernoulli numbers (beta_1 = -1/2):");
    for j in 0..=12 {
        println!("  beta_{j:<2} = {}", bernoulli(j)?);
    }

    println!("\ncentered first-derivative coefficients alpha_1..alpha_s:");
    for s in 1..=4 {
        let st = central_coefficients(s)?;
        let alpha: Vec<String> = st.alpha().iter().map(ToString::to_string).collect();
        println!("  s = {s}: [{}]", alpha.join(", "));
    }

    println!("\nj * sum_{{v<r}} (r - v)^(j-1), checked against the Bernoulli closed form:");
    for r in 1..=4 {
        let row: Vec<String> = (1..=6)
            .map(|j| sum_of_powers(r, j).map(|v| format!("{v:>6}")))
            .collect::<Result<_, _>>()?;
        println!("  r = {r}: {}", row.join(" "));
    }
    Ok(())
}
