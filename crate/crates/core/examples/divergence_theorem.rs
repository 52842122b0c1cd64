//! Discrete divergence theorem on a curved grid: the quadrature of
//! `D_ξ f̂ + D_η ĝ` equals a sum over boundary nodes only.
//!
//!     cargo run --release --example divergence_theorem

use sbp_quad::study::{divergence_exact, divergence_field};
use sbp_quad::tensor::{contravariant_flux, divergence_integral, hyperbolic_grid};
use sbp_quad::{build_operator, OperatorFamily, UniformGrid1D};

fn main() -> sbp_quad::Result<()> {
    let exact = divergence_exact();
    println!("exact value 2/pi = {exact:.16}\n");
    println!(
        "{:<9} {:>4} {:>22} {:>22} {:>10} {:>10}",
        "family", "n", "volume", "boundary", "|diff|", "error"
    );
    for family in OperatorFamily::DIAGONAL {
        for n in [16, 64, 256] {
            let op = build_operator(family, UniformGrid1D::unit(n)?)?;
            let grid = hyperbolic_grid(n)?;
            let f = grid.sample(|x, y| divergence_field(x, y).0);
            let g = grid.sample(|x, y| divergence_field(x, y).1);
            let (fhat, ghat) = contravariant_flux(&op, &grid, &f, &g)?;
            let forms = divergence_integral(&op, &fhat, &ghat)?;
            println!(
                "{:<9} {n:>4} {:>22.16} {:>22.16} {:>10.2e} {:>10.2e}",
                family.name(),
                forms.volume,
                forms.boundary,
                forms.discrepancy(),
                exact - forms.volume
            );
        }
    }
    Ok(())
}
