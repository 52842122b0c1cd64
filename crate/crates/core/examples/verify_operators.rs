//! Builds every catalog operator, checks its summation-by-parts structure
//! exactly and differentiates a smooth function.
//!
//!     cargo run --example verify_operators

use sbp_quad::operator::GridFunction1D;
use sbp_quad::{build_operator, OperatorFamily, UniformGrid1D};

fn main() -> sbp_quad::Result<()> {
    for family in OperatorFamily::ALL {
        let grid = UniformGrid1D::unit(32)?;
        let op = build_operator(family, grid)?;
        let sigma: Vec<String> = op.sigma().iter().map(ToString::to_string).collect();
        println!(
            "{family}: s = {}, tau = {}, r = {}",
            family.s(),
            family.tau(),
            family.r()
        );
        println!("  boundary weights sigma = [{}]", sigma.join(", "));
        let total: f64 = op.quadrature_weights().iter().sum();
        println!("  sum of weights = {total:.16}");

        if !family.supports_differentiation() {
            println!("  quadrature only, no difference operator\n");
            continue;
        }
        println!("  {}", op.verify_sbp_structure()?);

        let errors: Vec<String> = [16, 32, 64, 128]
            .iter()
            .map(|&n| {
                let op = op.rebuild(UniformGrid1D::unit(n)?)?;
                let u = GridFunction1D::from_fn(*op.grid(), f64::sin);
                let du = op.apply_d(&u)?;
                let err = du
                    .values()
                    .iter()
                    .zip(op.grid().nodes())
                    .map(|(d, x)| (d - x.cos()).abs())
                    .fold(0.0, f64::max);
                Ok(format!("n={n}: {err:.2e}"))
            })
            .collect::<sbp_quad::Result<_>>()?;
        println!("  max |D sin - cos|  {}\n", errors.join("  "));
    }
    Ok(())
}
