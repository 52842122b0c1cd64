//! Integrates over the region bounded by the hyperbolas `xy = 1, 3` and
//! `x² - y² = 1, 4` with a Jacobian built from the same SBP operator, and
//! exports the discrete Jacobian as CSV.
//!
//!     cargo run --release --example curvilinear_quadrature [jacobian.csv]

use std::fs::File;
use std::io::BufWriter;

use sbp_quad::study::{mapped_exact, mapped_integrand};
use sbp_quad::tensor::{
    compute_metrics, hyperbolic_grid, integrate2d, write_field_csv, MetricPolicy,
};
use sbp_quad::{build_operator, OperatorFamily, UniformGrid1D};

fn main() -> sbp_quad::Result<()> {
    let exact = mapped_exact();
    println!("exact integral {exact:.16}");
    for family in OperatorFamily::DIAGONAL {
        print!("{family}:");
        for n in [16, 32, 64, 128] {
            let op = build_operator(family, UniformGrid1D::unit(n)?)?;
            let grid = hyperbolic_grid(n)?;
            let metrics = compute_metrics(&op, &grid)?;
            let f = grid.sample(mapped_integrand);
            let approx = integrate2d(&op, &metrics, &f, MetricPolicy::SameOperator)?;
            print!("  n={n} E={:.2e}", exact - approx);
        }
        println!();
    }

    // the analytic Jacobian of the inverse map is 3 / (x² + y²)
    let n = 32;
    let op = build_operator(OperatorFamily::Diag24, UniformGrid1D::unit(n)?)?;
    let grid = hyperbolic_grid(n)?;
    let metrics = compute_metrics(&op, &grid)?;
    let analytic = grid.sample(|x, y| 3.0 / (x * x + y * y));
    let worst = metrics
        .jac
        .values()
        .iter()
        .zip(analytic.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("\ndiag-2-4, n = {n}: max |J - 3/(x²+y²)| = {worst:.2e}");

    if let Some(path) = std::env::args().nth(1) {
        write_field_csv(&grid, &metrics.jac, BufWriter::new(File::create(&path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
