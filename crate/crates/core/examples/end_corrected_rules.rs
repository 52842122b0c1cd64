//! Synthesizes trapezoid rules with end corrections from the Bernoulli
//! order conditions and measures their convergence.
//!
//!     cargo run --release --example end_corrected_rules

use sbp_quad::endcorrect::{solve_rule, verify_conditions, EndCorrectionConditions};
use sbp_quad::exact::int;
use sbp_quad::study::{study_rule1d, DEFAULT_N_LIST};

fn main() -> sbp_quad::Result<()> {
    let conditions = EndCorrectionConditions::new(3, 4)?;
    println!("conditions for r = 3, q = 4 (rows j = 1..3):");
    for (i, rhs) in conditions.rhs().iter().enumerate() {
        let row: Vec<String> = conditions
            .matrix()
            .row(i)
            .iter()
            .map(ToString::to_string)
            .collect();
        println!("  [{}] sigma = {rhs}", row.join(", "));
    }

    let cases: [(usize, usize, Vec<(usize, _)>); 5] = [
        (1, 2, vec![]),
        (3, 4, vec![]),
        (5, 6, vec![]),
        (4, 4, vec![]),
        (4, 4, vec![(0, int(0))]),
    ];
    for (r, q, pins) in cases {
        let rule = solve_rule(r, q, &pins)?;
        let sigma: Vec<String> = rule.sigma().iter().map(ToString::to_string).collect();
        let pinned = if pins.is_empty() {
            ""
        } else {
            ", sigma_0 pinned to 0"
        };
        println!("\nr = {r}, q = {q}{pinned}: sigma = [{}]", sigma.join(", "));
        println!("{}", verify_conditions(rule.sigma(), r, q)?);
        let result = study_rule1d(&rule.to_quadrature(), "rule", &DEFAULT_N_LIST)?;
        for rec in &result.records {
            let rate = rec.rate.map_or(String::new(), |q| format!("rate {q:.4}"));
            println!("  n = {:>3}  E = {:>11.3e}  {rate}", rec.n, rec.error);
        }
    }
    Ok(())
}
