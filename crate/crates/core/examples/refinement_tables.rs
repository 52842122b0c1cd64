//! Runs every refinement study on n = 16..512 and prints the observed rates
//! next to the reference ones.
//!
//!     cargo run --release --example refinement_tables [report.json]

use sbp_quad::report::{emit_report, ReportFormat};
use sbp_quad::study::{judge, reference_rates, StudyKind, StudySpec, DEFAULT_N_LIST};
use sbp_quad::OperatorFamily::{self, *};

fn main() -> sbp_quad::Result<()> {
    let runs: [(StudyKind, OperatorFamily, Option<OperatorFamily>); 12] = [
        (StudyKind::Quad1D, Diag12, None),
        (StudyKind::Quad1D, Diag24, None),
        (StudyKind::Quad1D, Full34, None),
        (StudyKind::Quad1D, Diag36, None),
        (StudyKind::Quad2D, Diag12, None),
        (StudyKind::Quad2D, Diag24, None),
        (StudyKind::Quad2D, Diag36, None),
        (StudyKind::Mixed2D, Diag36, Some(Diag24)),
        (StudyKind::Mixed2D, Diag24, Some(Diag36)),
        (StudyKind::Div2D, Diag12, None),
        (StudyKind::Div2D, Diag24, None),
        (StudyKind::Div2D, Diag36, None),
    ];
    let mut all = Vec::new();
    for (kind, family, metric) in runs {
        let spec = StudySpec::new(kind, family, metric, DEFAULT_N_LIST.to_vec())?;
        let result = spec.run()?;
        println!("{kind} {}", spec.family_label());
        let reference = reference_rates(kind, family);
        for (i, rec) in result.records.iter().enumerate() {
            let reference_text = match (i, reference) {
                (1.., Some(r)) => format!("{:>9.4}", r[i - 1]),
                _ => " ".repeat(9),
            };
            let rate = rec.rate.map_or(" ".repeat(9), |q| format!("{q:>9.4}"));
            println!(
                "  n = {:>4}  E = {:>12.4e}  q = {rate}  reference {reference_text}",
                rec.n, rec.error
            );
        }
        if let Some(max) = result.identity_residuals.iter().cloned().reduce(f64::max) {
            println!("  max |volume - boundary| / field scale = {max:.2e}");
        }
        if let Some(v) = judge(&spec, &result) {
            println!("  {v}");
        }
        all.push(result);
    }
    if let Some(path) = std::env::args().nth(1) {
        emit_report(&all, ReportFormat::Json, Some(path.as_ref()))?;
        println!("wrote {path}");
    }
    Ok(())
}
