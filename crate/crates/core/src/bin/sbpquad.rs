//! Command-line front end for operator checks, rule synthesis and the
//! refinement studies. Exit status: 0 pass, 1 failed criterion, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sbp_quad::endcorrect::{solve_rule, verify_conditions, verify_prop2};
use sbp_quad::report::{emit_report, write_plot_data, ReportFormat};
use sbp_quad::stencil::central_coefficients;
use sbp_quad::study::{judge, study_rule1d, StudyKind, StudyResult, StudySpec, DEFAULT_N_LIST};
use sbp_quad::{build_operator, OperatorFamily, Rational, UniformGrid1D};

#[derive(Parser)]
#[command(
    name = "sbpquad",
    version,
    about = "SBP operators and their quadrature rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a catalog operator: SBP structure, accuracy and weight conditions.
    VerifyOp {
        family: OperatorFamily,
        /// Intervals of the grid used for the structure check.
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Synthesize boundary weights of an end-corrected trapezoid rule.
    GenRule {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: usize,
        /// Fix weight `v` to a rational value, e.g. `--pin 0=0`.
        #[arg(long = "pin", value_parser = parse_pin)]
        pins: Vec<(usize, Rational)>,
        /// Also run the 1-D refinement study with the new rule.
        #[arg(long)]
        study: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// 1-D quadrature refinement study.
    #[command(name = "study-1d")]
    Study1d {
        #[arg(long)]
        family: OperatorFamily,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mapped 2-D quadrature; `--metric-family` picks a different operator
    /// for the metric terms.
    #[command(name = "study-2d")]
    Study2d {
        #[arg(long)]
        family: OperatorFamily,
        #[arg(long)]
        metric_family: Option<OperatorFamily>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrated discrete divergence study.
    StudyDiv {
        #[arg(long)]
        family: OperatorFamily,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Comma-separated grid sizes, each double the previous.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_LIST)]
    n_list: Vec<usize>,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit log10(h) against log10|E_n| instead of the report.
    #[arg(long)]
    plot_data: bool,
}

fn parse_pin(text: &str) -> Result<(usize, Rational), String> {
    let (index, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected v=VALUE, got '{text}'"))?;
    let index = index
        .trim()
        .parse()
        .map_err(|e| format!("bad index '{index}': {e}"))?;
    let value = value
        .trim()
        .parse()
        .map_err(|_| format!("bad rational '{value}'"))?;
    Ok((index, value))
}

#[derive(Serialize)]
struct RuleOutput {
    r: usize,
    q: usize,
    sigma: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> sbp_quad::Result<bool> {
    match command {
        Command::VerifyOp { family, n } => verify_op(family, n),
        Command::GenRule {
            r,
            q,
            pins,
            study,
            output,
        } => gen_rule(r, q, &pins, study, &output),
        Command::Study1d { family, output } => run_study(StudyKind::Quad1D, family, None, &output),
        Command::Study2d {
            family,
            metric_family,
            output,
        } => {
            let kind = match metric_family {
                Some(m) if m != family => StudyKind::Mixed2D,
                _ => StudyKind::Quad2D,
            };
            run_study(
                kind,
                family,
                metric_family.filter(|&m| m != family),
                &output,
            )
        }
        Command::StudyDiv { family, output } => run_study(StudyKind::Div2D, family, None, &output),
    }
}

fn verify_op(family: OperatorFamily, n: usize) -> sbp_quad::Result<bool> {
    let op = build_operator(family, UniformGrid1D::unit(n)?)?;
    let mut passed = true;
    if family.supports_differentiation() {
        let report = op.verify_sbp_structure()?;
        println!("{report}");
        passed &= report.passed;
    } else {
        println!("{family}: no difference operator catalogued, structure check skipped");
    }
    let q = family.quadrature_order();
    let conditions = verify_conditions(op.sigma(), family.r(), q)?;
    println!(
        "order conditions, r = {}, q = {q}:\n{conditions}",
        family.r()
    );
    passed &= conditions.passed();
    if family.is_diagonal() {
        let weights = verify_prop2(op.sigma(), family.s(), &central_coefficients(family.s())?)?;
        println!("diagonal-norm weight relations:\n{weights}");
        passed &= weights.passed();
    }
    Ok(passed)
}

fn gen_rule(
    r: usize,
    q: usize,
    pins: &[(usize, Rational)],
    study: bool,
    output: &OutputArgs,
) -> sbp_quad::Result<bool> {
    let rule = solve_rule(r, q, pins)?;
    let check = verify_conditions(rule.sigma(), r, q)?;
    let mut passed = check.passed();
    let rendered = RuleOutput {
        r,
        q,
        sigma: rule.sigma().iter().map(ToString::to_string).collect(),
    };
    if !study {
        let text = match output.format {
            ReportFormat::Json => serde_json::to_string_pretty(&rendered)? + "\n",
            ReportFormat::Csv => {
                let mut s = String::from("v,sigma\n");
                for (v, w) in rendered.sigma.iter().enumerate() {
                    s += &format!("{v},{w}\n");
                }
                s
            }
        };
        match &output.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        return Ok(passed);
    }
    let label = format!("rule-{r}-{q}");
    let result = study_rule1d(&rule.to_quadrature(), &label, &output.n_list)?;
    write_output(&result, output)?;
    if let Some(rate) = result.finest().and_then(|rec| rec.rate) {
        let ok = rate >= q as f64 - 0.15;
        eprintln!(
            "{}: rate {rate:.4} at n = {} (expected at least {q} - 0.15)",
            if ok { "PASS" } else { "FAIL" },
            result.finest().map_or(0, |rec| rec.n)
        );
        passed &= ok;
    }
    Ok(passed)
}

fn run_study(
    kind: StudyKind,
    family: OperatorFamily,
    metric_family: Option<OperatorFamily>,
    output: &OutputArgs,
) -> sbp_quad::Result<bool> {
    let spec = StudySpec::new(kind, family, metric_family, output.n_list.clone())?;
    let result = spec.run()?;
    write_output(&result, output)?;
    if let Some(worst) = result.identity_residuals.iter().copied().reduce(f64::max) {
        eprintln!("max |volume - boundary| / field scale = {worst:.3e}");
    }
    Ok(match judge(&spec, &result) {
        Some(verdict) => {
            eprintln!("{verdict}");
            verdict.passed
        }
        None => {
            eprintln!("no rate to judge (need at least two grids)");
            true
        }
    })
}

fn write_output(result: &StudyResult, output: &OutputArgs) -> sbp_quad::Result<()> {
    let results = std::slice::from_ref(result);
    if !output.plot_data {
        return emit_report(results, output.format, output.out.as_deref());
    }
    match &output.out {
        Some(path) => write_plot_data(results, std::fs::File::create(path)?),
        None => write_plot_data(results, std::io::stdout().lock()),
    }
}
