//! CSV, JSON and plot-data output for study results.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), lines end
//! in `\n` and rows appear in ascending `n` within each study.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::study::StudyResult;

pub const CSV_HEADER: &str = "study,family,n,error,rate";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Domain(format!("unknown report format '{other}'"))),
        }
    }
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub study: String,
    pub family: String,
    pub n: usize,
    pub error: f64,
    pub rate: Option<f64>,
}

pub fn rows(results: &[StudyResult]) -> Vec<ReportRow> {
    results
        .iter()
        .flat_map(|res| {
            let mut recs = res.records.clone();
            recs.sort_by_key(|r| r.n);
            recs.into_iter().map(move |r| ReportRow {
                study: res.study.clone(),
                family: res.family.clone(),
                n: r.n,
                error: r.error,
                rate: r.rate,
            })
        })
        .collect()
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(results: &[StudyResult], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows(results) {
        let rate = row.rate.map(fmt_f64).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            row.study,
            row.family,
            row.n,
            fmt_f64(row.error),
            rate
        )?;
    }
    Ok(())
}

/// serde_json formatter that prints floats as `{:.16e}`; non-finite values
/// become `null`.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn write_json<W: Write>(results: &[StudyResult], mut out: W) -> Result<()> {
    {
        let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
        rows(results).serialize(&mut ser)?;
    }
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json(text: &str) -> Result<Vec<ReportRow>> {
    Ok(serde_json::from_str(text)?)
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(
    results: &[StudyResult],
    format: ReportFormat,
    path: Option<&Path>,
) -> Result<()> {
    if results.iter().all(|r| r.records.is_empty()) {
        return Err(Error::Domain("nothing to report".into()));
    }
    let write = |out: &mut dyn Write| -> Result<()> {
        match format {
            ReportFormat::Csv => write_csv(results, out),
            ReportFormat::Json => write_json(results, out),
        }
    };
    match path {
        Some(p) => {
            let mut out = BufWriter::new(File::create(p)?);
            write(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

/// `log10(1/n)` against `log10|E_n|`, one row per grid, for error plots.
pub fn write_plot_data<W: Write>(results: &[StudyResult], mut out: W) -> Result<()> {
    writeln!(out, "study,family,n,log10_h,log10_abs_error")?;
    for row in rows(results) {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.study,
            row.family,
            row.n,
            fmt_f64(-(row.n as f64).log10()),
            fmt_f64(row.error.abs().log10())
        )?;
    }
    Ok(())
}
