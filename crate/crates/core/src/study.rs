//! Grid-refinement studies for the 1-D rules, the mapped 2-D quadrature and
//! the integrated discrete divergence.
//!
//! Each study samples a smooth problem with a known integral on a list of
//! grids `n, 2n, 4n, …` and reports the error `E_n = I - I_n` together with
//! the observed order `q_n = log2(|E_{n/2}| / |E_n|)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{build_operator, OperatorFamily, QuadratureRule1D, UniformGrid1D};
use crate::tensor::{
    compute_metrics, contravariant_flux, divergence_integral, hyperbolic_grid, integrate2d,
    MetricPolicy,
};

/// Grids used by all reference runs.
pub const DEFAULT_N_LIST: [usize; 6] = [16, 32, 64, 128, 256, 512];

/// Finest grid not dominated by round-off for diag-3-6 in two dimensions.
pub const DIAG36_2D_ROUNDOFF_LIMIT: usize = 128;

/// `(4π)² x sin(4πx)`, whose integral over `[0, 1]` is `-4π cos(4π)`.
pub fn oscillatory_integrand(x: f64) -> f64 {
    (4.0 * PI).powi(2) * x * (4.0 * PI * x).sin()
}

pub fn oscillatory_exact() -> f64 {
    -4.0 * PI * (4.0 * PI).cos()
}

/// `(x² + y²) exp((1 - x² + y²)/3) sin((xy - 1)/2)` over the hyperbolic region.
pub fn mapped_integrand(x: f64, y: f64) -> f64 {
    (x * x + y * y) * ((1.0 - x * x + y * y) / 3.0).exp() * ((x * y - 1.0) / 2.0).sin()
}

pub fn mapped_exact() -> f64 {
    3.0 * (1.0 - (-1.0f64).exp()) * (1.0 - 1.0f64.cos())
}

/// Vector field `(F, G)` whose divergence integrates to `2/π` over the
/// hyperbolic region.
pub fn divergence_field(x: f64, y: f64) -> (f64, f64) {
    let u = x * x - y * y - 1.0;
    let damp = ((1.0 - x * y) / 2.0).exp() * (2.0 * PI * u / 3.0).cos();
    let poly = ((x * y - 1.0) / 2.0).powi(7) * (PI * u / 3.0).sin();
    (
        x / 2.0 * damp + 2.0 * y / 3.0 * poly,
        -y / 2.0 * damp + 2.0 * x / 3.0 * poly,
    )
}

pub fn divergence_exact() -> f64 {
    2.0 / PI
}

/// `q = log2(|E_coarse| / |E_fine|)`
pub fn observed_rate(coarse_error: f64, fine_error: f64) -> f64 {
    (coarse_error.abs() / fine_error.abs()).ln() / 2f64.ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub error: f64,
    /// Present iff the study also contains `n / 2`.
    pub rate: Option<f64>,
}

/// Attaches rates to `(n, E_n)` samples sorted by `n`.
pub fn convergence_records(samples: &[(usize, f64)]) -> Vec<ConvergenceRecord> {
    samples
        .iter()
        .map(|&(n, error)| {
            let coarse = (n % 2 == 0)
                .then(|| samples.iter().find(|(m, _)| *m == n / 2))
                .flatten();
            ConvergenceRecord {
                n,
                error,
                rate: coarse.map(|&(_, e)| observed_rate(e, error)),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Quad1D,
    Quad2D,
    Mixed2D,
    Div2D,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Quad1D => "quad1d",
            Self::Quad2D => "quad2d",
            Self::Mixed2D => "mixed2d",
            Self::Div2D => "div2d",
        }
    }

    fn is_two_dimensional(self) -> bool {
        !matches!(self, Self::Quad1D)
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quad1d" => Ok(Self::Quad1D),
            "quad2d" => Ok(Self::Quad2D),
            "mixed2d" => Ok(Self::Mixed2D),
            "div2d" => Ok(Self::Div2D),
            other => Err(Error::Domain(format!("unknown study kind '{other}'"))),
        }
    }
}

/// What to run: problem, operator(s) and grids.
#[derive(Clone, Debug, PartialEq)]
pub struct StudySpec {
    pub kind: StudyKind,
    pub family: OperatorFamily,
    /// Family used for the metric terms; differs from `family` only for
    /// [`StudyKind::Mixed2D`].
    pub metric_family: OperatorFamily,
    pub n_list: Vec<usize>,
    pub exact: f64,
}

impl StudySpec {
    pub fn new(
        kind: StudyKind,
        family: OperatorFamily,
        metric_family: Option<OperatorFamily>,
        n_list: Vec<usize>,
    ) -> Result<Self> {
        validate_n_list(&n_list)?;
        let metric_family = metric_family.unwrap_or(family);
        match kind {
            StudyKind::Mixed2D if metric_family == family => {
                return Err(Error::Domain(
                    "a mixed study needs a metric family different from the quadrature family"
                        .into(),
                ))
            }
            StudyKind::Mixed2D => {}
            _ if metric_family != family => {
                return Err(Error::Domain(format!(
                    "{kind} studies use a single operator family"
                )))
            }
            _ => {}
        }
        if kind.is_two_dimensional() {
            for f in [family, metric_family] {
                if !f.is_diagonal() {
                    return Err(Error::Unsupported {
                        family: f,
                        capability: "two-dimensional studies",
                    });
                }
            }
        }
        let exact = match kind {
            StudyKind::Quad1D => oscillatory_exact(),
            StudyKind::Quad2D | StudyKind::Mixed2D => mapped_exact(),
            StudyKind::Div2D => divergence_exact(),
        };
        Ok(Self {
            kind,
            family,
            metric_family,
            n_list,
            exact,
        })
    }

    /// Label used in reports: the family, or `quadrature/metric` when mixed.
    pub fn family_label(&self) -> String {
        if self.metric_family == self.family {
            self.family.to_string()
        } else {
            format!("{}/{}", self.family, self.metric_family)
        }
    }

    /// Order the study should approach. A mixed run is limited by the
    /// boundary accuracy `s` of the metric operator, one order being
    /// recovered by the boundary weights.
    pub fn expected_order(&self) -> f64 {
        match self.kind {
            StudyKind::Mixed2D => self
                .family
                .quadrature_order()
                .min(self.metric_family.s() + 1) as f64,
            _ => self.family.quadrature_order() as f64,
        }
    }

    /// Grid at which reference 2-D rates are compared: the finest one not
    /// swamped by round-off. Coarser 2-D rates are pre-asymptotic and are
    /// judged against the design order instead.
    pub fn last_reference_grid(&self) -> usize {
        let last = DEFAULT_N_LIST[DEFAULT_N_LIST.len() - 1];
        if self.is_reliable(last) {
            last
        } else {
            DIAG36_2D_ROUNDOFF_LIMIT
        }
    }

    /// Half-width of the band around a reference rate.
    pub fn reference_band(&self) -> f64 {
        match (self.kind, self.family) {
            (StudyKind::Quad2D, OperatorFamily::Diag36) => DIAG36_QUAD2D_BAND,
            (StudyKind::Div2D, OperatorFamily::Diag36) => DIAG36_DIV2D_BAND,
            _ => REFERENCE_BAND,
        }
    }

    /// Whether the rate at `n` is meaningful or swamped by round-off.
    pub fn is_reliable(&self, n: usize) -> bool {
        let diag36 =
            self.family == OperatorFamily::Diag36 || self.metric_family == OperatorFamily::Diag36;
        !(self.kind.is_two_dimensional()
            && self.kind != StudyKind::Mixed2D
            && diag36
            && n > DIAG36_2D_ROUNDOFF_LIMIT)
    }

    pub fn run(&self) -> Result<StudyResult> {
        match self.kind {
            StudyKind::Quad1D => run_quad1d(self),
            StudyKind::Quad2D | StudyKind::Mixed2D => run_quad2d(self),
            StudyKind::Div2D => run_div2d(self),
        }
    }
}

fn validate_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::Domain("empty n list".into()));
    }
    if n_list.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Domain(format!(
            "n list {n_list:?} must double from one entry to the next"
        )));
    }
    Ok(())
}

/// Records of one study, ascending in `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyResult {
    pub study: String,
    pub family: String,
    pub records: Vec<ConvergenceRecord>,
    /// Divergence studies: `|volume - boundary| / (‖f̂‖∞ + ‖ĝ‖∞)` per grid.
    pub identity_residuals: Vec<f64>,
}

impl StudyResult {
    pub fn rate_at(&self, n: usize) -> Option<f64> {
        self.records.iter().find(|r| r.n == n).and_then(|r| r.rate)
    }

    pub fn finest(&self) -> Option<&ConvergenceRecord> {
        self.records.last()
    }
}

fn run_quad1d(spec: &StudySpec) -> Result<StudyResult> {
    let errors = spec
        .n_list
        .par_iter()
        .map(|&n| {
            let grid = UniformGrid1D::unit(n)?;
            let op = build_operator(spec.family, grid)?;
            let approx: f64 = op
                .quadrature_weights()
                .iter()
                .zip(grid.nodes())
                .map(|(w, x)| w * oscillatory_integrand(x))
                .sum();
            Ok((n, spec.exact - approx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyResult {
        study: spec.kind.name().into(),
        family: spec.family_label(),
        records: convergence_records(&errors),
        identity_residuals: Vec::new(),
    })
}

fn run_quad2d(spec: &StudySpec) -> Result<StudyResult> {
    let policy = match spec.kind {
        StudyKind::Mixed2D => MetricPolicy::AllowMixed,
        _ => MetricPolicy::SameOperator,
    };
    let errors = spec
        .n_list
        .par_iter()
        .map(|&n| {
            let unit = UniformGrid1D::unit(n)?;
            let quad = build_operator(spec.family, unit)?;
            let metric_op = build_operator(spec.metric_family, unit)?;
            let grid = hyperbolic_grid(n)?;
            let metrics = compute_metrics(&metric_op, &grid)?;
            let f = grid.sample(mapped_integrand);
            let approx = integrate2d(&quad, &metrics, &f, policy)?;
            Ok((n, spec.exact - approx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyResult {
        study: spec.kind.name().into(),
        family: spec.family_label(),
        records: convergence_records(&errors),
        identity_residuals: Vec::new(),
    })
}

fn run_div2d(spec: &StudySpec) -> Result<StudyResult> {
    let rows = spec
        .n_list
        .par_iter()
        .map(|&n| {
            let op = build_operator(spec.family, UniformGrid1D::unit(n)?)?;
            let grid = hyperbolic_grid(n)?;
            let f = grid.sample(|x, y| divergence_field(x, y).0);
            let g = grid.sample(|x, y| divergence_field(x, y).1);
            let (fhat, ghat) = contravariant_flux(&op, &grid, &f, &g)?;
            let forms = divergence_integral(&op, &fhat, &ghat)?;
            let scale = fhat.max_abs() + ghat.max_abs();
            Ok(((n, spec.exact - forms.volume), forms.discrepancy() / scale))
        })
        .collect::<Result<Vec<_>>>()?;
    let (errors, residuals): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(StudyResult {
        study: spec.kind.name().into(),
        family: spec.family_label(),
        records: convergence_records(&errors),
        identity_residuals: residuals,
    })
}

/// 1-D quadrature of the oscillatory test integral with `family`'s weights.
pub fn study_quad1d(family: OperatorFamily, n_list: &[usize]) -> Result<StudyResult> {
    StudySpec::new(StudyKind::Quad1D, family, None, n_list.to_vec())?.run()
}

/// Same problem as [`study_quad1d`] with an arbitrary end-corrected rule.
pub fn study_rule1d(rule: &QuadratureRule1D, label: &str, n_list: &[usize]) -> Result<StudyResult> {
    validate_n_list(n_list)?;
    let errors = n_list
        .iter()
        .map(|&n| {
            let grid = UniformGrid1D::unit(n)?;
            Ok((
                n,
                oscillatory_exact() - rule.integrate(&grid, oscillatory_integrand)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyResult {
        study: StudyKind::Quad1D.name().into(),
        family: label.into(),
        records: convergence_records(&errors),
        identity_residuals: Vec::new(),
    })
}

/// Mapped quadrature on the hyperbolic region. Passing a different
/// `metric_family` runs the mixed scheme.
pub fn study_quad2d(
    family: OperatorFamily,
    metric_family: Option<OperatorFamily>,
    n_list: &[usize],
) -> Result<StudyResult> {
    let kind = match metric_family {
        Some(m) if m != family => StudyKind::Mixed2D,
        _ => StudyKind::Quad2D,
    };
    StudySpec::new(kind, family, metric_family, n_list.to_vec())?.run()
}

/// Integrated discrete divergence on the hyperbolic region.
pub fn study_div2d(family: OperatorFamily, n_list: &[usize]) -> Result<StudyResult> {
    StudySpec::new(StudyKind::Div2D, family, None, n_list.to_vec())?.run()
}

/// Reference rates at `n = 32, 64, 128, 256, 512` for the reference runs.
pub fn reference_rates(kind: StudyKind, family: OperatorFamily) -> Option<[f64; 5]> {
    use OperatorFamily::*;
    use StudyKind::*;
    let rates = match (kind, family) {
        (Quad1D, Diag12) => [2.0113, 2.0028, 2.0007, 2.0002, 2.0000],
        (Quad1D, Diag24) => [4.4978, 4.4148, 4.2182, 4.1019, 4.0473],
        (Quad1D, Full34) => [4.1973, 2.9369, 3.7072, 3.8876, 3.9510],
        (Quad1D, Diag36) => [5.7050, 6.8942, 6.9378, 6.7651, 6.5472],
        (Quad2D, Diag12) => [2.0911, 2.0453, 2.0226, 2.0113, 2.0056],
        (Quad2D, Diag24) => [4.3283, 4.1583, 4.0768, 4.0374, 4.0093],
        (Quad2D, Diag36) => [7.0799, 6.7941, 6.2253, 2.1274, -0.7390],
        // quadrature diag-3-6, metrics diag-2-4
        (Mixed2D, Diag36) => [3.3170, 2.0521, 2.7215, 2.8863, 2.9484],
        (Div2D, Diag12) => [2.0909, 2.0453, 2.0226, 2.0113, 2.0056],
        (Div2D, Diag24) => [3.7201, 3.7862, 3.9000, 3.9532, 3.9758],
        (Div2D, Diag36) => [7.5935, 7.2371, 7.8361, 5.0507, -2.1760],
        _ => return None,
    };
    Some(rates)
}

/// Reference rate at `n`, if `n` is one of the reference grids.
pub fn reference_rate(kind: StudyKind, family: OperatorFamily, n: usize) -> Option<f64> {
    let pos = DEFAULT_N_LIST[1..].iter().position(|&m| m == n)?;
    reference_rates(kind, family).map(|r| r[pos])
}

/// Pass/fail judgement of a finished study.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    /// Finest grid whose rate was judged.
    pub n: usize,
    pub observed: f64,
    pub expected_order: f64,
    pub reference: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match self.reference {
            Some(r) => write!(
                f,
                "{status}: rate {:.4} at n = {} (reference {r:.4} ± {})",
                self.observed, self.n, self.tolerance
            ),
            None => write!(
                f,
                "{status}: rate {:.4} at n = {} (expected at least {} - {})",
                self.observed, self.n, self.expected_order, self.tolerance
            ),
        }
    }
}

/// Rate band around a reference value.
pub const REFERENCE_BAND: f64 = 0.05;
/// Band for the diag-3-6 mapped quadrature, whose last reliable grid sits
/// close to the round-off floor.
pub const DIAG36_QUAD2D_BAND: f64 = 0.3;
/// Band for the diag-3-6 divergence study at its last reliable grid.
pub const DIAG36_DIV2D_BAND: f64 = 0.5;
/// Slack below the design order when no reference value exists.
pub const ORDER_BAND: f64 = 0.15;

/// Judges the finest reliable rate: against the reference value when there
/// is one (see [`StudySpec::reference_band`]), otherwise it must reach the
/// design order less `0.15`.
pub fn judge(spec: &StudySpec, result: &StudyResult) -> Option<Verdict> {
    let record = result
        .records
        .iter()
        .rev()
        .find(|r| r.rate.is_some() && spec.is_reliable(r.n))?;
    let observed = record.rate?;
    let reference = match spec.kind {
        StudyKind::Mixed2D if spec.metric_family != OperatorFamily::Diag24 => None,
        kind if kind.is_two_dimensional() && record.n != spec.last_reference_grid() => None,
        kind => reference_rate(kind, spec.family, record.n),
    };
    let expected_order = spec.expected_order();
    let (tolerance, passed) = match reference {
        Some(r) => {
            let band = spec.reference_band();
            (band, (observed - r).abs() <= band)
        }
        None => (ORDER_BAND, observed >= expected_order - ORDER_BAND),
    };
    Some(Verdict {
        n: record.n,
        observed,
        expected_order,
        reference,
        tolerance,
        passed,
    })
}
