//! Trapezoid rules with end corrections.
//!
//! A rule with boundary weights `σ_0..σ_{r-1}` is `q`-order accurate
//! exactly when, for `j = 1..q-1`,
//!
//! ```text
//! j Σ_{v=0}^{r-1} σ_v (r - v)^{j-1} = r^j - (-1)^j β_j
//! ```
//!
//! with `β_j` the Bernoulli numbers (`β_1 = -1/2`). Everything in this
//! module is evaluated in exact rational arithmetic.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, ipow, min_norm_solution, solve_square, to_f64, Rational, RationalMatrix};
use crate::operator::{QuadratureRule1D, QuadratureSource};
use crate::stencil::{bernoulli, CentralStencil};

/// The linear system `A σ = b` behind a `(r, q)` rule: rows `j = 1..q-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndCorrectionConditions {
    r: usize,
    q: usize,
    matrix: RationalMatrix,
    rhs: Vec<Rational>,
}

impl EndCorrectionConditions {
    pub fn new(r: usize, q: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain(
                "end-correction width must be at least 1".into(),
            ));
        }
        if q < 2 || q > r + 1 {
            return Err(Error::Domain(format!(
                "order q = {q} outside 2..={} for width r = {r}",
                r + 1
            )));
        }
        let mut matrix = RationalMatrix::zeros(q - 1, r);
        let mut rhs = Vec::with_capacity(q - 1);
        for j in 1..q {
            for v in 0..r {
                matrix.set(j - 1, v, int(j as i64) * ipow((r - v) as i64, j as u32 - 1));
            }
            rhs.push(condition_rhs(r, j)?);
        }
        Ok(Self { r, q, matrix, rhs })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }
}

/// `r^j - (-1)^j β_j`
fn condition_rhs(r: usize, j: usize) -> Result<Rational> {
    let b = bernoulli(j)?;
    let rj = ipow(r as i64, j as u32);
    Ok(if j.is_multiple_of(2) { rj - b } else { rj + b })
}

/// `j Σ_v w_v (r - v)^{j-1}`
fn condition_lhs(weights: &[Rational], j: usize) -> Rational {
    let r = weights.len();
    let sum = weights
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (v, w)| {
            acc + w * ipow((r - v) as i64, j as u32 - 1)
        });
    int(j as i64) * sum
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionRow {
    pub j: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl ConditionRow {
    pub fn residual(&self) -> Rational {
        &self.lhs - &self.rhs
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Row-by-row outcome of an order-condition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub rows: Vec<ConditionRow>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(ConditionRow::holds)
    }

    /// The first `j` whose row does not hold.
    pub fn first_failure(&self) -> Option<usize> {
        self.rows.iter().find(|row| !row.holds()).map(|row| row.j)
    }

    /// Largest `|residual|` as a float, for display.
    pub fn max_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| to_f64(&row.residual()).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(
                f,
                "  j = {}: lhs = {}, rhs = {}, residual = {}",
                row.j,
                row.lhs,
                row.rhs,
                row.residual()
            )?;
        }
        match self.first_failure() {
            None => write!(f, "  PASS"),
            Some(j) => write!(f, "  FAIL (first failing row j = {j})"),
        }
    }
}

/// Checks the order conditions for rows `j = 1..q-1`.
pub fn verify_conditions(sigma: &[Rational], r: usize, q: usize) -> Result<ConditionReport> {
    if sigma.len() != r {
        return Err(Error::Shape {
            expected: r,
            found: sigma.len(),
        });
    }
    if q < 2 || q > r + 1 {
        return Err(Error::Domain(format!(
            "order q = {q} outside 2..={} for width r = {r}",
            r + 1
        )));
    }
    let rows = (1..q)
        .map(|j| {
            Ok(ConditionRow {
                j,
                lhs: condition_lhs(sigma, j),
                rhs: condition_rhs(r, j)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConditionReport { rows })
}

/// Floating-point counterpart of [`verify_conditions`]: each row must hold
/// to `1e-13 · max(1, r^q)`.
pub fn verify_conditions_f64(sigma: &[f64], r: usize, q: usize) -> Result<bool> {
    if sigma.len() != r {
        return Err(Error::Shape {
            expected: r,
            found: sigma.len(),
        });
    }
    if q < 2 || q > r + 1 {
        return Err(Error::Domain(format!(
            "order q = {q} outside 2..={}",
            r + 1
        )));
    }
    let tol = 1e-13 * (r as f64).powi(q as i32).max(1.0);
    for j in 1..q {
        let lhs: f64 = j as f64
            * sigma
                .iter()
                .enumerate()
                .map(|(v, s)| s * ((r - v) as f64).powi(j as i32 - 1))
                .sum::<f64>();
        let rhs = to_f64(&condition_rhs(r, j)?);
        if (lhs - rhs).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the diagonal-norm weight relations: rows `j = 1..2s-1` in the
/// Bernoulli form, plus the row `j = 2s`
///
/// ```text
/// 2s Σ λ_v (r - v)^{2s-1} = r^{2s} - 2 Σ_{v=1}^{s} α_v Σ_{w=0}^{v-1} w^s (w - v)^s
/// ```
///
/// with `r = lambda.len()`.
pub fn verify_prop2(
    lambda: &[Rational],
    s: usize,
    alpha: &CentralStencil,
) -> Result<ConditionReport> {
    if alpha.half_width() != s {
        return Err(Error::Shape {
            expected: s,
            found: alpha.half_width(),
        });
    }
    if s == 0 || lambda.is_empty() {
        return Err(Error::Domain("need s >= 1 and at least one weight".into()));
    }
    let r = lambda.len();
    let mut rows = Vec::with_capacity(2 * s);
    for j in 1..2 * s {
        rows.push(ConditionRow {
            j,
            lhs: condition_lhs(lambda, j),
            rhs: condition_rhs(r, j)?,
        });
    }
    let double_sum = alpha
        .alpha()
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, a)| {
            let v = i as i64 + 1;
            let inner = (0..v).fold(Rational::zero(), |acc, w| {
                acc + ipow(w, s as u32) * ipow(w - v, s as u32)
            });
            acc + a * inner
        });
    rows.push(ConditionRow {
        j: 2 * s,
        lhs: condition_lhs(lambda, 2 * s),
        rhs: ipow(r as i64, 2 * s as u32) - int(2) * double_sum,
    });
    Ok(ConditionReport { rows })
}

/// Boundary weights together with the order they were verified for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndCorrectedRule {
    sigma: Vec<Rational>,
    q: usize,
}

impl EndCorrectedRule {
    pub fn sigma(&self) -> &[Rational] {
        &self.sigma
    }

    pub fn r(&self) -> usize {
        self.sigma.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn to_quadrature(&self) -> QuadratureRule1D {
        QuadratureRule1D::new(self.sigma.clone(), QuadratureSource::EndCorrectionSolver)
            .expect("rules have r >= 1")
    }
}

/// Synthesizes a `q`-order rule of width `r`.
///
/// `pinned` fixes individual weights, e.g. `(0, 0)` to skip the end node.
/// With `r = q - 1` and no pins the system is square and the rule unique.
/// Any remaining freedom is spent on the exact minimiser of `‖σ - 1‖₂`,
/// i.e. the smallest departure from the plain trapezoid interior weight.
#[allow(clippy::needless_range_loop)]
pub fn solve_rule(r: usize, q: usize, pinned: &[(usize, Rational)]) -> Result<EndCorrectedRule> {
    let conditions = EndCorrectionConditions::new(r, q)?;
    let rows = q - 1;
    if pinned.len() > r - rows {
        return Err(Error::Domain(format!(
            "{} pinned weights exceed the {} free parameters of a ({r}, {q}) rule",
            pinned.len(),
            r - rows
        )));
    }
    let mut fixed: Vec<Option<Rational>> = vec![None; r];
    for (index, value) in pinned {
        match fixed.get_mut(*index) {
            None => {
                return Err(Error::Domain(format!(
                    "pinned index {index} outside 0..{r}"
                )))
            }
            Some(Some(_)) => {
                return Err(Error::Domain(format!("index {index} pinned twice")));
            }
            Some(slot) => *slot = Some(value.clone()),
        }
    }

    let free: Vec<usize> = (0..r).filter(|&v| fixed[v].is_none()).collect();
    // move pinned columns to the right-hand side, unknowns become δ = σ - 1
    let mut a = RationalMatrix::zeros(rows, free.len());
    let mut b = conditions.rhs().to_vec();
    for i in 0..rows {
        for v in 0..r {
            let coeff = conditions.matrix().get(i, v);
            match &fixed[v] {
                Some(value) => b[i] -= coeff * value,
                None => b[i] -= coeff,
            }
        }
        for (c, &v) in free.iter().enumerate() {
            a.set(i, c, conditions.matrix().get(i, v).clone());
        }
    }
    let delta = if free.len() == rows {
        // the kept columns form a Vandermonde-type block with distinct nodes,
        // so singularity here means contradictory pins
        solve_square(&a, &b).map_err(|e| match e {
            Error::Singular if !pinned.is_empty() => Error::Infeasible,
            other => other,
        })?
    } else {
        min_norm_solution(&a, &b)?
    };

    let mut sigma = Vec::with_capacity(r);
    let mut free_iter = free.iter().zip(delta);
    for slot in fixed {
        match slot {
            Some(value) => sigma.push(value),
            None => {
                let (_, d) = free_iter.next().expect("one delta per free weight");
                sigma.push(Rational::one() + d);
            }
        }
    }
    let report = verify_conditions(&sigma, r, q)?;
    assert!(
        report.passed(),
        "synthesized rule violates its conditions:\n{report}"
    );
    Ok(EndCorrectedRule { sigma, q })
}
