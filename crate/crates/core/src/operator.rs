//! The catalog of one-dimensional first-derivative SBP operators.
//!
//! An operator `D = H⁻¹Q` on `n + 1` uniformly spaced nodes is stored as
//!
//! * the centered interior stencil `α_1..α_s`,
//! * the left boundary closure, an `r × (r + s)` block of rational
//!   coefficients for rows `0..r` of `h·D`,
//! * the boundary quadrature weights `σ_0..σ_{r-1}` (row sums of the
//!   boundary block of `H / h`).
//!
//! The right closure is never stored: row `n - i` of `D` is row `i`
//! reflected (`v → n - v`) and negated. `D` itself is never materialized;
//! [`SbpOperator1D::apply_d`] walks the stencil in `O(n·s)` work.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, ipow, rat, to_f64, Rational, RationalMatrix};
use crate::stencil::{central_coefficients, CentralStencil};

/// Largest grid on which [`SbpOperator1D::verify_sbp_structure`] assembles
/// a dense `Q`.
pub const MAX_DENSE_VERIFY_INTERVALS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatorFamily {
    #[serde(rename = "diag-1-2")]
    Diag12,
    #[serde(rename = "diag-2-4")]
    Diag24,
    #[serde(rename = "diag-3-6")]
    Diag36,
    #[serde(rename = "full-3-4")]
    Full34,
}

impl OperatorFamily {
    pub const ALL: [OperatorFamily; 4] = [Self::Diag12, Self::Diag24, Self::Full34, Self::Diag36];
    pub const DIAGONAL: [OperatorFamily; 3] = [Self::Diag12, Self::Diag24, Self::Diag36];

    /// Interior half-order: the interior stencil is `2s`-order accurate.
    pub fn s(self) -> usize {
        match self {
            Self::Diag12 => 1,
            Self::Diag24 | Self::Full34 => 2,
            Self::Diag36 => 3,
        }
    }

    /// Order of the boundary closure.
    pub fn tau(self) -> usize {
        match self {
            Self::Diag12 => 1,
            Self::Diag24 => 2,
            Self::Diag36 | Self::Full34 => 3,
        }
    }

    /// Number of boundary rows with modified weights.
    pub fn r(self) -> usize {
        match self {
            Self::Diag12 => 1,
            Self::Diag24 | Self::Full34 => 4,
            Self::Diag36 => 6,
        }
    }

    pub fn is_diagonal(self) -> bool {
        !matches!(self, Self::Full34)
    }

    /// Whether boundary difference coefficients are available.
    pub fn supports_differentiation(self) -> bool {
        self.is_diagonal()
    }

    /// Design order of the induced quadrature.
    pub fn quadrature_order(self) -> usize {
        2 * self.s()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Diag12 => "diag-1-2",
            Self::Diag24 => "diag-2-4",
            Self::Diag36 => "diag-3-6",
            Self::Full34 => "full-3-4",
        }
    }

    fn boundary_weights(self) -> Vec<Rational> {
        let table: &[(i64, i64)] = match self {
            Self::Diag12 => &DIAG12_SIGMA,
            Self::Diag24 => &DIAG24_SIGMA,
            Self::Diag36 => &DIAG36_SIGMA,
            Self::Full34 => &FULL34_SIGMA,
        };
        table.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn boundary_block(self) -> Option<RationalMatrix> {
        let (rows, width): (&[(i64, i64)], usize) = match self {
            Self::Diag12 => (&DIAG12_BLOCK, 2),
            Self::Diag24 => (&DIAG24_BLOCK, 6),
            Self::Diag36 => (&DIAG36_BLOCK, 9),
            Self::Full34 => return None,
        };
        let rows = rows
            .chunks(width)
            .map(|row| row.iter().map(|&(p, q)| rat(p, q)).collect())
            .collect();
        Some(RationalMatrix::from_rows(rows).expect("catalog blocks are rectangular"))
    }
}

impl fmt::Display for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diag-1-2" | "diag12" => Ok(Self::Diag12),
            "diag-2-4" | "diag24" => Ok(Self::Diag24),
            "diag-3-6" | "diag36" => Ok(Self::Diag36),
            "full-3-4" | "full34" => Ok(Self::Full34),
            other => Err(Error::Domain(format!("unknown operator family '{other}'"))),
        }
    }
}

// Boundary weights σ_v. For the diagonal families these are the diagonal
// entries of H_L / h; for full-3-4 they are the row sums of the dense block.
const DIAG12_SIGMA: [(i64, i64); 1] = [(1, 2)];
const DIAG24_SIGMA: [(i64, i64); 4] = [(17, 48), (59, 48), (43, 48), (49, 48)];
const DIAG36_SIGMA: [(i64, i64); 6] = [
    (13649, 43200),
    (12013, 8640),
    (2711, 4320),
    (5359, 4320),
    (7877, 8640),
    (43801, 43200),
];
const FULL34_SIGMA: [(i64, i64); 4] = [(43, 144), (67, 48), (35, 48), (155, 144)];

// Left closures of h·D, row-major, r × (r + s).
const DIAG12_BLOCK: [(i64, i64); 2] = [(-1, 1), (1, 1)];

#[rustfmt::skip]
const DIAG24_BLOCK: [(i64, i64); 24] = [
    (-24, 17), (59, 34), (-4, 17), (-3, 34), (0, 1), (0, 1),
    (-1, 2), (0, 1), (1, 2), (0, 1), (0, 1), (0, 1),
    (4, 43), (-59, 86), (0, 1), (59, 86), (-4, 43), (0, 1),
    (3, 98), (0, 1), (-59, 98), (0, 1), (32, 49), (-4, 49),
];

// Sixth-order interior, third-order boundary (Diener, Dorband, Schnetter and
// Tiglio 2007, minimal-bandwidth variant). The one free parameter of the
// diagonal-norm 6-3 family is fixed by Q[0][5] = 0, i.e. Q[4][5] = 89387/129600.
#[rustfmt::skip]
const DIAG36_BLOCK: [(i64, i64); 54] = [
    (-21600, 13649), (81763, 40947), (131, 27298), (-9143, 13649), (20539, 81894),
    (0, 1), (0, 1), (0, 1), (0, 1),
    (-81763, 180195), (0, 1), (7357, 36039), (30637, 72078), (-2328, 12013),
    (6611, 360390), (0, 1), (0, 1), (0, 1),
    (-131, 54220), (-7357, 16266), (0, 1), (645, 2711), (11237, 32532),
    (-3487, 27110), (0, 1), (0, 1), (0, 1),
    (9143, 53590), (-30637, 64308), (-645, 5359), (0, 1), (13733, 32154),
    (-67, 4660), (72, 5359), (0, 1), (0, 1),
    (-20539, 236310), (2328, 7877), (-11237, 47262), (-13733, 23631), (0, 1),
    (89387, 118155), (-1296, 7877), (144, 7877), (0, 1),
    (0, 1), (-6611, 262806), (3487, 43801), (1541, 87602), (-89387, 131403),
    (0, 1), (32400, 43801), (-6480, 43801), (720, 43801),
];

/// `n + 1` evenly spaced nodes `x_v = a + v h` on `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid1D {
    n: usize,
    a: f64,
    b: f64,
}

impl UniformGrid1D {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a grid needs at least one interval".into()));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        Ok(Self { n, a, b })
    }

    /// `n` intervals on `[0, 1]`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, 0.0, 1.0)
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn node(&self, v: usize) -> f64 {
        if v == self.n {
            self.b
        } else {
            self.a + v as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|v| self.node(v)).collect()
    }
}

/// Values of a function restricted to the nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction1D {
    grid: UniformGrid1D,
    values: Vec<f64>,
}

impl GridFunction1D {
    pub fn new(grid: UniformGrid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &UniformGrid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureSource {
    SbpWeightMatrix,
    EndCorrectionSolver,
}

/// Trapezoid rule with end corrections: weight `h σ_v` on the first and
/// last `r` nodes, `h` everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadratureRule1D {
    sigma: Vec<Rational>,
    source: QuadratureSource,
}

impl QuadratureRule1D {
    pub fn new(sigma: Vec<Rational>, source: QuadratureSource) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::Domain(
                "a rule needs at least one boundary weight".into(),
            ));
        }
        Ok(Self { sigma, source })
    }

    pub fn r(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[Rational] {
        &self.sigma
    }

    pub fn source(&self) -> QuadratureSource {
        self.source
    }

    /// Nodal weights on `grid`. The two end corrections may not overlap.
    pub fn weights(&self, grid: &UniformGrid1D) -> Result<Vec<f64>> {
        let r = self.r();
        if grid.len() < 2 * r {
            return Err(Error::Domain(format!(
                "{} nodes cannot hold two end corrections of width {r}",
                grid.len()
            )));
        }
        let h = grid.h();
        let n = grid.intervals();
        let mut w = vec![h; grid.len()];
        for (v, s) in self.sigma.iter().enumerate() {
            let wv = h * to_f64(s);
            w[v] = wv;
            w[n - v] = wv;
        }
        Ok(w)
    }

    pub fn integrate(&self, grid: &UniformGrid1D, f: impl Fn(f64) -> f64) -> Result<f64> {
        let w = self.weights(grid)?;
        Ok(w.iter().zip(grid.nodes()).map(|(w, x)| w * f(x)).sum())
    }

    pub fn apply(&self, u: &GridFunction1D) -> Result<f64> {
        let w = self.weights(u.grid())?;
        Ok(w.iter().zip(u.values()).map(|(w, u)| w * u).sum())
    }
}

/// A concrete SBP first-derivative operator on a fixed grid.
#[derive(Clone, Debug)]
pub struct SbpOperator1D {
    family: OperatorFamily,
    grid: UniformGrid1D,
    alpha: CentralStencil,
    sigma: Vec<Rational>,
    boundary_block: Option<RationalMatrix>,
    // Floating-point images, converted once.
    left_rows: Vec<Vec<f64>>,
    right_rows: Vec<Vec<f64>>,
    interior: Vec<f64>,
    weights: Vec<f64>,
}

/// Builds `family` on `grid`. Fails if the two boundary closures would
/// overlap (`n + 1 < 2r`).
pub fn build_operator(family: OperatorFamily, grid: UniformGrid1D) -> Result<SbpOperator1D> {
    let r = family.r();
    if grid.len() < 2 * r {
        return Err(Error::GridTooSmall {
            family,
            nodes: grid.len(),
            required: 2 * r,
        });
    }
    let alpha = central_coefficients(family.s())?;
    SbpOperator1D::assemble(
        family,
        grid,
        alpha,
        family.boundary_weights(),
        family.boundary_block(),
    )
}

impl SbpOperator1D {
    fn assemble(
        family: OperatorFamily,
        grid: UniformGrid1D,
        alpha: CentralStencil,
        sigma: Vec<Rational>,
        boundary_block: Option<RationalMatrix>,
    ) -> Result<Self> {
        let s = alpha.half_width();
        let r = sigma.len();
        let (left_rows, right_rows) = match &boundary_block {
            Some(block) => {
                if block.rows() != r || block.cols() != r + s {
                    return Err(Error::Shape {
                        expected: r * (r + s),
                        found: block.rows() * block.cols(),
                    });
                }
                if grid.len() < r + s {
                    return Err(Error::GridTooSmall {
                        family,
                        nodes: grid.len(),
                        required: r + s,
                    });
                }
                let left: Vec<Vec<f64>> = (0..r)
                    .map(|i| block.row(i).iter().map(to_f64).collect())
                    .collect();
                // row n-i, starting at column n-(r+s-1): reversed and negated
                let right = left
                    .iter()
                    .map(|row| row.iter().rev().map(|c| -c).collect())
                    .collect();
                (left, right)
            }
            None => (Vec::new(), Vec::new()),
        };
        let interior = (-(s as isize)..=s as isize)
            .map(|o| to_f64(&alpha.coefficient(o)))
            .collect();
        let weights = QuadratureRule1D::new(sigma.clone(), QuadratureSource::SbpWeightMatrix)?
            .weights(&grid)?;
        Ok(Self {
            family,
            grid,
            alpha,
            sigma,
            boundary_block,
            left_rows,
            right_rows,
            interior,
            weights,
        })
    }

    /// Replaces the left boundary closure, keeping everything else. Used to
    /// check candidate coefficients; nothing about the new block is assumed.
    pub fn with_boundary_block(self, block: RationalMatrix) -> Result<Self> {
        Self::assemble(self.family, self.grid, self.alpha, self.sigma, Some(block))
    }

    /// The same operator on another grid.
    pub fn rebuild(&self, grid: UniformGrid1D) -> Result<Self> {
        if grid.len() < 2 * self.r() {
            return Err(Error::GridTooSmall {
                family: self.family,
                nodes: grid.len(),
                required: 2 * self.r(),
            });
        }
        Self::assemble(
            self.family,
            grid,
            self.alpha.clone(),
            self.sigma.clone(),
            self.boundary_block.clone(),
        )
    }

    pub fn family(&self) -> OperatorFamily {
        self.family
    }

    pub fn grid(&self) -> &UniformGrid1D {
        &self.grid
    }

    pub fn s(&self) -> usize {
        self.alpha.half_width()
    }

    pub fn r(&self) -> usize {
        self.sigma.len()
    }

    pub fn tau(&self) -> usize {
        self.family.tau()
    }

    pub fn alpha(&self) -> &CentralStencil {
        &self.alpha
    }

    pub fn sigma(&self) -> &[Rational] {
        &self.sigma
    }

    pub fn boundary_block(&self) -> Option<&RationalMatrix> {
        self.boundary_block.as_ref()
    }

    /// Diagonal of `H_L / h`; `None` for full norms.
    pub fn h_diag(&self) -> Option<&[Rational]> {
        self.family.is_diagonal().then_some(self.sigma.as_slice())
    }

    pub fn quadrature_rule(&self) -> QuadratureRule1D {
        QuadratureRule1D {
            sigma: self.sigma.clone(),
            source: QuadratureSource::SbpWeightMatrix,
        }
    }

    /// Diagonal of `H` on this grid (row sums of `H` for full norms).
    pub fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }

    fn require_differentiation(&self) -> Result<()> {
        if self.left_rows.is_empty() {
            return Err(Error::Unsupported {
                family: self.family,
                capability: "differentiation",
            });
        }
        Ok(())
    }

    /// First column and coefficients of row `i` of `h·D`.
    pub(crate) fn row(&self, i: usize) -> (usize, &[f64]) {
        let n = self.grid.intervals();
        let r = self.r();
        if i < r {
            (0, &self.left_rows[i])
        } else if i > n - r {
            let row = &self.right_rows[n - i];
            (n + 1 - row.len(), row)
        } else {
            (i - self.s(), &self.interior)
        }
    }

    /// `out = D u` on raw slices of length `n + 1`.
    pub fn apply_d_into(&self, u: &[f64], out: &mut [f64]) -> Result<()> {
        self.require_differentiation()?;
        let len = self.grid.len();
        for found in [u.len(), out.len()] {
            if found != len {
                return Err(Error::Shape {
                    expected: len,
                    found,
                });
            }
        }
        let inv_h = 1.0 / self.grid.h();
        for (i, o) in out.iter_mut().enumerate() {
            let (start, coeffs) = self.row(i);
            let acc: f64 = coeffs.iter().zip(&u[start..]).map(|(c, u)| c * u).sum();
            *o = acc * inv_h;
        }
        Ok(())
    }

    pub fn apply_d(&self, u: &GridFunction1D) -> Result<GridFunction1D> {
        if u.grid() != &self.grid {
            return Err(Error::Shape {
                expected: self.grid.len(),
                found: u.values().len(),
            });
        }
        let mut out = vec![0.0; self.grid.len()];
        self.apply_d_into(u.values(), &mut out)?;
        GridFunction1D::new(self.grid, out)
    }

    /// `h·D` as a dense rational matrix on `n` intervals.
    fn dense_scaled_d(&self, n: usize) -> RationalMatrix {
        let block = self.boundary_block.as_ref().expect("checked by caller");
        let (r, s) = (self.r(), self.s());
        let mut d = RationalMatrix::zeros(n + 1, n + 1);
        for i in 0..r {
            for (j, c) in block.row(i).iter().enumerate() {
                d.set(i, j, c.clone());
                d.set(n - i, n - j, -c.clone());
            }
        }
        for i in r..=n - r {
            for o in -(s as isize)..=s as isize {
                let j = (i as isize + o) as usize;
                d.set(i, j, self.alpha.coefficient(o));
            }
        }
        d
    }

    /// Checks `Q + Qᵀ = diag(-1, 0, …, 0, 1)` exactly and measures the
    /// polynomial accuracy of the boundary and interior rows.
    ///
    /// The coefficients do not depend on `n`, so the check runs on this
    /// operator's grid, capped at 64 intervals.
    pub fn verify_sbp_structure(&self) -> Result<SbpReport> {
        self.require_differentiation()?;
        let (r, s) = (self.r(), self.s());
        let n = self.grid.intervals().min(MAX_DENSE_VERIFY_INTERVALS);
        let d = self.dense_scaled_d(n);

        let mut hq = RationalMatrix::zeros(n + 1, n + 1);
        for i in 0..=n {
            let weight = if i < r {
                self.sigma[i].clone()
            } else if i > n - r {
                self.sigma[n - i].clone()
            } else {
                int(1)
            };
            hq.set(i, i, weight);
        }
        let q = hq.mul(&d)?;
        let mut defect = Rational::zero();
        for i in 0..=n {
            for j in 0..=n {
                let mut e = q.get(i, j) + q.get(j, i);
                if i == j && i == 0 {
                    e += int(1);
                } else if i == j && i == n {
                    e -= int(1);
                }
                let e = e.abs();
                if e > defect {
                    defect = e;
                }
            }
        }

        let max_degree = 2 * s + 1;
        // node index as coordinate (h = 1): exact iff D x^k = k x^{k-1}
        let derivatives: Vec<Vec<Rational>> = (0..=max_degree as u32)
            .map(|k| {
                let xk: Vec<Rational> = (0..=n).map(|v| ipow(v as i64, k)).collect();
                d.mul_vec(&xk).expect("square")
            })
            .collect();
        let degree = |rows: &[usize]| -> Option<usize> {
            derivatives
                .iter()
                .enumerate()
                .take_while(|(k, dx)| {
                    rows.iter().all(|&i| {
                        let expected = if *k == 0 {
                            Rational::zero()
                        } else {
                            int(*k as i64) * ipow(i as i64, *k as u32 - 1)
                        };
                        dx[i] == expected
                    })
                })
                .last()
                .map(|(k, _)| k)
        };
        let boundary_rows: Vec<usize> = (0..r).chain(n + 1 - r..=n).collect();
        let interior_rows: Vec<usize> = (r..=n - r).collect();
        let boundary_degree = degree(&boundary_rows);
        let interior_degree = degree(&interior_rows);

        let passed = defect.is_zero()
            && boundary_degree.is_some_and(|k| k >= self.tau())
            && interior_degree.is_some_and(|k| k >= 2 * s);
        Ok(SbpReport {
            family: self.family,
            intervals: n,
            q_defect: defect,
            boundary_degree,
            interior_degree,
            required_boundary_degree: self.tau(),
            required_interior_degree: 2 * s,
            passed,
        })
    }
}

/// Outcome of [`SbpOperator1D::verify_sbp_structure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SbpReport {
    pub family: OperatorFamily,
    /// Grid size the dense check ran on.
    pub intervals: usize,
    /// `max |Q + Qᵀ - B|`, exact.
    pub q_defect: Rational,
    /// Highest `k` such that all boundary rows differentiate `x^0..x^k` exactly.
    pub boundary_degree: Option<usize>,
    pub interior_degree: Option<usize>,
    pub required_boundary_degree: usize,
    pub required_interior_degree: usize,
    pub passed: bool,
}

impl fmt::Display for SbpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let deg = |d: Option<usize>| d.map_or("none".to_string(), |d| d.to_string());
        write!(
            f,
            "{}: {} (n = {}, max|Q+Q^T-B| = {}, boundary degree {} (need {}), interior degree {} (need {}))",
            self.family,
            if self.passed { "PASS" } else { "FAIL" },
            self.intervals,
            self.q_defect,
            deg(self.boundary_degree),
            self.required_boundary_degree,
            deg(self.interior_degree),
            self.required_interior_degree,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(family: OperatorFamily, n: usize) -> SbpOperator1D {
        build_operator(family, UniformGrid1D::unit(n).unwrap()).unwrap()
    }

    #[test]
    fn catalog_weights() {
        assert_eq!(op(OperatorFamily::Diag12, 4).sigma(), &[rat(1, 2)]);
        assert_eq!(
            op(OperatorFamily::Diag24, 16).sigma(),
            &[rat(17, 48), rat(59, 48), rat(43, 48), rat(49, 48)]
        );
        assert_eq!(
            op(OperatorFamily::Diag36, 16).sigma(),
            &[
                rat(13649, 43200),
                rat(12013, 8640),
                rat(2711, 4320),
                rat(5359, 4320),
                rat(7877, 8640),
                rat(43801, 43200)
            ]
        );
        assert_eq!(
            op(OperatorFamily::Full34, 16).sigma(),
            &[rat(43, 144), rat(67, 48), rat(35, 48), rat(155, 144)]
        );
    }

    #[test]
    fn family_parameters() {
        let p = |f: OperatorFamily| (f.s(), f.tau(), f.r());
        assert_eq!(p(OperatorFamily::Diag12), (1, 1, 1));
        assert_eq!(p(OperatorFamily::Diag24), (2, 2, 4));
        assert_eq!(p(OperatorFamily::Diag36), (3, 3, 6));
        assert_eq!(p(OperatorFamily::Full34), (2, 3, 4));
        for f in OperatorFamily::ALL {
            assert_eq!(f.name().parse::<OperatorFamily>().unwrap(), f);
        }
        assert!("diag-4-8".parse::<OperatorFamily>().is_err());
    }

    #[test]
    fn grid_too_small() {
        let g = UniformGrid1D::unit(6).unwrap();
        assert!(matches!(
            build_operator(OperatorFamily::Diag24, g),
            Err(Error::GridTooSmall { required: 8, .. })
        ));
        assert!(build_operator(OperatorFamily::Diag24, UniformGrid1D::unit(7).unwrap()).is_ok());
    }

    #[test]
    fn invalid_grids() {
        assert!(UniformGrid1D::new(0, 0.0, 1.0).is_err());
        assert!(UniformGrid1D::new(4, 1.0, 1.0).is_err());
        assert!(UniformGrid1D::new(4, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn full_norm_cannot_differentiate() {
        let o = op(OperatorFamily::Full34, 16);
        let u = GridFunction1D::from_fn(*o.grid(), |x| x);
        assert!(matches!(o.apply_d(&u), Err(Error::Unsupported { .. })));
        assert!(matches!(
            o.verify_sbp_structure(),
            Err(Error::Unsupported { .. })
        ));
        assert!(o.h_diag().is_none());
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let o = op(OperatorFamily::Diag12, 4);
        let u = GridFunction1D::from_fn(*o.grid(), |_| 5.0);
        assert!(o.apply_d(&u).unwrap().values().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn first_order_closure_exact_for_linears() {
        let o = op(OperatorFamily::Diag12, 4);
        let u = GridFunction1D::from_fn(*o.grid(), |x| x);
        assert_eq!(o.apply_d(&u).unwrap().values(), &[1.0; 5]);
    }

    #[test]
    fn fourth_order_interior_on_quadratic() {
        let o = op(OperatorFamily::Diag24, 16);
        let u = GridFunction1D::from_fn(*o.grid(), |x| x * x);
        let du = o.apply_d(&u).unwrap();
        for w in 4..=12 {
            let x = o.grid().node(w);
            assert!((du.values()[w] - 2.0 * x).abs() < 1e-13, "row {w}");
        }
    }

    #[test]
    fn apply_d_rejects_foreign_grid() {
        let o = op(OperatorFamily::Diag12, 4);
        let u = GridFunction1D::from_fn(UniformGrid1D::unit(5).unwrap(), |x| x);
        assert!(matches!(o.apply_d(&u), Err(Error::Shape { .. })));
        let mut out = vec![0.0; 3];
        assert!(o.apply_d_into(&[0.0; 5], &mut out).is_err());
    }

    #[test]
    fn grid_function_length_checked() {
        let g = UniformGrid1D::unit(4).unwrap();
        assert!(GridFunction1D::new(g, vec![0.0; 4]).is_err());
    }

    #[test]
    fn weights_small_examples() {
        let w = op(OperatorFamily::Diag12, 4).quadrature_weights().to_vec();
        assert_eq!(w, vec![0.125, 0.25, 0.25, 0.25, 0.125]);

        let o = op(OperatorFamily::Diag24, 8);
        let h = 0.125;
        let expected: Vec<f64> = [17.0, 59.0, 43.0, 49.0, 48.0, 49.0, 43.0, 59.0, 17.0]
            .iter()
            .map(|s| h * s / 48.0)
            .collect();
        for (a, b) in o.quadrature_weights().iter().zip(expected) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for family in OperatorFamily::ALL {
            for (n, a, b) in [(16, 0.0, 1.0), (37, -2.0, 3.5), (100, 1.0, 1.25)] {
                let g = UniformGrid1D::new(n, a, b).unwrap();
                let o = build_operator(family, g).unwrap();
                let sum: f64 = o.quadrature_weights().iter().sum();
                assert!(((sum - (b - a)) / (b - a)).abs() < 1e-14, "{family} n={n}");
                assert!(o.quadrature_weights().iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn structure_of_catalog_operators() {
        let r12 = op(OperatorFamily::Diag12, 16)
            .verify_sbp_structure()
            .unwrap();
        assert!(r12.passed, "{r12}");
        assert_eq!(
            (r12.boundary_degree, r12.interior_degree),
            (Some(1), Some(2))
        );

        let r24 = op(OperatorFamily::Diag24, 16)
            .verify_sbp_structure()
            .unwrap();
        assert!(r24.passed, "{r24}");
        assert_eq!(
            (r24.boundary_degree, r24.interior_degree),
            (Some(2), Some(4))
        );

        let r36 = op(OperatorFamily::Diag36, 16)
            .verify_sbp_structure()
            .unwrap();
        assert!(r36.passed, "{r36}");
        assert_eq!(
            (r36.boundary_degree, r36.interior_degree),
            (Some(3), Some(6))
        );
    }

    #[test]
    fn structure_on_smallest_and_large_grids() {
        for family in OperatorFamily::DIAGONAL {
            for n in [2 * family.r() - 1, 2 * family.r(), 200] {
                let rep = op(family, n).verify_sbp_structure().unwrap();
                assert!(rep.passed, "n = {n}: {rep}");
            }
        }
    }

    #[test]
    fn perturbed_closure_fails() {
        let o = op(OperatorFamily::Diag24, 16);
        let mut block = o.boundary_block().unwrap().clone();
        let bumped = block.get(1, 2) + rat(1, 1_000_000);
        block.set(1, 2, bumped);
        let rep = o
            .with_boundary_block(block)
            .unwrap()
            .verify_sbp_structure()
            .unwrap();
        assert!(!rep.passed);
        assert!(!rep.q_defect.is_zero());
    }

    #[test]
    fn right_closure_is_reflection() {
        let o = op(OperatorFamily::Diag36, 20);
        let n = 20;
        for i in 0..o.r() {
            let (ls, l) = o.row(i);
            let (rs, rr) = o.row(n - i);
            assert_eq!(ls, 0);
            for (j, c) in l.iter().enumerate() {
                let mirrored = n - (ls + j);
                assert_eq!(rr[mirrored - rs], -c);
            }
        }
    }
}
