//! Exact rational arithmetic and small dense linear solves.
//!
//! Everything here works on [`Rational`], an arbitrary-precision fraction
//! kept in lowest terms with a positive denominator. Products such as
//! `σ_v · r^j` can never overflow.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Checked division; `Error::Domain` on a zero divisor.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::Domain("division by zero".into()));
    }
    Ok(a / b)
}

pub fn to_f64(q: &Rational) -> f64 {
    // BigRational::to_f64 handles huge numerators/denominators without overflow.
    q.to_f64().unwrap_or(f64::NAN)
}

/// `base^exp` for a signed integer base, exact.
pub fn ipow(base: i64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::Shape {
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::Shape {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Largest absolute entry (zero for an empty matrix).
    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Solve `A x = b` exactly by Gauss-Jordan elimination.
///
/// Returns a particular solution with all free variables set to zero, or
/// `Error::Infeasible` if the system is inconsistent. Rank-deficient but
/// consistent systems are accepted.
#[allow(clippy::needless_range_loop)]
pub fn solve_consistent(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::Shape {
            expected: m,
            found: b.len(),
        });
    }
    // augmented rows
    let mut aug: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..n {
        let Some(p) = (prow..m).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(prow, p);
        let inv = aug[prow][col].recip();
        for v in aug[prow].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m {
            if i != prow && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for c in col..=n {
                    let delta = &f * &aug[prow][c];
                    aug[i][c] -= delta;
                }
            }
        }
        pivots.push(col);
        prow += 1;
        if prow == m {
            break;
        }
    }
    if aug[prow..].iter().any(|row| !row[n].is_zero()) {
        return Err(Error::Infeasible);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = aug[i][n].clone();
    }
    Ok(x)
}

/// Unique solution of a square system; `Error::Singular` if none exists.
pub fn solve_square(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if a.rows() != a.cols() {
        return Err(Error::Shape {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if rank(a) < a.rows() {
        return Err(Error::Singular);
    }
    solve_consistent(a, b)
}

/// Minimum Euclidean-norm solution of the consistent system `A x = b`,
/// computed exactly as `x = Aᵀ y` with `(A Aᵀ) y = b`.
pub fn min_norm_solution(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let at = a.transpose();
    let gram = a.mul(&at)?;
    let y = solve_consistent(&gram, b)?;
    // range(A Aᵀ) = range(A), so the Gram system is consistent iff A x = b is
    at.mul_vec(&y)
}

#[allow(clippy::needless_range_loop)]
pub fn rank(a: &RationalMatrix) -> usize {
    let mut rows: Vec<Vec<Rational>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
    let mut r = 0;
    for col in 0..a.cols() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[r][col];
                for c in col..a.cols() {
                    let delta = &f * &rows[r][c];
                    rows[i][c] -= delta;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
