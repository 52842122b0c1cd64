//! Tensor-product SBP operators on two-dimensional curvilinear grids.
//!
//! Nodes `(ξ_j, η_k) = (j, k) / n` are stored with `j` (the ξ index) running
//! fastest: the flat index of node `(j, k)` is `k (n + 1) + j`. With that
//! ordering `D_ξ = I ⊗ D` acts along contiguous rows and `D_η = D ⊗ I`
//! along strided columns. Neither Kronecker product is ever formed.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{OperatorFamily, SbpOperator1D};

/// Physical coordinates of an `(n + 1) × (n + 1)` computational grid on `[0, 1]²`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorGrid2D {
    n: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TensorGrid2D {
    pub fn new(n: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a grid needs at least one interval".into()));
        }
        let len = (n + 1) * (n + 1);
        for found in [x.len(), y.len()] {
            if found != len {
                return Err(Error::Shape {
                    expected: len,
                    found,
                });
            }
        }
        Ok(Self { n, x, y })
    }

    /// Samples `map(ξ, η) -> (x, y)` at every node.
    pub fn from_map(n: usize, map: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        let (x, y) = (0..(n + 1) * (n + 1))
            .map(|idx| {
                let (j, k) = (idx % (n + 1), idx / (n + 1));
                map(coordinate(j, n), coordinate(k, n))
            })
            .unzip();
        Self::new(n, x, y)
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        k * (self.n + 1) + j
    }

    pub fn xi(&self, j: usize) -> f64 {
        coordinate(j, self.n)
    }

    pub fn eta(&self, k: usize) -> f64 {
        coordinate(k, self.n)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x_function(&self) -> GridFunction2D {
        GridFunction2D {
            n: self.n,
            values: self.x.clone(),
        }
    }

    pub fn y_function(&self) -> GridFunction2D {
        GridFunction2D {
            n: self.n,
            values: self.y.clone(),
        }
    }

    /// Evaluates `f(x, y)` at the physical nodes.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction2D {
        GridFunction2D {
            n: self.n,
            values: self.x.iter().zip(&self.y).map(|(&x, &y)| f(x, y)).collect(),
        }
    }
}

fn coordinate(i: usize, n: usize) -> f64 {
    i as f64 / n as f64
}

/// Nodal values on an `(n + 1)²` tensor grid, ξ index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction2D {
    n: usize,
    values: Vec<f64>,
}

impl GridFunction2D {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        let len = (n + 1) * (n + 1);
        if values.len() != len {
            return Err(Error::Shape {
                expected: len,
                found: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; (n + 1) * (n + 1)],
        }
    }

    /// Evaluates `f(ξ, η)` at the computational nodes.
    pub fn from_computational(n: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..(n + 1) * (n + 1))
            .map(|idx| f(coordinate(idx % (n + 1), n), coordinate(idx / (n + 1), n)))
            .collect();
        Self { n, values }
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[k * (self.n + 1) + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape {
                expected: (self.n + 1) * (self.n + 1),
                found: (other.n + 1) * (other.n + 1),
            });
        }
        Ok(())
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `a ∘ b - c ∘ d`, entrywise.
    fn hadamard_difference(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        for other in [b, c, d] {
            a.check_same_shape(other)?;
        }
        let values = (0..a.values.len())
            .map(|i| a.values[i] * b.values[i] - c.values[i] * d.values[i])
            .collect();
        Ok(Self { n: a.n, values })
    }
}

fn check_operator(op: &SbpOperator1D, n: usize) -> Result<()> {
    let ops_n = op.grid().intervals();
    if ops_n != n {
        return Err(Error::Shape {
            expected: (ops_n + 1) * (ops_n + 1),
            found: (n + 1) * (n + 1),
        });
    }
    Ok(())
}

/// `(I ⊗ D) u`: differentiates along each η = const line.
pub fn apply_dxi(op: &SbpOperator1D, u: &GridFunction2D) -> Result<GridFunction2D> {
    check_operator(op, u.n)?;
    let line = u.n + 1;
    let mut out = vec![0.0; u.values.len()];
    out.par_chunks_mut(line)
        .zip(u.values.par_chunks(line))
        .try_for_each(|(o, row)| op.apply_d_into(row, o))?;
    Ok(GridFunction2D {
        n: u.n,
        values: out,
    })
}

/// `(D ⊗ I) u`: differentiates along each ξ = const line.
///
/// Row `k` of the output is the combination `Σ_c D[k][c] · (row c of u)`,
/// which keeps every memory access contiguous.
pub fn apply_deta(op: &SbpOperator1D, u: &GridFunction2D) -> Result<GridFunction2D> {
    check_operator(op, u.n)?;
    if !op.family().supports_differentiation() {
        return Err(Error::Unsupported {
            family: op.family(),
            capability: "differentiation",
        });
    }
    let line = u.n + 1;
    let inv_h = 1.0 / op.grid().h();
    let mut out = vec![0.0; u.values.len()];
    out.par_chunks_mut(line).enumerate().for_each(|(k, o)| {
        let (start, coeffs) = op.row(k);
        for (m, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let src = &u.values[(start + m) * line..(start + m + 1) * line];
            for (o, s) in o.iter_mut().zip(src) {
                *o += c * s;
            }
        }
        for v in o.iter_mut() {
            *v *= inv_h;
        }
    });
    Ok(GridFunction2D {
        n: u.n,
        values: out,
    })
}

/// Discrete metric terms and Jacobian, tagged with the family that
/// produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricData2D {
    pub dx_dxi: GridFunction2D,
    pub dx_deta: GridFunction2D,
    pub dy_dxi: GridFunction2D,
    pub dy_deta: GridFunction2D,
    pub jac: GridFunction2D,
    pub source: OperatorFamily,
}

/// `J = [D_ξ x] ∘ [D_η y] - [D_ξ y] ∘ [D_η x]`, with every derivative taken
/// by `op`.
pub fn compute_metrics(op: &SbpOperator1D, grid: &TensorGrid2D) -> Result<MetricData2D> {
    let x = grid.x_function();
    let y = grid.y_function();
    let dx_dxi = apply_dxi(op, &x)?;
    let dx_deta = apply_deta(op, &x)?;
    let dy_dxi = apply_dxi(op, &y)?;
    let dy_deta = apply_deta(op, &y)?;
    let jac = GridFunction2D::hadamard_difference(&dx_dxi, &dy_deta, &dy_dxi, &dx_deta)?;
    Ok(MetricData2D {
        dx_dxi,
        dx_deta,
        dy_dxi,
        dy_deta,
        jac,
        source: op.family(),
    })
}

/// Whether [`integrate2d`] may combine metrics and weights from different
/// operators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MetricPolicy {
    #[default]
    SameOperator,
    /// Accept metrics from another family. This loses the design order and
    /// exists to demonstrate exactly that.
    AllowMixed,
}

/// `(H ⊗ H)`-weighted sum `Σ_jk w_j w_k f_jk`, reduced line by line.
fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    let line = weights.len();
    let partials: Vec<f64> = values
        .par_chunks(line)
        .zip(weights.par_iter())
        .map(|(row, wk)| wk * row.iter().zip(weights).map(|(v, wj)| wj * v).sum::<f64>())
        .collect();
    partials.iter().sum()
}

/// Mapped quadrature `Jᵀ (H ⊗ H) f`.
pub fn integrate2d(
    op: &SbpOperator1D,
    metrics: &MetricData2D,
    f: &GridFunction2D,
    policy: MetricPolicy,
) -> Result<f64> {
    if metrics.source != op.family() && policy == MetricPolicy::SameOperator {
        return Err(Error::OperatorMismatch {
            metrics: metrics.source,
            quadrature: op.family(),
        });
    }
    check_operator(op, f.n)?;
    let integrand = metrics.jac.hadamard(f)?;
    Ok(weighted_sum(op.quadrature_weights(), &integrand.values))
}

/// Contravariant flux components
///
/// ```text
/// f̂ =  [D_η y] ∘ f - [D_η x] ∘ g
/// ĝ = -[D_ξ y] ∘ f + [D_ξ x] ∘ g
/// ```
///
/// Each term differentiates the geometry only in the direction the outer
/// divergence does not.
pub fn contravariant_flux(
    op: &SbpOperator1D,
    grid: &TensorGrid2D,
    f: &GridFunction2D,
    g: &GridFunction2D,
) -> Result<(GridFunction2D, GridFunction2D)> {
    let x = grid.x_function();
    let y = grid.y_function();
    f.check_same_shape(&x)?;
    g.check_same_shape(&x)?;
    let dx_dxi = apply_dxi(op, &x)?;
    let dy_dxi = apply_dxi(op, &y)?;
    let dx_deta = apply_deta(op, &x)?;
    let dy_deta = apply_deta(op, &y)?;
    let fhat = GridFunction2D::hadamard_difference(&dy_deta, f, &dx_deta, g)?;
    let ghat = GridFunction2D::hadamard_difference(&dx_dxi, g, &dy_dxi, f)?;
    Ok((fhat, ghat))
}

/// Quadrature of the discrete divergence, evaluated two ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceForms {
    /// `cᵀ (H ⊗ H) [D_ξ f̂ + D_η ĝ]`
    pub volume: f64,
    /// `Σ_k w_k (f̂_{n,k} - f̂_{0,k}) + Σ_j w_j (ĝ_{j,n} - ĝ_{j,0})`
    pub boundary: f64,
}

impl DivergenceForms {
    pub fn discrepancy(&self) -> f64 {
        (self.volume - self.boundary).abs()
    }
}

/// Integrated discrete divergence of `(f̂, ĝ)`.
///
/// Only diagonal norms are accepted: the boundary reduction uses the
/// diagonal entries of `H`.
pub fn divergence_integral(
    op: &SbpOperator1D,
    fhat: &GridFunction2D,
    ghat: &GridFunction2D,
) -> Result<DivergenceForms> {
    if !op.family().is_diagonal() {
        return Err(Error::Unsupported {
            family: op.family(),
            capability: "the diagonal-norm divergence identity",
        });
    }
    fhat.check_same_shape(ghat)?;
    let dxi = apply_dxi(op, fhat)?;
    let deta = apply_deta(op, ghat)?;
    let div: Vec<f64> = dxi
        .values
        .iter()
        .zip(&deta.values)
        .map(|(a, b)| a + b)
        .collect();
    let w = op.quadrature_weights();
    let volume = weighted_sum(w, &div);

    let n = fhat.n;
    let xi_faces: f64 = (0..=n)
        .map(|k| w[k] * (fhat.get(n, k) - fhat.get(0, k)))
        .sum();
    let eta_faces: f64 = (0..=n)
        .map(|j| w[j] * (ghat.get(j, n) - ghat.get(j, 0)))
        .sum();
    Ok(DivergenceForms {
        volume,
        boundary: xi_faces + eta_faces,
    })
}

/// Computational coordinates of the region `1 ≤ xy ≤ 3`, `1 ≤ x² - y² ≤ 4`:
/// `ξ = (x² - y² - 1) / 3`, `η = (xy - 1) / 2`.
pub fn hyperbolic_coordinates(x: f64, y: f64) -> (f64, f64) {
    ((x * x - y * y - 1.0) / 3.0, (x * y - 1.0) / 2.0)
}

/// Inverse of [`hyperbolic_coordinates`] on the branch `x, y > 0`.
///
/// With `a = 3ξ + 1 = x² - y²` and `b = 2(2η + 1) = 2xy`, `x + iy` is the
/// principal square root of `a + ib`.
pub fn hyperbolic_point(xi: f64, eta: f64) -> (f64, f64) {
    let a = 3.0 * xi + 1.0;
    let b = 2.0 * (2.0 * eta + 1.0);
    let rho = a.hypot(b);
    let x = ((rho + a) / 2.0).sqrt();
    // b / 2x avoids the cancellation in sqrt((rho - a) / 2)
    (x, b / (2.0 * x))
}

/// Tensor grid over the hyperbola-bounded region, `n` intervals per direction.
pub fn hyperbolic_grid(n: usize) -> Result<TensorGrid2D> {
    TensorGrid2D::from_map(n, hyperbolic_point)
}

/// Writes `j,k,xi,eta,x,y,value` rows for every node, ξ index fastest.
pub fn write_field_csv<W: Write>(
    grid: &TensorGrid2D,
    field: &GridFunction2D,
    mut out: W,
) -> Result<()> {
    if field.n != grid.n {
        return Err(Error::Shape {
            expected: grid.len(),
            found: field.values.len(),
        });
    }
    writeln!(out, "j,k,xi,eta,x,y,value")?;
    for k in 0..=grid.n {
        for j in 0..=grid.n {
            let idx = grid.index(j, k);
            writeln!(
                out,
                "{j},{k},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                grid.xi(j),
                grid.eta(k),
                grid.x[idx],
                grid.y[idx],
                field.values[idx]
            )?;
        }
    }
    Ok(())
}
