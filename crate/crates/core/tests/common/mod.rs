#![allow(dead_code)]

use sbp_quad::exact::to_f64;
use sbp_quad::SbpOperator1D;

/// Dense `D` assembled from the rational boundary block and the central
/// stencil, without going through the matrix-free application.
pub fn dense_d(op: &SbpOperator1D) -> Vec<Vec<f64>> {
    let len = op.grid().len();
    let h = op.grid().h();
    let block = op.boundary_block().expect("differentiable family");
    let mut d = vec![vec![0.0; len]; len];
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = to_f64(block.get(i, j)) / h;
            d[i][j] = v;
            d[len - 1 - i][len - 1 - j] = -v;
        }
    }
    let s = op.s() as isize;
    for (i, row) in d
        .iter_mut()
        .enumerate()
        .take(len - block.rows())
        .skip(block.rows())
    {
        for off in -s..=s {
            row[(i as isize + off) as usize] = to_f64(&op.alpha().coefficient(off)) / h;
        }
    }
    d
}

/// `A ⊗ B` for square dense matrices.
pub fn kron(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (m, p) = (a.len(), b.len());
    let mut out = vec![vec![0.0; m * p]; m * p];
    for (i, arow) in a.iter().enumerate() {
        for (j, &aij) in arow.iter().enumerate() {
            for (k, brow) in b.iter().enumerate() {
                for (l, &bkl) in brow.iter().enumerate() {
                    out[i * p + k][j * p + l] = aij * bkl;
                }
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
