//! Glue between the row-major sample storage (`ndarray`) and the dense
//! decompositions in `nalgebra`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

pub fn to_dmatrix(a: ArrayView2<'_, f64>) -> DMatrix<f64> {
    let (r, c) = a.dim();
    DMatrix::from_fn(r, c, |i, j| a[[i, j]])
}

pub fn to_array2(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Eigenpairs of a symmetric matrix sorted by decreasing eigenvalue.
pub fn sym_eigen_desc(m: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite entry in symmetric eigenproblem".into()));
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Flips the sign of each column so its largest-magnitude entry is positive
/// (first such entry on ties).
pub fn fix_column_signs(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let mut best = 0usize;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

/// Sample covariance of the columns of `x` (divisor `rows - 1`).
pub fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let centered = center_columns(x).0;
    let denom = (x.nrows().max(2) - 1) as f64;
    centered.tr_mul(&centered) / denom
}

pub fn center_columns(x: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let means = DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.mean()));
    let mut c = x.clone();
    for (j, mut col) in c.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    (c, means)
}

/// Covariance to correlation; `None` when a variable has zero variance.
pub fn correlation_from_covariance(cov: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = cov.nrows();
    let sd: Vec<f64> = (0..n).map(|i| cov[(i, i)].sqrt()).collect();
    if sd.iter().any(|&s| !(s > 0.0)) {
        return None;
    }
    Some(DMatrix::from_fn(n, n, |i, j| cov[(i, j)] / (sd[i] * sd[j])))
}

/// Cholesky factorization, adding `lambda * I` with
/// `lambda = 1e-8 * trace / dim` (growing tenfold) until it succeeds.
pub fn regularized_cholesky(m: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Ok(c);
    }
    let n = m.nrows();
    let trace = m.trace();
    let mut lambda = if trace > 0.0 { 1e-8 * trace / n as f64 } else { 1e-8 };
    for _ in 0..12 {
        let mut reg = m.clone();
        for i in 0..n {
            reg[(i, i)] += lambda;
        }
        if let Some(c) = Cholesky::new(reg) {
            return Ok(c);
        }
        lambda *= 10.0;
    }
    Err(Error::Numerical("covariance could not be regularized to positive definite".into()))
}

/// log-determinant from a Cholesky factor.
pub fn chol_log_det(c: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * c.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()
}
