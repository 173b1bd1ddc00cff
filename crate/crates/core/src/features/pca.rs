use nalgebra::DMatrix;
use ndarray::ArrayView2;

use crate::error::Result;
use crate::features::{entry, require_rows, Entry};
use crate::linalg::{correlation_from_covariance, covariance, sym_eigen_desc};

pub const EXPLAINED_SHARE: f64 = 0.9;

/// (components needed for [`EXPLAINED_SHARE`] / dimension, top share).
fn explained(m: Option<DMatrix<f64>>) -> Result<(Option<f64>, Option<f64>)> {
    let Some(m) = m else { return Ok((None, None)) };
    let d = m.nrows();
    let (values, _) = sym_eigen_desc(m)?;
    let values: Vec<f64> = values.into_iter().map(|v| v.max(0.0)).collect();
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Ok((None, None));
    }
    let mut acc = 0.0;
    let mut k = d;
    for (i, v) in values.iter().enumerate() {
        acc += v;
        if acc / total >= EXPLAINED_SHARE - 1e-12 {
            k = i + 1;
            break;
        }
    }
    Ok((Some(k as f64 / d as f64), Some(values[0] / total)))
}

/// Explained-variance features of the covariance and correlation matrices
/// of `x` and of `[x | y]`.
pub fn pca_features(x: ArrayView2<'_, f64>, y: &[f64]) -> Result<Vec<Entry>> {
    let (l, n) = x.dim();
    require_rows(l, 3, "pca")?;
    let xm = DMatrix::from_fn(l, n, |i, j| x[[i, j]]);
    let xy = DMatrix::from_fn(l, n + 1, |i, j| if j < n { x[[i, j]] } else { y[i] });
    let cov_x = covariance(&xm);
    let cov_init = covariance(&xy);
    let cor_x = correlation_from_covariance(&cov_x);
    let cor_init = correlation_from_covariance(&cov_init);
    let (a, a1) = explained(Some(cov_x))?;
    let (b, b1) = explained(cor_x)?;
    let (c, c1) = explained(Some(cov_init))?;
    let (d, d1) = explained(cor_init)?;
    Ok(vec![
        entry("expl_var.cov_x", a),
        entry("expl_var.cor_x", b),
        entry("expl_var.cov_init", c),
        entry("expl_var.cor_init", d),
        entry("expl_var_PC1.cov_x", a1),
        entry("expl_var_PC1.cor_x", b1),
        entry("expl_var_PC1.cov_init", c1),
        entry("expl_var_PC1.cor_init", d1),
    ])
}
