//! Ordinary least squares with an intercept.

use nalgebra::{Cholesky, DMatrix, DVector};
use ndarray::ArrayView2;

use crate::error::{Error, Result};
use crate::linalg::sym_eigen_desc;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    /// Intercept first, then one coefficient per regressor.
    pub coefficients: Vec<f64>,
    pub r2: Option<f64>,
    /// `None` when `l - p - 1 <= 0` or `y` is constant.
    pub adj_r2: Option<f64>,
}

impl LinearFit {
    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn slopes(&self) -> &[f64] {
        &self.coefficients[1..]
    }

    /// `max |c_j| / min |c_j|` over the given coefficient slice.
    pub fn abs_ratio(coefs: &[f64]) -> Option<f64> {
        let abs: Vec<f64> = coefs.iter().map(|c| c.abs()).collect();
        let max = abs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = abs.iter().copied().fold(f64::INFINITY, f64::min);
        (!abs.is_empty() && min > 0.0).then(|| max / min)
    }
}

/// Least-squares fit of `y ~ 1 + x`.
///
/// Regressors are standardized before solving. With fewer parameters than
/// observations the normal equations are solved by Cholesky; otherwise (or
/// when the Gram matrix is singular) the minimum-norm solution is taken.
pub fn ols_fit(x: ArrayView2<'_, f64>, y: &[f64]) -> Result<LinearFit> {
    let (l, p) = x.dim();
    if y.len() != l {
        return Err(Error::Length { expected: l, got: y.len() });
    }
    if l < 2 {
        return Err(Error::InvalidArgument("regression needs at least 2 observations".into()));
    }
    let y_mean = y.iter().sum::<f64>() / l as f64;
    let yc = DVector::from_iterator(l, y.iter().map(|v| v - y_mean));

    let mut means = Vec::with_capacity(p);
    let mut scales = Vec::with_capacity(p);
    let mut active = Vec::with_capacity(p);
    for j in 0..p {
        let col = x.column(j);
        let m = col.sum() / l as f64;
        let ss: f64 = col.iter().map(|v| (v - m) * (v - m)).sum();
        let s = (ss / l as f64).sqrt();
        means.push(m);
        scales.push(s);
        if s > 0.0 && s.is_finite() {
            active.push(j);
        }
    }
    let q = active.len();
    let mut xs = DMatrix::<f64>::zeros(l, q);
    for (k, &j) in active.iter().enumerate() {
        let (m, s) = (means[j], scales[j]);
        for i in 0..l {
            xs[(i, k)] = (x[[i, j]] - m) / s;
        }
    }

    let beta_s = if q == 0 {
        DVector::zeros(0)
    } else if q < l {
        let xt = xs.transpose();
        let gram = &xt * &xs;
        let rhs = &xt * &yc;
        match Cholesky::new(gram.clone()) {
            Some(ch) if well_conditioned(&ch) => ch.solve(&rhs),
            _ => pinv_solve(gram, &rhs)?,
        }
    } else {
        let k = &xs * xs.transpose();
        let alpha = pinv_solve(k, &yc)?;
        xs.transpose() * alpha
    };

    let fitted = if q == 0 { DVector::zeros(l) } else { &xs * &beta_s };
    let ss_res: f64 = fitted.iter().zip(yc.iter()).map(|(f, v)| (v - f) * (v - f)).sum();
    let ss_tot: f64 = yc.iter().map(|v| v * v).sum();

    let mut coefficients = vec![0.0; p + 1];
    let mut intercept = y_mean;
    for (k, &j) in active.iter().enumerate() {
        let b = beta_s[k] / scales[j];
        coefficients[j + 1] = b;
        intercept -= b * means[j];
    }
    coefficients[0] = intercept;

    let r2 = (ss_tot > 0.0).then(|| (1.0 - ss_res / ss_tot).min(1.0));
    let dof = l as f64 - p as f64 - 1.0;
    let adj_r2 = match r2 {
        Some(r2) if dof > 0.0 => Some(1.0 - (1.0 - r2) * (l as f64 - 1.0) / dof),
        _ => None,
    };
    Ok(LinearFit { coefficients, r2, adj_r2 })
}

fn well_conditioned(ch: &Cholesky<f64, nalgebra::Dyn>) -> bool {
    let d = ch.l_dirty().diagonal();
    let max = d.iter().copied().fold(0.0, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    min > 1e-7 * max
}

/// Minimum-norm solution of `a z = b` for symmetric positive semi-definite `a`.
fn pinv_solve(a: DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (values, vectors) = sym_eigen_desc(a)?;
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    let tol = top * values.len() as f64 * f64::EPSILON * 16.0;
    let proj = vectors.transpose() * b;
    let scaled = DVector::from_iterator(
        values.len(),
        values.iter().zip(proj.iter()).map(|(&v, &c)| if v > tol { c / v } else { 0.0 }),
    );
    Ok(vectors * scaled)
}
