//! Rank-weighted PCA reduction of a design to `m` dimensions.
//!
//! Points are ranked by objective value (rank 1 = best), weighted by
//! `w~_i = ln l - ln r_i` normalized to sum 1, re-scaled as
//! `x̄_i = w_i (x_i - mean)`, and projected onto the top-`m` principal axes
//! of the re-scaled set. Objective values are carried over unchanged, so the
//! reduction costs no function evaluations.

use nalgebra::DMatrix;
use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::linalg::{fix_column_signs, sym_eigen_desc, to_array2};
use crate::sampling::{read_matrix_csv, write_matrix_csv, DesignSample};

pub const DEFAULT_REDUCED_DIM: usize = 2;

/// Rank of each objective value (1 = smallest); ties keep index order.
pub fn rank_objectives(y: &[f64]) -> Result<Vec<usize>> {
    if y.len() < 2 {
        return Err(Error::InvalidArgument("ranking needs at least 2 values".into()));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let mut ranks = vec![0; y.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    Ok(ranks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankWeights {
    pub ranks: Vec<usize>,
    /// `ln l - ln r_i`
    pub raw_weights: Vec<f64>,
    /// Raw weights normalized to sum 1.
    pub weights: Vec<f64>,
}

pub fn compute_weights(ranks: &[usize]) -> Result<RankWeights> {
    let l = ranks.len();
    if l < 2 {
        return Err(Error::InvalidArgument(format!(
            "rank weighting needs at least 2 points, got {l}"
        )));
    }
    let mut seen = vec![false; l];
    for &r in ranks {
        if r == 0 || r > l || std::mem::replace(&mut seen[r - 1], true) {
            return Err(Error::InvalidArgument("ranks must be a permutation of 1..=l".into()));
        }
    }
    let ln_l = (l as f64).ln();
    let raw_weights: Vec<f64> = ranks.iter().map(|&r| ln_l - (r as f64).ln()).collect();
    let total: f64 = raw_weights.iter().sum();
    let weights = raw_weights.iter().map(|w| w / total).collect();
    Ok(RankWeights { ranks: ranks.to_vec(), raw_weights, weights })
}

/// The fitted reduction.
#[derive(Debug, Clone)]
pub struct PcaTransform {
    pub mean: Vec<f64>,
    pub weights: RankWeights,
    /// `n x m`, orthonormal columns.
    pub axes: Array2<f64>,
    /// Top-`m` eigenvalues of the re-scaled covariance, non-increasing.
    pub explained_variance: Vec<f64>,
    /// Trace of the re-scaled covariance.
    pub total_variance: f64,
}

#[derive(Debug, Clone)]
pub struct ReducedSample {
    pub points: Array2<f64>,
    pub objectives: Vec<f64>,
    pub transform: PcaTransform,
}

impl ReducedSample {
    pub fn m(&self) -> usize {
        self.points.ncols()
    }

    /// Writes `z1..zm,y`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        write_matrix_csv(w, "z", &self.points, &self.objectives)
    }

    /// Reads back a `z1..zm,y` table as plain points and objectives.
    pub fn read_csv<R: std::io::Read>(r: R) -> Result<(Array2<f64>, Vec<f64>)> {
        read_matrix_csv(r, "z")
    }
}

/// Re-scaled points `w_i (x_i - mean)` and the column mean.
pub fn rescale(points: ArrayView2<'_, f64>, weights: &[f64]) -> (Array2<f64>, Vec<f64>) {
    let (l, n) = points.dim();
    let mean: Vec<f64> = (0..n).map(|j| points.column(j).sum() / l as f64).collect();
    let scaled = Array2::from_shape_fn((l, n), |(i, j)| weights[i] * (points[[i, j]] - mean[j]));
    (scaled, mean)
}

pub fn reduce(design: &DesignSample, m: usize) -> Result<ReducedSample> {
    let (l, n) = design.points.dim();
    if m == 0 {
        return Err(Error::InvalidArgument("reduced dimension must be at least 1".into()));
    }
    if m >= n {
        return Err(Error::ReducedDimension { m, n });
    }
    if l < 2 {
        return Err(Error::InvalidArgument("reduction needs at least 2 points".into()));
    }
    let ranks = rank_objectives(&design.objectives)?;
    let weights = compute_weights(&ranks)?;
    let (scaled, mean) = rescale(design.points.view(), &weights.weights);

    let xbar = DMatrix::from_row_iterator(l, n, scaled.iter().copied());
    let col_means: Vec<f64> = xbar.column_iter().map(|c| c.mean()).collect();
    let mut centered = xbar.clone();
    for (j, mut col) in centered.column_iter_mut().enumerate() {
        col.add_scalar_mut(-col_means[j]);
    }
    let denom = (l - 1) as f64;
    let total_variance = centered.iter().map(|v| v * v).sum::<f64>() / denom;

    let (explained_variance, mut axes) = if n <= l {
        primal_axes(&centered, m, denom)?
    } else {
        match dual_axes(&centered, m, denom)? {
            Some(found) => found,
            None => primal_axes(&centered, m, denom)?,
        }
    };
    fix_column_signs(&mut axes);
    let projected = &xbar * &axes;
    Ok(ReducedSample {
        points: to_array2(&projected),
        objectives: design.objectives.clone(),
        transform: PcaTransform {
            mean,
            weights,
            axes: to_array2(&axes),
            explained_variance,
            total_variance,
        },
    })
}

fn primal_axes(centered: &DMatrix<f64>, m: usize, denom: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let cov = centered.tr_mul(centered) / denom;
    let (values, vectors) = sym_eigen_desc(cov)?;
    let axes = vectors.columns(0, m).into_owned();
    Ok((values[..m].iter().map(|v| v.max(0.0)).collect(), axes))
}

/// Axes through the `l x l` Gram matrix; `None` when a requested component
/// has (numerically) zero variance and the dual map is ill-defined.
fn dual_axes(centered: &DMatrix<f64>, m: usize, denom: f64) -> Result<Option<(Vec<f64>, DMatrix<f64>)>> {
    if m > centered.nrows() {
        return Ok(None);
    }
    let gram = centered * centered.transpose() / denom;
    let (values, vectors) = sym_eigen_desc(gram)?;
    let top = values[0].max(0.0);
    if values[..m].iter().any(|&v| !(v > 1e-12 * top) || top == 0.0) {
        return Ok(None);
    }
    let mut axes = centered.tr_mul(&vectors.columns(0, m).into_owned());
    for (k, mut col) in axes.column_iter_mut().enumerate() {
        col /= (values[k] * denom).sqrt();
        let norm = col.norm();
        col /= norm;
    }
    Ok(Some((values[..m].to_vec(), axes)))
}

/// Per-column min-max map to `[0, 1]`; a zero-range column maps to 0.5.
pub fn normalize_unit_box(points: ArrayView2<'_, f64>) -> Array2<f64> {
    let (l, d) = points.dim();
    let mut out = Array2::zeros((l, d));
    for j in 0..d {
        let col = points.column(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        for i in 0..l {
            out[[i, j]] = if range > 0.0 { ((col[i] - lo) / range).clamp(0.0, 1.0) } else { 0.5 };
        }
    }
    out
}
