//! Gaussian discriminant classifiers (LDA, QDA, MDA) and their
//! cross-validated misclassification error.
//!
//! Singular covariances are regularized by adding `lambda * I` with
//! `lambda = 1e-8 * trace / dim`.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use ndarray::ArrayView2;
use rand::Rng as _;

use crate::budget::{self, Deadline};
use crate::error::{Error, Result};
use crate::linalg::{chol_log_det, regularized_cholesky};
use crate::ml::cv::kfold;
use crate::rng::{derive_seed, seeded};

pub const MDA_SUBCLASSES: usize = 2;
pub const MDA_MAX_ITER: usize = 100;
/// Convergence threshold on the change of the mean per-point log-likelihood.
pub const MDA_TOL: f64 = 1e-6;

fn rows_of(x: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), x.ncols(), |i, j| x[(idx[i], j)])
}

fn class_indices(labels: &[usize], n_classes: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n_classes];
    for (i, &c) in labels.iter().enumerate() {
        out[c].push(i);
    }
    out
}

fn row_mean(x: &DMatrix<f64>, idx: &[usize]) -> DVector<f64> {
    let mut m = DVector::zeros(x.ncols());
    for &i in idx {
        m += x.row(i).transpose();
    }
    m / idx.len().max(1) as f64
}

/// Scatter matrix `sum_i (x_i - mu)(x_i - mu)^T` over `idx`.
fn scatter(x: &DMatrix<f64>, idx: &[usize], mu: &DVector<f64>) -> DMatrix<f64> {
    let n = x.ncols();
    let d = DMatrix::from_fn(idx.len(), n, |i, j| x[(idx[i], j)] - mu[j]);
    let dt = d.transpose();
    &dt * &d
}

/// `L^{-1} X^T` for the rows of `x`; column `i` is the whitened point `i`.
fn whiten(chol: &Cholesky<f64, Dyn>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut z = x.transpose();
    chol.l_dirty().solve_lower_triangular_mut(&mut z);
    z
}

fn whiten_vec(chol: &Cholesky<f64, Dyn>, v: &DVector<f64>) -> DVector<f64> {
    let mut z = v.clone();
    chol.l_dirty().solve_lower_triangular_mut(&mut z);
    z
}

fn sq_dist_col(z: &DMatrix<f64>, i: usize, m: &DVector<f64>) -> f64 {
    z.column(i).iter().zip(m.iter()).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = k;
        }
    }
    best
}

fn log_priors(labels: &[usize], n_classes: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n_classes];
    for &c in labels {
        counts[c] += 1;
    }
    counts.iter().map(|&c| (c as f64 / labels.len() as f64).ln()).collect()
}

/// Linear discriminant analysis: class means with a pooled covariance.
#[derive(Debug, Clone)]
pub struct Lda {
    log_priors: Vec<f64>,
    whitened_means: Vec<DVector<f64>>,
    chol: Cholesky<f64, Dyn>,
}

impl Lda {
    pub fn fit(x: &DMatrix<f64>, labels: &[usize], n_classes: usize) -> Result<Self> {
        let groups = class_indices(labels, n_classes);
        let n = x.ncols();
        let mut pooled = DMatrix::zeros(n, n);
        let mut means = Vec::with_capacity(n_classes);
        for g in &groups {
            let mu = row_mean(x, g);
            if !g.is_empty() {
                pooled += scatter(x, g, &mu);
            }
            means.push(mu);
        }
        let dof = (labels.len().saturating_sub(n_classes)).max(1) as f64;
        let chol = regularized_cholesky(&(pooled / dof))?;
        let whitened_means = means.iter().map(|m| whiten_vec(&chol, m)).collect();
        Ok(Self { log_priors: log_priors(labels, n_classes), whitened_means, chol })
    }

    pub fn scores(&self, x: &DMatrix<f64>) -> Vec<Vec<f64>> {
        let z = whiten(&self.chol, x);
        (0..x.nrows())
            .map(|i| {
                self.whitened_means
                    .iter()
                    .zip(&self.log_priors)
                    .map(|(m, lp)| lp - 0.5 * sq_dist_col(&z, i, m))
                    .collect()
            })
            .collect()
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<usize> {
        self.scores(x).iter().map(|s| argmax(s)).collect()
    }
}

/// Quadratic discriminant analysis: one covariance per class.
#[derive(Debug, Clone)]
pub struct Qda {
    classes: Vec<QdaClass>,
}

#[derive(Debug, Clone)]
struct QdaClass {
    log_prior: f64,
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    log_det: f64,
}

impl Qda {
    pub fn fit(x: &DMatrix<f64>, labels: &[usize], n_classes: usize) -> Result<Self> {
        let groups = class_indices(labels, n_classes);
        let priors = log_priors(labels, n_classes);
        let classes = groups
            .iter()
            .zip(priors)
            .map(|(g, log_prior)| {
                let mean = row_mean(x, g);
                let dof = g.len().saturating_sub(1).max(1) as f64;
                let cov = scatter(x, g, &mean) / dof;
                let chol = regularized_cholesky(&cov)?;
                let log_det = chol_log_det(&chol);
                Ok(QdaClass { log_prior, mean, chol, log_det })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { classes })
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<usize> {
        let per_class: Vec<Vec<f64>> = self
            .classes
            .iter()
            .map(|c| {
                let z = whiten(&c.chol, x);
                let m = whiten_vec(&c.chol, &c.mean);
                (0..x.nrows())
                    .map(|i| c.log_prior - 0.5 * c.log_det - 0.5 * sq_dist_col(&z, i, &m))
                    .collect()
            })
            .collect();
        (0..x.nrows())
            .map(|i| argmax(&per_class.iter().map(|s| s[i]).collect::<Vec<_>>()))
            .collect()
    }
}

/// Mixture discriminant analysis: each class is a mixture of
/// [`MDA_SUBCLASSES`] Gaussians sharing one covariance matrix, fitted by EM.
#[derive(Debug, Clone)]
pub struct Mda {
    log_priors: Vec<f64>,
    /// Per class: (log mixing weight, mean) per subclass.
    subclasses: Vec<Vec<(f64, DVector<f64>)>>,
    chol: Cholesky<f64, Dyn>,
    log_det: f64,
    pub iterations: usize,
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Two-means split of `idx` (seeded start, farthest second center, Lloyd
/// iterations). Returns hard assignments in `0..2`, or a single group when
/// the points cannot be split.
fn two_means(x: &DMatrix<f64>, idx: &[usize], seed: u64) -> Vec<usize> {
    if idx.len() < 2 {
        return vec![0; idx.len()];
    }
    let mut rng = seeded(seed);
    let first = idx[rng.random_range(0..idx.len())];
    let dist = |a: usize, c: &DVector<f64>| -> f64 {
        x.row(a).iter().zip(c.iter()).map(|(u, v)| (u - v) * (u - v)).sum()
    };
    let c0 = x.row(first).transpose();
    let far = *idx
        .iter()
        .max_by(|&&a, &&b| dist(a, &c0).total_cmp(&dist(b, &c0)).then(b.cmp(&a)))
        .expect("non-empty");
    let mut centers = [c0, x.row(far).transpose()];
    let mut assign = vec![0usize; idx.len()];
    for _ in 0..10 {
        for (k, &i) in idx.iter().enumerate() {
            assign[k] = usize::from(dist(i, &centers[1]) < dist(i, &centers[0]));
        }
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<usize> = idx.iter().zip(&assign).filter(|(_, &a)| a == c).map(|(&i, _)| i).collect();
            if members.is_empty() {
                return vec![0; idx.len()];
            }
            *center = row_mean(x, &members);
        }
    }
    assign
}

impl Mda {
    pub fn fit(
        x: &DMatrix<f64>,
        labels: &[usize],
        n_classes: usize,
        seed: u64,
        deadline: Option<&Deadline>,
    ) -> Result<Self> {
        let (l, n) = x.shape();
        let groups = class_indices(labels, n_classes);
        let priors = log_priors(labels, n_classes);

        // responsibilities[k][r][pos] for the pos-th member of class k
        let mut resp: Vec<Vec<Vec<f64>>> = groups
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let assign = two_means(x, g, derive_seed(seed, &[k as u64]));
                let r_count = assign.iter().copied().max().map_or(1, |m| m + 1).min(MDA_SUBCLASSES);
                (0..r_count).map(|r| assign.iter().map(|&a| f64::from(u8::from(a == r))).collect()).collect()
            })
            .collect();

        let mut prev_ll = f64::NEG_INFINITY;
        let mut iterations = 0;
        loop {
            budget::check(deadline)?;
            // M-step
            let mut subclasses = Vec::with_capacity(n_classes);
            let mut rows: Vec<f64> = Vec::with_capacity(l * MDA_SUBCLASSES * n);
            let mut n_rows = 0usize;
            for (g, rk) in groups.iter().zip(&resp) {
                let mut subs = Vec::with_capacity(rk.len());
                for r in rk {
                    let nk: f64 = r.iter().sum();
                    if nk <= 0.0 {
                        subs.push((f64::NEG_INFINITY, DVector::zeros(n)));
                        continue;
                    }
                    let mut mu = DVector::zeros(n);
                    for (&i, &w) in g.iter().zip(r) {
                        if w > 0.0 {
                            mu.axpy(w, &x.row(i).transpose(), 1.0);
                        }
                    }
                    mu /= nk;
                    for (&i, &w) in g.iter().zip(r) {
                        if w > 0.0 {
                            let s = w.sqrt();
                            rows.extend((0..n).map(|j| s * (x[(i, j)] - mu[j])));
                            n_rows += 1;
                        }
                    }
                    subs.push(((nk / g.len() as f64).ln(), mu));
                }
                subclasses.push(subs);
            }
            let d = DMatrix::from_row_slice(n_rows, n, &rows);
            let dt = d.transpose();
            let cov = (&dt * &d) / l as f64;
            let chol = regularized_cholesky(&cov)?;
            let log_det = chol_log_det(&chol);

            // E-step
            let z = whiten(&chol, x);
            let const_term = -0.5 * log_det - 0.5 * n as f64 * (2.0 * PI).ln();
            let mut ll = 0.0;
            for (k, g) in groups.iter().enumerate() {
                let wm: Vec<(f64, DVector<f64>)> =
                    subclasses[k].iter().map(|(lw, m)| (*lw, whiten_vec(&chol, m))).collect();
                for (pos, &i) in g.iter().enumerate() {
                    let logs: Vec<f64> =
                        wm.iter().map(|(lw, m)| lw + const_term - 0.5 * sq_dist_col(&z, i, m)).collect();
                    let lse = log_sum_exp(&logs);
                    ll += lse;
                    for (r, lg) in logs.iter().enumerate() {
                        resp[k][r][pos] = (lg - lse).exp();
                    }
                }
            }
            iterations += 1;
            let mean_ll = ll / l as f64;
            let converged = (mean_ll - prev_ll).abs() <= MDA_TOL;
            prev_ll = mean_ll;
            if converged || iterations >= MDA_MAX_ITER {
                return Ok(Self { log_priors: priors, subclasses, chol, log_det, iterations });
            }
        }
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<usize> {
        let z = whiten(&self.chol, x);
        let n = x.ncols() as f64;
        let const_term = -0.5 * self.log_det - 0.5 * n * (2.0 * PI).ln();
        let wm: Vec<Vec<(f64, DVector<f64>)>> = self
            .subclasses
            .iter()
            .map(|subs| subs.iter().map(|(lw, m)| (*lw, whiten_vec(&self.chol, m))).collect())
            .collect();
        (0..x.nrows())
            .map(|i| {
                let scores: Vec<f64> = wm
                    .iter()
                    .zip(&self.log_priors)
                    .map(|(subs, lp)| {
                        let logs: Vec<f64> =
                            subs.iter().map(|(lw, m)| lw + const_term - 0.5 * sq_dist_col(&z, i, m)).collect();
                        lp + log_sum_exp(&logs)
                    })
                    .collect();
                argmax(&scores)
            })
            .collect()
    }
}

/// Mean misclassification errors of the three classifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMmce {
    pub lda: f64,
    pub qda: f64,
    pub mda: f64,
}

/// Stratified `folds`-fold cross-validated mmce of LDA, QDA and MDA on a
/// binary labelling. Both classes need at least two members so that every
/// training fold contains both.
pub fn lda_qda_mda_mmce(
    x: ArrayView2<'_, f64>,
    labels: &[bool],
    folds: usize,
    seed: u64,
    deadline: Option<&Deadline>,
) -> Result<LevelMmce> {
    let (l, n) = x.dim();
    if labels.len() != l {
        return Err(Error::Length { expected: l, got: labels.len() });
    }
    let classes: Vec<usize> = labels.iter().map(|&b| usize::from(b)).collect();
    let ones = classes.iter().sum::<usize>();
    if ones < 2 || l - ones < 2 {
        return Err(Error::InvalidArgument(format!(
            "both classes need at least 2 members (got {} and {ones})",
            l - ones
        )));
    }
    let xm = DMatrix::from_fn(l, n, |i, j| x[[i, j]]);
    let parts = kfold(l, folds, Some(&classes), seed)?;
    let mut err = [0.0; 3];
    for (f, test) in parts.iter().enumerate() {
        budget::check(deadline)?;
        let mut in_test = vec![false; l];
        for &i in test {
            in_test[i] = true;
        }
        let train: Vec<usize> = (0..l).filter(|&i| !in_test[i]).collect();
        let xtr = rows_of(&xm, &train);
        let ytr: Vec<usize> = train.iter().map(|&i| classes[i]).collect();
        let xte = rows_of(&xm, test);
        let truth: Vec<usize> = test.iter().map(|&i| classes[i]).collect();
        let miss = |pred: Vec<usize>| -> f64 {
            pred.iter().zip(&truth).filter(|(a, b)| a != b).count() as f64 / truth.len() as f64
        };
        err[0] += miss(Lda::fit(&xtr, &ytr, 2)?.predict(&xte));
        err[1] += miss(Qda::fit(&xtr, &ytr, 2)?.predict(&xte));
        err[2] += miss(Mda::fit(&xtr, &ytr, 2, derive_seed(seed, &[f as u64]), deadline)?.predict(&xte));
    }
    let k = parts.len() as f64;
    Ok(LevelMmce { lda: err[0] / k, qda: err[1] / k, mda: err[2] / k })
}
