//! Independent reference implementations used by the integration tests.

use std::ops::{Add, Div, Mul, Neg, Sub};

use ela_core::cellmap::{absorption, build_grid, CellGrid, CellSummary, Scheme};
use ela_core::dimred::ReducedSample;
use ela_core::sampling::DesignSample;
use ela_core::testbed::Bounds;
use ndarray::{Array2, ArrayView2};

// ---------------------------------------------------------------------------
// double-double arithmetic (about 106 significant bits)

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let y = Dd::from(x);
        let r = self - y * y;
        y + Dd::from(r.hi / (2.0 * x))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        quick_two_sum(s, e + self.lo + b.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let p = self.hi * b.hi;
        let e = self.hi.mul_add(b.hi, -p);
        quick_two_sum(p, e + self.hi * b.lo + self.lo * b.hi)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from(q2);
        let q3 = r.hi / b.hi;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }
}

/// Cyclic Jacobi eigensolver in double-double precision. Returns the
/// eigenvalues in non-increasing order and the matching eigenvectors as
/// columns (`vectors[row][col]`).
pub fn jacobi_eigen(mut a: Vec<Vec<Dd>>) -> (Vec<Dd>, Vec<Vec<Dd>>) {
    let n = a.len();
    let mut v: Vec<Vec<Dd>> = (0..n).map(|i| (0..n).map(|j| if i == j { Dd::ONE } else { Dd::ZERO }).collect()).collect();
    let scale: f64 = a.iter().flatten().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].to_f64().abs())
            .fold(0.0, f64::max);
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].hi == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (Dd::from(2.0) * a[p][q]);
                let root = (theta * theta + Dd::ONE).sqrt();
                let t = if theta.hi >= 0.0 { Dd::ONE / (theta + root) } else { -(Dd::ONE / (root - theta)) };
                let c = Dd::ONE / (t * t + Dd::ONE).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].to_f64().total_cmp(&a[i][i].to_f64()));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (values, vectors)
}

/// Reference reduction assembled from first principles.
pub struct ReductionOracle {
    pub raw_weights: Vec<f64>,
    pub weights: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// `n x m`
    pub axes: Vec<Vec<f64>>,
    /// `l x m`
    pub points: Vec<Vec<f64>>,
}

pub fn reduction_oracle(design: &DesignSample, m: usize) -> ReductionOracle {
    let (l, n) = design.points.dim();
    let y = &design.objectives;
    let mut rank = vec![0usize; l];
    for i in 0..l {
        rank[i] = 1 + (0..l).filter(|&j| y[j] < y[i] || (y[j] == y[i] && j < i)).count();
    }
    let raw_weights: Vec<f64> = rank.iter().map(|&r| (l as f64).ln() - (r as f64).ln()).collect();
    let total = raw_weights.iter().fold(Dd::ZERO, |acc, &w| acc + Dd::from(w));
    let weights_dd: Vec<Dd> = raw_weights.iter().map(|&w| Dd::from(w) / total).collect();

    let x = |i: usize, j: usize| Dd::from(design.points[[i, j]]);
    let mean: Vec<Dd> =
        (0..n).map(|j| (0..l).fold(Dd::ZERO, |acc, i| acc + x(i, j)) / Dd::from(l as f64)).collect();
    let xbar: Vec<Vec<Dd>> = (0..l).map(|i| (0..n).map(|j| weights_dd[i] * (x(i, j) - mean[j])).collect()).collect();
    let col_mean: Vec<Dd> =
        (0..n).map(|j| (0..l).fold(Dd::ZERO, |acc, i| acc + xbar[i][j]) / Dd::from(l as f64)).collect();
    let denom = Dd::from((l - 1) as f64);
    let cov: Vec<Vec<Dd>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..l).fold(Dd::ZERO, |acc, i| acc + (xbar[i][a] - col_mean[a]) * (xbar[i][b] - col_mean[b]))
                        / denom
                })
                .collect()
        })
        .collect();
    let (values, vectors) = jacobi_eigen(cov);

    let mut axes: Vec<Vec<Dd>> = (0..n).map(|r| vectors[r][..m].to_vec()).collect();
    for c in 0..m {
        let mut best = 0;
        for r in 0..n {
            if axes[r][c].to_f64().abs() > axes[best][c].to_f64().abs() {
                best = r;
            }
        }
        if axes[best][c].hi < 0.0 {
            for row in axes.iter_mut() {
                row[c] = -row[c];
            }
        }
    }
    let points = (0..l)
        .map(|i| (0..m).map(|c| (0..n).fold(Dd::ZERO, |acc, j| acc + xbar[i][j] * axes[j][c]).to_f64()).collect())
        .collect();
    ReductionOracle {
        raw_weights,
        weights: weights_dd.iter().map(|w| w.to_f64()).collect(),
        eigenvalues: values.iter().map(|v| v.to_f64()).collect(),
        axes: axes.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect(),
        points,
    }
}

/// Largest deviation between `reduce` output and the oracle:
/// `(points, axes, raw weights, weights)`. Axes are only compared where the
/// eigenvalue is isolated, since otherwise they are not unique.
pub fn reduction_error(r: &ReducedSample, o: &ReductionOracle) -> (f64, f64, f64, f64) {
    let (l, m) = r.points.dim();
    let n = r.transform.axes.nrows();
    let mut dp = 0.0f64;
    for i in 0..l {
        for c in 0..m {
            dp = dp.max((r.points[[i, c]] - o.points[i][c]).abs());
        }
    }
    let mut da = 0.0f64;
    let top = o.eigenvalues[0].abs().max(f64::MIN_POSITIVE);
    for c in 0..m {
        let isolated = [c.checked_sub(1), Some(c + 1)]
            .into_iter()
            .flatten()
            .filter_map(|k| o.eigenvalues.get(k))
            .all(|&v| (o.eigenvalues[c] - v).abs() > 1e-8 * top);
        if !isolated {
            continue;
        }
        for j in 0..n {
            da = da.max((r.transform.axes[[j, c]] - o.axes[j][c]).abs());
        }
    }
    let dw = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    (dp, da, dw(&r.transform.weights.raw_weights, &o.raw_weights), dw(&r.transform.weights.weights, &o.weights))
}

/// Relative gap between the m-th and (m+1)-th eigenvalue.
pub fn eigen_gap(o: &ReductionOracle, m: usize) -> f64 {
    let top = o.eigenvalues[0].abs().max(f64::MIN_POSITIVE);
    match o.eigenvalues.get(m) {
        Some(next) => (o.eigenvalues[m - 1] - next) / top,
        None => 1.0,
    }
}

// ---------------------------------------------------------------------------
// cell-chain brute force

/// Absorption of a chain on a full `b x b` grid with one value per cell
/// (row-major, first coordinate most significant), computed by
/// enumerating every path. Returns the attractor cells (ascending) and
/// `probs[cell][k]`, the probability of ending in attractor `k`.
pub fn chain_by_paths(values: &[f64], b: usize) -> (Vec<usize>, Vec<Vec<f64>>) {
    let cells = b * b;
    let better: Vec<Vec<usize>> = (0..cells)
        .map(|c| {
            let (r, k) = (c / b, c % b);
            let mut nb = Vec::new();
            if r > 0 {
                nb.push(c - b);
            }
            if r + 1 < b {
                nb.push(c + b);
            }
            if k > 0 {
                nb.push(c - 1);
            }
            if k + 1 < b {
                nb.push(c + 1);
            }
            nb.into_iter().filter(|&o| values[o] < values[c]).collect()
        })
        .collect();
    let attractors: Vec<usize> = (0..cells).filter(|&c| better[c].is_empty()).collect();
    fn walk(c: usize, p: f64, better: &[Vec<usize>], out: &mut [f64]) {
        if better[c].is_empty() {
            out[c] += p;
            return;
        }
        let w = p / better[c].len() as f64;
        for &o in &better[c] {
            walk(o, w, better, out);
        }
    }
    let probs = (0..cells)
        .map(|c| {
            let mut end = vec![0.0; cells];
            walk(c, 1.0, &better, &mut end);
            attractors.iter().map(|&a| end[a]).collect()
        })
        .collect();
    (attractors, probs)
}

/// One point at the center of every cell of a `b x b` grid on `[0, b]^2`.
pub fn grid_design(values: &[f64], b: usize) -> (Array2<f64>, Vec<f64>, Bounds) {
    let points = Array2::from_shape_fn((b * b, 2), |(i, j)| if j == 0 { (i / b) as f64 + 0.5 } else { (i % b) as f64 + 0.5 });
    (points, values.to_vec(), Bounds::uniform(2, 0.0, b as f64).unwrap())
}

/// Core absorption on the grid design, re-indexed by row-major cell index:
/// `(attractor cells, probs[cell][k])`.
pub fn chain_by_core(values: &[f64], b: usize) -> (Vec<usize>, Vec<Vec<f64>>) {
    let (points, y, bounds) = grid_design(values, b);
    let (grid, summary): (CellGrid, CellSummary) = build_grid(points.view(), &y, b, &bounds, 1_000_000).unwrap();
    let reps = summary.representatives(Scheme::Min);
    let chain = absorption(&grid, &summary, &reps);
    let cell_of = |p: usize| summary.cells[p].index;
    let mut attractors: Vec<(usize, usize)> = chain.attractors.iter().enumerate().map(|(s, &p)| (cell_of(p), s)).collect();
    attractors.sort();
    let mut probs = vec![vec![0.0; attractors.len()]; b * b];
    for (p, row) in chain.probs.iter().enumerate() {
        for &(s, v) in row {
            let k = attractors.iter().position(|&(_, slot)| slot == s).unwrap();
            probs[cell_of(p)][k] = v;
        }
    }
    (attractors.into_iter().map(|(c, _)| c).collect(), probs)
}

// ---------------------------------------------------------------------------
// distance-based groups

fn dist(x: ArrayView2<'_, f64>, i: usize, j: usize) -> f64 {
    x.row(i).iter().zip(x.row(j).iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

fn cor(a: &[f64], b: &[f64]) -> Option<f64> {
    let (ma, mb) = (mean(a), mean(b));
    let sab: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let saa: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let sbb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    (saa > 0.0 && sbb > 0.0).then(|| sab / (saa * sbb).sqrt())
}

/// `[sd_ratio, mean_ratio, cor, coeff_var, nb_fitness.cor]` for samples in
/// which the best value is unique.
pub fn nbc_oracle(x: ArrayView2<'_, f64>, y: &[f64]) -> [Option<f64>; 5] {
    let l = y.len();
    let mut nn = vec![0.0; l];
    let mut nb = vec![0.0; l];
    let mut indegree = vec![0.0; l];
    for i in 0..l {
        let others: Vec<usize> = (0..l).filter(|&j| j != i).collect();
        nn[i] = others.iter().map(|&j| dist(x, i, j)).fold(f64::INFINITY, f64::min);
        let better: Vec<usize> = others.iter().copied().filter(|&j| y[j] < y[i]).collect();
        if better.is_empty() {
            nb[i] = others.iter().map(|&j| dist(x, i, j)).fold(0.0, f64::max);
        } else {
            let d: Vec<f64> = better.iter().map(|&j| dist(x, i, j)).collect();
            let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
            nb[i] = dmin;
            let parent = better[d.iter().position(|&v| v == dmin).unwrap()];
            indegree[parent] += 1.0;
        }
    }
    let ratios: Vec<f64> = nn.iter().zip(&nb).map(|(a, b)| a / b).collect();
    [
        Some(sd(&nn) / sd(&nb)),
        Some(mean(&nn) / mean(&nb)),
        cor(&nn, &nb),
        Some(sd(&ratios) / mean(&ratios)),
        cor(y, &indegree),
    ]
}

/// `ratio_mean, ratio_median, diff_mean, diff_median` blocks, one value per
/// quantile each.
pub fn disp_oracle(x: ArrayView2<'_, f64>, y: &[f64], quantiles: &[f64]) -> Vec<Option<f64>> {
    let l = y.len();
    let pairs = |idx: &[usize]| -> Option<(f64, f64)> {
        let mut d = Vec::new();
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                d.push(dist(x, idx[a], idx[b]));
            }
        }
        (!d.is_empty()).then(|| (mean(&d), median(&d)))
    };
    let all: Vec<usize> = (0..l).collect();
    let (fm, fd) = pairs(&all).unwrap();
    let mut order = all.clone();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]).then(a.cmp(&b)));
    let subsets: Vec<Option<(f64, f64)>> = quantiles
        .iter()
        .map(|&q| {
            let k = (q * l as f64).ceil() as usize;
            pairs(&order[..k.min(l)])
        })
        .collect();
    let mut out = Vec::new();
    out.extend(subsets.iter().map(|s| s.map(|(m, _)| m / fm)));
    out.extend(subsets.iter().map(|s| s.map(|(_, d)| d / fd)));
    out.extend(subsets.iter().map(|s| s.map(|(m, _)| m - fm)));
    out.extend(subsets.iter().map(|s| s.map(|(_, d)| d - fd)));
    out
}

/// Sign of each objective change along `tour`, skipping repeated points.
pub fn sign_symbols(x: ArrayView2<'_, f64>, y: &[f64], tour: &[usize]) -> Vec<i8> {
    tour.windows(2)
        .filter(|w| x.row(w[0]) != x.row(w[1]))
        .map(|w| match y[w[1]].partial_cmp(&y[w[0]]).unwrap() {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        })
        .collect()
}

pub fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// suites shared by the oracle tests and the acceptance report

/// `reduce` against [`reduction_oracle`] over the suite with `l <= 50` and
/// `n <= 10`. Returns the worst `(points, axes, raw weights, weights)`
/// deviations and the number of designs checked.
pub fn reduction_sweep() -> ((f64, f64, f64, f64), usize) {
    use ela_core::dimred::reduce;
    use ela_core::sampling::build_design;
    use ela_core::testbed::{function_ids, make_instance};

    let mut worst = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut checked = 0;
    for fid in function_ids() {
        for n in [2usize, 3, 5, 10] {
            for l in [8usize, 20, 50] {
                let inst = make_instance(fid, n, 1 + l as u64).unwrap();
                let design = build_design(&inst, l, 1000 + fid as u64 * 31 + n as u64).unwrap();
                let mut ms = vec![1, n - 1];
                ms.dedup();
                for m in ms.into_iter().filter(|&m| m >= 1) {
                    let r = reduce(&design, m).unwrap();
                    let o = reduction_oracle(&design, m);
                    let e = reduction_error(&r, &o);
                    worst = (worst.0.max(e.0), worst.1.max(e.1), worst.2.max(e.2), worst.3.max(e.3));
                    checked += 1;
                }
            }
        }
    }
    (worst, checked)
}

/// Hand-built 3x3 value grids, row-major.
pub fn hand_grids() -> Vec<(&'static str, [f64; 9])> {
    vec![
        ("bowl", [2.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 2.0]),
        ("tilted_plane", [0.0, 1.0, 2.0, 1.0, 2.0, 3.0, 2.0, 3.0, 4.0]),
        ("ridge", [1.0, 5.0, 1.0, 0.0, 5.0, 0.5, 1.0, 5.0, 1.0]),
        ("diagonal_pair", [0.0, 3.0, 4.0, 3.0, 5.0, 3.0, 4.0, 3.0, 0.5]),
        ("plateau", [1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0]),
        ("four_corners", [0.0, 2.0, 0.0, 2.0, 3.0, 2.0, 0.0, 2.0, 0.0]),
        ("saddle", [3.0, 1.0, 3.0, 2.0, 2.5, 2.0, 3.0, 0.0, 3.0]),
    ]
}

/// Differences between the core chain and path enumeration on one grid;
/// empty when they agree.
pub fn compare_chain(values: &[f64]) -> Vec<String> {
    let (ca, cp) = chain_by_core(values, 3);
    let (oa, op) = chain_by_paths(values, 3);
    let mut issues = Vec::new();
    if ca != oa {
        issues.push(format!("attractors {ca:?} vs {oa:?}"));
        return issues;
    }
    let uncertain = |p: &[Vec<f64>]| -> Vec<usize> {
        (0..9).filter(|&c| p[c].iter().filter(|&&v| v > 0.0).count() > 1).collect()
    };
    if uncertain(&cp) != uncertain(&op) {
        issues.push(format!("uncertain {:?} vs {:?}", uncertain(&cp), uncertain(&op)));
    }
    for c in 0..9 {
        for k in 0..oa.len() {
            if (cp[c][k] - op[c][k]).abs() > 1e-9 {
                issues.push(format!("p[{c}][{k}] = {} vs {}", cp[c][k], op[c][k]));
            }
        }
    }
    issues
}
