use std::collections::BTreeMap;

use ndarray::{Array2, ArrayView2};

use crate::budget::{self, Deadline};
use crate::cellmap::block_of;
use crate::error::Result;
use crate::features::{entry, Entry};
use crate::ml::ols_fit;
use crate::stats;
use crate::testbed::Bounds;

pub const NAMES: [&str; 12] = [
    "avg_length.reg",
    "avg_length.norm",
    "length.mean",
    "length.sd",
    "cor.reg",
    "cor.norm",
    "ratio.mean",
    "ratio.sd",
    "sd_ratio.reg",
    "sd_ratio.norm",
    "sd_mean.reg",
    "sd_mean.norm",
];

/// 3 blocks per dimension while the grid stays at or below 1e5 cells,
/// otherwise a single global cell.
pub fn limo_blocks(dim: usize) -> usize {
    if 3f64.powi(dim as i32) <= 1e5 {
        3
    } else {
        1
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn column_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let d = rows[0].len();
    (0..d).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64).collect()
}

fn mean_pairwise<F: Fn(&[f64], &[f64]) -> Option<f64>>(rows: &[Vec<f64>], f: F) -> Option<f64> {
    let mut vals = Vec::new();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            vals.push(f(&rows[a], &rows[b])?);
        }
    }
    stats::mean(&vals)
}

/// Per-coordinate spread of coefficients across cells: (max/min ratio, mean).
fn spread(rows: &[Vec<f64>]) -> (Option<f64>, Option<f64>) {
    if rows.len() < 2 {
        return (None, None);
    }
    let sds: Vec<f64> =
        (0..rows[0].len()).filter_map(|j| stats::sd(&rows.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    let lo = stats::min(&sds);
    let hi = stats::max(&sds);
    let ratio = lo.zip(hi).and_then(|(lo, hi)| (lo > 0.0).then(|| hi / lo));
    (ratio, stats::mean(&sds))
}

/// Slope vectors of per-cell linear fits; cells with fewer than `dim + 2`
/// points are skipped.
pub fn cell_coefficients(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    bounds: &Bounds,
    blocks: usize,
    deadline: Option<&Deadline>,
) -> Result<Vec<Vec<f64>>> {
    let (l, d) = x.dim();
    let mut cells: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i in 0..l {
        let key = (0..d).map(|j| block_of(x[[i, j]], bounds.lower()[j], bounds.upper()[j], blocks)).collect();
        cells.entry(key).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in cells.values() {
        if members.len() < d + 2 {
            continue;
        }
        budget::check(deadline)?;
        let xs = Array2::from_shape_fn((members.len(), d), |(i, j)| x[[members[i], j]]);
        let ys: Vec<f64> = members.iter().map(|&i| y[i]).collect();
        out.push(ols_fit(xs.view(), &ys)?.slopes().to_vec());
    }
    Ok(out)
}

/// Linear-model features aggregated over grid cells.
pub fn limo(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    bounds: &Bounds,
    blocks: usize,
    deadline: Option<&Deadline>,
) -> Result<Vec<Entry>> {
    let reg = cell_coefficients(x, y, bounds, blocks, deadline)?;
    if reg.is_empty() {
        return Ok(NAMES.iter().map(|n| entry(n, None)).collect());
    }
    let normed: Vec<Vec<f64>> = reg
        .iter()
        .filter_map(|c| {
            let n = norm(c);
            (n > 0.0).then(|| c.iter().map(|v| v / n).collect())
        })
        .collect();
    let lengths: Vec<f64> = reg.iter().map(|c| norm(c)).collect();
    let ratios: Vec<f64> = reg
        .iter()
        .filter_map(|c| {
            let abs: Vec<f64> = c.iter().map(|v| v.abs()).collect();
            let lo = stats::min(&abs)?;
            (lo > 0.0).then(|| stats::max(&abs).unwrap_or(0.0) / lo)
        })
        .collect();
    let avg_norm = (!normed.is_empty()).then(|| norm(&column_mean(&normed)));
    let cosine = |a: &[f64], b: &[f64]| Some(a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>());
    let (sd_ratio_reg, sd_mean_reg) = spread(&reg);
    let (sd_ratio_norm, sd_mean_norm) = spread(&normed);
    Ok(vec![
        entry(NAMES[0], Some(norm(&column_mean(&reg)))),
        entry(NAMES[1], avg_norm),
        entry(NAMES[2], stats::mean(&lengths)),
        entry(NAMES[3], stats::sd(&lengths)),
        entry(NAMES[4], mean_pairwise(&reg, |a, b| stats::pearson(a, b))),
        entry(NAMES[5], mean_pairwise(&normed, cosine)),
        entry(NAMES[6], stats::mean(&ratios)),
        entry(NAMES[7], stats::sd(&ratios)),
        entry(NAMES[8], sd_ratio_reg),
        entry(NAMES[9], sd_ratio_norm),
        entry(NAMES[10], sd_mean_reg),
        entry(NAMES[11], sd_mean_norm),
    ])
}
