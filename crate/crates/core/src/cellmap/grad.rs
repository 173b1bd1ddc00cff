use ndarray::ArrayView2;

use crate::cellmap::CellSummary;
use crate::features::{entry, row_dist, Entry};
use crate::stats;

/// `|sum of unit vectors| / count`, where each point contributes the unit
/// vector between it and its nearest distinct neighbour in the cell,
/// oriented from the worse to the better of the two (equal values: the
/// lower index counts as better).
pub fn cell_homogeneity(points: ArrayView2<'_, f64>, y: &[f64], members: &[usize]) -> Option<f64> {
    let d = points.ncols();
    let mut sum = vec![0.0; d];
    let mut count = 0usize;
    for &p in members {
        let mut best: Option<(f64, usize)> = None;
        for &q in members {
            if q == p {
                continue;
            }
            let dist = row_dist(points, p, q);
            if dist > 0.0 && best.is_none_or(|(bd, _)| dist < bd) {
                best = Some((dist, q));
            }
        }
        let Some((dist, q)) = best else { continue };
        let q_better = y[q] < y[p] || (y[q] == y[p] && q < p);
        let (from, to) = if q_better { (p, q) } else { (q, p) };
        for j in 0..d {
            sum[j] += (points[[to, j]] - points[[from, j]]) / dist;
        }
        count += 1;
    }
    (count > 0).then(|| sum.iter().map(|v| v * v).sum::<f64>().sqrt() / count as f64)
}

/// Mean and sd of the per-cell gradient homogeneity over cells with at
/// least two points.
pub fn cm_grad(summary: &CellSummary, points: ArrayView2<'_, f64>, y: &[f64]) -> Vec<Entry> {
    let h: Vec<f64> = summary
        .cells
        .iter()
        .filter(|c| c.members.len() >= 2)
        .filter_map(|c| cell_homogeneity(points, y, &c.members))
        .collect();
    vec![entry("mean", stats::mean(&h)), entry("sd", stats::sd(&h))]
}
