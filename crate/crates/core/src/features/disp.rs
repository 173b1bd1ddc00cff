use ndarray::ArrayView2;

use crate::budget::{self, Deadline};
use crate::error::Result;
use crate::features::{entry, pct, row_dist, Entry};
use crate::stats;

/// Mean and median pairwise distance among `idx`.
pub fn pairwise_mean_median(
    x: ArrayView2<'_, f64>,
    idx: &[usize],
    deadline: Option<&Deadline>,
) -> Result<Option<(f64, f64)>> {
    if idx.len() < 2 {
        return Ok(None);
    }
    let mut d = Vec::with_capacity(idx.len() * (idx.len() - 1) / 2);
    for (a, &i) in idx.iter().enumerate() {
        if a % 256 == 0 {
            budget::check(deadline)?;
        }
        for &j in &idx[a + 1..] {
            d.push(row_dist(x, i, j));
        }
    }
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    Ok(Some((mean, stats::median_in_place(&mut d))))
}

/// The best `ceil(q l)` indices by objective, stable on ties.
pub fn best_fraction(y: &[f64], q: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let k = ((q * y.len() as f64).ceil() as usize).min(y.len());
    order.truncate(k);
    order
}

/// Dispersion of the best sample fractions relative to the whole sample.
pub fn disp(x: ArrayView2<'_, f64>, y: &[f64], quantiles: &[f64], deadline: Option<&Deadline>) -> Result<Vec<Entry>> {
    let all: Vec<usize> = (0..y.len()).collect();
    let full = pairwise_mean_median(x, &all, deadline)?;
    let mut subsets = Vec::with_capacity(quantiles.len());
    for &q in quantiles {
        subsets.push(pairwise_mean_median(x, &best_fraction(y, q), deadline)?);
    }
    let stat = |f: fn(&(f64, f64), &(f64, f64)) -> f64| -> Vec<Option<f64>> {
        subsets.iter().map(|s| s.as_ref().zip(full.as_ref()).map(|(s, a)| f(s, a))).collect()
    };
    let ratio_mean = stat(|s, a| s.0 / a.0);
    let ratio_median = stat(|s, a| s.1 / a.1);
    let diff_mean = stat(|s, a| s.0 - a.0);
    let diff_median = stat(|s, a| s.1 - a.1);
    let mut out = Vec::with_capacity(4 * quantiles.len());
    for (label, values) in
        [("ratio_mean", ratio_mean), ("ratio_median", ratio_median), ("diff_mean", diff_mean), ("diff_median", diff_median)]
    {
        for (q, v) in quantiles.iter().zip(values) {
            out.push(entry(&format!("{label}_{}", pct(*q)), v));
        }
    }
    Ok(out)
}
