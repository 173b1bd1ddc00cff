use ndarray::ArrayView2;

use crate::cellmap::{CellGrid, CellSummary};
use crate::features::{entry, Entry};
use crate::stats;

fn diff_to(points: ArrayView2<'_, f64>, i: usize, center: &[f64]) -> Vec<f64> {
    points.row(i).iter().zip(center).map(|(p, c)| p - c).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Angle in degrees between two non-zero vectors.
pub fn angle_deg(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let cos = a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>() / (na * nb);
    Some(cos.clamp(-1.0, 1.0).acos().to_degrees())
}

fn mean_sd(name: &str, v: &[f64]) -> [Entry; 2] {
    [entry(&format!("{name}.mean"), stats::mean(v)), entry(&format!("{name}.sd"), stats::sd(v))]
}

/// Position of the best and worst point of each cell relative to its
/// center, over cells with at least two points.
pub fn cm_angle(_grid: &CellGrid, summary: &CellSummary, points: ArrayView2<'_, f64>, y: &[f64]) -> Vec<Entry> {
    let range = y[summary.global_worst] - y[summary.global_best];
    let mut to_best = Vec::new();
    let mut to_worst = Vec::new();
    let mut angles = Vec::new();
    let mut ratios = Vec::new();
    for c in summary.cells.iter().filter(|c| c.members.len() >= 2) {
        let b = diff_to(points, c.best, &c.center);
        let w = diff_to(points, c.worst, &c.center);
        to_best.push(norm(&b));
        to_worst.push(norm(&w));
        if let Some(a) = angle_deg(&b, &w) {
            angles.push(a);
        }
        ratios.push(if range > 0.0 { (c.worst_value - c.best_value) / range } else { 0.0 });
    }
    let mut out = Vec::with_capacity(8);
    out.extend(mean_sd("dist_ctr2best", &to_best));
    out.extend(mean_sd("dist_ctr2worst", &to_worst));
    out.extend(mean_sd("angle", &angles));
    out.extend(mean_sd("y_ratio_best2worst", &ratios));
    out
}
