use std::collections::HashSet;

use ndarray::ArrayView2;

use crate::cellmap::block_of;
use crate::error::Result;
use crate::features::{entry, Entry};
use crate::stats;
use crate::testbed::Bounds;

/// Sample size, box, objective range and grid occupancy.
pub fn basic(x: ArrayView2<'_, f64>, y: &[f64], bounds: &Bounds, blocks: usize) -> Result<Vec<Entry>> {
    let (l, d) = x.dim();
    let mut filled: HashSet<Vec<usize>> = HashSet::new();
    for row in x.rows() {
        let cell: Vec<usize> = (0..d).map(|j| block_of(row[j], bounds.lower()[j], bounds.upper()[j], blocks)).collect();
        filled.insert(cell);
    }
    let b = blocks as f64;
    Ok(vec![
        entry("dim", Some(d as f64)),
        entry("observations", Some(l as f64)),
        entry("lower_min", stats::min(bounds.lower())),
        entry("lower_max", stats::max(bounds.lower())),
        entry("upper_min", stats::min(bounds.upper())),
        entry("upper_max", stats::max(bounds.upper())),
        entry("objective_min", stats::min(y)),
        entry("objective_max", stats::max(y)),
        entry("blocks_min", Some(b)),
        entry("blocks_max", Some(b)),
        entry("cells_total", Some(b.powi(d as i32))),
        entry("cells_filled", Some(filled.len() as f64)),
        entry("minimize_fun", Some(1.0)),
    ])
}
