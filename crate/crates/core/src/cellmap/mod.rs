//! Cell mapping: a regular `b^d` grid over the box and per-cell summaries,
//! plus the four feature groups built on top of them.

mod angle;
mod conv;
mod gcm;
mod grad;

use std::collections::HashMap;

use ndarray::ArrayView2;

use crate::error::{Error, Result};
use crate::testbed::Bounds;

pub use angle::cm_angle;
pub use conv::{classify_triple, cm_conv, TripleShape};
pub use gcm::{absorption, gcm, gcm_scheme, Absorption};
pub use grad::{cell_homogeneity, cm_grad};

pub const MIN_BLOCKS: usize = 3;
pub const DEFAULT_GRID_LIMIT: u64 = 10_000_000;

/// Block of `v` among `blocks` equal slices of `[lo, hi]`; values on or past
/// the upper edge land in the last block, values below `lo` in the first.
pub fn block_of(v: f64, lo: f64, hi: f64, blocks: usize) -> usize {
    let t = ((v - lo) / (hi - lo) * blocks as f64).floor();
    if t.is_nan() || t < 0.0 {
        0
    } else {
        (t as usize).min(blocks - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    pub blocks: usize,
    pub dim: usize,
    pub bounds: Bounds,
}

impl CellGrid {
    pub fn new(blocks: usize, bounds: Bounds, limit: u64) -> Result<Self> {
        let dim = bounds.dim();
        if blocks < MIN_BLOCKS {
            return Err(Error::InvalidArgument(format!("at least {MIN_BLOCKS} blocks per dimension required, got {blocks}")));
        }
        let total = u32::try_from(dim).ok().and_then(|d| (blocks as u64).checked_pow(d));
        match total {
            Some(t) if t <= limit => Ok(Self { blocks, dim, bounds }),
            _ => Err(Error::GridTooLarge { blocks, dim, limit }),
        }
    }

    pub fn n_cells(&self) -> usize {
        self.blocks.pow(self.dim as u32)
    }

    pub fn coords_of(&self, x: &[f64]) -> Vec<usize> {
        (0..self.dim)
            .map(|j| block_of(x[j], self.bounds.lower()[j], self.bounds.upper()[j], self.blocks))
            .collect()
    }

    /// Row-major index, first coordinate most significant.
    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.blocks + c)
    }

    pub fn coords_of_index(&self, mut index: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        for j in (0..self.dim).rev() {
            c[j] = index % self.blocks;
            index /= self.blocks;
        }
        c
    }

    pub fn cell_of(&self, x: &[f64]) -> usize {
        self.index_of(&self.coords_of(x))
    }

    pub fn center(&self, coords: &[usize]) -> Vec<f64> {
        (0..self.dim)
            .map(|j| {
                let (lo, hi) = (self.bounds.lower()[j], self.bounds.upper()[j]);
                lo + (coords[j] as f64 + 0.5) * (hi - lo) / self.blocks as f64
            })
            .collect()
    }

    /// The up to `2d` axis neighbours inside the grid.
    pub fn neighbors(&self, index: usize) -> Vec<usize> {
        let coords = self.coords_of_index(index);
        let mut out = Vec::with_capacity(2 * self.dim);
        let mut stride = 1;
        for j in (0..self.dim).rev() {
            if coords[j] > 0 {
                out.push(index - stride);
            }
            if coords[j] + 1 < self.blocks {
                out.push(index + stride);
            }
            stride *= self.blocks;
        }
        out.sort_unstable();
        out
    }
}

/// Representative-value schemes for a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Min,
    Mean,
    Near,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Min, Scheme::Mean, Scheme::Near];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Min => "min",
            Scheme::Mean => "mean",
            Scheme::Near => "near",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub index: usize,
    pub coords: Vec<usize>,
    pub members: Vec<usize>,
    pub center: Vec<f64>,
    pub best: usize,
    pub best_value: f64,
    pub worst: usize,
    pub worst_value: f64,
    pub mean_value: f64,
    /// Point closest to the cell center.
    pub near: usize,
    pub near_value: f64,
}

impl CellStats {
    pub fn representative(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Min => self.best_value,
            Scheme::Mean => self.mean_value,
            Scheme::Near => self.near_value,
        }
    }
}

/// Non-empty cells in increasing index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub cells: Vec<CellStats>,
    pub lookup: HashMap<usize, usize>,
    pub global_best: usize,
    pub global_worst: usize,
}

impl CellSummary {
    pub fn position(&self, index: usize) -> Option<usize> {
        self.lookup.get(&index).copied()
    }

    /// Representative values of every non-empty cell under `scheme`.
    pub fn representatives(&self, scheme: Scheme) -> Vec<f64> {
        self.cells.iter().map(|c| c.representative(scheme)).collect()
    }
}

fn sq_dist(a: &[f64], b: ndarray::ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// Assigns points to cells and summarizes the non-empty ones. Value and
/// distance ties go to the lowest point index.
pub fn build_grid(
    points: ArrayView2<'_, f64>,
    y: &[f64],
    blocks: usize,
    bounds: &Bounds,
    limit: u64,
) -> Result<(CellGrid, CellSummary)> {
    let (l, d) = points.dim();
    if y.len() != l {
        return Err(Error::Length { expected: l, got: y.len() });
    }
    if l == 0 {
        return Err(Error::InvalidArgument("cannot build a grid from an empty sample".into()));
    }
    if bounds.dim() != d {
        return Err(Error::Length { expected: d, got: bounds.dim() });
    }
    let grid = CellGrid::new(blocks, bounds.clone(), limit)?;
    let mut by_cell: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..l {
        let idx = grid.cell_of(&points.row(i).to_vec());
        by_cell.entry(idx).or_default().push(i);
    }
    let mut keys: Vec<usize> = by_cell.keys().copied().collect();
    keys.sort_unstable();
    let mut cells = Vec::with_capacity(keys.len());
    let mut lookup = HashMap::with_capacity(keys.len());
    for index in keys {
        let members = by_cell.remove(&index).expect("key present");
        let coords = grid.coords_of_index(index);
        let center = grid.center(&coords);
        let (mut best, mut worst, mut near) = (members[0], members[0], members[0]);
        let mut near_d = sq_dist(&center, points.row(near));
        let mut sum = 0.0;
        for &i in &members {
            sum += y[i];
            if y[i] < y[best] {
                best = i;
            }
            if y[i] > y[worst] {
                worst = i;
            }
            let dd = sq_dist(&center, points.row(i));
            if dd < near_d {
                near_d = dd;
                near = i;
            }
        }
        lookup.insert(index, cells.len());
        cells.push(CellStats {
            index,
            best_value: y[best],
            worst_value: y[worst],
            mean_value: sum / members.len() as f64,
            near_value: y[near],
            coords,
            center,
            best,
            worst,
            near,
            members,
        });
    }
    let mut global_best = 0;
    let mut global_worst = 0;
    for i in 0..l {
        if y[i] < y[global_best] {
            global_best = i;
        }
        if y[i] > y[global_worst] {
            global_worst = i;
        }
    }
    Ok((grid, CellSummary { cells, lookup, global_best, global_worst }))
}
