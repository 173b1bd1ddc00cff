use rand::Rng as _;

use crate::cellmap::{CellGrid, CellSummary, Scheme};
use crate::features::{entry, Entry};
use crate::rng::seeded;

pub const NAMES: [&str; 4] = ["convex.hard", "concave.hard", "convex.soft", "concave.soft"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TripleShape {
    pub convex_hard: bool,
    pub concave_hard: bool,
    pub convex_soft: bool,
    pub concave_soft: bool,
}

/// Shape of the middle value `f2` relative to its neighbours; all
/// comparisons are strict.
pub fn classify_triple(f1: f64, f2: f64, f3: f64) -> TripleShape {
    let mid = 0.5 * (f1 + f3);
    TripleShape {
        convex_hard: f2 < f1.min(f3),
        concave_hard: f2 > f1.max(f3),
        convex_soft: f2 < mid,
        concave_soft: f2 > mid,
    }
}

/// Collinear triples `(prev, cell, next)` of non-empty cells along one axis,
/// as positions into the summary.
pub fn valid_triples(grid: &CellGrid, summary: &CellSummary) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for (pos, c) in summary.cells.iter().enumerate() {
        let mut stride = 1;
        for j in (0..grid.dim).rev() {
            if c.coords[j] > 0 && c.coords[j] + 1 < grid.blocks {
                let prev = summary.position(c.index - stride);
                let next = summary.position(c.index + stride);
                if let (Some(a), Some(b)) = (prev, next) {
                    out.push([a, pos, b]);
                }
            }
            stride *= grid.blocks;
        }
    }
    out
}

/// Frequencies of convex and concave shapes over `n_triples` seeded draws
/// (with replacement) from the valid triples, using `near` representatives.
pub fn cm_conv(grid: &CellGrid, summary: &CellSummary, n_triples: usize, seed: u64) -> Vec<Entry> {
    let triples = valid_triples(grid, summary);
    if triples.is_empty() || n_triples == 0 {
        return NAMES.iter().map(|n| entry(n, None)).collect();
    }
    let rep = summary.representatives(Scheme::Near);
    let mut rng = seeded(seed);
    let mut counts = [0usize; 4];
    for _ in 0..n_triples {
        let [a, b, c] = triples[rng.random_range(0..triples.len())];
        let s = classify_triple(rep[a], rep[b], rep[c]);
        for (k, hit) in [s.convex_hard, s.concave_hard, s.convex_soft, s.concave_soft].into_iter().enumerate() {
            counts[k] += usize::from(hit);
        }
    }
    NAMES.iter().zip(counts).map(|(n, c)| entry(n, Some(c as f64 / n_triples as f64))).collect()
}
