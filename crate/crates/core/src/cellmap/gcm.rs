use std::collections::BTreeMap;
use std::time::Instant;

use crate::budget::{self, Deadline};
use crate::cellmap::{CellGrid, CellSummary, Scheme};
use crate::error::Result;
use crate::features::{entry, Entry};
use crate::stats;

/// Absorption probabilities of the cell chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Absorption {
    /// Summary positions of the attractor cells, ascending.
    pub attractors: Vec<usize>,
    /// Per cell: `(attractor slot, probability)` with positive probability,
    /// sorted by slot.
    pub probs: Vec<Vec<(usize, f64)>>,
}

impl Absorption {
    pub fn is_uncertain(&self, cell: usize) -> bool {
        self.probs[cell].len() > 1
    }
}

/// Positions of the non-empty axis neighbours of each cell with a strictly
/// smaller value.
pub fn better_neighbors(grid: &CellGrid, summary: &CellSummary, values: &[f64]) -> Vec<Vec<usize>> {
    summary
        .cells
        .iter()
        .enumerate()
        .map(|(p, c)| {
            grid.neighbors(c.index)
                .into_iter()
                .filter_map(|n| summary.position(n))
                .filter(|&q| values[q] < values[p])
                .collect()
        })
        .collect()
}

/// Each cell moves uniformly to one of its strictly better neighbours;
/// cells without one absorb. Transitions only lead to smaller values, so
/// the chain is acyclic and probabilities follow exactly by propagating in
/// increasing value order.
pub fn absorption(grid: &CellGrid, summary: &CellSummary, values: &[f64]) -> Absorption {
    let n = summary.cells.len();
    let better = better_neighbors(grid, summary, values);
    let attractors: Vec<usize> = (0..n).filter(|&p| better[p].is_empty()).collect();
    let mut slot = vec![usize::MAX; n];
    for (s, &p) in attractors.iter().enumerate() {
        slot[p] = s;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut probs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for p in order {
        if better[p].is_empty() {
            probs[p] = vec![(slot[p], 1.0)];
            continue;
        }
        let w = 1.0 / better[p].len() as f64;
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for &q in &better[p] {
            for &(s, v) in &probs[q] {
                *acc.entry(s).or_insert(0.0) += w * v;
            }
        }
        probs[p] = acc.into_iter().collect();
    }
    Absorption { attractors, probs }
}

fn five(name: &str, v: &[f64]) -> [Entry; 5] {
    [
        entry(&format!("{name}.min"), stats::min(v)),
        entry(&format!("{name}.mean"), stats::mean(v)),
        entry(&format!("{name}.median"), stats::median(v)),
        entry(&format!("{name}.max"), stats::max(v)),
        entry(&format!("{name}.sd"), stats::sd(v)),
    ]
}

/// The 23 chain statistics of one representative scheme.
pub fn gcm_scheme(grid: &CellGrid, summary: &CellSummary, scheme: Scheme) -> Vec<Entry> {
    let values = summary.representatives(scheme);
    let chain = absorption(grid, summary, &values);
    let n = values.len() as f64;
    let k = chain.attractors.len();
    let mut basin_prob = vec![0.0; k];
    let mut basin_certain = vec![0.0; k];
    let mut basin_uncertain = vec![0.0; k];
    let mut uncertain = 0usize;
    for row in &chain.probs {
        let certain = row.len() == 1;
        uncertain += usize::from(!certain);
        for &(s, v) in row {
            basin_prob[s] += v / n;
            if certain {
                basin_certain[s] += 1.0 / n;
            } else {
                basin_uncertain[s] += 1.0 / n;
            }
        }
    }

    let best_cell = summary
        .cells
        .iter()
        .position(|c| c.members.contains(&summary.global_best))
        .expect("global best lies in a cell");
    let best_slot = chain.probs[best_cell]
        .iter()
        .fold(None::<(usize, f64)>, |acc, &(s, v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((s, v)),
        })
        .map(|(s, _)| s)
        .expect("every cell absorbs somewhere");
    let attr_values: Vec<f64> = chain.attractors.iter().map(|&p| values[p]).collect();
    let top = stats::min(&attr_values).unwrap_or(f64::NAN);
    let tied = attr_values.iter().filter(|&&v| v == top).count();

    let mut out = vec![
        entry("attractors", Some(k as f64)),
        entry("pcells", Some(k as f64 / n)),
        entry("tcells", Some((n - k as f64) / n)),
        entry("uncertain", Some(uncertain as f64 / n)),
    ];
    out.extend(five("basin_prob", &basin_prob));
    out.extend(five("basin_certain", &basin_certain));
    out.extend(five("basin_uncertain", &basin_uncertain));
    out.push(entry("best_attr.prob", Some(basin_prob[best_slot])));
    out.push(entry("best_attr.certain", Some(basin_certain[best_slot])));
    out.push(entry("best_attr.uncertain", Some(basin_uncertain[best_slot])));
    out.push(entry("best_attr.no", Some(tied as f64)));
    out
}

/// General cell-mapping features for the `min`, `mean` and `near`
/// representatives, each with its own cost entries.
pub fn gcm(grid: &CellGrid, summary: &CellSummary, _y: &[f64], deadline: Option<&Deadline>) -> Result<Vec<Entry>> {
    let mut out = Vec::with_capacity(75);
    for scheme in Scheme::ALL {
        budget::check(deadline)?;
        let start = Instant::now();
        let entries = gcm_scheme(grid, summary, scheme);
        let secs = start.elapsed().as_secs_f64();
        let s = scheme.name();
        out.extend(entries.into_iter().map(|(n, v)| (format!("{s}.{n}"), v)));
        out.push((format!("{s}.costs_fun_evals"), Some(0.0)));
        out.push((format!("{s}.costs_runtime"), Some(secs)));
    }
    Ok(out)
}
