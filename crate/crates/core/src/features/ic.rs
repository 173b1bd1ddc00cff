use ndarray::ArrayView2;
use rand::Rng as _;

use crate::budget::{self, Deadline};
use crate::error::Result;
use crate::features::{entry, require_rows, row_dist, Entry};
use crate::rng::seeded;

/// Threshold below which the entropy counts as settled.
pub const EPS_S_LEVEL: f64 = 0.05;

/// Greedy nearest-neighbour tour from a seeded random start; distance ties
/// go to the lowest index.
pub fn nn_tour(x: ArrayView2<'_, f64>, seed: u64, deadline: Option<&Deadline>) -> Result<Vec<usize>> {
    let l = x.nrows();
    let mut visited = vec![false; l];
    let mut tour = Vec::with_capacity(l);
    let mut at = seeded(seed).random_range(0..l);
    visited[at] = true;
    tour.push(at);
    for step in 1..l {
        if step % 256 == 0 {
            budget::check(deadline)?;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..l {
            if !visited[j] {
                let d = row_dist(x, at, j);
                if d < best.0 {
                    best = (d, j);
                }
            }
        }
        at = best.1;
        visited[at] = true;
        tour.push(at);
    }
    Ok(tour)
}

/// Slopes `dy / |dx|` along the tour; zero-length steps are skipped.
pub fn tour_slopes(x: ArrayView2<'_, f64>, y: &[f64], tour: &[usize]) -> Vec<f64> {
    tour.windows(2)
        .filter_map(|w| {
            let d = row_dist(x, w[0], w[1]);
            (d > 0.0).then(|| (y[w[1]] - y[w[0]]) / d)
        })
        .collect()
}

/// Symbol sequence in `{-1, 0, 1}` at threshold `eps`.
pub fn ic_symbols(slopes: &[f64], eps: f64) -> Vec<i8> {
    slopes
        .iter()
        .map(|&r| {
            if r > eps {
                1
            } else if r < -eps {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Entropy (base 6) of consecutive unequal symbol pairs.
pub fn entropy(symbols: &[i8]) -> f64 {
    if symbols.len() < 2 {
        return 0.0;
    }
    let mut counts = [[0usize; 3]; 3];
    for w in symbols.windows(2) {
        counts[(w[0] + 1) as usize][(w[1] + 1) as usize] += 1;
    }
    let total = (symbols.len() - 1) as f64;
    let mut h = 0.0;
    for (a, row) in counts.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if a != b && c > 0 {
                let p = c as f64 / total;
                h -= p * p.log(6.0);
            }
        }
    }
    h
}

/// Share of non-zero symbols left after dropping zeros and collapsing runs.
pub fn partial_information(symbols: &[i8]) -> f64 {
    if symbols.is_empty() {
        return 0.0;
    }
    let mut count = 0usize;
    let mut last = 0i8;
    for &s in symbols {
        if s != 0 && s != last {
            count += 1;
            last = s;
        }
    }
    count as f64 / symbols.len() as f64
}

/// `0` followed by `count` log-spaced values in `[1e-5, 1e15] * scale`.
pub fn eps_grid(scale: f64, count: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(count + 1);
    g.push(0.0);
    for i in 0..count {
        let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
        g.push(10f64.powf(-5.0 + 20.0 * t) * scale);
    }
    g
}

fn log10_pos(eps: Option<f64>) -> Option<f64> {
    eps.filter(|&e| e > 0.0).map(f64::log10)
}

/// Information content of the objective along a nearest-neighbour tour.
pub fn ic(x: ArrayView2<'_, f64>, y: &[f64], eps_count: usize, seed: u64, deadline: Option<&Deadline>) -> Result<Vec<Entry>> {
    require_rows(y.len(), 10, "ic")?;
    let tour = nn_tour(x, seed, deadline)?;
    let slopes = tour_slopes(x, y, &tour);
    let scale = slopes.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let grid = if scale > 0.0 { eps_grid(scale, eps_count) } else { vec![0.0] };

    let mut h_max = f64::NEG_INFINITY;
    let mut eps_max = None;
    let mut eps_s = None;
    let mut eps_ratio = None;
    let mut m0 = 0.0;
    for (k, &eps) in grid.iter().enumerate() {
        let sym = ic_symbols(&slopes, eps);
        let h = entropy(&sym);
        let m = partial_information(&sym);
        if k == 0 {
            m0 = m;
        }
        if h > h_max {
            h_max = h;
            eps_max = Some(eps);
        }
        if eps_s.is_none() && h < EPS_S_LEVEL {
            eps_s = Some(eps);
        }
        if eps_ratio.is_none() && m <= 0.5 * m0 {
            eps_ratio = Some(eps);
        }
    }
    Ok(vec![
        entry("h.max", Some(h_max)),
        entry("eps.s", log10_pos(eps_s)),
        entry("eps.max", log10_pos(eps_max)),
        entry("eps.ratio", log10_pos(eps_ratio)),
        entry("m0", Some(m0)),
    ])
}
