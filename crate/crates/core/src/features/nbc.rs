use ndarray::ArrayView2;

use crate::budget::{self, Deadline};
use crate::error::Result;
use crate::features::{entry, require_rows, row_dist, Entry};
use crate::stats;

pub const NAMES: [&str; 5] =
    ["nn_nb.sd_ratio", "nn_nb.mean_ratio", "nn_nb.cor", "dist_ratio.coeff_var", "nb_fitness.cor"];

/// Nearest-neighbour and nearest-better distances of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestBetter {
    pub nn: Vec<f64>,
    pub nb: Vec<f64>,
    /// Nearest strictly better point; `None` for points with no better point.
    pub parent: Vec<Option<usize>>,
}

/// For points without a strictly better point, `nb` is the largest
/// distance to any other point. Distance ties go to the lowest index.
pub fn nearest_better(x: ArrayView2<'_, f64>, y: &[f64], deadline: Option<&Deadline>) -> Result<NearestBetter> {
    let l = y.len();
    let mut nn = vec![f64::INFINITY; l];
    let mut nb = vec![f64::INFINITY; l];
    let mut far = vec![0.0f64; l];
    let mut parent = vec![None; l];
    for i in 0..l {
        if i % 256 == 0 {
            budget::check(deadline)?;
        }
        for j in 0..l {
            if i == j {
                continue;
            }
            let d = row_dist(x, i, j);
            if d < nn[i] {
                nn[i] = d;
            }
            if d > far[i] {
                far[i] = d;
            }
            if y[j] < y[i] && d < nb[i] {
                nb[i] = d;
                parent[i] = Some(j);
            }
        }
    }
    for i in 0..l {
        if parent[i].is_none() {
            nb[i] = far[i];
        }
    }
    Ok(NearestBetter { nn, nb, parent })
}

/// Nearest-better clustering features.
pub fn nbc(x: ArrayView2<'_, f64>, y: &[f64], deadline: Option<&Deadline>) -> Result<Vec<Entry>> {
    let l = y.len();
    require_rows(l, 5, "nbc")?;
    let nbd = nearest_better(x, y, deadline)?;
    if nbd.parent.iter().all(Option::is_none) {
        return Ok(NAMES.iter().map(|n| entry(n, None)).collect());
    }
    let (nn, nb) = (&nbd.nn, &nbd.nb);
    let sd_ratio = stats::sd(nn).zip(stats::sd(nb)).and_then(|(a, b)| (b > 0.0).then(|| a / b));
    let mean_ratio = stats::mean(nn).zip(stats::mean(nb)).and_then(|(a, b)| (b > 0.0).then(|| a / b));
    let ratios: Vec<f64> = nn.iter().zip(nb).filter(|(_, &b)| b > 0.0).map(|(a, b)| a / b).collect();
    let coeff_var = stats::sd(&ratios).zip(stats::mean(&ratios)).and_then(|(s, m)| (m > 0.0).then(|| s / m));
    let mut indegree = vec![0.0; l];
    for p in nbd.parent.iter().flatten() {
        indegree[*p] += 1.0;
    }
    Ok(vec![
        entry(NAMES[0], sd_ratio),
        entry(NAMES[1], mean_ratio),
        entry(NAMES[2], stats::pearson(nn, nb)),
        entry(NAMES[3], coeff_var),
        entry(NAMES[4], stats::pearson(y, &indegree)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn collinear_convention() {
        let x = array![[0.0], [1.0], [3.0]];
        let y = [0.0, 1.0, 3.0];
        let r = nearest_better(x.view(), &y, None).unwrap();
        assert_eq!(r.nb, vec![3.0, 1.0, 2.0]);
        assert_eq!(r.parent, vec![None, Some(0), Some(1)]);
        assert_eq!(r.nn, vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn constant_y_is_undefined() {
        let x = array![[0.0], [1.0], [3.0], [4.0], [7.0]];
        let e = nbc(x.view(), &[1.0; 5], None).unwrap();
        assert_eq!(e.len(), 5);
        assert!(e.iter().all(|(_, v)| v.is_none()));
    }
}
