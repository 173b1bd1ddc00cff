use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::seeded;

/// Splits `0..l` into `k` disjoint folds whose sizes differ by at most one.
///
/// With `stratify`, indices of each class are shuffled and dealt round-robin
/// across folds (continuing the deal from class to class), so every class is
/// spread as evenly as possible.
pub fn kfold(l: usize, k: usize, stratify: Option<&[usize]>, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k == 0 || k > l {
        return Err(Error::InvalidArgument(format!("cannot split {l} items into {k} folds")));
    }
    let mut rng = seeded(seed);
    let groups: Vec<Vec<usize>> = match stratify {
        Some(labels) => {
            if labels.len() != l {
                return Err(Error::Length { expected: l, got: labels.len() });
            }
            let n_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut groups = vec![Vec::new(); n_classes];
            for (i, &c) in labels.iter().enumerate() {
                groups[c].push(i);
            }
            groups
        }
        None => vec![(0..l).collect()],
    };
    let mut folds = vec![Vec::with_capacity(l / k + 1); k];
    let mut dealt = 0usize;
    for mut g in groups {
        g.shuffle(&mut rng);
        for i in g {
            folds[dealt % k].push(i);
            dealt += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}
