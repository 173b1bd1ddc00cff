use ndarray::ArrayView2;

use crate::budget::{self, Deadline};
use crate::error::{Error, Result};
use crate::features::{entry, pct, require_rows, Entry};
use crate::ml::lda_qda_mda_mmce;
use crate::rng::derive_seed;
use crate::stats;

fn ratio(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| a / b)
}

/// Cross-validated misclassification errors of LDA, QDA and MDA on the
/// level sets `y <= quantile_q(y)`, plus their pairwise ratios.
pub fn ela_level(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    quantiles: &[f64],
    folds: usize,
    seed: u64,
    deadline: Option<&Deadline>,
) -> Result<Vec<Entry>> {
    require_rows(y.len(), 40, "ela_level")?;
    let mut out = Vec::with_capacity(6 * quantiles.len());
    for &q in quantiles {
        budget::check(deadline)?;
        let s = pct(q);
        let threshold = stats::quantile(y, q)
            .ok_or_else(|| Error::InvalidArgument(format!("quantile {q} outside [0, 1]")))?;
        let labels: Vec<bool> = y.iter().map(|&v| v <= threshold).collect();
        let ones = labels.iter().filter(|&&b| b).count();
        let mmce = if ones < 2 || y.len() - ones < 2 {
            None
        } else {
            match lda_qda_mda_mmce(x, &labels, folds, derive_seed(seed, &[q.to_bits()]), deadline) {
                Ok(m) => Some(m),
                Err(e @ Error::BudgetExceeded(_)) => return Err(e),
                Err(_) => None,
            }
        };
        let (lda, qda, mda) = match mmce {
            Some(m) => (Some(m.lda), Some(m.qda), Some(m.mda)),
            None => (None, None, None),
        };
        let r = |a: Option<f64>, b: Option<f64>| a.zip(b).and_then(|(a, b)| ratio(a, b));
        out.push(entry(&format!("mmce_lda_{s}"), lda));
        out.push(entry(&format!("mmce_qda_{s}"), qda));
        out.push(entry(&format!("mmce_mda_{s}"), mda));
        out.push(entry(&format!("lda_qda_{s}"), r(lda, qda)));
        out.push(entry(&format!("lda_mda_{s}"), r(lda, mda)));
        out.push(entry(&format!("qda_mda_{s}"), r(qda, mda)));
    }
    Ok(out)
}
