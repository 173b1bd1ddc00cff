use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::REDUCED_PREFIX;
use crate::harness::RawRow;
use crate::ml::kendall_tau;
use crate::stats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityRecord {
    /// Name without the `d_` prefix.
    pub feature: String,
    /// `None` when the feature was skipped.
    pub tau: Option<f64>,
    pub n_functions: usize,
}

/// Per-function means of each feature over instances; `None` if a function
/// has no defined value.
fn function_means(rows: &[RawRow], strip_prefix: bool) -> BTreeMap<String, BTreeMap<u32, Option<f64>>> {
    let mut acc: BTreeMap<String, BTreeMap<u32, Vec<f64>>> = BTreeMap::new();
    for r in rows {
        for (name, v) in &r.entries {
            let key = if strip_prefix { name.strip_prefix(REDUCED_PREFIX).unwrap_or(name) } else { name };
            let per_fn = acc.entry(key.to_string()).or_default().entry(r.function_id).or_default();
            if let Some(v) = v {
                per_fn.push(*v);
            }
        }
    }
    acc.into_iter()
        .map(|(k, m)| (k, m.into_iter().map(|(f, v)| (f, stats::mean(&v))).collect()))
        .collect()
}

fn all_distinct(v: &[f64]) -> bool {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).all(|w| w[0] != w[1])
}

/// Kendall tau between per-function mean values of each feature on the
/// original sample and its `d_` counterpart on the reduced sample. Features
/// whose mean vectors contain repeated or undefined values are skipped.
pub fn similarity(original: &[RawRow], reduced: &[RawRow]) -> Result<Vec<SimilarityRecord>> {
    let a = function_means(original, false);
    let b = function_means(reduced, true);
    let mut out = Vec::new();
    for (name, fa) in &a {
        let Some(fb) = b.get(name) else { continue };
        let fns: Vec<u32> = fa.keys().filter(|f| fb.contains_key(f)).copied().collect();
        if fns.len() < 3 {
            return Err(Error::InvalidArgument(format!("feature `{name}` is shared by fewer than 3 functions")));
        }
        let va: Option<Vec<f64>> = fns.iter().map(|f| fa[f]).collect();
        let vb: Option<Vec<f64>> = fns.iter().map(|f| fb[f]).collect();
        let tau = match (va, vb) {
            (Some(va), Some(vb)) if all_distinct(&va) && all_distinct(&vb) => kendall_tau(&va, &vb)?,
            _ => None,
        };
        out.push(SimilarityRecord { feature: name.clone(), tau, n_functions: fns.len() });
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no feature is shared by both tables".into()));
    }
    Ok(out)
}

/// `feature,tau,n_functions`; skipped features have an empty `tau`.
pub fn write_similarity_csv<W: Write>(w: W, records: &[SimilarityRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["feature", "tau", "n_functions"])?;
    for r in records {
        wr.write_record([r.feature.clone(), r.tau.map(|t| format!("{t:.6}")).unwrap_or_default(), r.n_functions.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}
