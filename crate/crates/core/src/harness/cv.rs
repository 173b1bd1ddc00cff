use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::Dataset;
use crate::ml::{forest_predict, forest_train};
use crate::rng::derive_seed;
use crate::stats;
use crate::testbed::Property;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvScheme {
    /// One fold per function.
    Lopo,
    /// One fold per instance index.
    Loio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    /// Held-out function id (LOPO) or instance index (LOIO).
    pub held_out: u64,
    /// `None` when the fold was skipped.
    pub accuracy: Option<f64>,
    /// Accuracy of predicting the training majority class.
    pub baseline: Option<f64>,
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub task: Property,
    pub scheme: CvScheme,
    pub feature_set: String,
    pub dim: usize,
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
    pub mean_baseline: f64,
    /// `(feature, average rank)`, rank 1 = most important, sorted by rank.
    pub importance_ranks: Vec<(String, f64)>,
}

fn majority(labels: &[usize]) -> usize {
    let k = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut counts = vec![0usize; k];
    for &c in labels {
        counts[c] += 1;
    }
    (0..k).fold(0, |best, c| if counts[c] > counts[best] { c } else { best })
}

fn accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    pred.iter().zip(truth).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64
}

fn run_cv(ds: &Dataset, task: Property, n_trees: usize, seed: u64, scheme: CvScheme) -> Result<CvResult> {
    if ds.is_empty() {
        return Err(Error::InvalidArgument("empty dataset".into()));
    }
    let labels = ds.class_labels(task);
    let key: Vec<u64> = match scheme {
        CvScheme::Lopo => ds.function_ids.iter().map(|&f| f as u64).collect(),
        CvScheme::Loio => ds.instances.clone(),
    };
    let mut groups = key.clone();
    groups.sort_unstable();
    groups.dedup();

    let p = ds.feature_names.len();
    let mut rank_sum = vec![0.0; p];
    let mut ranked_folds = 0usize;
    let mut folds = Vec::with_capacity(groups.len());
    for (f, &held) in groups.iter().enumerate() {
        let train: Vec<usize> = (0..ds.len()).filter(|&i| key[i] != held).collect();
        let test: Vec<usize> = (0..ds.len()).filter(|&i| key[i] == held).collect();
        assert!(train.iter().all(|&i| key[i] != held), "held-out group leaked into training");
        let ytr: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
        let truth: Vec<usize> = test.iter().map(|&i| labels[i]).collect();
        let first = ytr[0];
        if ytr.iter().all(|&c| c == first) {
            folds.push(FoldResult { held_out: held, accuracy: None, baseline: None, skipped: true });
            continue;
        }
        let xtr: Vec<Vec<f64>> = train.iter().map(|&i| ds.rows[i].clone()).collect();
        let xte: Vec<Vec<f64>> = test.iter().map(|&i| ds.rows[i].clone()).collect();
        let model = forest_train(&xtr, &ytr, n_trees, derive_seed(seed, &[f as u64]))?;
        let acc = accuracy(&forest_predict(&model, &xte), &truth);
        let base = accuracy(&vec![majority(&ytr); truth.len()], &truth);
        let neg: Vec<f64> = model.importances.iter().map(|v| -v).collect();
        for (s, r) in rank_sum.iter_mut().zip(stats::average_ranks(&neg)) {
            *s += r;
        }
        ranked_folds += 1;
        folds.push(FoldResult { held_out: held, accuracy: Some(acc), baseline: Some(base), skipped: false });
    }
    let accs: Vec<f64> = folds.iter().filter_map(|f| f.accuracy).collect();
    let bases: Vec<f64> = folds.iter().filter_map(|f| f.baseline).collect();
    let mean_accuracy =
        stats::mean(&accs).ok_or_else(|| Error::InvalidArgument("every fold had a single training class".into()))?;
    let mut importance_ranks: Vec<(String, f64)> = ds
        .feature_names
        .iter()
        .cloned()
        .zip(rank_sum.iter().map(|s| s / ranked_folds as f64))
        .collect();
    importance_ranks.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(CvResult {
        task,
        scheme,
        feature_set: ds.feature_set.clone(),
        dim: ds.dim,
        folds,
        mean_accuracy,
        mean_baseline: stats::mean(&bases).unwrap_or(0.0),
        importance_ranks,
    })
}

/// Leave-one-problem-out cross-validation of a random forest.
pub fn lopo_cv(ds: &Dataset, task: Property, n_trees: usize, seed: u64) -> Result<CvResult> {
    run_cv(ds, task, n_trees, seed, CvScheme::Lopo)
}

/// Leave-one-instance-out cross-validation of a random forest.
pub fn loio_cv(ds: &Dataset, task: Property, n_trees: usize, seed: u64) -> Result<CvResult> {
    run_cv(ds, task, n_trees, seed, CvScheme::Loio)
}
