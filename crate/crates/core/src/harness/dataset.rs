use std::collections::BTreeMap;
use std::io::Write;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Deadline;
use crate::error::{Error, Result};
use crate::features::{Entry, FeatureConfig};
use crate::harness::{compute_design_features, FeatureSetSpec};
use crate::rng::derive_seed;
use crate::sampling::build_design;
use crate::sampling::format_float;
use crate::stats;
use crate::testbed::{function_ids, make_instance, Property, PropertyLabels};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub dim: usize,
    pub functions: Vec<u32>,
    /// Instances `1..=instances` of every function.
    pub instances: u64,
    pub sample_factor: usize,
    pub m: usize,
    pub seed: u64,
    /// Per-design time budget.
    pub budget_seconds: Option<f64>,
    pub features: FeatureConfig,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            dim: 10,
            functions: function_ids(),
            instances: 15,
            sample_factor: 50,
            m: 2,
            seed: 0,
            budget_seconds: None,
            features: FeatureConfig::default(),
        }
    }
}

/// Unprocessed features of one `(function, instance)` design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub function_id: u32,
    pub instance: u64,
    pub entries: Vec<Entry>,
}

/// Computes the raw feature rows of every `(function, instance)` pair in
/// parallel; row order is function-major and does not depend on scheduling.
pub fn compute_rows(config: &DatasetConfig, spec: &FeatureSetSpec) -> Result<Vec<RawRow>> {
    let pairs: Vec<(u32, u64)> =
        config.functions.iter().flat_map(|&f| (1..=config.instances).map(move |i| (f, i))).collect();
    pairs
        .par_iter()
        .map(|&(fid, inst)| {
            let instance = make_instance(fid, config.dim, inst)?;
            let l = config.sample_factor * config.dim;
            let design = build_design(&instance, l, derive_seed(config.seed, &[fid as u64, inst]))?;
            let deadline = config.budget_seconds.map(|s| Deadline::after(Duration::from_secs_f64(s)));
            let mut features = config.features.clone();
            features.seed = derive_seed(config.seed, &[fid as u64, inst, 1]);
            let entries = compute_design_features(&design, &spec.groups, config.m, &features, deadline.as_ref())?;
            Ok(RawRow { function_id: fid, instance: inst, entries })
        })
        .collect()
}

/// Model-ready feature matrix with labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub feature_set: String,
    pub dim: usize,
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub function_ids: Vec<u32>,
    pub instances: Vec<u64>,
    pub labels: Vec<PropertyLabels>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Class indices of `task` per row.
    pub fn class_labels(&self, task: Property) -> Vec<usize> {
        self.labels
            .iter()
            .map(|l| task.class_index(l.get(task)).expect("suite labels are valid"))
            .collect()
    }

    /// `function_id,instance,<features...>,<properties...>`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["function_id".to_string(), "instance".to_string()];
        header.extend(self.feature_names.iter().cloned());
        header.extend(Property::ALL.iter().map(|p| p.name().to_string()));
        wr.write_record(&header)?;
        for i in 0..self.rows.len() {
            let mut rec = vec![self.function_ids[i].to_string(), self.instances[i].to_string()];
            rec.extend(self.rows[i].iter().map(|v| format_float(*v)));
            rec.extend(Property::ALL.iter().map(|&p| self.labels[i].get(p).to_string()));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn is_runtime(name: &str) -> bool {
    name.ends_with("costs_runtime")
}

/// Turns raw rows into a matrix: runtime columns are left out unless
/// `include_runtime`, remaining undefined values are replaced by the column
/// median, and columns that are entirely undefined or constant are dropped.
pub fn assemble(raw: &[RawRow], feature_set: &str, dim: usize, include_runtime: bool) -> Result<Dataset> {
    if raw.is_empty() {
        return Err(Error::InvalidArgument("no rows to assemble".into()));
    }
    let names: Vec<String> = raw[0]
        .entries
        .iter()
        .map(|(n, _)| n.clone())
        .filter(|n| include_runtime || !is_runtime(n))
        .collect();
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(raw.len()); names.len()];
    for row in raw {
        let map: BTreeMap<&str, Option<f64>> = row.entries.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        for (c, name) in names.iter().enumerate() {
            let v = map
                .get(name.as_str())
                .ok_or_else(|| Error::InvalidArgument(format!("row lacks feature `{name}`")))?;
            columns[c].push(*v);
        }
    }
    let mut kept_names = Vec::new();
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for (name, col) in names.into_iter().zip(columns) {
        let defined: Vec<f64> = col.iter().flatten().copied().collect();
        let Some(median) = stats::median(&defined) else { continue };
        let filled: Vec<f64> = col.iter().map(|v| v.unwrap_or(median)).collect();
        if filled.iter().all(|&v| v == filled[0]) {
            continue;
        }
        kept_names.push(name);
        kept.push(filled);
    }
    if kept.is_empty() {
        return Err(Error::InvalidArgument("every feature column is constant or undefined".into()));
    }
    let rows = (0..raw.len()).map(|i| kept.iter().map(|c| c[i]).collect()).collect();
    let labels = raw
        .iter()
        .map(|r| crate::testbed::function_spec(r.function_id).map(|s| s.labels))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        feature_set: feature_set.to_string(),
        dim,
        feature_names: kept_names,
        rows,
        function_ids: raw.iter().map(|r| r.function_id).collect(),
        instances: raw.iter().map(|r| r.instance).collect(),
        labels,
    })
}

/// [`compute_rows`] followed by [`assemble`] without runtime columns.
pub fn assemble_dataset(config: &DatasetConfig, spec: &FeatureSetSpec) -> Result<Dataset> {
    let raw = compute_rows(config, spec)?;
    assemble(&raw, &spec.name, config.dim, false)
}
