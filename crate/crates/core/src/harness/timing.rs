use std::io::Write;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::budget::Deadline;
use crate::dimred::reduce;
use crate::error::{Error, Result};
use crate::features::{compute_group, FeatureConfig, FeatureInput};
use crate::harness::GroupRef;
use crate::rng::derive_seed;
use crate::sampling::build_design;
use crate::stats;
use crate::testbed::make_instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimingStatus {
    Ok,
    TimedOut,
    Failed,
}

impl TimingStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TimingStatus::Ok => "ok",
            TimingStatus::TimedOut => "timed_out",
            TimingStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub group: String,
    pub dim: usize,
    pub sample_size: usize,
    pub rep: usize,
    /// `None` unless the run finished.
    pub seconds: Option<f64>,
    pub status: TimingStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimingConfig {
    pub groups: Vec<GroupRef>,
    pub dims: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub function_id: u32,
    pub instance: u64,
    /// Sample size per dimension.
    pub sample_factor: usize,
    /// Reduced dimension for `d_` groups.
    pub m: usize,
    pub budget_seconds: f64,
    pub features: FeatureConfig,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            groups: Vec::new(),
            dims: vec![2, 3, 5, 10, 20, 40, 80, 160],
            reps: 5,
            seed: 0,
            function_id: 1,
            instance: 1,
            sample_factor: 50,
            m: 2,
            budget_seconds: 600.0,
            features: FeatureConfig::default(),
        }
    }
}

/// Times every group on fresh designs, one record per `(dim, rep, group)`.
/// Only the feature computation is timed (plus the reduction for `d_`
/// groups); design generation is excluded.
pub fn time_features(config: &TimingConfig) -> Result<Vec<TimingRecord>> {
    let mut out = Vec::with_capacity(config.dims.len() * config.reps * config.groups.len());
    for &dim in &config.dims {
        let instance = make_instance(config.function_id, dim, config.instance)?;
        let l = config.sample_factor * dim;
        for rep in 0..config.reps {
            let design = build_design(&instance, l, derive_seed(config.seed, &[dim as u64, rep as u64]))?;
            for g in &config.groups {
                let deadline = Deadline::after(Duration::from_secs_f64(config.budget_seconds));
                let start = Instant::now();
                let result = if g.reduced {
                    reduce(&design, config.m).and_then(|r| {
                        let input = FeatureInput::from_reduced(&r)?;
                        compute_group(g.group.name(), &input, &config.features, Some(&deadline))
                    })
                } else {
                    compute_group(g.group.name(), &FeatureInput::from_design(&design), &config.features, Some(&deadline))
                };
                let elapsed = start.elapsed().as_secs_f64();
                let (seconds, status) = match result {
                    Ok(_) => (Some(elapsed), TimingStatus::Ok),
                    Err(Error::BudgetExceeded(_)) => (None, TimingStatus::TimedOut),
                    Err(_) => (None, TimingStatus::Failed),
                };
                out.push(TimingRecord { group: g.to_string(), dim, sample_size: l, rep, seconds, status });
            }
        }
    }
    Ok(out)
}

/// Median seconds of `group` at `dim`. Timed-out runs count as
/// `timeout_value` (a lower bound); failed runs are ignored.
pub fn median_seconds(records: &[TimingRecord], group: &str, dim: usize, timeout_value: f64) -> Option<f64> {
    let v: Vec<f64> = records
        .iter()
        .filter(|r| r.group == group && r.dim == dim)
        .filter_map(|r| match r.status {
            TimingStatus::Ok => r.seconds,
            TimingStatus::TimedOut => Some(timeout_value),
            TimingStatus::Failed => None,
        })
        .collect();
    stats::median(&v)
}

/// `group,dim,sample_size,rep,seconds,status`; unfinished runs have an
/// empty `seconds` field.
pub fn write_timing_csv<W: Write>(w: W, records: &[TimingRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["group", "dim", "sample_size", "rep", "seconds", "status"])?;
    for r in records {
        wr.write_record([
            r.group.clone(),
            r.dim.to_string(),
            r.sample_size.to_string(),
            r.rep.to_string(),
            r.seconds.map(|s| format!("{s:.6}")).unwrap_or_default(),
            r.status.as_str().to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
