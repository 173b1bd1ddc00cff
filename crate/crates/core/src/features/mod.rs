//! Landscape feature groups.
//!
//! Every group turns a `(points, objectives)` pair into a [`FeatureVector`]
//! whose entries are named `<group>.<feature>`; inputs coming from a reduced
//! sample get a `d_` prefix on every name. Undefined entries are kept as
//! `None` instead of being dropped.

mod basic;
mod disp;
mod distr;
mod ic;
mod level;
mod limo;
mod meta;
mod nbc;
mod pca;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::budget::Deadline;
use crate::cellmap::{self, build_grid};
use crate::dimred::{normalize_unit_box, ReducedSample};
use crate::error::{Error, Result};
use crate::sampling::DesignSample;
use crate::testbed::Bounds;

pub use basic::basic;
pub use disp::disp;
pub use distr::ela_distr;
pub use ic::{ic, ic_symbols, nn_tour, tour_slopes};
pub use level::ela_level;
pub use limo::{limo, limo_blocks};
pub use meta::ela_meta;
pub use nbc::nbc;
pub use pca::pca_features;

pub const REDUCED_PREFIX: &str = "d_";

pub type Entry = (String, Option<f64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub entries: Vec<Entry>,
    pub cost_evals: u64,
    pub cost_seconds: f64,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<Option<f64>> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    ElaDistr,
    ElaLevel,
    ElaMeta,
    Nbc,
    Disp,
    Ic,
    Basic,
    Limo,
    Pca,
    CmAngle,
    CmConv,
    CmGrad,
    Gcm,
}

impl Group {
    pub const ALL: [Group; 13] = [
        Group::ElaDistr,
        Group::ElaLevel,
        Group::ElaMeta,
        Group::Nbc,
        Group::Disp,
        Group::Ic,
        Group::Basic,
        Group::Limo,
        Group::Pca,
        Group::CmAngle,
        Group::CmConv,
        Group::CmGrad,
        Group::Gcm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::ElaDistr => "ela_distr",
            Group::ElaLevel => "ela_level",
            Group::ElaMeta => "ela_meta",
            Group::Nbc => "nbc",
            Group::Disp => "disp",
            Group::Ic => "ic",
            Group::Basic => "basic",
            Group::Limo => "limo",
            Group::Pca => "pca",
            Group::CmAngle => "cm_angle",
            Group::CmConv => "cm_conv",
            Group::CmGrad => "cm_grad",
            Group::Gcm => "gcm",
        }
    }

    pub fn is_cellmap(self) -> bool {
        matches!(self, Group::CmAngle | Group::CmConv | Group::CmGrad | Group::Gcm)
    }

    /// Number of entries the group emits, costs included.
    pub fn entry_count(self) -> usize {
        match self {
            Group::ElaDistr => 5,
            Group::ElaLevel => 20,
            Group::ElaMeta => 11,
            Group::Nbc => 7,
            Group::Disp => 18,
            Group::Ic => 7,
            Group::Basic => 15,
            Group::Limo => 14,
            Group::Pca => 10,
            Group::CmAngle => 10,
            Group::CmConv => 6,
            Group::CmGrad => 4,
            Group::Gcm => 75,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// Tunable parameters shared by all groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub seed: u64,
    /// Blocks per dimension for the cell-mapping groups and `basic`.
    pub blocks: usize,
    pub grid_limit: u64,
    pub level_quantiles: Vec<f64>,
    pub level_folds: usize,
    pub disp_quantiles: Vec<f64>,
    /// Number of log-spaced non-zero thresholds in the `ic` grid.
    pub ic_eps_count: usize,
    pub conv_triples: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            blocks: 3,
            grid_limit: cellmap::DEFAULT_GRID_LIMIT,
            level_quantiles: vec![0.10, 0.25, 0.50],
            level_folds: 10,
            disp_quantiles: vec![0.02, 0.05, 0.10, 0.25],
            ic_eps_count: 1000,
            conv_triples: 1000,
        }
    }
}

/// Points and objectives a group is computed on.
#[derive(Debug, Clone)]
pub struct FeatureInput<'a> {
    pub points: ArrayView2<'a, f64>,
    pub objectives: &'a [f64],
    pub bounds: Bounds,
    pub reduced: bool,
}

impl<'a> FeatureInput<'a> {
    pub fn new(points: ArrayView2<'a, f64>, objectives: &'a [f64], bounds: Bounds, reduced: bool) -> Result<Self> {
        if points.nrows() != objectives.len() {
            return Err(Error::Length { expected: points.nrows(), got: objectives.len() });
        }
        if bounds.dim() != points.ncols() {
            return Err(Error::Length { expected: points.ncols(), got: bounds.dim() });
        }
        Ok(Self { points, objectives, bounds, reduced })
    }

    pub fn from_design(design: &'a DesignSample) -> Self {
        Self {
            points: design.points.view(),
            objectives: &design.objectives,
            bounds: design.bounds.clone(),
            reduced: false,
        }
    }

    /// Reduced samples use the bounding box of the projected points.
    pub fn from_reduced(reduced: &'a ReducedSample) -> Result<Self> {
        Ok(Self {
            points: reduced.points.view(),
            objectives: &reduced.objectives,
            bounds: Bounds::enclosing(reduced.points.view())?,
            reduced: true,
        })
    }

    pub fn len(&self) -> usize {
        self.objectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objectives.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn prefix(&self) -> &'static str {
        if self.reduced {
            REDUCED_PREFIX
        } else {
            ""
        }
    }
}

/// Adds the two cost entries and qualifies every name with `prefix + group`.
pub(crate) fn finish(prefix: &str, group: Group, raw: Vec<Entry>, seconds: f64) -> FeatureVector {
    let mut entries: Vec<Entry> =
        raw.into_iter().map(|(n, v)| (format!("{prefix}{group}.{n}"), v)).collect();
    if group != Group::Gcm {
        entries.push((format!("{prefix}{group}.costs_fun_evals"), Some(0.0)));
        entries.push((format!("{prefix}{group}.costs_runtime"), Some(seconds)));
    }
    FeatureVector { entries, cost_evals: 0, cost_seconds: seconds }
}

/// Computes one group by name. Names carry no `d_` prefix; it is derived
/// from the input. `cost_seconds` covers the computation only.
pub fn compute_group(
    name: &str,
    input: &FeatureInput<'_>,
    config: &FeatureConfig,
    deadline: Option<&Deadline>,
) -> Result<FeatureVector> {
    let group: Group = name.parse()?;
    let start = Instant::now();
    let raw = compute_raw(group, input, config, deadline)?;
    Ok(finish(input.prefix(), group, raw, start.elapsed().as_secs_f64()))
}

fn compute_raw(
    group: Group,
    input: &FeatureInput<'_>,
    config: &FeatureConfig,
    deadline: Option<&Deadline>,
) -> Result<Vec<Entry>> {
    let x = input.points;
    let y = input.objectives;
    if group.is_cellmap() {
        let (points, bounds): (Array2<f64>, Bounds) = if input.reduced {
            (normalize_unit_box(x), Bounds::uniform(input.dim(), 0.0, 1.0)?)
        } else {
            (x.to_owned(), input.bounds.clone())
        };
        let (grid, summary) = build_grid(points.view(), y, config.blocks, &bounds, config.grid_limit)?;
        return match group {
            Group::CmAngle => Ok(cellmap::cm_angle(&grid, &summary, points.view(), y)),
            Group::CmConv => Ok(cellmap::cm_conv(&grid, &summary, config.conv_triples, config.seed)),
            Group::CmGrad => Ok(cellmap::cm_grad(&summary, points.view(), y)),
            Group::Gcm => cellmap::gcm(&grid, &summary, y, deadline),
            _ => unreachable!(),
        };
    }
    match group {
        Group::ElaDistr => ela_distr(y),
        Group::ElaLevel => ela_level(x, y, &config.level_quantiles, config.level_folds, config.seed, deadline),
        Group::ElaMeta => ela_meta(x, y),
        Group::Nbc => nbc(x, y, deadline),
        Group::Disp => disp(x, y, &config.disp_quantiles, deadline),
        Group::Ic => ic(x, y, config.ic_eps_count, config.seed, deadline),
        Group::Basic => basic(x, y, &input.bounds, config.blocks),
        Group::Limo => limo(x, y, &input.bounds, limo_blocks(input.dim()), deadline),
        Group::Pca => pca_features(x, y),
        _ => unreachable!(),
    }
}

pub(crate) fn entry(name: &str, value: Option<f64>) -> Entry {
    (name.to_string(), value.filter(|v| v.is_finite()))
}

pub(crate) fn require_rows(l: usize, min: usize, what: &str) -> Result<()> {
    if l < min {
        return Err(Error::InvalidArgument(format!("{what} needs at least {min} observations, got {l}")));
    }
    Ok(())
}

/// Euclidean distance between rows `i` and `j`.
pub(crate) fn row_dist(x: ArrayView2<'_, f64>, i: usize, j: usize) -> f64 {
    let a = x.row(i);
    let b = x.row(j);
    a.iter().zip(b.iter()).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Two-digit percentage suffix, e.g. `0.05 -> "05"`.
pub(crate) fn pct(q: f64) -> String {
    format!("{:02}", (q * 100.0).round() as i64)
}
