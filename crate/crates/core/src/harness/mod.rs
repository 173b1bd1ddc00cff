//! Experiment drivers: feature-cost timing, property classification over
//! the suite, and agreement between original and reduced features.

mod cv;
mod dataset;
mod similarity;
mod sweep;
mod timing;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::Deadline;
use crate::dimred::reduce;
use crate::error::{Error, Result};
use crate::features::{compute_group, Entry, FeatureConfig, FeatureInput, Group, REDUCED_PREFIX};
use crate::sampling::DesignSample;

pub use cv::{loio_cv, lopo_cv, CvResult, CvScheme, FoldResult};
pub use dataset::{assemble, assemble_dataset, compute_rows, Dataset, DatasetConfig, RawRow};
pub use similarity::{similarity, write_similarity_csv, SimilarityRecord};
pub use sweep::{sweep_m, SweepTable};
pub use timing::{median_seconds, time_features, write_timing_csv, TimingConfig, TimingRecord, TimingStatus};

/// A group on either the original or the reduced sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupRef {
    pub group: Group,
    pub reduced: bool,
}

impl GroupRef {
    pub fn original(group: Group) -> Self {
        Self { group, reduced: false }
    }

    pub fn reduced(group: Group) -> Self {
        Self { group, reduced: true }
    }
}

impl fmt::Display for GroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reduced {
            f.write_str(REDUCED_PREFIX)?;
        }
        f.write_str(self.group.name())
    }
}

impl FromStr for GroupRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix(REDUCED_PREFIX) {
            Some(rest) => Ok(Self::reduced(rest.parse()?)),
            None => Ok(Self::original(s.parse()?)),
        }
    }
}

impl Serialize for GroupRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const C7: [Group; 7] = [Group::ElaDistr, Group::Basic, Group::Ic, Group::Disp, Group::Nbc, Group::Pca, Group::Limo];
pub const CELL_GROUPS: [Group; 4] = [Group::Gcm, Group::CmAngle, Group::CmConv, Group::CmGrad];

/// A named menu of feature groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSetSpec {
    pub name: String,
    pub groups: Vec<GroupRef>,
}

impl FeatureSetSpec {
    pub const NAMES: [&'static str; 5] = ["C7", "C7-E2", "C7-D2", "C7-C4", "C7-D4"];

    /// `C7`, `C7-E2`, `C7-D2`, `C7-C4` or `C7-D4`.
    pub fn named(name: &str) -> Result<Self> {
        let mut groups: Vec<GroupRef> = C7.iter().copied().map(GroupRef::original).collect();
        let extra = [Group::ElaLevel, Group::ElaMeta];
        match name {
            "C7" => {}
            "C7-E2" => groups.extend(extra.map(GroupRef::original)),
            "C7-D2" => groups.extend(extra.map(GroupRef::reduced)),
            "C7-C4" => groups.extend(CELL_GROUPS.map(GroupRef::original)),
            "C7-D4" => groups.extend(CELL_GROUPS.map(GroupRef::reduced)),
            _ => return Err(Error::InvalidArgument(format!("unknown feature set `{name}`"))),
        }
        Ok(Self { name: name.to_string(), groups })
    }

    pub fn custom(name: &str, groups: Vec<GroupRef>) -> Self {
        Self { name: name.to_string(), groups }
    }

    pub fn needs_reduction(&self) -> bool {
        self.groups.iter().any(|g| g.reduced)
    }
}

/// Computes `groups` on one design, reducing it to `m` dimensions once if
/// any group asks for the reduced sample.
pub fn compute_design_features(
    design: &DesignSample,
    groups: &[GroupRef],
    m: usize,
    config: &FeatureConfig,
    deadline: Option<&Deadline>,
) -> Result<Vec<Entry>> {
    let reduced = if groups.iter().any(|g| g.reduced) { Some(reduce(design, m)?) } else { None };
    let original = FeatureInput::from_design(design);
    let reduced_input = reduced.as_ref().map(FeatureInput::from_reduced).transpose()?;
    let mut out = Vec::new();
    for g in groups {
        let input = if g.reduced { reduced_input.as_ref().expect("reduced sample built") } else { &original };
        out.extend(compute_group(g.group.name(), input, config, deadline)?.entries);
    }
    Ok(out)
}
