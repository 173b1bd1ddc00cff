use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, ValueEnum};
use ela_core::budget::Deadline;
use ela_core::dimred::reduce;
use ela_core::features::{FeatureConfig, Group};
use ela_core::harness::{
    assemble_dataset, compute_design_features, compute_rows, loio_cv, lopo_cv, similarity, sweep_m,
    time_features, write_similarity_csv, write_timing_csv, CvScheme, DatasetConfig, FeatureSetSpec, GroupRef,
    TimingConfig,
};
use ela_core::sampling::{build_design, default_sample_size, DesignSample};
use ela_core::testbed::{self, make_instance, Property};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{config_hash, is_false, resolve};
use crate::error::{CliError, CliResult};
use crate::output::{Artifact, OutputRoot};

/// Shared state of one invocation.
pub struct Context {
    pub file: Value,
    pub root: OutputRoot,
}

/// Resolves the configuration, runs `body`, then writes the config sidecar
/// next to the primary output.
fn execute<C, A, F>(ctx: &Context, command: &str, args: &A, body: F) -> CliResult<Vec<PathBuf>>
where
    C: DeserializeOwned + Serialize + HasOut,
    A: Serialize,
    F: FnOnce(&C, &Artifact) -> CliResult<Vec<PathBuf>>,
{
    let config: C = resolve(ctx.file.clone(), args)?;
    let hash = config_hash(command, &config)?;
    let art = Artifact { root: &ctx.root, command, hash: &hash };
    let mut written = body(&config, &art)?;
    written.push(art.write_config(&config.out(), &config)?);
    Ok(written)
}

pub trait HasOut {
    /// Primary output path, relative to the output directory.
    fn out(&self) -> PathBuf;
}

macro_rules! has_out {
    ($($t:ty),*) => {
        $(impl HasOut for $t {
            fn out(&self) -> PathBuf {
                self.out.clone()
            }
        })*
    };
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn parse_groups(names: &[String]) -> CliResult<Vec<GroupRef>> {
    if names.is_empty() {
        return Err(CliError::Config("at least one feature group is required".into()));
    }
    names.iter().map(|n| n.trim().parse().map_err(CliError::from)).collect()
}

fn parse_task(name: &str) -> CliResult<Property> {
    Property::parse(name).ok_or_else(|| {
        let known: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        CliError::Config(format!("unknown task `{name}`; expected one of {}", known.join(", ")))
    })
}

fn read_design(path: &Path, seed: u64) -> CliResult<DesignSample> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Config(format!("cannot open design `{}`: {e}", path.display())))?;
    Ok(DesignSample::read_csv(file, None, seed)?)
}

/// Where a design comes from: a CSV file or a freshly sampled instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DesignSource {
    pub input: Option<PathBuf>,
    pub function_id: u32,
    pub dim: usize,
    pub instance: u64,
    /// Defaults to 50 points per dimension.
    pub size: Option<usize>,
    pub seed: u64,
}

impl Default for DesignSource {
    fn default() -> Self {
        Self { input: None, function_id: 1, dim: 2, instance: 1, size: None, seed: 0 }
    }
}

impl DesignSource {
    fn load(&self) -> CliResult<DesignSample> {
        if let Some(path) = &self.input {
            return read_design(path, self.seed);
        }
        let instance = make_instance(self.function_id, self.dim, self.instance)?;
        Ok(build_design(&instance, self.size.unwrap_or_else(|| default_sample_size(self.dim)), self.seed)?)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SourceArgs {
    /// Function id in the suite (1-24)
    #[arg(long = "fid")]
    #[serde(rename = "function_id")]
    pub function_id: Option<u32>,
    /// Search-space dimension
    #[arg(long)]
    pub dim: Option<usize>,
    /// Instance index
    #[arg(long = "inst")]
    #[serde(rename = "instance")]
    pub instance: Option<u64>,
    /// Number of design points [default: 50 * dim]
    #[arg(long)]
    pub size: Option<usize>,
    /// Design seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FeatureArgs {
    /// Blocks per dimension for cell-based groups
    #[arg(long)]
    pub blocks: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct DatasetArgs {
    /// Search-space dimension
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated function ids [default: all]
    #[arg(long, value_delimiter = ',')]
    pub functions: Option<Vec<u32>>,
    /// Instances 1..=N of every function
    #[arg(long)]
    pub instances: Option<u64>,
    /// Design points per dimension
    #[arg(long)]
    pub sample_factor: Option<usize>,
    /// Reduced dimension for `d_` groups
    #[arg(long)]
    pub m: Option<usize>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-design time budget in seconds
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    #[command(flatten)]
    pub features: FeatureArgs,
}

// ---- suite ----

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteListConfig {
    pub out: PathBuf,
}

impl Default for SuiteListConfig {
    fn default() -> Self {
        Self { out: "suite.json".into() }
    }
}

impl HasOut for SuiteListConfig {
    fn out(&self) -> PathBuf {
        self.out.clone()
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SuiteListArgs {
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn suite_list(ctx: &Context, args: &SuiteListArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "suite-list", args, |c: &SuiteListConfig, art| {
        let path = art.write_text(&c.out, |buf| {
            serde_json::to_writer_pretty(&mut *buf, &testbed::manifest())?;
            buf.push(b'\n');
            Ok(())
        })?;
        Ok(vec![path])
    })
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LabelsConfig {
    pub format: Format,
    /// Defaults to `labels.csv` or `labels.json`.
    pub out: Option<PathBuf>,
}

impl HasOut for LabelsConfig {
    fn out(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| match self.format {
            Format::Csv => "labels.csv".into(),
            Format::Json => "labels.json".into(),
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct LabelsArgs {
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn suite_labels(ctx: &Context, args: &LabelsArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "suite-labels", args, |c: &LabelsConfig, art| {
        let path = art.write_text(&c.out(), |buf| {
            match c.format {
                Format::Csv => buf.extend_from_slice(testbed::labels_csv()?.as_bytes()),
                Format::Json => {
                    let labels: Vec<Value> = testbed::manifest()
                        .into_iter()
                        .map(|e| serde_json::json!({ "function_id": e.function_id, "labels": e.labels }))
                        .collect();
                    serde_json::to_writer_pretty(&mut *buf, &labels)?;
                    buf.push(b'\n');
                }
            }
            Ok(())
        })?;
        Ok(vec![path])
    })
}

// ---- sample ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleConfig {
    #[serde(flatten)]
    pub source: DesignSource,
    pub out: PathBuf,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { source: DesignSource::default(), out: "design.csv".into() }
    }
}

has_out!(SampleConfig);

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn sample(ctx: &Context, args: &SampleArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "sample", args, |c: &SampleConfig, art| {
        let mut source = c.source.clone();
        source.input = None;
        let design = source.load()?;
        Ok(vec![art.write_text(&c.out, |buf| Ok(design.write_csv(buf)?))?])
    })
}

// ---- features ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct FeaturesConfig {
    #[serde(flatten)]
    pub source: DesignSource,
    pub groups: Vec<String>,
    /// Compute every group on the reduced sample.
    pub reduced: bool,
    pub m: usize,
    /// Write `NA` for wall-clock costs so repeated runs are byte-identical.
    pub mask_runtime: bool,
    pub budget_seconds: Option<f64>,
    pub features: FeatureConfig,
    pub out: PathBuf,
}

impl Default for FeaturesConfig {
    fn default() -> Self {
        Self {
            source: DesignSource::default(),
            groups: Group::ALL.iter().map(|g| g.name().to_string()).collect(),
            reduced: false,
            m: 2,
            mask_runtime: false,
            budget_seconds: None,
            features: FeatureConfig::default(),
            out: "features.csv".into(),
        }
    }
}

has_out!(FeaturesConfig);

#[derive(Debug, Args, Serialize)]
pub struct FeaturesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    /// Read the design from this `x1..xn,y` CSV instead of sampling
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Comma-separated groups; prefix a name with `d_` for the reduced sample
    #[arg(long, value_delimiter = ',')]
    pub groups: Option<Vec<String>>,
    /// Compute all groups on the reduced sample
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub reduced: bool,
    /// Reduced dimension
    #[arg(long)]
    pub m: Option<usize>,
    /// Replace runtime costs by NA
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub mask_runtime: bool,
    /// Time budget in seconds
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn features(ctx: &Context, args: &FeaturesArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "features", args, |c: &FeaturesConfig, art| {
        let mut groups = parse_groups(&c.groups)?;
        if c.reduced {
            groups.iter_mut().for_each(|g| g.reduced = true);
        }
        let design = c.source.load()?;
        let deadline = c.budget_seconds.map(|s| Deadline::after(Duration::from_secs_f64(s)));
        let entries = compute_design_features(&design, &groups, c.m, &c.features, deadline.as_ref())?;
        let (fid, inst) = match c.source.input {
            Some(_) => ("NA".to_string(), "NA".to_string()),
            None => (c.source.function_id.to_string(), c.source.instance.to_string()),
        };
        let path = art.write_text(&c.out, |buf| {
            let mut w = csv::Writer::from_writer(buf);
            let mut header = vec!["function_id".to_string(), "instance".to_string()];
            header.extend(entries.iter().map(|(n, _)| n.clone()));
            w.write_record(&header)?;
            let mut rec = vec![fid, inst];
            rec.extend(entries.iter().map(|(n, v)| {
                if c.mask_runtime && n.ends_with("costs_runtime") {
                    "NA".to_string()
                } else {
                    fmt_opt(*v)
                }
            }));
            w.write_record(&rec)?;
            w.flush()?;
            Ok(())
        })?;
        Ok(vec![path])
    })
}

// ---- reduce ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ReduceConfig {
    #[serde(flatten)]
    pub source: DesignSource,
    pub m: usize,
    pub out: PathBuf,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        Self { source: DesignSource::default(), m: 2, out: "reduced.csv".into() }
    }
}

has_out!(ReduceConfig);

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    /// Read the design from this `x1..xn,y` CSV instead of sampling
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Reduced dimension (must be below the design dimension)
    #[arg(long)]
    pub m: Option<usize>,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn reduce_cmd(ctx: &Context, args: &ReduceArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "reduce", args, |c: &ReduceConfig, art| {
        let design = c.source.load()?;
        let reduced = reduce(&design, c.m)?;
        Ok(vec![art.write_text(&c.out, |buf| Ok(reduced.write_csv(buf)?))?])
    })
}

// ---- timebench ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct TimebenchConfig {
    #[serde(flatten)]
    pub timing: TimingConfig,
    pub out: PathBuf,
}

impl Default for TimebenchConfig {
    fn default() -> Self {
        Self { timing: TimingConfig::default(), out: "timing.csv".into() }
    }
}

has_out!(TimebenchConfig);

#[derive(Debug, Args, Serialize)]
pub struct TimebenchArgs {
    /// Comma-separated groups; `d_` prefix for the reduced sample
    #[arg(long, value_delimiter = ',')]
    pub groups: Option<Vec<String>>,
    /// Comma-separated dimensions
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Repetitions per dimension
    #[arg(long)]
    pub reps: Option<usize>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Function id used for the designs
    #[arg(long = "fid")]
    #[serde(rename = "function_id")]
    pub function_id: Option<u32>,
    /// Instance index
    #[arg(long = "inst")]
    #[serde(rename = "instance")]
    pub instance: Option<u64>,
    /// Design points per dimension
    #[arg(long)]
    pub sample_factor: Option<usize>,
    /// Reduced dimension for `d_` groups
    #[arg(long)]
    pub m: Option<usize>,
    /// Per-group time budget in seconds
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn timebench(ctx: &Context, args: &TimebenchArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "timebench", args, |c: &TimebenchConfig, art| {
        let records = time_features(&c.timing)?;
        Ok(vec![art.write_text(&c.out, |buf| Ok(write_timing_csv(buf, &records)?))?])
    })
}

// ---- classify / importance ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyConfig {
    #[serde(flatten)]
    pub dataset: DatasetConfig,
    pub feature_set: String,
    pub task: String,
    pub n_trees: usize,
    pub scheme: CvScheme,
    pub out: PathBuf,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            feature_set: "C7".into(),
            task: Property::Multimodality.name().into(),
            n_trees: 500,
            scheme: CvScheme::Lopo,
            out: "classify.csv".into(),
        }
    }
}

has_out!(ClassifyConfig);

#[derive(Debug, Clone, Copy, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Lopo,
    Loio,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: DatasetArgs,
    /// One of C7, C7-E2, C7-D2, C7-C4, C7-D4
    #[arg(long)]
    pub feature_set: Option<String>,
    /// Property to predict, e.g. multimodality
    #[arg(long)]
    pub task: Option<String>,
    /// Trees per forest
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Cross-validation scheme
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn classify(ctx: &Context, args: &ClassifyArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "classify", args, |c: &ClassifyConfig, art| {
        let task = parse_task(&c.task)?;
        let spec = FeatureSetSpec::named(&c.feature_set)?;
        let ds = assemble_dataset(&c.dataset, &spec)?;
        let seed = c.dataset.seed;
        let result = match c.scheme {
            CvScheme::Lopo => lopo_cv(&ds, task, c.n_trees, seed)?,
            CvScheme::Loio => loio_cv(&ds, task, c.n_trees, seed)?,
        };
        let scheme = serde_json::to_value(c.scheme)?.as_str().unwrap_or_default().to_string();
        let path = art.write_text(&c.out, |buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(["task", "feature_set", "dim", "scheme", "fold", "accuracy", "baseline"])?;
            let prefix = [task.name().to_string(), spec.name.clone(), c.dataset.dim.to_string(), scheme.clone()];
            for f in &result.folds {
                let mut rec = prefix.to_vec();
                rec.extend([f.held_out.to_string(), fmt_opt(f.accuracy), fmt_opt(f.baseline)]);
                w.write_record(&rec)?;
            }
            let mut rec = prefix.to_vec();
            rec.extend([
                "mean".to_string(),
                result.mean_accuracy.to_string(),
                result.mean_baseline.to_string(),
            ]);
            w.write_record(&rec)?;
            w.flush()?;
            Ok(())
        })?;
        Ok(vec![path])
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ImportanceConfig {
    #[serde(flatten)]
    pub dataset: DatasetConfig,
    pub feature_set: String,
    pub task: String,
    pub n_trees: usize,
    pub out: PathBuf,
}

impl Default for ImportanceConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            feature_set: "C7".into(),
            task: Property::Multimodality.name().into(),
            n_trees: 500,
            out: "importance.csv".into(),
        }
    }
}

has_out!(ImportanceConfig);

#[derive(Debug, Args, Serialize)]
pub struct ImportanceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: DatasetArgs,
    /// One of C7, C7-E2, C7-D2, C7-C4, C7-D4
    #[arg(long)]
    pub feature_set: Option<String>,
    /// Property to predict, e.g. multimodality
    #[arg(long)]
    pub task: Option<String>,
    /// Trees per forest
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn importance(ctx: &Context, args: &ImportanceArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "importance", args, |c: &ImportanceConfig, art| {
        let task = parse_task(&c.task)?;
        let spec = FeatureSetSpec::named(&c.feature_set)?;
        let ds = assemble_dataset(&c.dataset, &spec)?;
        let result = lopo_cv(&ds, task, c.n_trees, c.dataset.seed)?;
        let path = art.write_text(&c.out, |buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(["feature", "avg_rank"])?;
            for (name, rank) in &result.importance_ranks {
                w.write_record([name.clone(), rank.to_string()])?;
            }
            w.flush()?;
            Ok(())
        })?;
        Ok(vec![path])
    })
}

// ---- sweepm ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub dataset: DatasetConfig,
    pub dims: Vec<usize>,
    pub m_values: Vec<usize>,
    pub feature_set: String,
    pub task: String,
    pub n_trees: usize,
    pub out: PathBuf,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            dims: vec![2, 3, 5, 10],
            m_values: vec![2, 3, 5],
            feature_set: "C7-D2".into(),
            task: Property::Multimodality.name().into(),
            n_trees: 500,
            out: "sweepm.csv".into(),
        }
    }
}

has_out!(SweepConfig);

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: DatasetArgs,
    /// Comma-separated original dimensions
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Comma-separated reduced dimensions
    #[arg(long, value_delimiter = ',')]
    pub m_values: Option<Vec<usize>>,
    /// Feature set whose `d_` groups use the swept m
    #[arg(long)]
    pub feature_set: Option<String>,
    /// Property to predict
    #[arg(long)]
    pub task: Option<String>,
    /// Trees per forest
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn sweepm(ctx: &Context, args: &SweepArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "sweepm", args, |c: &SweepConfig, art| {
        let task = parse_task(&c.task)?;
        let spec = FeatureSetSpec::named(&c.feature_set)?;
        let table = sweep_m(&c.dims, &c.m_values, task, c.n_trees, c.dataset.seed, |n, m| {
            let mut dc = c.dataset.clone();
            dc.dim = n;
            dc.m = m;
            assemble_dataset(&dc, &spec)
        })?;
        Ok(vec![art.write_text(&c.out, |buf| Ok(table.write_csv(buf)?))?])
    })
}

// ---- similarity ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SimilarityConfig {
    #[serde(flatten)]
    pub dataset: DatasetConfig,
    pub groups: Vec<String>,
    pub out: PathBuf,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            groups: vec![Group::ElaMeta.name().into(), Group::ElaLevel.name().into()],
            out: "similarity.csv".into(),
        }
    }
}

has_out!(SimilarityConfig);

#[derive(Debug, Args, Serialize)]
pub struct SimilarityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub dataset: DatasetArgs,
    /// Comma-separated groups compared on original and reduced samples
    #[arg(long, value_delimiter = ',')]
    pub groups: Option<Vec<String>>,
    /// Output file, relative to the output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn similarity_cmd(ctx: &Context, args: &SimilarityArgs) -> CliResult<Vec<PathBuf>> {
    execute(ctx, "similarity", args, |c: &SimilarityConfig, art| {
        let groups: Vec<Group> = parse_groups(&c.groups)?.into_iter().map(|g| g.group).collect();
        let original = FeatureSetSpec::custom("original", groups.iter().copied().map(GroupRef::original).collect());
        let reduced = FeatureSetSpec::custom("reduced", groups.iter().copied().map(GroupRef::reduced).collect());
        let a = compute_rows(&c.dataset, &original)?;
        let b = compute_rows(&c.dataset, &reduced)?;
        let records = similarity(&a, &b)?;
        Ok(vec![art.write_text(&c.out, |buf| Ok(write_similarity_csv(buf, &records)?))?])
    })
}

pub fn report(paths: &[PathBuf]) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    for p in paths {
        writeln!(out, "{}", p.display())?;
    }
    Ok(())
}
