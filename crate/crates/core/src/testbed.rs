//! Scalable benchmark suite with seeded instancing and expert property labels.
//!
//! Each function is defined on z-space and instanced as `z = R (x - shift)`
//! (the rotation `R` only for non-separable functions), so the global
//! optimum is at `x = shift` with value 0. Shifts are drawn in `[-4, 4]^n`
//! so the optimum stays inside the default box `[-5, 5]^n`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, Rng};

pub const DEFAULT_LOWER: f64 = -5.0;
pub const DEFAULT_UPPER: f64 = 5.0;
pub const SHIFT_RANGE: f64 = 4.0;
pub const DEFAULT_INSTANCES: u64 = 15;

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBounds(format!(
                "lower has {} entries, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidBounds("zero-dimensional box".into()));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidBounds(format!(
                    "coordinate {j}: lower {lo} must be finite and below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    /// `[-5, 5]^dim`.
    pub fn default_box(dim: usize) -> Self {
        Self::uniform(dim, DEFAULT_LOWER, DEFAULT_UPPER).expect("default box is valid")
    }

    /// Bounding box of a point set; degenerate coordinates are widened by
    /// 0.5 on each side.
    pub fn enclosing(points: ndarray::ArrayView2<'_, f64>) -> Result<Self> {
        let (l, d) = points.dim();
        if l == 0 || d == 0 {
            return Err(Error::InvalidBounds("empty point set".into()));
        }
        let mut lower = vec![f64::INFINITY; d];
        let mut upper = vec![f64::NEG_INFINITY; d];
        for row in points.rows() {
            for (j, &v) in row.iter().enumerate() {
                lower[j] = lower[j].min(v);
                upper[j] = upper[j].max(v);
            }
        }
        for j in 0..d {
            if lower[j] >= upper[j] {
                lower[j] -= 0.5;
                upper[j] += 0.5;
            }
        }
        Self::new(lower, upper)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// The five function categories of the BBOB testbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Separable,
    ModerateConditioning,
    HighConditioningUnimodal,
    MultimodalAdequateStructure,
    MultimodalWeakStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    None,
    Low,
    Medium,
    High,
    Deceptive,
    Strong,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::None => "none",
            Level::Low => "low",
            Level::Medium => "medium",
            Level::High => "high",
            Level::Deceptive => "deceptive",
            Level::Strong => "strong",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The seven high-level landscape properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Multimodality,
    GlobalStructure,
    Separability,
    VariableScaling,
    Homogeneity,
    BasinSize,
    GlobalLocalContrast,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Multimodality,
        Property::GlobalStructure,
        Property::Separability,
        Property::VariableScaling,
        Property::Homogeneity,
        Property::BasinSize,
        Property::GlobalLocalContrast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Multimodality => "multimodality",
            Property::GlobalStructure => "global_structure",
            Property::Separability => "separability",
            Property::VariableScaling => "variable_scaling",
            Property::Homogeneity => "homogeneity",
            Property::BasinSize => "basin_size",
            Property::GlobalLocalContrast => "global_local_contrast",
        }
    }

    pub fn parse(name: &str) -> Option<Property> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Ordered level set; the position of a level is its class index.
    pub fn levels(self) -> &'static [Level] {
        use Level::*;
        match self {
            Property::Multimodality => &[None, Low, Medium, High],
            Property::GlobalStructure => &[None, Deceptive, Medium, Strong],
            Property::Separability => &[None, High],
            Property::VariableScaling => &[None, Low, Medium, High],
            Property::Homogeneity => &[Low, Medium, High],
            Property::BasinSize => &[None, Low, Medium, High],
            Property::GlobalLocalContrast => &[None, Low, Medium, High],
        }
    }

    pub fn class_index(self, level: Level) -> Option<usize> {
        self.levels().iter().position(|&l| l == level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyLabels {
    pub multimodality: Level,
    pub global_structure: Level,
    pub separability: Level,
    pub variable_scaling: Level,
    pub homogeneity: Level,
    pub basin_size: Level,
    pub global_local_contrast: Level,
}

impl PropertyLabels {
    pub fn get(&self, p: Property) -> Level {
        match p {
            Property::Multimodality => self.multimodality,
            Property::GlobalStructure => self.global_structure,
            Property::Separability => self.separability,
            Property::VariableScaling => self.variable_scaling,
            Property::Homogeneity => self.homogeneity,
            Property::BasinSize => self.basin_size,
            Property::GlobalLocalContrast => self.global_local_contrast,
        }
    }

    pub fn is_valid(&self) -> bool {
        Property::ALL.iter().all(|&p| p.class_index(self.get(p)).is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Sphere,
    EllipsoidSeparable,
    RastriginSeparable,
    AttractiveSector,
    Rosenbrock,
    Ellipsoid,
    Discus,
    BentCigar,
    Rastrigin,
    SchafferF7,
    Schwefel,
    Gallagher,
    Lunacek,
}

/// Static description of one suite function.
#[derive(Debug, Clone, Copy)]
pub struct FunctionSpec {
    pub id: u32,
    pub name: &'static str,
    pub category: Category,
    pub rotated: bool,
    pub labels: PropertyLabels,
    kind: Kind,
}

const fn labels(l: [Level; 7]) -> PropertyLabels {
    PropertyLabels {
        multimodality: l[0],
        global_structure: l[1],
        separability: l[2],
        variable_scaling: l[3],
        homogeneity: l[4],
        basin_size: l[5],
        global_local_contrast: l[6],
    }
}

use Level::{Deceptive as Dec, High as Hi, Low as Lo, Medium as Med, None as No, Strong as St};

// Columns: multimodality, global structure, separability, variable scaling,
// homogeneity, basin size, global-to-local contrast.
static SUITE: [FunctionSpec; 13] = [
    FunctionSpec { id: 1, name: "sphere", category: Category::Separable, rotated: false, kind: Kind::Sphere,
        labels: labels([No, St, Hi, No, Hi, No, No]) },
    FunctionSpec { id: 2, name: "ellipsoid_separable", category: Category::Separable, rotated: false, kind: Kind::EllipsoidSeparable,
        labels: labels([No, St, Hi, Hi, Hi, No, No]) },
    FunctionSpec { id: 3, name: "rastrigin_separable", category: Category::Separable, rotated: false, kind: Kind::RastriginSeparable,
        labels: labels([Hi, St, Hi, Lo, Hi, Lo, Lo]) },
    FunctionSpec { id: 4, name: "attractive_sector", category: Category::ModerateConditioning, rotated: true, kind: Kind::AttractiveSector,
        labels: labels([No, St, No, Lo, Med, No, No]) },
    FunctionSpec { id: 5, name: "rosenbrock_rotated", category: Category::ModerateConditioning, rotated: true, kind: Kind::Rosenbrock,
        labels: labels([Lo, St, No, Lo, Med, Lo, Lo]) },
    FunctionSpec { id: 6, name: "ellipsoid_rotated", category: Category::HighConditioningUnimodal, rotated: true, kind: Kind::Ellipsoid,
        labels: labels([No, St, No, Hi, Hi, No, No]) },
    FunctionSpec { id: 7, name: "discus", category: Category::HighConditioningUnimodal, rotated: true, kind: Kind::Discus,
        labels: labels([No, St, No, Hi, Hi, No, No]) },
    FunctionSpec { id: 8, name: "bent_cigar", category: Category::HighConditioningUnimodal, rotated: true, kind: Kind::BentCigar,
        labels: labels([No, St, No, Hi, Hi, No, No]) },
    FunctionSpec { id: 9, name: "rastrigin_rotated", category: Category::MultimodalAdequateStructure, rotated: true, kind: Kind::Rastrigin,
        labels: labels([Hi, St, No, Lo, Hi, Lo, Lo]) },
    FunctionSpec { id: 10, name: "schaffer_f7", category: Category::MultimodalAdequateStructure, rotated: true, kind: Kind::SchafferF7,
        labels: labels([Hi, Med, No, Lo, Med, Med, Hi]) },
    FunctionSpec { id: 11, name: "schwefel", category: Category::MultimodalWeakStructure, rotated: false, kind: Kind::Schwefel,
        labels: labels([Med, Dec, Hi, Lo, Hi, Lo, Hi]) },
    FunctionSpec { id: 12, name: "gallagher", category: Category::MultimodalWeakStructure, rotated: true, kind: Kind::Gallagher,
        labels: labels([Med, No, No, Med, Hi, Med, Lo]) },
    FunctionSpec { id: 13, name: "lunacek_bi_rastrigin", category: Category::MultimodalWeakStructure, rotated: true, kind: Kind::Lunacek,
        labels: labels([Hi, Dec, No, Lo, Hi, Lo, Lo]) },
];

/// All suite functions in id order.
pub fn suite() -> &'static [FunctionSpec] {
    &SUITE
}

pub fn function_ids() -> Vec<u32> {
    SUITE.iter().map(|f| f.id).collect()
}

pub fn function_spec(id: u32) -> Result<&'static FunctionSpec> {
    SUITE.iter().find(|f| f.id == id).ok_or(Error::UnknownFunction(id))
}

/// One row of the exported suite manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub function_id: u32,
    pub name: String,
    pub category: Category,
    pub labels: PropertyLabels,
}

pub fn manifest() -> Vec<SuiteEntry> {
    SUITE
        .iter()
        .map(|f| SuiteEntry {
            function_id: f.id,
            name: f.name.to_string(),
            category: f.category,
            labels: f.labels,
        })
        .collect()
}

pub fn manifest_json() -> Result<String> {
    Ok(serde_json::to_string_pretty(&manifest())?)
}

/// Label table as CSV: `function_id,name,category,<seven properties>`.
pub fn labels_csv() -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["function_id".to_string(), "name".into(), "category".into()];
    header.extend(Property::ALL.iter().map(|p| p.name().to_string()));
    w.write_record(&header)?;
    for f in &SUITE {
        let category = serde_json::to_value(f.category)?;
        let mut rec = vec![f.id.to_string(), f.name.to_string(), category.as_str().unwrap_or_default().to_string()];
        rec.extend(Property::ALL.iter().map(|&p| f.labels.get(p).to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone)]
struct Peak {
    /// `R * center`
    rotated_center: Vec<f64>,
    scales: Vec<f64>,
    weight: f64,
}

#[derive(Debug, Clone)]
enum Extra {
    None,
    SectorSigns(Vec<f64>),
    Peaks(Vec<Peak>),
}

/// A concrete, immutable problem instance.
#[derive(Debug, Clone)]
pub struct InstanceDescriptor {
    function_id: u32,
    dimension: usize,
    instance_seed: u64,
    labels: PropertyLabels,
    kind: Kind,
    shift: Vec<f64>,
    /// Row-major `n x n` orthogonal matrix.
    rotation: Option<Vec<f64>>,
    extra: Extra,
}

/// Builds an instance; equal `(function_id, dimension, instance_seed)` give
/// bit-identical objectives.
pub fn make_instance(function_id: u32, dimension: usize, instance_seed: u64) -> Result<InstanceDescriptor> {
    let spec = function_spec(function_id)?;
    if dimension < 2 {
        return Err(Error::Dimension { min: 2, got: dimension });
    }
    let mut rng = seeded(derive_seed(instance_seed, &[function_id as u64, dimension as u64]));
    let shift: Vec<f64> = (0..dimension).map(|_| rng.random_range(-SHIFT_RANGE..=SHIFT_RANGE)).collect();
    let rotation = spec.rotated.then(|| random_rotation(dimension, &mut rng));
    let extra = match spec.kind {
        Kind::AttractiveSector => {
            Extra::SectorSigns((0..dimension).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect())
        }
        Kind::Gallagher => Extra::Peaks(gallagher_peaks(&shift, rotation.as_deref(), &mut rng)),
        _ => Extra::None,
    };
    Ok(InstanceDescriptor {
        function_id,
        dimension,
        instance_seed,
        labels: spec.labels,
        kind: spec.kind,
        shift,
        rotation,
        extra,
    })
}

/// Orthogonal matrix from the QR factorization of a standard-normal matrix,
/// with column signs chosen so that `diag(R) > 0`. Returned row-major.
pub fn random_rotation(n: usize, rng: &mut Rng) -> Vec<f64> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(q[(i, j)]);
        }
    }
    out
}

fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    m.chunks_exact(n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

const GALLAGHER_PEAKS: usize = 21;

fn gallagher_peaks(shift: &[f64], rotation: Option<&[f64]>, rng: &mut Rng) -> Vec<Peak> {
    let n = shift.len();
    let mut exponents: Vec<usize> = (0..GALLAGHER_PEAKS - 1).collect();
    exponents.shuffle(rng);
    (0..GALLAGHER_PEAKS)
        .map(|i| {
            let (center, weight, alpha) = if i == 0 {
                (shift.to_vec(), 10.0, 1000.0)
            } else {
                let c = (0..n).map(|_| rng.random_range(-4.9..=4.9)).collect();
                let w = 1.1 + 8.0 * (i - 1) as f64 / 19.0;
                let a = 1000f64.powf(2.0 * exponents[i - 1] as f64 / 19.0);
                (c, w, a)
            };
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let scales = perm
                .iter()
                .map(|&p| alpha.powf(0.5 * p as f64 / (n - 1) as f64) / alpha.powf(0.25))
                .collect();
            let rotated_center = match rotation {
                Some(r) => mat_vec(r, &center),
                None => center,
            };
            Peak { rotated_center, scales, weight }
        })
        .collect()
}

// Location of the 1-D Schwefel minimum of z * sin(sqrt|z|) on [-500, 500].
const SCHWEFEL_ARGMAX: f64 = 420.968_746_359_982;
const SCHWEFEL_STRETCH: f64 = 90.0;
const SCHWEFEL_REACH: f64 = 9.0;

impl InstanceDescriptor {
    pub fn function_id(&self) -> u32 {
        self.function_id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn instance_seed(&self) -> u64 {
        self.instance_seed
    }

    pub fn labels(&self) -> &PropertyLabels {
        &self.labels
    }

    pub fn name(&self) -> &'static str {
        function_spec(self.function_id).map(|s| s.name).unwrap_or("unknown")
    }

    /// Location of the global optimum (objective value 0).
    pub fn optimum(&self) -> &[f64] {
        &self.shift
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::default_box(self.dimension)
    }

    /// Row-major rotation matrix, if the function is rotated.
    pub fn rotation(&self) -> Option<&[f64]> {
        self.rotation.as_deref()
    }

    fn rotate(&self, d: &[f64]) -> Vec<f64> {
        match &self.rotation {
            Some(r) => mat_vec(r, d),
            None => d.to_vec(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let n = self.dimension;
        if x.len() != n {
            return Err(Error::Length { expected: n, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let d: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - s).collect();
        let nf = n as f64;
        let value = match self.kind {
            Kind::Sphere => d.iter().map(|v| v * v).sum(),
            Kind::EllipsoidSeparable | Kind::Ellipsoid => {
                let z = self.rotate(&d);
                z.iter()
                    .enumerate()
                    .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (nf - 1.0)) * v * v)
                    .sum()
            }
            Kind::RastriginSeparable | Kind::Rastrigin => {
                let z = self.rotate(&d);
                rastrigin(&z)
            }
            Kind::AttractiveSector => {
                let z = self.rotate(&d);
                let Extra::SectorSigns(signs) = &self.extra else { unreachable!() };
                let s: f64 = z
                    .iter()
                    .zip(signs)
                    .map(|(&v, &o)| {
                        let scaled = if v * o > 0.0 { 100.0 * v } else { v };
                        scaled * scaled
                    })
                    .sum();
                s.powf(0.9)
            }
            Kind::Rosenbrock => {
                let c = (nf.sqrt() / 8.0).max(1.0);
                let z: Vec<f64> = self.rotate(&d).iter().map(|v| c * v + 1.0).collect();
                z.windows(2)
                    .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
                    .sum()
            }
            Kind::Discus => {
                let z = self.rotate(&d);
                1e6 * z[0] * z[0] + z[1..].iter().map(|v| v * v).sum::<f64>()
            }
            Kind::BentCigar => {
                let z = self.rotate(&d);
                z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>()
            }
            Kind::SchafferF7 => {
                let z = self.rotate(&d);
                let s: f64 = z
                    .windows(2)
                    .map(|w| {
                        let si = (w[0] * w[0] + w[1] * w[1]).sqrt();
                        si.sqrt() + si.sqrt() * (50.0 * si.powf(0.2)).sin().powi(2)
                    })
                    .sum();
                (s / (nf - 1.0)).powi(2)
            }
            Kind::Schwefel => {
                let c = SCHWEFEL_ARGMAX * SCHWEFEL_ARGMAX.abs().sqrt().sin();
                d.iter()
                    .map(|&v| {
                        let reach = v.abs().min(SCHWEFEL_REACH);
                        let z = SCHWEFEL_ARGMAX - SCHWEFEL_STRETCH * reach;
                        let excess = (v.abs() - SCHWEFEL_REACH).max(0.0);
                        c - z * z.abs().sqrt().sin() + 1e4 * excess * excess
                    })
                    .sum()
            }
            Kind::Gallagher => {
                let Extra::Peaks(peaks) = &self.extra else { unreachable!() };
                let rx = self.rotate(x);
                let best = peaks
                    .iter()
                    .map(|p| {
                        let q: f64 = rx
                            .iter()
                            .zip(&p.rotated_center)
                            .zip(&p.scales)
                            .map(|((a, c), s)| s * (a - c) * (a - c))
                            .sum();
                        p.weight * (-q / (2.0 * nf)).exp()
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                (10.0 - best).powi(2)
            }
            Kind::Lunacek => {
                let mu0 = 2.5;
                let s = 1.0 - 1.0 / (2.0 * (nf + 20.0).sqrt() - 8.2);
                let mu1 = -((mu0 * mu0 - 1.0) / s).sqrt();
                let first: f64 = d.iter().map(|v| v * v).sum();
                let second: f64 = nf + s * d.iter().map(|v| (v + mu0 - mu1).powi(2)).sum::<f64>();
                let z = self.rotate(&d);
                let rast = 10.0 * (nf - z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>());
                first.min(second) + rast
            }
        };
        Ok(value)
    }
}

fn rastrigin(z: &[f64]) -> f64 {
    10.0 * z.len() as f64 + z.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}
