//! Latin hypercube designs and the evaluated initial sample.

use std::io::{Read, Write};

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::testbed::{Bounds, InstanceDescriptor};

/// Sample size used throughout: 50 points per dimension.
pub fn default_sample_size(dim: usize) -> usize {
    50 * dim
}

/// Latin hypercube sample of `l` points. Each coordinate is split into `l`
/// equal strata, each stratum holds exactly one point, and the stratum order
/// is an independent seeded permutation per coordinate.
pub fn lhs(l: usize, bounds: &Bounds, seed: u64) -> Result<Array2<f64>> {
    if l == 0 {
        return Err(Error::InvalidArgument("sample size must be at least 1".into()));
    }
    let n = bounds.dim();
    let mut rng = seeded(seed);
    let mut points = Array2::zeros((l, n));
    let mut strata: Vec<usize> = (0..l).collect();
    for j in 0..n {
        let (lo, hi) = (bounds.lower()[j], bounds.upper()[j]);
        strata.shuffle(&mut rng);
        for (i, &s) in strata.iter().enumerate() {
            let u: f64 = rng.random();
            let v = lo + (s as f64 + u) / l as f64 * (hi - lo);
            points[[i, j]] = v.min(hi);
        }
    }
    Ok(points)
}

/// The initial sample: points, their objective values, and the box.
#[derive(Debug, Clone)]
pub struct DesignSample {
    pub points: Array2<f64>,
    pub objectives: Vec<f64>,
    pub bounds: Bounds,
    pub seed: u64,
}

impl DesignSample {
    pub fn new(points: Array2<f64>, objectives: Vec<f64>, bounds: Bounds, seed: u64) -> Result<Self> {
        let (l, n) = points.dim();
        if objectives.len() != l {
            return Err(Error::Length { expected: l, got: objectives.len() });
        }
        if n != bounds.dim() {
            return Err(Error::Length { expected: bounds.dim(), got: n });
        }
        if l < 2 {
            return Err(Error::InvalidArgument("a design needs at least 2 points".into()));
        }
        if points.iter().chain(&objectives).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { points, objectives, bounds, seed })
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

    /// Writes `x1..xn,y`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_matrix_csv(w, "x", &self.points, &self.objectives)
    }

    /// Reads a `x1..xn,y` table; lines starting with `#` are skipped.
    /// `bounds` defaults to the suite box `[-5, 5]^n`.
    pub fn read_csv<R: Read>(r: R, bounds: Option<Bounds>, seed: u64) -> Result<Self> {
        let (points, objectives) = read_matrix_csv(r, "x")?;
        let bounds = bounds.unwrap_or_else(|| Bounds::default_box(points.ncols()));
        Self::new(points, objectives, bounds, seed)
    }
}

/// Evaluates an LHS design of `l` points on `instance`, row by row.
pub fn build_design(instance: &InstanceDescriptor, l: usize, seed: u64) -> Result<DesignSample> {
    build_design_with(l, instance.bounds(), seed, |x| instance.evaluate(x))
}

/// Same as [`build_design`] for an arbitrary objective; the objective is
/// called exactly once per row, in row order.
pub fn build_design_with<F>(l: usize, bounds: Bounds, seed: u64, mut objective: F) -> Result<DesignSample>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if l < 2 {
        return Err(Error::InvalidArgument("a design needs at least 2 points".into()));
    }
    let points = lhs(l, &bounds, seed)?;
    let objectives = points
        .rows()
        .into_iter()
        .map(|row| objective(row.as_slice().expect("row-major sample")))
        .collect::<Result<Vec<_>>>()?;
    DesignSample::new(points, objectives, bounds, seed)
}

pub(crate) fn write_matrix_csv<W: Write>(w: W, prefix: &str, points: &Array2<f64>, y: &[f64]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=points.ncols()).map(|j| format!("{prefix}{j}")).collect();
    header.push("y".into());
    wr.write_record(&header)?;
    for (row, yi) in points.rows().into_iter().zip(y) {
        let mut rec: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
        rec.push(format_float(*yi));
        wr.write_record(&rec)?;
    }
    wr.flush()?;
    Ok(())
}

pub(crate) fn read_matrix_csv<R: Read>(r: R, prefix: &str) -> Result<(Array2<f64>, Vec<f64>)> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r);
    let header = rd.headers()?.clone();
    let n = header.len().saturating_sub(1);
    let expected: Vec<String> = (1..=n).map(|j| format!("{prefix}{j}")).chain(["y".to_string()]).collect();
    if n == 0 || header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::InvalidArgument(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut flat = Vec::new();
    let mut y = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse `{field}` as a number")))?;
            if j < n {
                flat.push(v);
            } else {
                y.push(v);
            }
        }
    }
    let points = Array2::from_shape_vec((y.len(), n), flat)
        .map_err(|e| Error::InvalidArgument(format!("ragged design table: {e}")))?;
    Ok((points, y))
}

/// Shortest representation that round-trips exactly.
pub(crate) fn format_float(v: f64) -> String {
    format!("{v:?}")
}
