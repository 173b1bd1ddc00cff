use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::{lopo_cv, Dataset};
use crate::testbed::Property;

/// Mean LOPO accuracy per original dimension (rows) and reduced dimension
/// (columns); `None` where `m >= n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub task: Property,
    pub dims: Vec<usize>,
    pub m_values: Vec<usize>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl SweepTable {
    /// `dim,m=<m1>,m=<m2>,...` with `Na` for unavailable cells.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["dim".to_string()];
        header.extend(self.m_values.iter().map(|m| format!("m={m}")));
        wr.write_record(&header)?;
        for (n, row) in self.dims.iter().zip(&self.cells) {
            let mut rec = vec![n.to_string()];
            rec.extend(row.iter().map(|c| c.map_or_else(|| "Na".to_string(), |v| format!("{v:.4}"))));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Builds a dataset for every valid `(n, m)` with `build` and records the
/// mean LOPO accuracy on `task`.
pub fn sweep_m<F>(
    dims: &[usize],
    m_values: &[usize],
    task: Property,
    n_trees: usize,
    seed: u64,
    mut build: F,
) -> Result<SweepTable>
where
    F: FnMut(usize, usize) -> Result<Dataset>,
{
    let mut cells = Vec::with_capacity(dims.len());
    for &n in dims {
        let mut row = Vec::with_capacity(m_values.len());
        for &m in m_values {
            if m >= n {
                row.push(None);
                continue;
            }
            let ds = build(n, m)?;
            row.push(Some(lopo_cv(&ds, task, n_trees, seed)?.mean_accuracy));
        }
        cells.push(row);
    }
    Ok(SweepTable { task, dims: dims.to_vec(), m_values: m_values.to_vec(), cells })
}
