use crate::error::Result;
use crate::features::{entry, require_rows, Entry};
use crate::stats;

pub const KDE_GRID: usize = 512;
/// Minimum probability mass of a density segment to count as a peak.
pub const PEAK_MASS: f64 = 0.1;

/// Skewness, excess kurtosis and number of density peaks of `y`.
pub fn ela_distr(y: &[f64]) -> Result<Vec<Entry>> {
    require_rows(y.len(), 4, "ela_distr")?;
    Ok(vec![
        entry("skewness", stats::skewness(y)),
        entry("kurtosis", stats::excess_kurtosis(y)),
        entry("number_of_peaks", Some(number_of_peaks(y) as f64)),
    ])
}

/// Rule-of-thumb bandwidth `0.9 min(sd, IQR/1.34) l^(-1/5)`.
pub fn silverman_bandwidth(y: &[f64]) -> f64 {
    let sd = stats::sd(y).unwrap_or(0.0);
    let iqr = stats::quantile(y, 0.75).unwrap_or(0.0) - stats::quantile(y, 0.25).unwrap_or(0.0);
    let mut lo = sd.min(iqr / 1.34);
    if lo <= 0.0 {
        lo = if sd > 0.0 {
            sd
        } else if y[0] != 0.0 {
            y[0].abs()
        } else {
            1.0
        };
    }
    0.9 * lo * (y.len() as f64).powf(-0.2)
}

/// Splits the kernel density estimate at its local minima and counts the
/// segments holding more than [`PEAK_MASS`] probability.
pub fn number_of_peaks(y: &[f64]) -> usize {
    let lo = stats::min(y).unwrap_or(0.0);
    let hi = stats::max(y).unwrap_or(0.0);
    if lo == hi {
        return 1;
    }
    let bw = silverman_bandwidth(y);
    let a = lo - 3.0 * bw;
    let b = hi + 3.0 * bw;
    let step = (b - a) / (KDE_GRID - 1) as f64;
    let norm = 1.0 / (y.len() as f64 * bw * (2.0 * std::f64::consts::PI).sqrt());
    let dens: Vec<f64> = (0..KDE_GRID)
        .map(|k| {
            let t = a + k as f64 * step;
            y.iter().map(|v| (-0.5 * ((t - v) / bw).powi(2)).exp()).sum::<f64>() * norm
        })
        .collect();

    let mut cuts = vec![0];
    for k in 1..KDE_GRID - 1 {
        if dens[k] < dens[k - 1] && dens[k] <= dens[k + 1] {
            cuts.push(k);
        }
    }
    cuts.push(KDE_GRID - 1);
    let peaks = cuts
        .windows(2)
        .filter(|w| dens[w[0]..=w[1]].iter().sum::<f64>() * step > PEAK_MASS)
        .count();
    peaks.max(1)
}
