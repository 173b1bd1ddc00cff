use ndarray::{s, Array2, ArrayView2};

use crate::error::Result;
use crate::features::{entry, require_rows, Entry};
use crate::ml::{ols_fit, LinearFit};

/// Columns `[x | x^2 (optional) | x_i x_j for i < j (optional)]`.
fn expand(x: ArrayView2<'_, f64>, squares: bool, interactions: bool) -> Array2<f64> {
    let (l, n) = x.dim();
    let n_sq = if squares { n } else { 0 };
    let n_int = if interactions { n * n.saturating_sub(1) / 2 } else { 0 };
    let mut out = Array2::zeros((l, n + n_sq + n_int));
    out.slice_mut(s![.., ..n]).assign(&x);
    for i in 0..l {
        let row = x.row(i);
        let mut c = n;
        if squares {
            for j in 0..n {
                out[[i, c]] = row[j] * row[j];
                c += 1;
            }
        }
        if interactions {
            for a in 0..n {
                for b in a + 1..n {
                    out[[i, c]] = row[a] * row[b];
                    c += 1;
                }
            }
        }
    }
    out
}

/// Linear and quadratic regression meta-model features.
pub fn ela_meta(x: ArrayView2<'_, f64>, y: &[f64]) -> Result<Vec<Entry>> {
    let (l, n) = x.dim();
    require_rows(l, 2, "ela_meta")?;

    let lin = ols_fit(x, y)?;
    let abs: Vec<f64> = lin.slopes().iter().map(|c| c.abs()).collect();
    let cmin = abs.iter().copied().reduce(f64::min);
    let cmax = abs.iter().copied().reduce(f64::max);

    let lin_int = if n > 1 { ols_fit(expand(x, false, true).view(), y)?.adj_r2 } else { lin.adj_r2 };
    let quad = ols_fit(expand(x, true, false).view(), y)?;
    let quad_int = if n > 1 { ols_fit(expand(x, true, true).view(), y)?.adj_r2 } else { quad.adj_r2 };

    Ok(vec![
        entry("lin_simple.adj_r2", lin.adj_r2),
        entry("lin_simple.intercept", Some(lin.intercept())),
        entry("lin_simple.coef.min", cmin),
        entry("lin_simple.coef.max", cmax),
        entry("lin_simple.coef.max_by_min", LinearFit::abs_ratio(lin.slopes())),
        entry("lin_w_interact.adj_r2", lin_int),
        entry("quad_simple.adj_r2", quad.adj_r2),
        entry("quad_simple.cond", LinearFit::abs_ratio(&quad.slopes()[n..])),
        entry("quad_w_interact.adj_r2", quad_int),
    ])
}
