//! Randomized invariant checks, each run for [`CASES`] cases with a fixed
//! generator seed. Shared by the per-invariant tests and the acceptance
//! report.

use std::cell::Cell;

use ela_core::cellmap::{absorption, build_grid, cm_angle};
use ela_core::dimred::{compute_weights, rank_objectives, reduce};
use ela_core::features::{compute_group, disp, ela_level, ela_meta, ic, ic_symbols, nbc, nn_tour, tour_slopes, FeatureConfig, FeatureInput, Group};
use ela_core::harness::{assemble, similarity, RawRow};
use ela_core::linalg::sym_eigen_desc;
use ela_core::ml::{forest_predict, forest_train, kendall_tau, ols_fit, Lda};
use ela_core::rng::{seeded, standard_normal};
use ela_core::sampling::{build_design, build_design_with, lhs, DesignSample};
use ela_core::testbed::{function_ids, function_spec, make_instance, random_rotation, Bounds};
use nalgebra::DMatrix;
use ndarray::Array2;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use super::oracles::{chain_by_paths, close, disp_oracle, nbc_oracle, sign_symbols};

pub const CASES: u32 = 200;

pub type Check = fn() -> Result<(), String>;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn fid() -> impl Strategy<Value = u32> {
    prop::sample::select(function_ids())
}

/// `(function, dim, size, seed)` of a small evaluated design.
fn design_params(dims: std::ops::RangeInclusive<usize>, sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (u32, usize, usize, u64)> {
    (fid(), dims, sizes, any::<u64>())
}

fn make_design((f, n, l, seed): (u32, usize, usize, u64)) -> DesignSample {
    let inst = make_instance(f, n, seed % 7 + 1).unwrap();
    build_design(&inst, l, seed).unwrap()
}

fn get(entries: &[(String, Option<f64>)], name: &str) -> Option<f64> {
    entries.iter().find(|(n, _)| n == name).and_then(|(_, v)| *v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

// ---- testbed ----

pub fn evaluate_is_pure() -> Result<(), String> {
    run((fid(), 2usize..12, 1u64..20, prop::collection::vec(-5.0f64..5.0, 12)), |(f, n, inst, x)| {
        let a = make_instance(f, n, inst).unwrap();
        let b = make_instance(f, n, inst).unwrap();
        let x = &x[..n];
        let v = a.evaluate(x).unwrap();
        ensure(v.to_bits() == a.evaluate(x).unwrap().to_bits() && v.to_bits() == b.evaluate(x).unwrap().to_bits(), || {
            format!("f{f} not deterministic at {x:?}")
        })
    })
}

pub fn rotations_are_orthogonal() -> Result<(), String> {
    run((1usize..40, any::<u64>()), |(n, seed)| {
        let r = random_rotation(n, &mut seeded(seed));
        let m = DMatrix::from_row_slice(n, n, &r);
        let err = (m.transpose() * &m - DMatrix::identity(n, n)).abs().max();
        ensure(err <= 1e-10, || format!("n={n}: |R'R - I| = {err:e}"))
    })
}

pub fn labels_depend_on_function_only() -> Result<(), String> {
    run((fid(), 2usize..30, 1u64..50), |(f, n, inst)| {
        let d = make_instance(f, n, inst).unwrap();
        ensure(*d.labels() == function_spec(f).unwrap().labels, || format!("f{f} labels vary"))
    })
}

// ---- sampling ----

pub fn lhs_marginals_are_stratified() -> Result<(), String> {
    run((1usize..200, 1usize..8, any::<u64>(), -10.0f64..0.0, 0.1f64..10.0), |(l, n, seed, lo, width)| {
        let b = Bounds::uniform(n, lo, lo + width).unwrap();
        let x = lhs(l, &b, seed).unwrap();
        for j in 0..n {
            let mut counts = vec![0usize; l];
            for &v in x.column(j) {
                let bin = (((v - lo) / width * l as f64).floor() as usize).min(l - 1);
                counts[bin] += 1;
            }
            ensure(counts.iter().all(|&c| c == 1), || format!("column {j} of l={l}: {counts:?}"))?;
        }
        Ok(())
    })
}

pub fn design_evaluates_each_point_once() -> Result<(), String> {
    run((2usize..300, 1usize..10, any::<u64>()), |(l, n, seed)| {
        let calls = Cell::new(0usize);
        let d = build_design_with(l, Bounds::default_box(n), seed, |x| {
            calls.set(calls.get() + 1);
            Ok(x.iter().sum())
        })
        .unwrap();
        ensure(calls.get() == l && d.len() == l, || format!("{} evaluations for l={l}", calls.get()))
    })
}

// ---- dimred ----

pub fn reduce_is_row_equivariant() -> Result<(), String> {
    run((design_params(3..=8, 20..=60), 1usize..3, any::<u64>()), |(p, m, perm_seed)| {
        let d = make_design(p);
        let m = m.min(d.dim() - 1);
        let mut perm: Vec<usize> = (0..d.len()).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut seeded(perm_seed));
        let pts = Array2::from_shape_fn(d.points.dim(), |(i, j)| d.points[[perm[i], j]]);
        let y: Vec<f64> = perm.iter().map(|&i| d.objectives[i]).collect();
        let dp = DesignSample::new(pts, y, d.bounds.clone(), 0).unwrap();
        let a = reduce(&d, m).unwrap();
        let b = reduce(&dp, m).unwrap();
        let scale = a.points.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        for (i, &src) in perm.iter().enumerate() {
            for c in 0..m {
                let diff = (b.points[[i, c]] - a.points[[src, c]]).abs();
                ensure(diff <= 1e-8 * scale.max(1e-12), || format!("row {i} col {c}: {diff:e}"))?;
            }
        }
        Ok(())
    })
}

pub fn explained_variance_is_top_spectrum() -> Result<(), String> {
    run((design_params(3..=8, 10..=60), 1usize..7), |(p, m)| {
        let d = make_design(p);
        let n = d.dim();
        let m = m.min(n - 1);
        let r = reduce(&d, m).unwrap();
        let t = &r.transform;
        let w = &t.weights.weights;
        let l = d.len();
        let xbar = DMatrix::from_fn(l, n, |i, j| w[i] * (d.points[[i, j]] - t.mean[j]));
        let centered = DMatrix::from_fn(l, n, |i, j| xbar[(i, j)] - xbar.column(j).mean());
        let cov = centered.tr_mul(&centered) / (l - 1) as f64;
        let (values, _) = sym_eigen_desc(cov.clone()).unwrap();
        let trace = cov.trace();
        let tol = 1e-10 * trace.max(1e-300);
        for k in 0..m {
            ensure((t.explained_variance[k] - values[k].max(0.0)).abs() <= tol, || {
                format!("eigenvalue {k}: {} vs {}", t.explained_variance[k], values[k])
            })?;
        }
        let sum: f64 = t.explained_variance.iter().sum();
        ensure(sum <= t.total_variance + tol && (t.total_variance - trace).abs() <= tol, || {
            format!("sum {sum} vs trace {}", t.total_variance)
        })
    })
}

pub fn reduce_keeps_objectives() -> Result<(), String> {
    run((design_params(2..=10, 5..=80), 1usize..9), |(p, m)| {
        let d = make_design(p);
        if m >= d.dim() {
            return ensure(reduce(&d, m).is_err(), || "m >= n accepted".into());
        }
        let r = reduce(&d, m).unwrap();
        let same = r.objectives.iter().zip(&d.objectives).all(|(a, b)| a.to_bits() == b.to_bits());
        ensure(same && r.m() == m, || "objectives changed".into())
    })
}

pub fn weights_follow_closed_form() -> Result<(), String> {
    run(prop::collection::vec(-1e6f64..1e6, 2..300), |y| {
        let ranks = rank_objectives(&y).unwrap();
        let w = compute_weights(&ranks).unwrap();
        let l = y.len() as f64;
        let total: f64 = w.weights.iter().sum();
        for (i, &r) in ranks.iter().enumerate() {
            let raw = l.ln() - (r as f64).ln();
            ensure((w.raw_weights[i] - raw).abs() <= 1e-12, || format!("raw weight {i}"))?;
        }
        ensure((total - 1.0).abs() <= 1e-12, || format!("weights sum to {total}"))
    })
}

// ---- ml ----

pub fn ols_residuals_are_orthogonal() -> Result<(), String> {
    run((5usize..80, 1usize..6, any::<u64>(), 0.01f64..1e3), |(l, p, seed, scale)| {
        let mut rng = seeded(seed);
        let x = Array2::from_shape_fn((l, p), |_| scale * standard_normal(&mut rng));
        let y: Vec<f64> = (0..l).map(|_| scale * standard_normal(&mut rng)).collect();
        let fit = ols_fit(x.view(), &y).unwrap();
        let resid: Vec<f64> = (0..l)
            .map(|i| y[i] - fit.intercept() - (0..p).map(|j| fit.slopes()[j] * x[[i, j]]).sum::<f64>())
            .collect();
        let size = x.iter().chain(&y).fold(1.0f64, |s, v| s.max(v.abs()));
        let bound = 1e-8 * size * size * l as f64;
        let mut worst = resid.iter().sum::<f64>().abs();
        for j in 0..p {
            worst = worst.max((0..l).map(|i| x[[i, j]] * resid[i]).sum::<f64>().abs());
        }
        ensure(worst <= bound, || format!("|X'r| = {worst:e} > {bound:e}"))
    })
}

pub fn lda_is_affine_invariant() -> Result<(), String> {
    run((20usize..80, 2usize..4, any::<u64>()), |(l, n, seed)| {
        let mut rng = seeded(seed);
        let labels: Vec<usize> = (0..l).map(|i| i % 2).collect();
        let x = DMatrix::from_fn(l, n, |i, j| standard_normal(&mut rng) + if labels[i] == 1 && j == 0 { 1.5 } else { 0.0 });
        let rot = DMatrix::from_row_slice(n, n, &random_rotation(n, &mut rng));
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| 0.5 + 1.5 * rng_unit(&mut rng)));
        let a = rot * diag;
        let shift = nalgebra::RowDVector::from_fn(n, |_, _| 10.0 * standard_normal(&mut rng));
        let map = |m: &DMatrix<f64>| {
            let mut out = m * a.transpose();
            for mut row in out.row_iter_mut() {
                row += &shift;
            }
            out
        };
        let test = DMatrix::from_fn(50, n, |_, _| 2.0 * standard_normal(&mut rng));
        let base = Lda::fit(&x, &labels, 2).unwrap();
        let moved = Lda::fit(&map(&x), &labels, 2).unwrap();
        let s0 = base.scores(&test);
        let p0 = base.predict(&test);
        let p1 = moved.predict(&map(&test));
        for i in 0..test.nrows() {
            if (s0[i][0] - s0[i][1]).abs() > 1e-6 {
                ensure(p0[i] == p1[i], || format!("prediction {i} changed"))?;
            }
        }
        Ok(())
    })
}

fn rng_unit(rng: &mut ela_core::rng::Rng) -> f64 {
    use rand::Rng as _;
    rng.random::<f64>()
}

pub fn forest_prediction_is_deterministic() -> Result<(), String> {
    run((10usize..60, 1usize..5, any::<u64>()), |(l, p, seed)| {
        let mut rng = seeded(seed);
        let x: Vec<Vec<f64>> = (0..l).map(|_| (0..p).map(|_| standard_normal(&mut rng)).collect()).collect();
        let y: Vec<usize> = x.iter().map(|r| usize::from(r[0] > 0.0)).collect();
        let model = forest_train(&x, &y, 5, seed).unwrap();
        ensure(forest_predict(&model, &x) == forest_predict(&model, &x), || "predictions differ".into())?;
        let again = forest_train(&x, &y, 5, seed).unwrap();
        ensure(forest_predict(&again, &x) == forest_predict(&model, &x), || "retraining differs".into())
    })
}

pub fn kendall_axioms() -> Result<(), String> {
    let pairs = (3usize..40).prop_flat_map(|k| (prop::collection::vec(-100i32..100, k), prop::collection::vec(-100i32..100, k)));
    run(pairs, |(a, b)| {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let ab = kendall_tau(&a, &b).unwrap();
        let ba = kendall_tau(&b, &a).unwrap();
        ensure(ab == ba, || format!("asymmetric: {ab:?} vs {ba:?}"))?;
        let ea: Vec<f64> = a.iter().map(|v| (v / 50.0).exp() * 3.0 + 1.0).collect();
        let cb: Vec<f64> = b.iter().map(|v| v * v * v + 7.0).collect();
        ensure(close(kendall_tau(&ea, &cb).unwrap(), ab, 1e-12), || "not invariant under increasing maps".into())?;
        if let Some(t) = ab {
            ensure((-1.0..=1.0).contains(&t), || format!("tau {t} out of range"))?;
        }
        if let Some(t) = kendall_tau(&a, &a).unwrap() {
            ensure((t - 1.0).abs() < 1e-12, || format!("self tau {t}"))?;
        }
        Ok(())
    })
}

// ---- feature groups ----

pub fn distance_groups_are_translation_invariant() -> Result<(), String> {
    run((design_params(2..=4, 20..=70), prop::collection::vec(-50.0f64..50.0, 4)), |(p, shift)| {
        let d = make_design(p);
        let moved = &d.points + &ndarray::Array1::from_vec(shift[..d.dim()].to_vec());
        let y = &d.objectives;
        let q = [0.05, 0.25];
        let pairs = [
            (nbc(d.points.view(), y, None).unwrap(), nbc(moved.view(), y, None).unwrap()),
            (disp(d.points.view(), y, &q, None).unwrap(), disp(moved.view(), y, &q, None).unwrap()),
            (ic(d.points.view(), y, 200, 3, None).unwrap(), ic(moved.view(), y, 200, 3, None).unwrap()),
        ];
        for (a, b) in &pairs {
            for ((name, va), (_, vb)) in a.iter().zip(b) {
                ensure(close(*va, *vb, 1e-9), || format!("{name}: {va:?} vs {vb:?}"))?;
            }
        }
        let (a, b) = (ela_meta(d.points.view(), y).unwrap(), ela_meta(moved.view(), y).unwrap());
        for ((name, va), (_, vb)) in a.iter().zip(&b) {
            if name != "lin_simple.intercept" {
                ensure(close(*va, *vb, 1e-6), || format!("{name}: {va:?} vs {vb:?}"))?;
            }
        }
        let fit = ols_fit(d.points.view(), y).unwrap();
        let shifted = fit.intercept() - fit.slopes().iter().zip(&shift).map(|(c, s)| c * s).sum::<f64>();
        let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let got = get(&b, "lin_simple.intercept").unwrap();
        ensure((got - shifted).abs() <= 1e-8 * scale, || format!("intercept {got} vs {shifted}"))
    })
}

pub fn objective_scaling() -> Result<(), String> {
    run((design_params(2..=3, 40..=80), 0.01f64..100.0), |(p, c)| {
        let d = make_design(p);
        let x = d.points.view();
        let scaled: Vec<f64> = d.objectives.iter().map(|v| v * c).collect();
        let q = [0.25, 0.5];
        let a = ela_level(x, &d.objectives, &q, 5, 11, None).unwrap();
        let b = ela_level(x, &scaled, &q, 5, 11, None).unwrap();
        for ((name, va), (_, vb)) in a.iter().zip(&b) {
            if name.starts_with("mmce_") {
                ensure(va == vb, || format!("{name}: {va:?} vs {vb:?}"))?;
            }
        }
        let (a, b) = (ela_meta(x, &d.objectives).unwrap(), ela_meta(x, &scaled).unwrap());
        for name in ["lin_simple.intercept", "lin_simple.coef.min", "lin_simple.coef.max"] {
            let expect = get(&a, name).map(|v| v * c);
            ensure(close(get(&b, name), expect, 1e-8), || format!("{name} not scaled by {c}"))?;
        }
        for name in ["lin_simple.adj_r2", "lin_simple.coef.max_by_min", "quad_simple.adj_r2"] {
            ensure(close(get(&a, name), get(&b, name), 1e-8), || format!("{name} changed"))?;
        }
        Ok(())
    })
}

pub fn entry_counts_match_contract() -> Result<(), String> {
    let expected = [
        (Group::ElaDistr, 5),
        (Group::ElaLevel, 20),
        (Group::ElaMeta, 11),
        (Group::Nbc, 7),
        (Group::Disp, 18),
        (Group::Ic, 7),
        (Group::Basic, 15),
        (Group::Limo, 14),
        (Group::Pca, 10),
        (Group::CmAngle, 10),
        (Group::CmConv, 6),
        (Group::CmGrad, 4),
        (Group::Gcm, 75),
    ];
    run((design_params(2..=3, 40..=80), prop::sample::select(expected.to_vec()), any::<bool>()), |(p, (g, count), red)| {
        let d = make_design(p);
        let reduced;
        let input = if red && d.dim() > 2 {
            reduced = reduce(&d, 2).unwrap();
            FeatureInput::from_reduced(&reduced).unwrap()
        } else {
            FeatureInput::from_design(&d)
        };
        let cfg = FeatureConfig { level_folds: 3, ic_eps_count: 100, conv_triples: 100, ..FeatureConfig::default() };
        let fv = compute_group(g.name(), &input, &cfg, None).unwrap();
        ensure(fv.len() == count && g.entry_count() == count, || format!("{g}: {} entries", fv.len()))?;
        let prefix = input.prefix();
        ensure(fv.entries.iter().all(|(n, _)| n.starts_with(&format!("{prefix}{}.", g.name()))), || {
            format!("{g}: bad names")
        })
    })
}

pub fn nbc_and_disp_match_brute_force() -> Result<(), String> {
    run(design_params(2..=5, 10..=200), |p| {
        let d = make_design(p);
        let (x, y) = (d.points.view(), &d.objectives);
        let best = y.iter().copied().fold(f64::INFINITY, f64::min);
        if y.iter().filter(|&&v| v == best).count() > 1 {
            return Ok(());
        }
        let got = nbc(x, y, None).unwrap();
        for ((name, v), o) in got.iter().zip(nbc_oracle(x, y)) {
            ensure(close(*v, o, 1e-9), || format!("{name}: {v:?} vs {o:?}"))?;
        }
        let q = [0.02, 0.05, 0.1, 0.25];
        let got = disp(x, y, &q, None).unwrap();
        for ((name, v), o) in got.iter().zip(disp_oracle(x, y, &q)) {
            ensure(close(*v, o, 1e-9), || format!("{name}: {v:?} vs {o:?}"))?;
        }
        Ok(())
    })
}

pub fn ic_symbols_match_signs() -> Result<(), String> {
    run((design_params(2..=4, 10..=100), any::<u64>(), any::<bool>()), |(p, seed, round)| {
        let d = make_design(p);
        let y: Vec<f64> = if round { d.objectives.iter().map(|v| (v / 10.0).round()).collect() } else { d.objectives.clone() };
        let tour = nn_tour(d.points.view(), seed, None).unwrap();
        let slopes = tour_slopes(d.points.view(), &y, &tour);
        let got = ic_symbols(&slopes, 0.0);
        let want = sign_symbols(d.points.view(), &y, &tour);
        ensure(got == want, || format!("{got:?} vs {want:?}"))
    })
}

// ---- cell mapping ----

/// Random values on a `b^d` grid with one point per cell, some cells
/// dropped and some values tied.
fn random_grid() -> impl Strategy<Value = (usize, usize, Vec<i32>, Vec<bool>)> {
    (3usize..6, 1usize..4).prop_flat_map(|(b, d)| {
        let cells = b.pow(d as u32);
        (Just(b), Just(d), prop::collection::vec(0i32..12, cells), prop::collection::vec(prop::bool::weighted(0.85), cells))
    })
}

fn grid_points(b: usize, d: usize, keep: &[bool]) -> (Array2<f64>, Vec<usize>) {
    let kept: Vec<usize> = (0..keep.len()).filter(|&c| keep[c]).collect();
    let pts = Array2::from_shape_fn((kept.len(), d), |(i, j)| {
        let c = kept[i] / b.pow((d - 1 - j) as u32) % b;
        c as f64 + 0.5
    });
    (pts, kept)
}

pub fn absorption_rows_are_distributions() -> Result<(), String> {
    run(random_grid(), |(b, d, vals, keep)| {
        let (pts, kept) = grid_points(b, d, &keep);
        if kept.is_empty() {
            return Ok(());
        }
        let y: Vec<f64> = kept.iter().map(|&c| f64::from(vals[c])).collect();
        let bounds = Bounds::uniform(d, 0.0, b as f64).unwrap();
        let (grid, summary) = build_grid(pts.view(), &y, b, &bounds, 1_000_000).unwrap();
        let chain = absorption(&grid, &summary, &summary.representatives(ela_core::cellmap::Scheme::Mean));
        for (p, row) in chain.probs.iter().enumerate() {
            let s: f64 = row.iter().map(|(_, v)| v).sum();
            ensure((s - 1.0).abs() <= 1e-9 && row.iter().all(|&(_, v)| v > 0.0), || format!("cell {p} sums to {s}"))?;
        }
        Ok(())
    })
}

pub fn attractors_are_local_minima() -> Result<(), String> {
    run(random_grid(), |(b, d, vals, keep)| {
        let (pts, kept) = grid_points(b, d, &keep);
        if kept.is_empty() {
            return Ok(());
        }
        let y: Vec<f64> = kept.iter().map(|&c| f64::from(vals[c])).collect();
        let bounds = Bounds::uniform(d, 0.0, b as f64).unwrap();
        let (grid, summary) = build_grid(pts.view(), &y, b, &bounds, 1_000_000).unwrap();
        let reps = summary.representatives(ela_core::cellmap::Scheme::Min);
        let chain = absorption(&grid, &summary, &reps);
        let coords = |c: usize| -> Vec<usize> { (0..d).map(|j| c / b.pow((d - 1 - j) as u32) % b).collect() };
        let value = |c: usize| kept.iter().position(|&k| k == c).map(|i| y[i]);
        let mut brute: Vec<usize> = Vec::new();
        for &c in &kept {
            let cc = coords(c);
            let lower = kept.iter().any(|&o| {
                let oc = coords(o);
                let step: usize = cc.iter().zip(&oc).map(|(a, b)| a.abs_diff(*b)).sum();
                step == 1 && value(o) < value(c)
            });
            if !lower {
                brute.push(c);
            }
        }
        brute.sort();
        let mut got: Vec<usize> = chain.attractors.iter().map(|&p| summary.cells[p].index).collect();
        got.sort();
        ensure(got == brute, || format!("{got:?} vs {brute:?}"))?;
        if d == 2 && b == 3 && kept.len() == 9 {
            let (attr, _) = chain_by_paths(&y, 3);
            ensure(attr == brute, || "path enumeration disagrees".into())?;
        }
        Ok(())
    })
}

pub fn cm_angle_ranges() -> Result<(), String> {
    run(design_params(2..=3, 20..=120), |p| {
        let d = make_design(p);
        let (grid, summary) = build_grid(d.points.view(), &d.objectives, 3, &d.bounds, 1_000_000).unwrap();
        let e = cm_angle(&grid, &summary, d.points.view(), &d.objectives);
        if let Some(a) = get(&e, "angle.mean") {
            ensure((0.0..=180.0).contains(&a), || format!("angle {a}"))?;
        }
        if let Some(r) = get(&e, "y_ratio_best2worst.mean") {
            ensure((0.0..=1.0).contains(&r), || format!("y_ratio {r}"))?;
        }
        Ok(())
    })
}

// ---- harness ----

fn raw_rows() -> impl Strategy<Value = Vec<RawRow>> {
    (3usize..8, 1u64..4, 1usize..5).prop_flat_map(|(nf, ni, nc)| {
        prop::collection::vec(prop::option::weighted(0.8, -100.0f64..100.0), nf * ni as usize * nc).prop_map(move |vals| {
            let mut rows = Vec::new();
            for f in 0..nf {
                for i in 0..ni {
                    let base = (f * ni as usize + i as usize) * nc;
                    rows.push(RawRow {
                        function_id: f as u32 + 1,
                        instance: i + 1,
                        entries: (0..nc).map(|c| (format!("g.f{c}"), vals[base + c])).collect(),
                    });
                }
            }
            rows
        })
    })
}

pub fn assemble_is_idempotent() -> Result<(), String> {
    run(raw_rows(), |raw| {
        let Ok(ds) = assemble(&raw, "t", 2, false) else { return Ok(()) };
        let again: Vec<RawRow> = (0..ds.len())
            .map(|i| RawRow {
                function_id: ds.function_ids[i],
                instance: ds.instances[i],
                entries: ds.feature_names.iter().cloned().zip(ds.rows[i].iter().map(|&v| Some(v))).collect(),
            })
            .collect();
        let ds2 = assemble(&again, "t", 2, false).unwrap();
        ensure(ds == ds2, || "re-assembly changed the matrix".into())?;
        ensure(ds.rows.iter().flatten().all(|v| v.is_finite()), || "undefined value left".into())
    })
}

/// Non-linear maps are only applied with one instance per function, since
/// similarity compares per-function means.
pub fn similarity_ignores_monotone_maps() -> Result<(), String> {
    run(raw_rows(), |raw| {
        let single = raw.iter().all(|r| r.instance == 1);
        let map = |x: f64| if single { x.powi(3) + 2.0 * x } else { 3.0 * x - 7.0 };
        let reduced: Vec<RawRow> = raw
            .iter()
            .map(|r| RawRow {
                entries: r.entries.iter().map(|(n, v)| (format!("d_{n}"), v.map(|x| x * 0.5 + 1.0))).collect(),
                ..r.clone()
            })
            .collect();
        let mapped: Vec<RawRow> = reduced
            .iter()
            .map(|r| RawRow { entries: r.entries.iter().map(|(n, v)| (n.clone(), v.map(map))).collect(), ..r.clone() })
            .collect();
        let a = similarity(&raw, &reduced).unwrap();
        let b = similarity(&raw, &mapped).unwrap();
        for (x, y) in a.iter().zip(&b) {
            ensure(x.feature == y.feature && close(x.tau, y.tau, 1e-12), || format!("{}: {:?} vs {:?}", x.feature, x.tau, y.tau))?;
        }
        Ok(())
    })
}

pub const ALL: &[(&str, Check)] = &[
    ("evaluate_is_pure", evaluate_is_pure),
    ("rotations_are_orthogonal", rotations_are_orthogonal),
    ("labels_depend_on_function_only", labels_depend_on_function_only),
    ("lhs_marginals_are_stratified", lhs_marginals_are_stratified),
    ("design_evaluates_each_point_once", design_evaluates_each_point_once),
    ("reduce_is_row_equivariant", reduce_is_row_equivariant),
    ("explained_variance_is_top_spectrum", explained_variance_is_top_spectrum),
    ("reduce_keeps_objectives", reduce_keeps_objectives),
    ("weights_follow_closed_form", weights_follow_closed_form),
    ("ols_residuals_are_orthogonal", ols_residuals_are_orthogonal),
    ("lda_is_affine_invariant", lda_is_affine_invariant),
    ("forest_prediction_is_deterministic", forest_prediction_is_deterministic),
    ("kendall_axioms", kendall_axioms),
    ("distance_groups_are_translation_invariant", distance_groups_are_translation_invariant),
    ("objective_scaling", objective_scaling),
    ("entry_counts_match_contract", entry_counts_match_contract),
    ("nbc_and_disp_match_brute_force", nbc_and_disp_match_brute_force),
    ("ic_symbols_match_signs", ic_symbols_match_signs),
    ("absorption_rows_are_distributions", absorption_rows_are_distributions),
    ("attractors_are_local_minima", attractors_are_local_minima),
    ("cm_angle_ranges", cm_angle_ranges),
    ("assemble_is_idempotent", assemble_is_idempotent),
    ("similarity_ignores_monotone_maps", similarity_ignores_monotone_maps),
];
