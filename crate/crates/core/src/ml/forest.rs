//! Random forest of CART classification trees (Gini impurity).
//!
//! Every tree is grown on a bootstrap sample with `ceil(sqrt(p))` candidate
//! features per split, no depth limit and leaves of size one allowed.
//! Predictions are majority votes; ties go to the smallest class index.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, Rng};

#[derive(Debug, Clone)]
enum Node {
    Leaf { class: usize },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn predict_one(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    at = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    /// Mean decrease in impurity per feature, normalized to sum 1 (all zero
    /// if no tree ever split).
    pub importances: Vec<f64>,
    pub n_trees: usize,
    pub n_classes: usize,
    pub seed: u64,
}

fn gini(counts: &[f64], total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    1.0 - counts.iter().map(|c| (c / total) * (c / total)).sum::<f64>()
}

fn majority(counts: &[f64]) -> usize {
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
    mtry: usize,
    n_root: f64,
    nodes: Vec<Node>,
    importance: Vec<f64>,
    rng: Rng,
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<f64> {
        let mut c = vec![0.0; self.n_classes];
        for &i in idx {
            c[self.y[i]] += 1.0;
        }
        c
    }

    fn grow(&mut self, idx: &mut [usize]) -> usize {
        let counts = self.counts(idx);
        let total = idx.len() as f64;
        let node_gini = gini(&counts, total);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { class: majority(&counts) });
        if idx.len() < 2 || node_gini <= 0.0 {
            return id;
        }

        let p = self.x[0].len();
        let mut features: Vec<usize> = (0..p).collect();
        features.shuffle(&mut self.rng);
        let mut tried = 0;
        // (weighted child impurity, feature, threshold)
        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &features {
            if tried >= self.mtry {
                break;
            }
            idx.sort_unstable_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
            let first = self.x[idx[0]][f];
            let last = self.x[idx[idx.len() - 1]][f];
            if first == last {
                continue;
            }
            tried += 1;
            let mut left = vec![0.0; self.n_classes];
            for pos in 0..idx.len() - 1 {
                left[self.y[idx[pos]]] += 1.0;
                let (a, b) = (self.x[idx[pos]][f], self.x[idx[pos + 1]][f]);
                if a == b {
                    continue;
                }
                let nl = (pos + 1) as f64;
                let nr = total - nl;
                let right: Vec<f64> = counts.iter().zip(&left).map(|(c, l)| c - l).collect();
                let score = nl * gini(&left, nl) + nr * gini(&right, nr);
                if best.is_none_or(|(s, _, _)| score < s) {
                    let mut threshold = 0.5 * (a + b);
                    if threshold >= b {
                        threshold = a;
                    }
                    best = Some((score, f, threshold));
                }
            }
        }
        let Some((score, feature, threshold)) = best else {
            return id;
        };
        self.importance[feature] += (total * node_gini - score) / self.n_root;

        let mut split = 0;
        for k in 0..idx.len() {
            if self.x[idx[k]][feature] <= threshold {
                idx.swap(k, split);
                split += 1;
            }
        }
        let (l_idx, r_idx) = idx.split_at_mut(split);
        let left = self.grow(l_idx);
        let right = self.grow(r_idx);
        self.nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }
}

fn grow_tree(x: &[Vec<f64>], y: &[usize], n_classes: usize, mtry: usize, seed: u64) -> (Tree, Vec<f64>) {
    let mut rng = seeded(seed);
    let l = y.len();
    let mut idx: Vec<usize> = (0..l).map(|_| rng.random_range(0..l)).collect();
    let mut b = Builder {
        x,
        y,
        n_classes,
        mtry,
        n_root: l as f64,
        nodes: Vec::new(),
        importance: vec![0.0; x[0].len()],
        rng,
    };
    b.grow(&mut idx);
    (Tree { nodes: b.nodes }, b.importance)
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Trains a forest on rows `x` with class labels `labels` in `0..K`.
pub fn forest_train(x: &[Vec<f64>], labels: &[usize], n_trees: usize, seed: u64) -> Result<ForestModel> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if labels.len() != x.len() {
        return Err(Error::Length { expected: x.len(), got: labels.len() });
    }
    if n_trees == 0 {
        return Err(Error::InvalidArgument("a forest needs at least one tree".into()));
    }
    let p = x[0].len();
    if p == 0 || x.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidArgument("training rows must share a non-zero width".into()));
    }
    let n_classes = labels.iter().copied().max().unwrap_or(0) + 1;
    let mtry = ((p as f64).sqrt().ceil() as usize).max(1);
    let grown: Vec<(Tree, Vec<f64>)> = (0..n_trees)
        .into_par_iter()
        .map(|t| grow_tree(x, labels, n_classes, mtry, derive_seed(seed, &[t as u64])))
        .collect();
    let mut importances = vec![0.0; p];
    let mut trees = Vec::with_capacity(n_trees);
    for (tree, mut imp) in grown {
        normalize(&mut imp);
        for (acc, v) in importances.iter_mut().zip(&imp) {
            *acc += v;
        }
        trees.push(tree);
    }
    normalize(&mut importances);
    Ok(ForestModel { trees, importances, n_trees, n_classes, seed })
}

pub fn forest_predict(model: &ForestModel, x: &[Vec<f64>]) -> Vec<usize> {
    x.iter()
        .map(|row| {
            let mut votes = vec![0.0; model.n_classes];
            for t in &model.trees {
                votes[t.predict_one(row)] += 1.0;
            }
            majority(&votes)
        })
        .collect()
}
