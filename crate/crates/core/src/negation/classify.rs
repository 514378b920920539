//! Binary classifiers over dense feature rows.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major features with 0/1 labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    dimension: usize,
    features: Vec<f64>,
    labels: Vec<u8>,
}

impl Samples {
    pub fn new(dimension: usize, features: Vec<f64>, labels: Vec<u8>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("feature dimension must be positive"));
        }
        if features.len() != dimension * labels.len() {
            return Err(Error::invalid("feature buffer does not match label count"));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::invalid("labels must be 0 or 1"));
        }
        Ok(Self { dimension, features, labels })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<u8>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("ragged feature rows"));
        }
        Self::new(dim, rows.concat(), labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn subset(&self, rows: &[usize]) -> Samples {
        Samples {
            dimension: self.dimension,
            features: rows.iter().flat_map(|&i| self.row(i).iter().copied()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.len() - ones, ones]
    }

    fn require_two_classes(&self) -> Result<()> {
        let [a, b] = self.class_counts();
        if a < 2 || b < 2 {
            return Err(Error::invalid(format!("need at least 2 examples per class, got {a} and {b}")));
        }
        Ok(())
    }
}

pub trait Classifier: Send + Sync {
    /// Probability of label 1.
    fn predict_proba(&self, row: &[f64]) -> f64;

    fn predict(&self, row: &[f64]) -> u8 {
        u8::from(self.predict_proba(row) > 0.5)
    }

    fn accuracy(&self, data: &Samples) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        let hits = (0..data.len()).filter(|&i| self.predict(data.row(i)) == data.labels[i]).count();
        hits as f64 / data.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogisticConfig {
    pub l2: f64,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self { l2: 1e-3, learning_rate: 0.5, epochs: 500 }
    }
}

/// Logistic regression on standardized features.
#[derive(Clone, Debug)]
pub struct LogisticRegression {
    mean: Vec<f64>,
    scale: Vec<f64>,
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticRegression {
    /// Full-batch gradient descent on mean log-loss plus `l2/2 · ‖w‖²`.
    pub fn fit(data: &Samples, cfg: &LogisticConfig) -> Result<Self> {
        data.require_two_classes()?;
        if !(cfg.l2 >= 0.0 && cfg.learning_rate > 0.0 && cfg.l2.is_finite() && cfg.learning_rate.is_finite()) {
            return Err(Error::Config("logistic l2 must be >= 0 and learning_rate > 0".into()));
        }
        let (n, d) = (data.len(), data.dimension);
        let mut mean = vec![0.0; d];
        for i in 0..n {
            for (m, x) in mean.iter_mut().zip(data.row(i)) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut scale = vec![0.0; d];
        for i in 0..n {
            for ((s, x), m) in scale.iter_mut().zip(data.row(i)).zip(&mean) {
                *s += (x - m) * (x - m);
            }
        }
        for s in &mut scale {
            let sd = (*s / n as f64).sqrt();
            *s = if sd > 1e-12 { sd } else { 1.0 };
        }
        let x: Vec<f64> = (0..n)
            .flat_map(|i| data.row(i).iter().zip(&mean).zip(&scale).map(|((v, m), s)| (v - m) / s).collect::<Vec<_>>())
            .collect();

        let mut w = vec![0.0; d];
        let mut b = 0.0;
        let mut grad = vec![0.0; d];
        for _ in 0..cfg.epochs {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut gb = 0.0;
            for i in 0..n {
                let row = &x[i * d..(i + 1) * d];
                let z = b + row.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>();
                let err = sigmoid(z) - f64::from(data.labels[i]);
                gb += err;
                for (g, v) in grad.iter_mut().zip(row) {
                    *g += err * v;
                }
            }
            for (wj, g) in w.iter_mut().zip(&grad) {
                *wj -= cfg.learning_rate * (g / n as f64 + cfg.l2 * *wj);
            }
            b -= cfg.learning_rate * gb / n as f64;
        }
        if !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { epoch: cfg.epochs });
        }
        Ok(Self { mean, scale, weights: w, bias: b })
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

impl Classifier for LogisticRegression {
    fn predict_proba(&self, row: &[f64]) -> f64 {
        let z = self.bias
            + row.iter().zip(&self.mean).zip(&self.scale).zip(&self.weights).map(|(((x, m), s), w)| (x - m) / s * w).sum::<f64>();
        sigmoid(z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeConfig {
    pub max_depth: usize,
    pub min_samples_split: usize,
    /// Features examined per split; `None` means `max(1, ⌊√d⌋)`.
    pub max_features: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self { max_depth: 16, min_samples_split: 2, max_features: None }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf { positive: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// CART tree with Gini impurity and midpoint thresholds.
#[derive(Clone, Debug)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

struct Grower<'a> {
    data: &'a Samples,
    cfg: &'a TreeConfig,
    mtry: usize,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

impl Grower<'_> {
    fn leaf(&mut self, pos: usize, n: usize) -> usize {
        self.nodes.push(Node::Leaf { positive: pos as f64 / n as f64 });
        self.nodes.len() - 1
    }

    fn grow(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let data = self.data;
        let n = rows.len();
        let pos = rows.iter().filter(|&&i| data.labels[i] == 1).count();
        if depth >= self.cfg.max_depth || pos == 0 || pos == n || n < self.cfg.min_samples_split {
            return self.leaf(pos, n);
        }
        let first = data.row(rows[0]);
        if rows.iter().all(|&i| data.row(i) == first) {
            return self.leaf(pos, n);
        }

        let mut features: Vec<usize> = (0..data.dimension).collect();
        features.shuffle(&mut self.rng);
        let mut best: Option<(f64, usize, f64)> = None;
        for (tried, &f) in features.iter().enumerate() {
            if tried >= self.mtry && best.is_some() {
                break;
            }
            rows.sort_by(|&a, &b| data.row(a)[f].total_cmp(&data.row(b)[f]));
            let mut left_pos = 0;
            for k in 1..n {
                left_pos += usize::from(data.labels[rows[k - 1]] == 1);
                let (lo, hi) = (data.row(rows[k - 1])[f], data.row(rows[k])[f]);
                if lo == hi {
                    continue;
                }
                let score = (k as f64 * gini(left_pos, k) + (n - k) as f64 * gini(pos - left_pos, n - k)) / n as f64;
                if best.is_none_or(|(s, _, _)| score < s) {
                    let mid = lo + (hi - lo) / 2.0;
                    best = Some((score, f, if mid < hi { mid } else { lo }));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            return self.leaf(pos, n);
        };
        let mut split = 0;
        for k in 0..n {
            if data.row(rows[k])[feature] <= threshold {
                rows.swap(k, split);
                split += 1;
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { positive: 0.0 });
        let (l, r) = rows.split_at_mut(split);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }
}

impl DecisionTree {
    /// Grows a tree on `rows` (indices into `data`, repeats allowed).
    pub fn fit_rows(data: &Samples, rows: &[usize], cfg: &TreeConfig, seed: u64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("no training rows".into()));
        }
        if cfg.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        let d = data.dimension;
        let mtry = cfg.max_features.unwrap_or_else(|| ((d as f64).sqrt().floor() as usize).max(1)).clamp(1, d);
        let mut grower = Grower { data, cfg, mtry, rng: ChaCha8Rng::seed_from_u64(seed), nodes: Vec::new() };
        let mut rows = rows.to_vec();
        grower.grow(&mut rows, 0);
        Ok(Self { nodes: grower.nodes })
    }

    pub fn fit(data: &Samples, cfg: &TreeConfig, seed: u64) -> Result<Self> {
        data.require_two_classes()?;
        let rows: Vec<usize> = (0..data.len()).collect();
        Self::fit_rows(data, &rows, cfg, seed)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `(feature, threshold)` of the root split, if any.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes.first()? {
            Node::Split { feature, threshold, .. } => Some((*feature, *threshold)),
            Node::Leaf { .. } => None,
        }
    }
}

impl Classifier for DecisionTree {
    fn predict_proba(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { positive } => return *positive,
                Node::Split { feature, threshold, left, right } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestConfig {
    pub trees: usize,
    pub bootstrap: bool,
    pub seed: u64,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub max_features: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        let tree = TreeConfig::default();
        Self {
            trees: 100,
            bootstrap: true,
            seed: 0,
            max_depth: tree.max_depth,
            min_samples_split: tree.min_samples_split,
            max_features: tree.max_features,
        }
    }
}

impl ForestConfig {
    pub fn tree(&self) -> TreeConfig {
        TreeConfig {
            max_depth: self.max_depth,
            min_samples_split: self.min_samples_split,
            max_features: self.max_features,
        }
    }
}

/// Bagged decision trees; prediction is a majority vote.
#[derive(Clone, Debug)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
}

fn tree_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

impl RandomForest {
    pub fn fit(data: &Samples, cfg: &ForestConfig) -> Result<Self> {
        data.require_two_classes()?;
        if cfg.trees == 0 {
            return Err(Error::Config("forest needs at least one tree".into()));
        }
        let n = data.len();
        let tree_cfg = cfg.tree();
        let trees = (0..cfg.trees)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(tree_seed(cfg.seed, i));
                let rows: Vec<usize> =
                    if cfg.bootstrap { (0..n).map(|_| rng.random_range(0..n)).collect() } else { (0..n).collect() };
                DecisionTree::fit_rows(data, &rows, &tree_cfg, rng.random())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { trees })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }
}

impl Classifier for RandomForest {
    /// Fraction of trees voting for label 1.
    fn predict_proba(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict(row) == 1).count();
        votes as f64 / self.trees.len() as f64
    }
}
