//! Margin-ranking trainer for translational embeddings.
//!
//! Score is the squared Euclidean distance `d(h, r, t) = ‖h + r − t‖²`;
//! each positive is paired with corrupted negatives (head or tail replaced
//! by a uniformly drawn entity) and updated by plain SGD on
//! `max(0, γ + d(pos) − d(neg))`. Entity vectors are projected back to the
//! unit sphere at the start of every epoch; relation vectors are free.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub dimension: usize,
    pub epochs: usize,
    /// Initial step size, decayed linearly to zero over all batches.
    pub learning_rate: f64,
    pub margin: f64,
    pub negatives: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            dimension: 100,
            epochs: 30,
            learning_rate: 0.05,
            margin: 1.0,
            negatives: 10,
            batch_size: 1024,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !(self.margin > 0.0) {
            return Err(Error::invalid("margin must be positive"));
        }
        if self.negatives == 0 {
            return Err(Error::invalid("at least one negative per positive is required"));
        }
        if self.batch_size == 0 {
            return Err(Error::invalid("batch size must be positive"));
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::invalid("learning rate must be positive and finite"));
        }
        Ok(())
    }
}

/// Loss trajectory of a training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean margin loss of the freshly initialized table.
    pub initial_loss: f64,
    /// Mean margin loss observed over each epoch.
    pub epoch_losses: Vec<f64>,
}

impl TrainReport {
    pub fn final_loss(&self) -> f64 {
        self.epoch_losses.last().copied().unwrap_or(self.initial_loss)
    }
}

/// Trains on every triple of `graph`.
pub fn train(graph: &KnowledgeGraph, config: &TrainConfig) -> Result<(EmbeddingTable, TrainReport)> {
    train_on(graph, graph, config)
}

/// Trains a table covering the vocabulary of `vocabulary` using only the
/// triples of `training` (typically its train split). Entities that never
/// occur in `training` keep their initial vectors.
pub fn train_on(
    vocabulary: &KnowledgeGraph,
    training: &KnowledgeGraph,
    config: &TrainConfig,
) -> Result<(EmbeddingTable, TrainReport)> {
    config.validate()?;
    if training.is_empty() {
        return Err(Error::Empty("cannot train on a graph without triples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = EmbeddingTable::random(vocabulary, config.dimension, &mut rng);
    for row in 0..table.num_relations() {
        normalize(table.relation_at_mut(row));
    }
    table.normalize_entities();

    let positives: Vec<(usize, usize, usize)> = training
        .triples()
        .iter()
        .map(|&t| table.rows_for(training, t))
        .collect::<Result<_>>()?;

    let mut trainer = Sgd {
        table,
        margin: config.margin as f32,
        negatives: config.negatives,
        scratch: vec![0.0; config.dimension],
        scratch_neg: vec![0.0; config.dimension],
    };

    let mut eval_rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_1055);
    let initial_loss = trainer.mean_loss(&positives, &mut eval_rng);
    if !initial_loss.is_finite() {
        return Err(Error::Divergence { epoch: 0 });
    }

    let batches_per_epoch = positives.len().div_ceil(config.batch_size);
    let total_batches = (batches_per_epoch * config.epochs).max(1);
    let mut order: Vec<usize> = (0..positives.len()).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    let mut batch_counter = 0usize;

    for epoch in 0..config.epochs {
        trainer.table.normalize_entities();
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0f64;
        for batch in order.chunks(config.batch_size) {
            let lr = (config.learning_rate * (1.0 - batch_counter as f64 / total_batches as f64)) as f32;
            batch_counter += 1;
            for &i in batch {
                loss_sum += trainer.step(positives[i], lr, &mut rng);
            }
        }
        let mean = loss_sum / (positives.len() * config.negatives) as f64;
        if !mean.is_finite() || !trainer.table.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        log::debug!("epoch {epoch}: mean loss {mean:.6}");
        epoch_losses.push(mean);
    }
    trainer.table.normalize_entities();

    Ok((trainer.table, TrainReport { initial_loss, epoch_losses }))
}

fn normalize(v: &mut [f32]) {
    let n = v.iter().map(|x| x * x).sum::<f32>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

struct Sgd {
    table: EmbeddingTable,
    margin: f32,
    negatives: usize,
    scratch: Vec<f32>,
    scratch_neg: Vec<f32>,
}

impl Sgd {
    /// Residual `h + r − t` into `out`, returning its squared norm.
    fn residual(table: &EmbeddingTable, (h, r, t): (usize, usize, usize), out: &mut [f32]) -> f32 {
        let (hv, rv, tv) = (table.entity_at(h), table.relation_at(r), table.entity_at(t));
        let mut sq = 0.0;
        for i in 0..out.len() {
            let e = hv[i] + rv[i] - tv[i];
            out[i] = e;
            sq += e * e;
        }
        sq
    }

    fn corrupt<R: Rng>(&self, (h, r, t): (usize, usize, usize), rng: &mut R) -> (usize, usize, usize) {
        let n = self.table.num_entities();
        let replace_head = rng.random_bool(0.5);
        let original = if replace_head { h } else { t };
        let mut e = rng.random_range(0..n);
        while n > 1 && e == original {
            e = rng.random_range(0..n);
        }
        if replace_head { (e, r, t) } else { (h, r, e) }
    }

    fn mean_loss<R: Rng>(&mut self, positives: &[(usize, usize, usize)], rng: &mut R) -> f64 {
        let mut total = 0.0f64;
        for &pos in positives {
            let d_pos = Self::residual(&self.table, pos, &mut self.scratch);
            for _ in 0..self.negatives {
                let neg = self.corrupt(pos, rng);
                let d_neg = Self::residual(&self.table, neg, &mut self.scratch_neg);
                total += f64::from((self.margin + d_pos - d_neg).max(0.0));
            }
        }
        total / (positives.len() * self.negatives) as f64
    }

    /// One positive with all of its negatives; returns the summed loss.
    fn step<R: Rng>(&mut self, pos: (usize, usize, usize), lr: f32, rng: &mut R) -> f64 {
        let mut total = 0.0f64;
        for _ in 0..self.negatives {
            let neg = self.corrupt(pos, rng);
            let d_pos = Self::residual(&self.table, pos, &mut self.scratch);
            let d_neg = Self::residual(&self.table, neg, &mut self.scratch_neg);
            let loss = self.margin + d_pos - d_neg;
            if loss <= 0.0 {
                continue;
            }
            total += f64::from(loss);
            // ∂d/∂h = 2e, ∂d/∂r = 2e, ∂d/∂t = −2e
            let step = 2.0 * lr;
            let (ph, pr, pt) = pos;
            let (nh, _, nt) = neg;
            for i in 0..self.scratch.len() {
                let e = step * self.scratch[i];
                let en = step * self.scratch_neg[i];
                self.table.entity_at_mut(ph)[i] -= e;
                self.table.entity_at_mut(pt)[i] += e;
                self.table.relation_at_mut(pr)[i] -= e - en;
                self.table.entity_at_mut(nh)[i] += en;
                self.table.entity_at_mut(nt)[i] -= en;
            }
        }
        total
    }
}
