//! Shallow network with a hierarchical-softmax output layer.
//!
//! The input matrix holds one `d`-dimensional row per vertex; that row is the
//! vertex embedding. Each relative position `r` has its own matrix of inner-
//! node vectors over a shared Huffman tree, so
//! `p_r(u | v) = prod_j sigmoid(s_j * <in[v], out_r[path_j(u)]>)` with
//! `s_j = +1` on a `false` branch and `-1` on a `true` branch.

mod hogwild;
mod huffman;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use self::hogwild::HogwildMatrix;
pub use self::huffman::HuffmanTree;

use crate::embedding::Embedding;
use crate::error::{invalid, Error, Result};
use crate::features::{offset_slot, slot_offset, CooccurrenceCounts};
use crate::graph::VertexId;
use crate::sampler::splitmix64;

/// Numerically stable logistic function.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(sigmoid(x))` without overflow for large `|x|`.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

#[inline]
fn branch_sign(bit: bool) -> f64 {
    if bit {
        -1.0
    } else {
        1.0
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    dim: usize,
    window: usize,
    input: HogwildMatrix,
    /// One `(n - 1) x dim` matrix per position slot.
    output: Vec<HogwildMatrix>,
}

/// Gradient of `-ln p_r(u | v)` at the current parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    pub input: Vec<f64>,
    /// `(inner node, gradient)` along the context's path.
    pub inner: Vec<(usize, Vec<f64>)>,
}

impl EmbeddingModel {
    /// Input rows uniform in `[-0.5/dim, 0.5/dim]`, output vectors zero.
    pub fn new(n: usize, dim: usize, window: usize, seed: u64) -> Result<Self> {
        let mut model = Self::zeros(n, dim, window)?;
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
        let values = (0..n * dim)
            .map(|_| (rng.gen::<f64>() - 0.5) / dim as f64)
            .collect();
        model.input = HogwildMatrix::from_vec(n, dim, values);
        Ok(model)
    }

    pub fn zeros(n: usize, dim: usize, window: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("embedding needs at least 2 vertices"));
        }
        if dim == 0 || window == 0 {
            return Err(invalid("dimension and window must be at least 1"));
        }
        Ok(EmbeddingModel {
            dim,
            window,
            input: HogwildMatrix::zeros(n, dim),
            output: (0..2 * window)
                .map(|_| HogwildMatrix::zeros(n - 1, dim))
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn vertex_count(&self) -> usize {
        self.input.rows()
    }

    pub fn input(&self) -> &HogwildMatrix {
        &self.input
    }

    pub fn output(&self, offset: i32) -> &HogwildMatrix {
        &self.output[offset_slot(offset, self.window)]
    }

    pub fn embedding_of(&self, v: VertexId) -> Result<Vec<f64>> {
        self.check_vertex(v)?;
        Ok(self.input.row(v))
    }

    pub fn embedding(&self) -> Embedding {
        Embedding::from_rows(self.dim, self.input.to_vec())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                id: v,
                n: self.vertex_count(),
            })
        }
    }

    fn check_pair(&self, tree: &HuffmanTree, v: VertexId, offset: i32, u: VertexId) -> Result<()> {
        self.check_vertex(v)?;
        self.check_vertex(u)?;
        if tree.leaf_count() != self.vertex_count() {
            return Err(invalid("Huffman tree does not match model size"));
        }
        if offset == 0 || offset.unsigned_abs() as usize > self.window {
            return Err(invalid(format!("offset {offset} outside window {}", self.window)));
        }
        Ok(())
    }

    /// `p_r(u | v)` under the current parameters.
    pub fn probability(&self, tree: &HuffmanTree, v: VertexId, offset: i32, u: VertexId) -> Result<f64> {
        Ok((-self.pair_loss(tree, v, offset, u)?).exp())
    }

    /// `-ln p_r(u | v)`.
    pub fn pair_loss(&self, tree: &HuffmanTree, v: VertexId, offset: i32, u: VertexId) -> Result<f64> {
        self.check_pair(tree, v, offset, u)?;
        let hidden = self.input.row(v);
        let out = self.output(offset);
        Ok(tree
            .code(u)
            .iter()
            .zip(tree.path(u))
            .map(|(&bit, &node)| -log_sigmoid(branch_sign(bit) * dot(&hidden, &out.row(node as usize))))
            .sum())
    }

    pub fn pair_gradient(
        &self,
        tree: &HuffmanTree,
        v: VertexId,
        offset: i32,
        u: VertexId,
    ) -> Result<PairGradient> {
        self.check_pair(tree, v, offset, u)?;
        let hidden = self.input.row(v);
        let out = self.output(offset);
        let mut grad_input = vec![0.0; self.dim];
        let mut inner = Vec::with_capacity(tree.code(u).len());
        let mut loss = 0.0;
        for (&bit, &node) in tree.code(u).iter().zip(tree.path(u)) {
            let w = out.row(node as usize);
            let s = branch_sign(bit);
            let z = s * dot(&hidden, &w);
            loss -= log_sigmoid(z);
            // d/dx [-ln sigmoid(s x)] = -s (1 - sigmoid(s x))
            let g = -s * (1.0 - sigmoid(z));
            for (gi, wi) in grad_input.iter_mut().zip(&w) {
                *gi += g * wi;
            }
            inner.push((node as usize, hidden.iter().map(|h| g * h).collect()));
        }
        Ok(PairGradient {
            loss,
            input: grad_input,
            inner,
        })
    }

    /// One SGD step on `-ln p_r(u | v)`; returns the loss before the step.
    pub fn pair_update(
        &self,
        tree: &HuffmanTree,
        v: VertexId,
        offset: i32,
        u: VertexId,
        alpha: f64,
    ) -> Result<f64> {
        self.check_pair(tree, v, offset, u)?;
        let mut scratch = Scratch::new(self.dim);
        Ok(self.update(tree, v, offset_slot(offset, self.window), u, alpha, &mut scratch))
    }

    #[inline]
    fn update(
        &self,
        tree: &HuffmanTree,
        v: VertexId,
        slot: usize,
        u: VertexId,
        alpha: f64,
        scratch: &mut Scratch,
    ) -> f64 {
        let Scratch { hidden, inner, delta } = scratch;
        let out = &self.output[slot];
        self.input.read_row(v, hidden);
        delta.iter_mut().for_each(|x| *x = 0.0);

        let mut loss = 0.0;
        for (&bit, &node) in tree.code(u).iter().zip(tree.path(u)) {
            let node = node as usize;
            out.read_row(node, inner);
            let s = branch_sign(bit);
            let z = s * dot(hidden, inner);
            loss -= log_sigmoid(z);
            let step = alpha * s * (1.0 - sigmoid(z));
            for (d, w) in delta.iter_mut().zip(inner.iter()) {
                *d += step * w;
            }
            out.add_scaled(node, step, hidden);
        }
        self.input.add_scaled(v, 1.0, delta);
        loss
    }
}

struct Scratch {
    hidden: Vec<f64>,
    inner: Vec<f64>,
    delta: Vec<f64>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Scratch {
            hidden: vec![0.0; dim],
            inner: vec![0.0; dim],
            delta: vec![0.0; dim],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub epochs: usize,
    pub alpha0: f64,
    pub alpha_min: f64,
    pub workers: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            epochs: 5,
            alpha0: 0.025,
            alpha_min: 0.025 * 1e-4,
            workers: default_workers(),
            seed: 1,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if self.epochs == 0 {
            return Err(invalid("epochs must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be at least 1"));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min <= self.alpha0 && self.alpha0.is_finite()) {
            return Err(invalid("learning rates must satisfy 0 < alpha_min <= alpha0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub events_per_epoch: usize,
    /// Mean per-event loss of each epoch.
    pub epoch_losses: Vec<f64>,
    pub epoch_seconds: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    center: u32,
    context: u32,
    slot: u16,
}

const RATE_BATCH: usize = 1024;

pub fn train(
    counts: &CooccurrenceCounts,
    n: usize,
    cfg: &TrainConfig,
    vertex_counts: &[u64],
) -> Result<EmbeddingModel> {
    train_with_report(counts, n, cfg, vertex_counts).map(|(model, _)| model)
}

/// Expands every count into that many `(center, offset, context)` events,
/// shuffles the stream each epoch and applies [`EmbeddingModel::pair_update`]
/// to each. With several workers the stream is split into contiguous chunks
/// updated concurrently without locks. The learning rate decays linearly from
/// `alpha0` to `alpha_min` over all scheduled events of all epochs.
pub fn train_with_report(
    counts: &CooccurrenceCounts,
    n: usize,
    cfg: &TrainConfig,
    vertex_counts: &[u64],
) -> Result<(EmbeddingModel, TrainReport)> {
    cfg.validate()?;
    if n < 2 {
        return Err(invalid("training needs at least 2 vertices"));
    }
    if counts.is_empty() {
        return Err(Error::Degenerate("no co-occurrences to train on".into()));
    }
    if counts.vertex_count() != n || vertex_counts.len() != n {
        return Err(invalid("vertex count mismatch between counts and graph"));
    }

    let window = counts.window();
    let tree = HuffmanTree::build(vertex_counts)?;
    let model = EmbeddingModel::new(n, cfg.dim, window, cfg.seed)?;

    let mut events = Vec::with_capacity(counts.total_mass() as usize);
    for &(key, c) in counts.entries() {
        let ev = Event {
            center: key.center,
            context: key.context,
            slot: offset_slot(key.offset, window) as u16,
        };
        events.extend(std::iter::repeat_n(ev, c as usize));
    }
    debug_assert!(events.iter().all(|e| slot_offset(e.slot as usize, window) != 0));

    let total = (events.len() * cfg.epochs) as f64;
    let processed = AtomicUsize::new(0);
    let mut report = TrainReport {
        events_per_epoch: events.len(),
        epoch_losses: Vec::with_capacity(cfg.epochs),
        epoch_seconds: Vec::with_capacity(cfg.epochs),
    };

    for epoch in 0..cfg.epochs {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ (epoch as u64 + 1).rotate_left(17)));
        events.shuffle(&mut rng);

        let rate = |done: usize| {
            let progress = done as f64 / total;
            (cfg.alpha0 - (cfg.alpha0 - cfg.alpha_min) * progress).max(cfg.alpha_min)
        };
        let run_chunk = |chunk: &[Event]| -> f64 {
            let mut scratch = Scratch::new(cfg.dim);
            let mut loss = 0.0;
            let mut alpha = rate(processed.load(Ordering::Relaxed));
            for batch in chunk.chunks(RATE_BATCH) {
                for e in batch {
                    loss += model.update(
                        &tree,
                        e.center as usize,
                        e.slot as usize,
                        e.context as usize,
                        alpha,
                        &mut scratch,
                    );
                }
                alpha = rate(processed.fetch_add(batch.len(), Ordering::Relaxed) + batch.len());
            }
            loss
        };

        let loss: f64 = if cfg.workers == 1 {
            run_chunk(&events)
        } else {
            let chunk_len = events.len().div_ceil(cfg.workers);
            std::thread::scope(|s| {
                let handles: Vec<_> = events
                    .chunks(chunk_len)
                    .map(|chunk| s.spawn(|| run_chunk(chunk)))
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).sum()
            })
        };

        report.epoch_losses.push(loss / events.len() as f64);
        report.epoch_seconds.push(started.elapsed().as_secs_f64());
    }

    Ok((model, report))
}
