//! End-to-end embedding: corpus generation, feature extraction, training.

use std::time::Instant;

use crate::embedding::Embedding;
use crate::error::Result;
use crate::features::{extract_cooccurrences, CooccurrenceCounts};
use crate::graph::Graph;
use crate::sampler::{generate_corpus, Corpus, CorpusConfig};
use crate::trainer::{default_workers, train_with_report, EmbeddingModel, TrainConfig, TrainReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedParams {
    pub dim: usize,
    pub window: usize,
    pub diffusion_size: usize,
    pub diffusion_count: usize,
    pub epochs: usize,
    pub alpha0: f64,
    pub workers: usize,
    pub seed: u64,
}

impl Default for EmbedParams {
    fn default() -> Self {
        EmbedParams {
            dim: 128,
            window: 3,
            diffusion_size: 40,
            diffusion_count: 10,
            epochs: 5,
            alpha0: 0.025,
            workers: default_workers(),
            seed: 1,
        }
    }
}

impl EmbedParams {
    pub fn corpus_config(&self) -> CorpusConfig {
        CorpusConfig {
            diffusion_size: self.diffusion_size,
            diffusion_count: self.diffusion_count,
            seed: self.seed,
            workers: self.workers,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            dim: self.dim,
            epochs: self.epochs,
            alpha0: self.alpha0,
            alpha_min: self.alpha0 * 1e-4,
            workers: self.workers,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub sample: f64,
    pub extract: f64,
    pub train: f64,
}

#[derive(Debug, Clone)]
pub struct EmbedOutput {
    pub corpus: Corpus,
    pub counts: CooccurrenceCounts,
    pub model: EmbeddingModel,
    pub report: TrainReport,
    pub timings: StageTimings,
}

impl EmbedOutput {
    pub fn embedding(&self) -> Embedding {
        self.model.embedding()
    }
}

pub fn embed(g: &Graph, params: &EmbedParams) -> Result<EmbedOutput> {
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let corpus = generate_corpus(g, &params.corpus_config())?;
    timings.sample = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let counts = extract_cooccurrences(&corpus, params.window, g.vertex_count())?;
    timings.extract = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (model, report) = train_with_report(
        &counts,
        g.vertex_count(),
        &params.train_config(),
        &corpus.vertex_counts,
    )?;
    timings.train = t.elapsed().as_secs_f64();

    Ok(EmbedOutput {
        corpus,
        counts,
        model,
        report,
        timings,
    })
}
