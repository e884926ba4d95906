use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::Embedding;
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::sampler::splitmix64;

pub const CDF_THRESHOLDS: [f64; 4] = [0.1, 0.2, 0.3, 0.5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistancePair {
    pub u: VertexId,
    pub v: VertexId,
    pub graph_distance: u32,
    pub embedding_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DistancePairSample {
    pub pairs: Vec<DistancePair>,
}

impl DistancePairSample {
    /// Pairs built from `(graph_distance, embedding_distance)` tuples.
    pub fn from_distances(distances: &[(u32, f64)]) -> Self {
        DistancePairSample {
            pairs: distances
                .iter()
                .enumerate()
                .map(|(i, &(d, e))| DistancePair {
                    u: 2 * i,
                    v: 2 * i + 1,
                    graph_distance: d,
                    embedding_distance: e,
                })
                .collect(),
        }
    }
}

/// `sum_p |d_p - gamma * e_p| / d_p`.
pub fn total_relative_error(sample: &DistancePairSample, gamma: f64) -> f64 {
    sample
        .pairs
        .iter()
        .map(|p| relative_error(p.graph_distance, p.embedding_distance, gamma))
        .sum()
}

#[inline]
fn relative_error(graph_distance: u32, embedding_distance: f64, gamma: f64) -> f64 {
    let d = f64::from(graph_distance);
    (d - gamma * embedding_distance).abs() / d
}

/// Scale minimizing the summed relative error.
///
/// Each term is `(e/d) * |d/e - gamma|`, so the objective is a weighted sum
/// of absolute deviations from breakpoints `d/e` and is minimized at their
/// weighted median. Pairs with zero embedding distance add a constant and are
/// skipped. Among minimizers the smallest breakpoint is returned.
pub fn fit_gamma(sample: &DistancePairSample) -> Result<f64> {
    let mut points: Vec<(f64, f64)> = sample
        .pairs
        .iter()
        .filter(|p| p.embedding_distance > 0.0 && p.graph_distance > 0)
        .map(|p| {
            let d = f64::from(p.graph_distance);
            (d / p.embedding_distance, p.embedding_distance / d)
        })
        .collect();
    if points.is_empty() {
        return Err(Error::Degenerate(
            "no pairs with positive embedding distance to fit gamma".into(),
        ));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let total: f64 = points.iter().map(|p| p.1).sum();
    let half = 0.5 * total;
    let mut cumulative = 0.0;
    for &(breakpoint, weight) in &points {
        cumulative += weight;
        if cumulative >= half * (1.0 - 1e-12) {
            return Ok(breakpoint);
        }
    }
    Ok(points.last().unwrap().0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairError {
    pub u: VertexId,
    pub v: VertexId,
    pub graph_distance: u32,
    pub embedding_distance: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub gamma: f64,
    pub errors: Vec<PairError>,
    /// `(threshold, fraction of pairs with error below it)`.
    pub cdf: Vec<(f64, f64)>,
    pub median_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionMetrics {
    pub gamma: f64,
    pub pair_count: usize,
    pub cdf: BTreeMap<String, f64>,
    pub median_error: f64,
}

impl DistortionReport {
    pub fn metrics(&self) -> DistortionMetrics {
        DistortionMetrics {
            gamma: self.gamma,
            pair_count: self.errors.len(),
            cdf: self.cdf.iter().map(|&(t, f)| (t.to_string(), f)).collect(),
            median_error: self.median_error,
        }
    }

    pub fn fraction_below(&self, threshold: f64) -> f64 {
        self.errors.iter().filter(|e| e.error < threshold).count() as f64 / self.errors.len() as f64
    }
}

/// BFS from `num_sources` distinct seeded sources; every reachable target
/// forms a pair. One gamma is fitted over all pairs.
pub fn distortion_report(
    g: &Graph,
    embedding: &Embedding,
    num_sources: usize,
    seed: u64,
) -> Result<DistortionReport> {
    if num_sources == 0 {
        return Err(invalid("num_sources must be at least 1"));
    }
    let n = g.vertex_count();
    if embedding.len() != n {
        return Err(invalid(format!(
            "embedding has {} rows for a graph of {n} vertices",
            embedding.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
    let mut sources = rand::seq::index::sample(&mut rng, n, num_sources.min(n)).into_vec();
    sources.sort_unstable();

    let per_source = sources
        .par_iter()
        .map(|&s| {
            let dist = g.bfs_distances(s)?;
            Ok(dist
                .iter()
                .enumerate()
                .filter_map(|(t, d)| match d {
                    Some(d) if t != s => Some(DistancePair {
                        u: s,
                        v: t,
                        graph_distance: *d,
                        embedding_distance: embedding.distance(s, t),
                    }),
                    _ => None,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let sample = DistancePairSample {
        pairs: per_source.concat(),
    };
    if sample.pairs.is_empty() {
        return Err(Error::Degenerate("no connected vertex pairs to evaluate".into()));
    }

    let gamma = match fit_gamma(&sample) {
        Ok(gamma) => gamma,
        // every embedding distance is zero: any gamma gives error 1
        Err(Error::Degenerate(_)) => 0.0,
        Err(e) => return Err(e),
    };
    let errors: Vec<PairError> = sample
        .pairs
        .iter()
        .map(|p| PairError {
            u: p.u,
            v: p.v,
            graph_distance: p.graph_distance,
            embedding_distance: p.embedding_distance,
            error: relative_error(p.graph_distance, p.embedding_distance, gamma),
        })
        .collect();

    let mut sorted: Vec<f64> = errors.iter().map(|e| e.error).collect();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median_error = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let cdf = CDF_THRESHOLDS
        .iter()
        .map(|&t| (t, sorted.partition_point(|&e| e < t) as f64 / sorted.len() as f64))
        .collect();

    Ok(DistortionReport {
        gamma,
        errors,
        cdf,
        median_error,
    })
}
