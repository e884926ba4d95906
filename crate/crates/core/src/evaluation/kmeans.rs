use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::embedding::Embedding;
use crate::error::{invalid, Result};
use crate::sampler::splitmix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub assignment: Vec<usize>,
    pub k: usize,
}

impl ClusterAssignment {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&c) = assignment.iter().find(|&&c| c >= k) {
            return Err(invalid(format!("cluster id {c} not below k = {k}")));
        }
        Ok(ClusterAssignment { assignment, k })
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub clusters: ClusterAssignment,
    pub centroids: Embedding,
    /// Within-cluster sum of squared distances.
    pub wcss: f64,
    /// WCSS after each Lloyd iteration of the winning restart.
    pub wcss_history: Vec<f64>,
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// k-means++ seeding followed by Lloyd iterations, best of `restarts` runs
/// by WCSS (lower restart index wins ties).
pub fn kmeans(
    points: &Embedding,
    k: usize,
    max_iters: usize,
    restarts: usize,
    seed: u64,
) -> Result<KMeansResult> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(invalid(format!("k = {k} must lie in 1..={n}")));
    }
    if max_iters == 0 || restarts == 0 {
        return Err(invalid("max_iters and restarts must be at least 1"));
    }

    let runs: Vec<KMeansResult> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ (r as u64).wrapping_mul(0x9e37)));
            lloyd(points, k, max_iters, &mut rng)
        })
        .collect();
    Ok(runs
        .into_iter()
        .reduce(|best, run| if run.wcss < best.wcss { run } else { best })
        .unwrap())
}

fn seed_centroids<R: Rng>(points: &Embedding, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![points.row(first).to_vec()];
    let mut nearest: Vec<f64> = points.rows().map(|p| sq_dist(p, &centroids[0])).collect();

    while centroids.len() < k {
        let next = match WeightedIndex::new(&nearest) {
            Ok(dist) => dist.sample(rng),
            // all remaining mass is zero: duplicates of existing centers
            Err(_) => chosen.iter().position(|c| !c).unwrap(),
        };
        chosen[next] = true;
        let c = points.row(next).to_vec();
        for (d, p) in nearest.iter_mut().zip(points.rows()) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn lloyd<R: Rng>(points: &Embedding, k: usize, max_iters: usize, rng: &mut R) -> KMeansResult {
    let n = points.len();
    let dim = points.dim();
    let mut centroids = seed_centroids(points, k, rng);
    let mut assignment = vec![usize::MAX; n];
    let mut history = Vec::new();

    for _ in 0..max_iters {
        let mut changed = false;
        for (v, p) in points.rows().enumerate() {
            let best = (0..k)
                .map(|c| (sq_dist(p, &centroids[c]), c))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .unwrap()
                .1;
            if assignment[v] != best {
                assignment[v] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        let mut sums = vec![vec![0.0; dim]; k];
        let mut sizes = vec![0usize; k];
        for (v, p) in points.rows().enumerate() {
            sizes[assignment[v]] += 1;
            for (s, x) in sums[assignment[v]].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if sizes[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / sizes[c] as f64).collect();
            }
        }
        history.push(wcss(points, &assignment, &centroids));

        // empty clusters restart at the point worst served by its centroid
        let mut taken = vec![false; n];
        for c in (0..k).filter(|&c| sizes[c] == 0) {
            let far = (0..n)
                .filter(|&v| !taken[v])
                .max_by(|&a, &b| {
                    let da = sq_dist(points.row(a), &centroids[assignment[a]]);
                    let db = sq_dist(points.row(b), &centroids[assignment[b]]);
                    da.total_cmp(&db).then(b.cmp(&a))
                });
            if let Some(v) = far {
                taken[v] = true;
                centroids[c] = points.row(v).to_vec();
            }
        }
    }

    KMeansResult {
        wcss: wcss(points, &assignment, &centroids),
        clusters: ClusterAssignment { assignment, k },
        centroids: Embedding::from_rows(dim, centroids.concat()),
        wcss_history: history,
    }
}

fn wcss(points: &Embedding, assignment: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .rows()
        .zip(assignment)
        .map(|(p, &c)| sq_dist(p, &centroids[c]))
        .sum()
}
