#![allow(dead_code)]

use diffusion_embed::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Disjoint copies of `K_size`; copy `c` holds vertices `c*size..(c+1)*size`.
pub fn disjoint_cliques(copies: usize, size: usize) -> Graph {
    let mut edges = Vec::new();
    for c in 0..copies {
        let base = c * size;
        for u in 0..size {
            for v in u + 1..size {
                edges.push((base + u, base + v));
            }
        }
    }
    Graph::from_edges(copies * size, &edges).unwrap()
}

/// Two `K_clique` joined through a path of `path` extra vertices.
pub fn barbell(clique: usize, path: usize) -> Graph {
    let mut edges = Vec::new();
    let second = clique + path;
    for base in [0, second] {
        for u in 0..clique {
            for v in u + 1..clique {
                edges.push((base + u, base + v));
            }
        }
    }
    let mut prev = clique - 1;
    for p in clique..second {
        edges.push((prev, p));
        prev = p;
    }
    edges.push((prev, second));
    Graph::from_edges(2 * clique + path, &edges).unwrap()
}

/// G(n, p) with `p` chosen for the requested mean degree.
pub fn erdos_renyi(n: usize, mean_degree: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = mean_degree / (n - 1) as f64;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn karate() -> Graph {
    Graph::from_edge_list(include_str!("../../data/karate.edgelist")).unwrap()
}
