mod common;

use std::collections::HashMap;

use diffusion_embed::graph::Graph;
use diffusion_embed::sampler::{
    euler_sequence, generate_corpus, random_walk, sample_diffusion_tree, CorpusConfig,
    DiffusionTree, VertexSequence,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn undirected(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Checks every structural law of a tree and its Euler walk against `g`.
fn check_tree_and_walk(g: &Graph, tree: &DiffusionTree, size: usize, walk: &VertexSequence) -> Result<(), String> {
    let comp = g.component_of(tree.source).unwrap();
    if tree.vertices.len() != size.min(comp.len()) {
        return Err(format!("tree size {} vs min({size}, {})", tree.vertices.len(), comp.len()));
    }
    if tree.edges.len() + 1 != tree.vertices.len() {
        return Err("edge count".into());
    }
    let mut seen = tree.vertices.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != tree.vertices.len() {
        return Err("duplicate vertex".into());
    }
    if tree.edges.iter().any(|&(u, v)| !g.has_edge(u, v)) {
        return Err("tree edge missing from graph".into());
    }

    let items = walk.items();
    if items.len() != 2 * (tree.vertices.len() - 1) + 1 {
        return Err(format!("walk length {}", items.len()));
    }
    if items[0] != tree.source || *items.last().unwrap() != tree.source {
        return Err("walk endpoints".into());
    }
    if items.iter().any(|v| comp.binary_search(v).is_err()) {
        return Err("walk leaves source component".into());
    }
    let mut steps: HashMap<(usize, usize), usize> = HashMap::new();
    for w in items.windows(2) {
        *steps.entry(undirected(w[0], w[1])).or_default() += 1;
    }
    let mut expected: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in &tree.edges {
        *expected.entry(undirected(u, v)).or_default() += 2;
    }
    if steps != expected {
        return Err("walk does not traverse every tree edge exactly twice".into());
    }
    Ok(())
}

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..60).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |e| Graph::from_edges(n, &e).unwrap())
    })
}

proptest! {
    #[test]
    fn diffusion_trees_and_walks_are_well_formed(
        g in graph_strategy(),
        size in 1usize..30,
        pick in 0usize..1000,
        seed in any::<u64>(),
    ) {
        let source = pick % g.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = sample_diffusion_tree(&g, source, size, &mut rng).unwrap();
        let walk = euler_sequence(&tree);
        if let Err(msg) = check_tree_and_walk(&g, &tree, size, &walk) {
            prop_assert!(false, "{}", msg);
        }
    }

    #[test]
    fn random_walks_follow_edges(g in graph_strategy(), len in 1usize..40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_walk(&g, 0, len, &mut rng).unwrap();
        prop_assert!(w.len() <= len && !w.is_empty());
        prop_assert!(w.items().windows(2).all(|p| g.has_edge(p[0], p[1])));
        if g.degree(0) > 0 {
            prop_assert_eq!(w.len(), len);
        }
    }

    #[test]
    fn corpus_vertex_counts_match_sequences(g in graph_strategy(), size in 1usize..12, sigma in 1usize..4) {
        let cfg = CorpusConfig { diffusion_size: size, diffusion_count: sigma, seed: 5, workers: 2 };
        let corpus = generate_corpus(&g, &cfg).unwrap();
        prop_assert_eq!(corpus.sequences.len(), sigma * g.vertex_count());
        prop_assert_eq!(corpus.vertex_counts.iter().sum::<u64>() as usize, corpus.total_len());
    }
}

/// Hierholzer's algorithm on the edge-doubled tree, each edge split into a
/// downward and an upward copy. With adjacency in insertion order and the
/// upward copy kept last it must reproduce the depth-first Euler walk.
fn hierholzer_on_doubled(tree: &DiffusionTree) -> Vec<usize> {
    let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    let mut used = vec![false; 2 * tree.edges.len()];
    for (i, &(p, c)) in tree.edges.iter().enumerate() {
        adj.entry(p).or_default().push((c, 2 * i));
        adj.entry(c).or_default().push((p, 2 * i + 1));
    }
    // visit children before the way back up
    for (v, list) in adj.iter_mut() {
        if let Some(pos) = tree.edges.iter().position(|&(_, c)| c == *v) {
            let parent = tree.edges[pos].0;
            let idx = list.iter().position(|&(u, _)| u == parent).unwrap();
            let back = list.remove(idx);
            list.push(back);
        }
    }
    let mut next: HashMap<usize, usize> = HashMap::new();
    let mut stack = vec![tree.source];
    let mut circuit = Vec::new();
    while let Some(&v) = stack.last() {
        let list = adj.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        let i = next.entry(v).or_default();
        while *i < list.len() && used[list[*i].1] {
            *i += 1;
        }
        if *i < list.len() {
            let (u, e) = list[*i];
            used[e] = true;
            stack.push(u);
        } else {
            circuit.push(v);
            stack.pop();
        }
    }
    circuit.reverse();
    circuit
}

#[test]
fn euler_walk_matches_hierholzer_reference() {
    let g = common::erdos_renyi(120, 4.0, 3);
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = sample_diffusion_tree(&g, (seed as usize * 7) % 120, 15, &mut rng).unwrap();
        let walk = euler_sequence(&tree);
        let reference = hierholzer_on_doubled(&tree);
        assert_eq!(walk.items(), reference.as_slice());
        check_tree_and_walk(&g, &tree, 15, &VertexSequence(reference)).unwrap();
    }
}

#[test]
fn corpus_is_deterministic_across_workers() {
    let g = common::erdos_renyi(300, 6.0, 9);
    let base = CorpusConfig { diffusion_size: 20, diffusion_count: 3, seed: 17, workers: 1 };
    let reference = generate_corpus(&g, &base).unwrap();
    for workers in [2, 3, 8] {
        assert_eq!(generate_corpus(&g, &CorpusConfig { workers, ..base }).unwrap(), reference);
    }
    let other = generate_corpus(&g, &CorpusConfig { seed: 18, ..base }).unwrap();
    assert_ne!(other, reference);
}

#[test]
fn trees_never_cross_components() {
    let g = common::disjoint_cliques(3, 5);
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = sample_diffusion_tree(&g, 6, 40, &mut rng).unwrap();
        assert_eq!(tree.vertices.len(), 5);
        assert!(tree.vertices.iter().all(|v| (5..10).contains(v)));
    }
}
