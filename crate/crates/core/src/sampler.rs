//! Diffusion-tree sampling and Euler-walk linearization.
//!
//! A diffusion tree grows from a source vertex by repeatedly picking a tree
//! vertex `u` uniformly at random, then a neighbor `w` of `u` uniformly at
//! random, and attaching `w` below `u` when it is not yet in the tree. Its
//! edge-doubled form is Eulerian; the closed Euler walk from the source is
//! the emitted vertex sequence.

use std::collections::HashMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionTree {
    pub source: VertexId,
    /// Insertion order, source first.
    pub vertices: Vec<VertexId>,
    /// `(parent, child)` in insertion order.
    pub edges: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSequence(pub Vec<VertexId>);

impl VertexSequence {
    pub fn items(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub sequences: Vec<VertexSequence>,
    /// Occurrences of each vertex across all sequences.
    pub vertex_counts: Vec<u64>,
}

impl Corpus {
    pub fn from_sequences(n: usize, sequences: Vec<VertexSequence>) -> Result<Corpus> {
        let mut vertex_counts = vec![0u64; n];
        for seq in &sequences {
            for &v in seq.items() {
                *vertex_counts
                    .get_mut(v)
                    .ok_or(crate::Error::VertexOutOfRange { id: v, n })? += 1;
            }
        }
        Ok(Corpus {
            sequences,
            vertex_counts,
        })
    }

    pub fn total_len(&self) -> usize {
        self.sequences.iter().map(VertexSequence::len).sum()
    }

    /// Consecutive vertex pairs across all sequences.
    pub fn adjacency_observations(&self) -> usize {
        self.sequences
            .iter()
            .map(|s| s.len().saturating_sub(1))
            .sum()
    }

    /// One sequence per line, space-separated original labels.
    pub fn write_labelled<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for seq in &self.sequences {
            let mut first = true;
            for &v in seq.items() {
                if !first {
                    out.write_all(b" ")?;
                }
                out.write_all(g.label(v).as_bytes())?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Samples a diffusion tree of up to `size` vertices around `source`.
///
/// Draws that land on a vertex already in the tree are discarded. Growth
/// stops early once no tree vertex has a neighbor outside the tree, so the
/// result has `min(size, |component(source)|)` vertices.
pub fn sample_diffusion_tree<R: Rng + ?Sized>(
    g: &Graph,
    source: VertexId,
    size: usize,
    rng: &mut R,
) -> Result<DiffusionTree> {
    g.check_vertex(source)?;
    if size == 0 {
        return Err(invalid("diffusion size must be at least 1"));
    }

    let mut vertices = vec![source];
    let mut edges = Vec::with_capacity(size.saturating_sub(1));
    // tree vertex -> number of its neighbors still outside the tree
    let mut outside: HashMap<VertexId, usize> = HashMap::with_capacity(size);
    outside.insert(source, g.degree(source));
    let mut expandable = usize::from(g.degree(source) > 0);

    while vertices.len() < size && expandable > 0 {
        let u = vertices[rng.gen_range(0..vertices.len())];
        let nbrs = g.neighbors_unchecked(u);
        if nbrs.is_empty() {
            continue;
        }
        let w = nbrs[rng.gen_range(0..nbrs.len())];
        if outside.contains_key(&w) {
            continue;
        }

        let mut w_outside = 0;
        for &x in g.neighbors_unchecked(w) {
            match outside.get_mut(&x) {
                Some(count) => {
                    *count -= 1;
                    if *count == 0 {
                        expandable -= 1;
                    }
                }
                None => w_outside += 1,
            }
        }
        outside.insert(w, w_outside);
        if w_outside > 0 {
            expandable += 1;
        }
        vertices.push(w);
        edges.push((u, w));
    }

    Ok(DiffusionTree {
        source,
        vertices,
        edges,
    })
}

/// Closed Euler walk over the edge-doubled tree, starting and ending at the
/// source. Each vertex is emitted on entry and again after returning from
/// each child; children are visited in edge insertion order.
pub fn euler_sequence(tree: &DiffusionTree) -> VertexSequence {
    let position: HashMap<VertexId, usize> = tree
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); tree.vertices.len()];
    for &(parent, child) in &tree.edges {
        children[position[&parent]].push(position[&child]);
    }

    let mut walk = Vec::with_capacity(2 * tree.edges.len() + 1);
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    walk.push(tree.source);
    while let Some(top) = stack.last_mut() {
        let (node, next) = *top;
        if let Some(&child) = children[node].get(next) {
            top.1 += 1;
            walk.push(tree.vertices[child]);
            stack.push((child, 0));
        } else {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                walk.push(tree.vertices[parent]);
            }
        }
    }
    VertexSequence(walk)
}

/// First-order uniform random walk of at most `length` vertices. Used only
/// as a timing comparator.
pub fn random_walk<R: Rng + ?Sized>(
    g: &Graph,
    source: VertexId,
    length: usize,
    rng: &mut R,
) -> Result<VertexSequence> {
    g.check_vertex(source)?;
    if length == 0 {
        return Err(invalid("walk length must be at least 1"));
    }
    let mut walk = Vec::with_capacity(length);
    let mut current = source;
    walk.push(current);
    while walk.len() < length {
        let nbrs = g.neighbors_unchecked(current);
        if nbrs.is_empty() {
            break;
        }
        current = nbrs[rng.gen_range(0..nbrs.len())];
        walk.push(current);
    }
    Ok(VertexSequence(walk))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    /// Target diffusion tree size `l`.
    pub diffusion_size: usize,
    /// Trees sampled per source vertex.
    pub diffusion_count: usize,
    pub seed: u64,
    pub workers: usize,
}

impl CorpusConfig {
    fn validate(&self) -> Result<()> {
        if self.diffusion_size == 0 {
            return Err(invalid("diffusion size must be at least 1"));
        }
        if self.diffusion_count == 0 {
            return Err(invalid("diffusion count must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be at least 1"));
        }
        Ok(())
    }
}

/// Stream for task `(source, replicate)`; independent of scheduling.
pub fn task_rng(seed: u64, source: VertexId, replicate: usize) -> ChaCha8Rng {
    let mut state = splitmix64(seed ^ 0x6a09_e667_f3bc_c908);
    state = splitmix64(state ^ source as u64);
    state = splitmix64(state ^ (replicate as u64).rotate_left(32));
    ChaCha8Rng::seed_from_u64(state)
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))
}

/// Samples `diffusion_count` trees per vertex and emits their Euler walks,
/// ordered by `(source, replicate)`.
pub fn generate_corpus(g: &Graph, cfg: &CorpusConfig) -> Result<Corpus> {
    cfg.validate()?;
    let tasks = g.vertex_count() * cfg.diffusion_count;
    let sequences = thread_pool(cfg.workers)?.install(|| {
        (0..tasks)
            .into_par_iter()
            .map(|task| {
                let (source, replicate) = (task / cfg.diffusion_count, task % cfg.diffusion_count);
                let mut rng = task_rng(cfg.seed, source, replicate);
                sample_diffusion_tree(g, source, cfg.diffusion_size, &mut rng)
                    .map(|tree| euler_sequence(&tree))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Corpus::from_sequences(g.vertex_count(), sequences)
}

/// Baseline corpus of `walks_per_node` uniform random walks per vertex.
pub fn generate_walk_corpus(
    g: &Graph,
    length: usize,
    walks_per_node: usize,
    seed: u64,
    workers: usize,
) -> Result<Corpus> {
    if walks_per_node == 0 || workers == 0 {
        return Err(invalid("walks per node and workers must be at least 1"));
    }
    let tasks = g.vertex_count() * walks_per_node;
    let sequences = thread_pool(workers)?.install(|| {
        (0..tasks)
            .into_par_iter()
            .map(|task| {
                let (source, replicate) = (task / walks_per_node, task % walks_per_node);
                let mut rng = task_rng(seed.wrapping_add(1), source, replicate);
                random_walk(g, source, length, &mut rng)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Corpus::from_sequences(g.vertex_count(), sequences)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn size_one_is_just_the_source() {
        let g = complete(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = sample_diffusion_tree(&g, 2, 1, &mut rng).unwrap();
        assert_eq!(t.vertices, vec![2]);
        assert!(t.edges.is_empty());
        assert_eq!(euler_sequence(&t).items(), &[2]);
    }

    #[test]
    fn isolated_source_stops_early() {
        let g = Graph::from_edge_list("a b\nc c").unwrap();
        let c = g.id_of("c").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = sample_diffusion_tree(&g, c, 5, &mut rng).unwrap();
        assert_eq!(t.vertices, vec![c]);
        assert!(t.edges.is_empty());
    }

    #[test]
    fn zero_size_and_bad_source_rejected() {
        let g = complete(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_diffusion_tree(&g, 0, 0, &mut rng).is_err());
        assert!(sample_diffusion_tree(&g, 3, 2, &mut rng).is_err());
    }

    #[test]
    fn complete_graph_yields_spanning_trees() {
        let g = complete(4);
        for seed in 0..1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = sample_diffusion_tree(&g, (seed % 4) as usize, 4, &mut rng).unwrap();
            assert_eq!(t.vertices.len(), 4);
            assert_eq!(t.edges.len(), 3);
            let mut sorted = t.vertices.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2, 3]);
            assert!(t.edges.iter().all(|&(u, v)| g.has_edge(u, v)));
            // each child attaches to a vertex already present
            for (i, &(parent, child)) in t.edges.iter().enumerate() {
                assert_eq!(child, t.vertices[i + 1]);
                assert!(t.vertices[..=i].contains(&parent));
            }
        }
    }

    #[test]
    fn euler_walk_of_star() {
        let t = DiffusionTree {
            source: 0,
            vertices: vec![0, 1, 2],
            edges: vec![(0, 1), (0, 2)],
        };
        assert_eq!(euler_sequence(&t).items(), &[0, 1, 0, 2, 0]);
    }

    #[test]
    fn euler_walk_of_path() {
        let t = DiffusionTree {
            source: 7,
            vertices: vec![7, 3, 9],
            edges: vec![(7, 3), (3, 9)],
        };
        assert_eq!(euler_sequence(&t).items(), &[7, 3, 9, 3, 7]);
    }

    #[test]
    fn random_walk_examples() {
        let g = Graph::from_edge_list("a b\nc c").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = g.id_of("c").unwrap();
        assert_eq!(random_walk(&g, c, 10, &mut rng).unwrap().items(), &[c]);
        let (a, b) = (g.id_of("a").unwrap(), g.id_of("b").unwrap());
        assert_eq!(random_walk(&g, a, 3, &mut rng).unwrap().items(), &[a, b, a]);

        let g = complete(4);
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random_walk(&g, 0, 5, &mut rng).unwrap();
            assert_eq!(w.len(), 5);
            assert!(w.items().windows(2).all(|p| g.has_edge(p[0], p[1])));
        }
    }

    #[test]
    fn corpus_counts() {
        let g = complete(4);
        let cfg = CorpusConfig {
            diffusion_size: 4,
            diffusion_count: 2,
            seed: 11,
            workers: 2,
        };
        let corpus = generate_corpus(&g, &cfg).unwrap();
        assert_eq!(corpus.sequences.len(), 8);
        assert!(corpus.sequences.iter().all(|s| s.len() == 7));
        assert_eq!(corpus.vertex_counts.iter().sum::<u64>(), 56);
        for (i, seq) in corpus.sequences.iter().enumerate() {
            assert_eq!(seq.items()[0], i / 2);
        }
    }

    #[test]
    fn single_isolated_vertex_corpus() {
        let g = Graph::from_edge_list("v v").unwrap();
        let cfg = CorpusConfig {
            diffusion_size: 6,
            diffusion_count: 3,
            seed: 0,
            workers: 1,
        };
        let corpus = generate_corpus(&g, &cfg).unwrap();
        assert_eq!(corpus.sequences, vec![VertexSequence(vec![0]); 3]);
        assert_eq!(corpus.vertex_counts, vec![3]);
    }

    #[test]
    fn corpus_independent_of_worker_count() {
        let edges: Vec<_> = (0..60).map(|i| (i, (i * 7 + 3) % 60)).collect();
        let g = Graph::from_edges(60, &edges).unwrap();
        let mut cfg = CorpusConfig {
            diffusion_size: 12,
            diffusion_count: 3,
            seed: 99,
            workers: 1,
        };
        let one = generate_corpus(&g, &cfg).unwrap();
        cfg.workers = 8;
        assert_eq!(one, generate_corpus(&g, &cfg).unwrap());
    }

    #[test]
    fn labelled_dump() {
        let g = Graph::from_edge_list("x y").unwrap();
        let corpus = Corpus::from_sequences(2, vec![VertexSequence(vec![0, 1, 0])]).unwrap();
        let mut out = Vec::new();
        corpus.write_labelled(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x y x\n");
    }
}
