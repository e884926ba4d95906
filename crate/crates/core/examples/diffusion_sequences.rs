//! Grow a diffusion tree, linearize it with an Euler walk, then build a
//! whole corpus in parallel.

use diffusion_embed::sampler::{euler_sequence, generate_corpus, sample_diffusion_tree, task_rng, CorpusConfig};
use diffusion_embed::Graph;

fn main() -> diffusion_embed::Result<()> {
    let g = Graph::from_edge_list(include_str!("../data/karate.edgelist"))?;
    let source = g.id_of("1").expect("label present");

    let tree = sample_diffusion_tree(&g, source, 6, &mut task_rng(42, source, 0))?;
    let walk = euler_sequence(&tree);
    let labels: Vec<&str> = walk.items().iter().map(|&v| g.label(v)).collect();
    println!("tree edges: {}", tree.edges.len());
    println!("euler walk: {}", labels.join(" "));

    let cfg = CorpusConfig { diffusion_size: 10, diffusion_count: 5, seed: 42, workers: 4 };
    let corpus = generate_corpus(&g, &cfg)?;
    println!(
        "corpus: {} sequences, {} tokens, {} adjacency observations",
        corpus.sequences.len(),
        corpus.total_len(),
        corpus.adjacency_observations()
    );
    Ok(())
}
