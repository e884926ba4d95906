//! Cluster an embedding with k-means and score the partition by modularity.

use diffusion_embed::evaluation::{kmeans, modularity};
use diffusion_embed::{embed, EmbedParams, Graph};

fn main() -> diffusion_embed::Result<()> {
    let g = Graph::from_edge_list(include_str!("../data/karate.edgelist"))?;
    let params = EmbedParams { dim: 16, seed: 5, ..EmbedParams::default() };
    let e = embed(&g, &params)?.embedding();

    for k in 2..=5 {
        let result = kmeans(&e, k, 300, 10, 5)?;
        let q = modularity(&g, &result.clusters)?;
        println!("k={k}: modularity {q:.4}, sizes {:?}", result.clusters.cluster_sizes());
    }
    Ok(())
}
