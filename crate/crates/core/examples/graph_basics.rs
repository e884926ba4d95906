//! Load an edge list, inspect adjacency and hop distances.

use diffusion_embed::Graph;

fn main() -> diffusion_embed::Result<()> {
    let g = Graph::from_edge_list(include_str!("../data/karate.edgelist"))?;
    println!("{} vertices, {} edges", g.vertex_count(), g.edge_count());

    let hub = g.id_of("34").expect("label present");
    let labels: Vec<&str> = g.neighbors(hub)?.iter().map(|&v| g.label(v)).collect();
    println!("vertex 34 has degree {}: {}", g.degree(hub), labels.join(" "));

    let dist = g.bfs_distances(hub)?;
    let ecc = dist.iter().flatten().max().copied().unwrap_or(0);
    println!("eccentricity of vertex 34: {ecc}");
    Ok(())
}
