//! How well scaled embedding distances track hop distances, across
//! embedding dimensions.

use diffusion_embed::evaluation::distortion_report;
use diffusion_embed::{embed, EmbedParams, Graph};

fn main() -> diffusion_embed::Result<()> {
    let g = Graph::from_edge_list(include_str!("../data/karate.edgelist"))?;
    for dim in [2, 4, 8, 16, 32] {
        let params = EmbedParams { dim, seed: 1, ..EmbedParams::default() };
        let e = embed(&g, &params)?.embedding();
        let report = distortion_report(&g, &e, g.vertex_count(), 1)?;
        let cdf: Vec<String> = report.cdf.iter().map(|(t, f)| format!("<{t}: {f:.2}")).collect();
        println!(
            "d={dim:<3} gamma {:.3}  median error {:.3}  {}",
            report.gamma,
            report.median_error,
            cdf.join("  ")
        );
    }
    Ok(())
}
