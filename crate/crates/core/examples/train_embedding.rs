//! End-to-end embedding with per-epoch loss, written as CSV to stdout.

use diffusion_embed::{embed, EmbedParams, Graph};

fn main() -> diffusion_embed::Result<()> {
    let g = Graph::from_edge_list(include_str!("../data/karate.edgelist"))?;
    let params = EmbedParams { dim: 16, epochs: 8, seed: 3, ..EmbedParams::default() };
    let out = embed(&g, &params)?;

    eprintln!("{} training events per epoch", out.report.events_per_epoch);
    for (epoch, (loss, secs)) in out.report.epoch_losses.iter().zip(&out.report.epoch_seconds).enumerate() {
        eprintln!("epoch {epoch}: loss {loss:.4} ({:.1} ms)", secs * 1e3);
    }
    eprintln!(
        "sample {:.1} ms, extract {:.1} ms, train {:.1} ms",
        out.timings.sample * 1e3,
        out.timings.extract * 1e3,
        out.timings.train * 1e3
    );
    out.embedding().write_csv(&g, std::io::stdout().lock())
}
