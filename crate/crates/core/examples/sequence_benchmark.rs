//! Compare diffusion and random-walk sequence generation at matched output
//! volume on a synthetic sparse graph.

use diffusion_embed::cli::{benchmark_generators, BenchmarkParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> diffusion_embed::Result<()> {
    let n = 5000;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let text: String = (0..n * 5)
        .map(|_| format!("{} {}\n", rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();

    for count in [1, 2, 4] {
        let params = BenchmarkParams { repeats: 3, workers: 1, ..BenchmarkParams::matched(20, count) };
        let report = benchmark_generators(&text, &params)?;
        for (name, t) in [("diffusion", &report.diffusion), ("random walk", &report.random_walk)] {
            println!(
                "count={count} {name:<11} prep {:6.2} ms  gen {:7.2} ms  {} tokens",
                t.preprocessing_seconds * 1e3,
                t.generation_seconds * 1e3,
                t.vertices_emitted
            );
        }
    }
    Ok(())
}
