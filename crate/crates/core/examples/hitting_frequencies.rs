//! Positional co-occurrence counts and the hitting-frequency vector of a
//! vertex, on a hand-built corpus.

use diffusion_embed::features::extract_cooccurrences;
use diffusion_embed::sampler::{Corpus, VertexSequence};

fn main() -> diffusion_embed::Result<()> {
    let names = ["a", "b", "c", "d", "e"];
    let (a, b, c, d) = (0, 1, 2, 3);
    let seqs = vec![vec![a, c, d, b, c, d], vec![d, c, d], vec![d, c, d]];
    let corpus = Corpus::from_sequences(names.len(), seqs.into_iter().map(VertexSequence).collect())?;

    let counts = extract_cooccurrences(&corpus, 1, names.len())?;
    for (key, count) in counts.entries() {
        println!(
            "{} at offset {:+} from {}: {count}",
            names[key.context as usize], key.offset, names[key.center as usize]
        );
    }
    let y = counts.hitting_frequency_vector(c)?;
    println!("y(c, -1) = {:?}", &y[..names.len()]);
    println!("y(c, +1) = {:?}", &y[names.len()..]);
    Ok(())
}
