use std::collections::HashMap;

use diffusion_embed::features::extract_cooccurrences;
use diffusion_embed::sampler::{Corpus, VertexSequence};
use proptest::prelude::*;

const N: usize = 12;

fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0..N, 1..15), 0..12)
}

fn corpus(seqs: &[Vec<usize>]) -> Corpus {
    Corpus::from_sequences(N, seqs.iter().cloned().map(VertexSequence).collect()).unwrap()
}

/// Pairwise enumeration over all position pairs of each sequence.
fn oracle(seqs: &[Vec<usize>], window: usize) -> HashMap<(usize, i32, usize), u64> {
    let mut counts = HashMap::new();
    for s in seqs {
        for i in 0..s.len() {
            for j in 0..s.len() {
                let r = j as i32 - i as i32;
                if r != 0 && r.unsigned_abs() as usize <= window {
                    *counts.entry((s[i], r, s[j])).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

proptest! {
    #[test]
    fn matches_enumeration_oracle(seqs in corpus_strategy(), window in 1usize..4) {
        let counts = extract_cooccurrences(&corpus(&seqs), window, N).unwrap();
        let expected = oracle(&seqs, window);
        prop_assert_eq!(counts.entries().len(), expected.len());
        for &(k, c) in counts.entries() {
            prop_assert_eq!(Some(&c), expected.get(&(k.center as usize, k.offset, k.context as usize)));
        }
    }

    #[test]
    fn symmetric_and_mass_conserving(seqs in corpus_strategy(), window in 1usize..4) {
        let counts = extract_cooccurrences(&corpus(&seqs), window, N).unwrap();
        for &(k, c) in counts.entries() {
            prop_assert!(k.offset != 0 && k.offset.unsigned_abs() as usize <= window);
            prop_assert_eq!(c, counts.count(k.context as usize, -k.offset, k.center as usize));
        }
        let mass: u64 = seqs
            .iter()
            .map(|s| (1..=window).map(|r| 2 * s.len().saturating_sub(r) as u64).sum::<u64>())
            .sum();
        prop_assert_eq!(counts.total_mass(), mass);
    }

    #[test]
    fn sequence_order_is_irrelevant(seqs in corpus_strategy(), window in 1usize..4, rot in 0usize..12) {
        let a = extract_cooccurrences(&corpus(&seqs), window, N).unwrap();
        let mut permuted = seqs.clone();
        permuted.reverse();
        if !permuted.is_empty() {
            let k = rot % permuted.len();
            permuted.rotate_left(k);
        }
        let b = extract_cooccurrences(&corpus(&permuted), window, N).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dense_vectors_have_fixed_length(seqs in corpus_strategy(), window in 1usize..4) {
        let counts = extract_cooccurrences(&corpus(&seqs), window, N).unwrap();
        let mut total = 0;
        for v in 0..N {
            let y = counts.hitting_frequency_vector(v).unwrap();
            prop_assert_eq!(y.len(), 2 * window * N);
            total += y.iter().sum::<u64>();
        }
        prop_assert_eq!(total, counts.total_mass());
    }
}

#[test]
fn sharded_extraction_matches_single_shard() {
    // enough sequences to span several shards
    let seqs: Vec<Vec<usize>> = (0..20_000).map(|i| vec![i % N, (i * 5 + 1) % N, (i * 7 + 3) % N, i % N]).collect();
    let counts = extract_cooccurrences(&corpus(&seqs), 2, N).unwrap();
    let expected = oracle(&seqs, 2);
    assert_eq!(counts.entries().len(), expected.len());
    for &(k, c) in counts.entries() {
        assert_eq!(c, expected[&(k.center as usize, k.offset, k.context as usize)]);
    }
}
