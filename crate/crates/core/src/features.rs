//! Windowed positional co-occurrence counts ("hitting frequencies").
//!
//! For a center vertex `v` and offset `r` in `-w..=-1, 1..=w`, `count(v, r, u)`
//! is the number of times `u` sits exactly `r` positions from an occurrence
//! of `v` in some sequence. The dense hitting frequency vector of `v` is the
//! concatenation of its per-offset blocks, negative offsets first.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::sampler::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cooccurrence {
    pub center: u32,
    pub offset: i32,
    pub context: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    window: usize,
    n: usize,
    /// Sorted by key, counts strictly positive.
    entries: Vec<(Cooccurrence, u64)>,
}

/// Index of offset `r` among the `2 * window` position blocks.
#[inline]
pub fn offset_slot(offset: i32, window: usize) -> usize {
    debug_assert!(offset != 0 && offset.unsigned_abs() as usize <= window);
    if offset < 0 {
        (offset + window as i32) as usize
    } else {
        offset as usize + window - 1
    }
}

/// Offset for block index `slot`; inverse of [`offset_slot`].
#[inline]
pub fn slot_offset(slot: usize, window: usize) -> i32 {
    if slot < window {
        slot as i32 - window as i32
    } else {
        (slot - window + 1) as i32
    }
}

const SHARD: usize = 4096;

pub fn extract_cooccurrences(corpus: &Corpus, window: usize, n: usize) -> Result<CooccurrenceCounts> {
    if window == 0 {
        return Err(invalid("window must be at least 1"));
    }
    if n > u32::MAX as usize {
        return Err(invalid("vertex count exceeds u32 range"));
    }
    if let Some(&id) = corpus
        .sequences
        .iter()
        .flat_map(|s| s.items())
        .find(|&&v| v >= n)
    {
        return Err(Error::VertexOutOfRange { id, n });
    }

    let merged = corpus
        .sequences
        .par_chunks(SHARD)
        .map(|shard| {
            let mut local: HashMap<Cooccurrence, u64> = HashMap::new();
            for seq in shard {
                let items = seq.items();
                for (i, &center) in items.iter().enumerate() {
                    let lo = i.saturating_sub(window);
                    let hi = (i + window).min(items.len() - 1);
                    for (j, &context) in items.iter().enumerate().take(hi + 1).skip(lo) {
                        if j == i {
                            continue;
                        }
                        let key = Cooccurrence {
                            center: center as u32,
                            offset: j as i32 - i as i32,
                            context: context as u32,
                        };
                        *local.entry(key).or_insert(0) += 1;
                    }
                }
            }
            local
        })
        .reduce(HashMap::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (k, c) in small {
                *big.entry(k).or_insert(0) += c;
            }
            big
        });

    let mut entries: Vec<_> = merged.into_iter().collect();
    entries.sort_unstable_by_key(|&(k, _)| k);
    Ok(CooccurrenceCounts { window, n, entries })
}

impl CooccurrenceCounts {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(Cooccurrence, u64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn count(&self, center: VertexId, offset: i32, context: VertexId) -> u64 {
        let key = Cooccurrence {
            center: center as u32,
            offset,
            context: context as u32,
        };
        self.entries
            .binary_search_by_key(&key, |&(k, _)| k)
            .map_or(0, |i| self.entries[i].1)
    }

    fn entries_of(&self, center: VertexId) -> &[(Cooccurrence, u64)] {
        let c = center as u32;
        let start = self.entries.partition_point(|(k, _)| k.center < c);
        let end = self.entries.partition_point(|(k, _)| k.center <= c);
        &self.entries[start..end]
    }

    /// Dense vector of `2 * window * n` counts for `v`.
    pub fn hitting_frequency_vector(&self, v: VertexId) -> Result<Vec<u64>> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { id: v, n: self.n });
        }
        let mut dense = vec![0u64; 2 * self.window * self.n];
        for &(key, c) in self.entries_of(v) {
            dense[offset_slot(key.offset, self.window) * self.n + key.context as usize] = c;
        }
        Ok(dense)
    }

    /// Rows of `label,c_0,...` with the dense hitting frequency vectors.
    pub fn write_dense_csv<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for v in 0..self.n {
            write!(out, "{}", g.label(v))?;
            for c in self.hitting_frequency_vector(v)? {
                write!(out, ",{c}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
