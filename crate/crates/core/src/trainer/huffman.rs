use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{invalid, Result};

/// Binary prefix tree over vertices for hierarchical softmax.
///
/// Inner nodes are numbered `0..n-1` in merge order; the root is `n - 2`.
/// For each leaf, `path` lists the inner nodes from the root down to the
/// leaf's parent and `code` the branch taken at each of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTree {
    codes: Vec<Vec<bool>>,
    paths: Vec<Vec<u32>>,
}

impl HuffmanTree {
    /// Greedy Huffman merge. Zero frequencies count as 1. Ties go to the
    /// lower vertex id, and leaves sort before merged nodes, which sort by
    /// creation order. The first node popped in a merge takes branch `false`.
    pub fn build(frequencies: &[u64]) -> Result<HuffmanTree> {
        let n = frequencies.len();
        if n < 2 {
            return Err(invalid("hierarchical softmax needs at least 2 vertices"));
        }

        // node ids: leaves 0..n, merged nodes n..2n-1 in creation order
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = frequencies
            .iter()
            .enumerate()
            .map(|(v, &f)| Reverse((f.max(1), v)))
            .collect();
        let mut parent = vec![0usize; 2 * n - 1];
        let mut branch = vec![false; 2 * n - 1];
        for next in n..2 * n - 1 {
            let Reverse((f0, a)) = heap.pop().unwrap();
            let Reverse((f1, b)) = heap.pop().unwrap();
            parent[a] = next;
            parent[b] = next;
            branch[b] = true;
            heap.push(Reverse((f0 + f1, next)));
        }

        let root = 2 * n - 2;
        let mut codes = Vec::with_capacity(n);
        let mut paths = Vec::with_capacity(n);
        for leaf in 0..n {
            let mut code = Vec::new();
            let mut path = Vec::new();
            let mut node = leaf;
            while node != root {
                code.push(branch[node]);
                node = parent[node];
                path.push((node - n) as u32);
            }
            code.reverse();
            path.reverse();
            codes.push(code);
            paths.push(path);
        }
        Ok(HuffmanTree { codes, paths })
    }

    pub fn leaf_count(&self) -> usize {
        self.codes.len()
    }

    pub fn inner_count(&self) -> usize {
        self.codes.len() - 1
    }

    pub fn code(&self, v: usize) -> &[bool] {
        &self.codes[v]
    }

    pub fn path(&self, v: usize) -> &[u32] {
        &self.paths[v]
    }

    pub fn max_code_len(&self) -> usize {
        self.codes.iter().map(Vec::len).max().unwrap_or(0)
    }
}
