//! Undirected, unweighted simple graphs in compressed adjacency form.
//!
//! Vertex labels from the input are remapped to dense ids `0..n` in order of
//! first appearance. Every neighbor list is sorted ascending.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edge_count: usize,
}

impl Graph {
    /// Parses an edge list: one edge per line, two whitespace-separated
    /// tokens. Blank lines and lines starting with `#` or `%` are skipped.
    /// Duplicate edges collapse and self-loops are dropped, but the tokens of
    /// a self-loop still register as vertices.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut edges = Vec::new();

        let mut intern = |token: &str| -> VertexId {
            if let Some(&id) = index.get(token) {
                return id;
            }
            let id = labels.len();
            labels.push(token.to_owned());
            index.insert(token.to_owned(), id);
            id
        };

        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two vertex tokens, found {}", tokens.len()),
                });
            }
            let u = intern(tokens[0]);
            let v = intern(tokens[1]);
            edges.push((u, v));
        }

        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Self::build(labels, index, &edges))
    }

    /// Builds a graph over `n` vertices labelled `"0".."n-1"`.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Graph> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::VertexOutOfRange { id: u.max(v), n });
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = labels.iter().cloned().zip(0..n).collect();
        Ok(Self::build(labels, index, edges))
    }

    fn build(
        labels: Vec<String>,
        index: HashMap<String, VertexId>,
        edges: &[(VertexId, VertexId)],
    ) -> Graph {
        let n = labels.len();
        let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(edges.len() * 2);
        offsets.push(0);
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }

        Graph {
            offsets,
            edge_count: targets.len() / 2,
            targets,
            labels,
            index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                id: v,
                n: self.vertex_count(),
            })
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId]> {
        self.check_vertex(v)?;
        Ok(self.neighbors_unchecked(v))
    }

    #[inline]
    pub(crate) fn neighbors_unchecked(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count()
            && v < self.vertex_count()
            && self.neighbors_unchecked(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors_unchecked(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    /// Hop distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Result<Vec<Option<u32>>> {
        self.check_vertex(source)?;
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u].unwrap() + 1;
            for &w in self.neighbors_unchecked(u) {
                if dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// The connected component containing `v`, sorted ascending.
    pub fn component_of(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let dist = self.bfs_distances(v)?;
        Ok(dist
            .iter()
            .enumerate()
            .filter_map(|(u, d)| d.map(|_| u))
            .collect())
    }
}
