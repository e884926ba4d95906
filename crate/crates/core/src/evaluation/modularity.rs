use serde::Serialize;

use super::kmeans::ClusterAssignment;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Newman modularity `Q = sum_c (e_c - a_c^2)`, where `e_c` is the fraction
/// of edges with both ends in cluster `c` and `a_c` the fraction of edge
/// endpoints (degree mass) in `c`.
pub fn modularity(g: &Graph, clusters: &ClusterAssignment) -> Result<f64> {
    if clusters.assignment.len() != g.vertex_count() {
        return Err(invalid(format!(
            "assignment covers {} of {} vertices",
            clusters.assignment.len(),
            g.vertex_count()
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("modularity undefined without edges".into()));
    }
    let c = &clusters.assignment;
    let mut intra = vec![0usize; clusters.k];
    let mut degree = vec![0usize; clusters.k];
    for v in 0..g.vertex_count() {
        degree[c[v]] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if c[u] == c[v] {
            intra[c[u]] += 1;
        }
    }

    let m = g.edge_count() as f64;
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&e, &a)| {
            let e = e as f64 / m;
            let a = a as f64 / (2.0 * m);
            e - a * a
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterMetrics {
    pub k: usize,
    pub modularity: f64,
    pub wcss: f64,
    pub cluster_sizes: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()
    }

    #[test]
    fn planted_triangles() {
        let c = ClusterAssignment::new(vec![0, 0, 0, 1, 1, 1], 2).unwrap();
        assert_eq!(modularity(&triangles(), &c).unwrap(), 0.5);
    }

    #[test]
    fn single_cluster_is_zero() {
        let c = ClusterAssignment::new(vec![0; 6], 1).unwrap();
        assert_eq!(modularity(&triangles(), &c).unwrap(), 0.0);
    }

    #[test]
    fn mixed_split_is_worse() {
        // one vertex of each triangle moved across
        let c = ClusterAssignment::new(vec![0, 0, 1, 1, 1, 0], 2).unwrap();
        let q = modularity(&triangles(), &c).unwrap();
        // e_c = 1/6 each, a_c = 1/2 each -> 2 * (1/6 - 1/4)
        assert!((q - (-1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn singletons_are_negative() {
        let c = ClusterAssignment::new((0..6).collect(), 6).unwrap();
        let q = modularity(&triangles(), &c).unwrap();
        // each a_c = 2/12
        assert!((q + 6.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let g = Graph::from_edge_list("a a\nb b").unwrap();
        let c = ClusterAssignment::new(vec![0, 0], 1).unwrap();
        assert!(modularity(&g, &c).is_err());
        let c = ClusterAssignment::new(vec![0; 3], 1).unwrap();
        assert!(modularity(&triangles(), &c).is_err());
        assert!(ClusterAssignment::new(vec![0, 2], 2).is_err());
    }
}
