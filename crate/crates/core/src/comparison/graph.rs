use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Simple undirected graph over nodes `0..n_nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
}

const OFFSETS: [usize; 3] = [1, 2, 3];

/// Complete graph up to 7 nodes; beyond that a circulant graph joining each
/// node to the nodes 1, 2 and 3 steps away on a ring (degree 6).
///
/// Edge order is deterministic: lexicographic for complete graphs, offset
/// by offset around the ring otherwise.
pub fn build_comparison_graph(n_nodes: usize) -> ComparisonGraph {
    let mut edges = Vec::new();
    if n_nodes <= 7 {
        for i in 0..n_nodes {
            for j in (i + 1)..n_nodes {
                edges.push((i, j));
            }
        }
    } else {
        let mut seen = BTreeSet::new();
        for off in OFFSETS {
            for i in 0..n_nodes {
                let j = (i + off) % n_nodes;
                let e = (i.min(j), i.max(j));
                if seen.insert(e) {
                    edges.push(e);
                }
            }
        }
    }
    ComparisonGraph { n_nodes, edges }
}

impl ComparisonGraph {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_nodes];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs_complete() {
        assert_eq!(build_comparison_graph(3).edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(build_comparison_graph(7).edges().len(), 21);
        assert_eq!(build_comparison_graph(2).edges().len(), 1);
    }

    #[test]
    fn fourteen_nodes_have_degree_six() {
        let g = build_comparison_graph(14);
        assert!(g.degrees().iter().all(|&d| d == 6));
        assert_eq!(g.edges().len(), 42);
    }
}
