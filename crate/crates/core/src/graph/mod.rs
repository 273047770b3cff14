//! Graphs, benchmark datasets, vertex attributes and ego graphs.

mod attributes;
mod ego;
mod tu;

pub use attributes::{build_attributes, degree_attributes, node_label_attributes, AttributeMatrix, AttributeMode};
pub use ego::{ego_graph, EgoGraph};
pub use tu::{parse_tu_dataset, write_tu_dataset};

use crate::error::{Error, Result};

/// Undirected graph over vertices `0..num_vertices`.
///
/// Each edge is stored once as `(u, v)` with `u <= v`; adjacency lists are
/// kept sorted so neighborhood queries see both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    node_labels: Option<Vec<i64>>,
}

impl Graph {
    /// Builds a graph, symmetrizing and de-duplicating the edge list.
    pub fn new(num_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{num_vertices}"
                )));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();
        let mut g = Self {
            num_vertices,
            edges: canon,
            adjacency: Vec::new(),
            node_labels: None,
        };
        g.rebuild_adjacency();
        Ok(g)
    }

    pub fn with_node_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.num_vertices {
            return Err(Error::Argument(format!(
                "{} node labels for {} vertices",
                labels.len(),
                self.num_vertices
            )));
        }
        self.node_labels = Some(labels);
        Ok(self)
    }

    fn rebuild_adjacency(&mut self) {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            if u != v {
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        self.adjacency = adj;
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, `u <= v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_vertices && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn node_labels(&self) -> Option<&[i64]> {
        self.node_labels.as_deref()
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_vertices {
            return Err(Error::Argument("permutation length differs from vertex count".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Argument("not a permutation".into()));
            }
        }
        let mut g = Graph::new(self.num_vertices, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))?;
        if let Some(labels) = &self.node_labels {
            let mut out = vec![0; labels.len()];
            for (v, &l) in labels.iter().enumerate() {
                out[perm[v]] = l;
            }
            g.node_labels = Some(out);
        }
        Ok(g)
    }

    /// Breadth-first distances from `root`, truncated at `max_radius`.
    /// Returns `(vertex, distance)` in visit order, root first.
    pub fn bfs_within(&self, root: usize, max_radius: usize) -> Vec<(usize, usize)> {
        let mut dist = vec![usize::MAX; self.num_vertices];
        dist[root] = 0;
        let mut order = vec![(root, 0)];
        let mut head = 0;
        while head < order.len() {
            let (v, d) = order[head];
            head += 1;
            if d == max_radius {
                continue;
            }
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = d + 1;
                    order.push((w, d + 1));
                }
            }
        }
        order
    }
}

/// A labelled collection of graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDataset {
    pub name: String,
    graphs: Vec<Graph>,
    labels: Vec<usize>,
    class_count: usize,
    /// Raw label value of each class id, ascending.
    class_values: Vec<i64>,
}

impl GraphDataset {
    /// Builds a dataset from raw per-graph labels, remapping them to
    /// `0..class_count` in ascending order of raw value.
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, raw_labels: &[i64]) -> Result<Self> {
        if graphs.len() != raw_labels.len() {
            return Err(Error::Argument(format!(
                "{} graphs but {} labels",
                graphs.len(),
                raw_labels.len()
            )));
        }
        let mut class_values = raw_labels.to_vec();
        class_values.sort_unstable();
        class_values.dedup();
        let labels = raw_labels
            .iter()
            .map(|l| class_values.binary_search(l).expect("value present"))
            .collect();
        Ok(Self {
            name: name.into(),
            graphs,
            labels,
            class_count: class_values.len(),
            class_values,
        })
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn class_values(&self) -> &[i64] {
        &self.class_values
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn total_vertices(&self) -> usize {
        self.graphs.iter().map(Graph::num_vertices).sum()
    }

    pub fn mean_vertices(&self) -> f64 {
        if self.graphs.is_empty() {
            return 0.0;
        }
        self.total_vertices() as f64 / self.graphs.len() as f64
    }

    pub fn has_node_labels(&self) -> bool {
        !self.graphs.is_empty() && self.graphs.iter().all(|g| g.node_labels.is_some())
    }

    /// Average over graphs of each graph's maximum degree.
    pub fn average_max_degree(&self) -> f64 {
        if self.graphs.is_empty() {
            return 0.0;
        }
        self.graphs.iter().map(|g| g.max_degree() as f64).sum::<f64>() / self.graphs.len() as f64
    }

    /// Keeps only the listed graphs, preserving class ids.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            graphs: indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_count: self.class_count,
            class_values: self.class_values.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_symmetrized_and_deduplicated() {
        let g = Graph::new(3, vec![(0, 1), (1, 0), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(g.has_edge(1, 0) && g.has_edge(0, 1));
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn invalid_endpoint_rejected() {
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn labels_remapped_in_sorted_order() {
        let g = Graph::new(1, vec![]).unwrap();
        let ds = GraphDataset::new("x", vec![g.clone(), g.clone(), g], &[1, -1, 1]).unwrap();
        assert_eq!(ds.labels(), &[1, 0, 1]);
        assert_eq!(ds.class_values(), &[-1, 1]);
    }

    #[test]
    fn permutation_preserves_degrees() {
        let g = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = g.permuted(&[3, 2, 1, 0]).unwrap();
        assert_eq!(p.degree(3), 3);
        assert!(g.permuted(&[0, 0, 1, 2]).is_err());
    }
}
