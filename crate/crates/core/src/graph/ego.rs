use super::Graph;
use crate::error::{Error, Result};

/// The subgraph induced by all vertices within distance `radius` of `root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgoGraph {
    pub root: usize,
    pub radius: usize,
    /// Member vertices (root included), ascending.
    pub vertices: Vec<usize>,
    /// Induced edges as `(u, v)` with `u <= v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl EgoGraph {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_root(&self, v: usize) -> bool {
        v == self.root
    }
}

pub fn ego_graph(g: &Graph, root: usize, radius: usize) -> Result<EgoGraph> {
    if root >= g.num_vertices() {
        return Err(Error::Argument(format!(
            "root {root} outside a graph with {} vertices",
            g.num_vertices()
        )));
    }
    let mut vertices: Vec<usize> = g.bfs_within(root, radius).into_iter().map(|(v, _)| v).collect();
    vertices.sort_unstable();
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| vertices.binary_search(&u).is_ok() && vertices.binary_search(&v).is_ok())
        .collect();
    Ok(EgoGraph {
        root,
        radius,
        vertices,
        edges,
    })
}
