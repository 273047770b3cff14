//! Ego-graph decomposition: vertices, rooted ego graphs at several radii,
//! whole graphs.

use super::{HDecomposition, MembershipAlphabet};
use crate::error::{Error, Result};
use crate::graph::{AttributeMatrix, GraphDataset};
use crate::scalar::ExactScalar;
use crate::sparse::CsrMatrix;

/// Membership type of an ego graph's root vertex.
pub const ROOT: usize = 0;
/// Membership type of every other vertex of an ego graph.
pub const ELEM: usize = 1;

/// Builds the three-level ego-graph decomposition.
///
/// Objects are ordered by (graph, local vertex, radius): level-1 object
/// `offset(g) + v * |radii| + k` is the ego graph of vertex `v` of graph
/// `g` at radius `radii[k]`. Level 2 has one object per graph, and its
/// membership types are the radii.
pub fn egnn_decompose<T: ExactScalar>(
    dataset: &GraphDataset,
    attributes: &AttributeMatrix,
    radii: &[usize],
) -> Result<HDecomposition<T>> {
    if radii.is_empty() {
        return Err(Error::Argument("radii must be non-empty".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "radii must be strictly ascending, got {radii:?}"
        )));
    }
    let n0 = dataset.total_vertices();
    if attributes.rows() != n0 {
        return Err(Error::shape("attribute rows", n0, attributes.rows()));
    }
    let n_radii = radii.len();
    let max_radius = *radii.last().unwrap();
    let n1 = n0 * n_radii;
    let n2 = dataset.len();

    let mut root_rows: Vec<Vec<(usize, T)>> = Vec::with_capacity(n1);
    let mut elem_rows: Vec<Vec<(usize, T)>> = Vec::with_capacity(n1);
    let mut radius_rows: Vec<Vec<Vec<(usize, T)>>> = vec![Vec::with_capacity(n2); n_radii];

    let mut vertex_offset = 0;
    for graph in dataset.graphs() {
        let n = graph.num_vertices();
        let ego_offset = vertex_offset * n_radii;
        for root in 0..n {
            // BFS visit order is nondecreasing in distance.
            let reach = graph.bfs_within(root, max_radius);
            for &r in radii {
                let mut elems: Vec<(usize, T)> = reach
                    .iter()
                    .take_while(|&&(_, d)| d <= r)
                    .filter(|&&(v, _)| v != root)
                    .map(|&(v, _)| (vertex_offset + v, T::one()))
                    .collect();
                elems.sort_unstable_by_key(|&(c, _)| c);
                root_rows.push(vec![(vertex_offset + root, T::one())]);
                elem_rows.push(elems);
            }
        }
        for (k, rows) in radius_rows.iter_mut().enumerate() {
            rows.push((0..n).map(|v| (ego_offset + v * n_radii + k, T::one())).collect());
        }
        vertex_offset += n;
    }

    let level1 = vec![
        CsrMatrix::from_rows(n0, root_rows)?,
        CsrMatrix::from_rows(n0, elem_rows)?,
    ];
    let level2 = radius_rows
        .into_iter()
        .map(|rows| CsrMatrix::from_rows(n1, rows))
        .collect::<Result<Vec<_>>>()?;
    HDecomposition::from_parts(
        vec![n0, n1, n2],
        vec![
            MembershipAlphabet::new(1, ["ROOT", "ELEM"]),
            MembershipAlphabet::new(2, radii.iter().map(|r| r.to_string())),
        ],
        vec![level1, level2],
        attributes.clone(),
        (0..n2).collect(),
    )
}
