use ndarray::{Array2, ArrayView2};

use super::cd::{compute_cd, CompressionPair};
use crate::error::{Error, Result};
use crate::graph::AttributeMatrix;
use crate::hdecomp::{HDecomposition, MembershipAlphabet};
use crate::scalar::{ExactScalar, Real};
use crate::sparse::CsrMatrix;

/// A decomposition with every level collapsed to its equivalence classes.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedDecomposition<T> {
    x_comp: AttributeMatrix,
    /// `relations[l - 1][π] = C_l · R_{l,π} · D_{l-1}`.
    relations: Vec<Vec<CsrMatrix<T>>>,
    /// One pair per level `0..=L`.
    stack: Vec<CompressionPair<T>>,
    alphabets: Vec<MembershipAlphabet>,
    /// Dataset graph id of each original top-level object.
    top_index: Vec<usize>,
}

impl<T: ExactScalar> CompressedDecomposition<T> {
    pub(crate) fn from_parts(
        x_comp: AttributeMatrix,
        relations: Vec<Vec<CsrMatrix<T>>>,
        stack: Vec<CompressionPair<T>>,
        alphabets: Vec<MembershipAlphabet>,
        top_index: Vec<usize>,
    ) -> Self {
        Self {
            x_comp,
            relations,
            stack,
            alphabets,
            top_index,
        }
    }

    pub fn top_level(&self) -> usize {
        self.stack.len() - 1
    }

    pub fn x_comp(&self) -> &AttributeMatrix {
        &self.x_comp
    }

    pub fn relation(&self, l: usize, mtype: usize) -> &CsrMatrix<T> {
        &self.relations[l - 1][mtype]
    }

    pub fn relations(&self, l: usize) -> &[CsrMatrix<T>] {
        &self.relations[l - 1]
    }

    pub fn pair(&self, l: usize) -> &CompressionPair<T> {
        &self.stack[l]
    }

    pub fn stack(&self) -> &[CompressionPair<T>] {
        &self.stack
    }

    pub fn alphabets(&self) -> &[MembershipAlphabet] {
        &self.alphabets
    }

    pub fn top_index(&self) -> &[usize] {
        &self.top_index
    }

    /// `|S_l^comp|` per level.
    pub fn level_sizes_comp(&self) -> Vec<usize> {
        self.stack.iter().map(CompressionPair::class_count).collect()
    }

    /// `|S_l|` per level.
    pub fn level_sizes_original(&self) -> Vec<usize> {
        self.stack.iter().map(CompressionPair::original_count).collect()
    }

    /// Stored entries of the compressed attribute and relation matrices.
    pub fn stored_entries(&self) -> usize {
        self.x_comp.matrix().nnz() + self.relations.iter().flatten().map(CsrMatrix::nnz).sum::<usize>()
    }

    /// Re-wraps the compressed matrices as a plain decomposition over the
    /// quotient levels. Top-level objects point at the graph of their
    /// class representative.
    pub fn to_decomposition(&self) -> HDecomposition<T> {
        let top = self.stack.last().expect("at least one level");
        let top_index = top.representatives().into_iter().map(|i| self.top_index[i]).collect();
        HDecomposition::from_parts(
            self.level_sizes_comp(),
            self.alphabets.clone(),
            self.relations.clone(),
            self.x_comp.clone(),
            top_index,
        )
        .expect("compressed parts are consistent")
    }
}

fn exact_attributes<T: ExactScalar>(x: &AttributeMatrix) -> Result<CsrMatrix<T>> {
    let bad = x.non_categorical_rows();
    if !bad.is_empty() {
        return Err(Error::NonCategorical { rows: bad });
    }
    CsrMatrix::from_triplets(
        x.rows(),
        x.width(),
        x.matrix().triplets().map(|(r, c, v)| (r, c, T::ratio(v as i64, 1))),
    )
}

fn attributes_from_exact<T: ExactScalar>(m: &CsrMatrix<T>) -> AttributeMatrix {
    AttributeMatrix::new(m.map(|v| {
        let (n, d) = v.to_parts();
        n as f64 / d as f64
    }))
}

/// Collapses every level of `h`.
///
/// ```text
/// (C_0, D_0) = compute_cd(X);  X^comp = C_0 X
/// for l in 1..=L:
///     K_π = R_{l,π} D_{l-1}                 for each π
///     (C_l, D_l) = compute_cd([K_1 .. K_n(l)])
///     R^comp_{l,π} = C_l K_π
/// ```
pub fn domain_compress<T: ExactScalar>(h: &HDecomposition<T>) -> Result<CompressedDecomposition<T>> {
    let x = exact_attributes::<T>(h.attributes())?;
    let pair0 = compute_cd(&x);
    let x_comp = pair0.c().matmul(&x)?;
    let mut stack = vec![pair0];
    let mut relations = Vec::with_capacity(h.top_level());
    for l in 1..=h.top_level() {
        let below = stack.last().unwrap();
        let col_comp = h
            .relations(l)
            .iter()
            .map(|r| r.matrix.matmul(below.d()))
            .collect::<Result<Vec<_>>>()?;
        let signature = CsrMatrix::hstack(&col_comp.iter().collect::<Vec<_>>())?;
        let pair = compute_cd(&signature);
        let row_comp = col_comp
            .iter()
            .map(|k| pair.c().matmul(k))
            .collect::<Result<Vec<_>>>()?;
        relations.push(row_comp);
        stack.push(pair);
    }
    Ok(CompressedDecomposition::from_parts(
        attributes_from_exact(&x_comp),
        relations,
        stack,
        h.alphabets().to_vec(),
        h.top_index().to_vec(),
    ))
}

/// Expands compressed representations back to one row per original
/// object: `H = D · H^comp`.
pub fn decompress_representations<R: Real, T: ExactScalar>(
    h_comp: ArrayView2<'_, R>,
    pair: &CompressionPair<T>,
) -> Result<Array2<R>> {
    if h_comp.nrows() != pair.class_count() {
        return Err(Error::Argument(format!(
            "compressed representation has {} rows, decompression expects {}",
            h_comp.nrows(),
            pair.class_count()
        )));
    }
    let mut out = Array2::zeros((pair.original_count(), h_comp.ncols()));
    for (i, &c) in pair.classes().iter().enumerate() {
        out.row_mut(i).assign(&h_comp.row(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degree_attributes, Graph, GraphDataset};
    use crate::hdecomp::egnn_decompose;
    use crate::Rational;
    use ndarray::array;

    fn triangle_h(radii: &[usize]) -> HDecomposition<Rational> {
        let ds = GraphDataset::new("t", vec![Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()], &[0]).unwrap();
        egnn_decompose(&ds, &degree_attributes(&ds).unwrap(), radii).unwrap()
    }

    #[test]
    fn triangle_collapses_to_one_class_per_radius() {
        let c = domain_compress(&triangle_h(&[0, 1])).unwrap();
        assert_eq!(c.level_sizes_comp(), vec![1, 2, 1]);
        // Ego graphs alternate radius 0 / radius 1 in object order.
        assert_eq!(c.pair(1).classes(), &[0, 1, 0, 1, 0, 1]);
        // Radius-1 ego graph: one root, two element parts of the single vertex class.
        assert_eq!(
            c.relation(1, 0).to_dense(),
            array![[Rational::from(1)], [Rational::from(1)]]
        );
        assert_eq!(
            c.relation(1, 1).to_dense(),
            array![[Rational::from(0)], [Rational::from(2)]]
        );
        assert_eq!(
            c.relation(2, 0).to_dense(),
            array![[Rational::from(3), Rational::from(0)]]
        );
    }

    #[test]
    fn asymmetric_objects_compress_to_identity() {
        // Path on 2 vertices with distinct node labels; one radius.
        let g = Graph::new(2, vec![(0, 1)])
            .unwrap()
            .with_node_labels(vec![0, 1])
            .unwrap();
        let ds = GraphDataset::new("t", vec![g], &[0]).unwrap();
        let x = crate::graph::node_label_attributes(&ds).unwrap();
        let h: HDecomposition<Rational> = egnn_decompose(&ds, &x, &[1]).unwrap();
        let c = domain_compress(&h).unwrap();
        assert!(c.stack().iter().all(CompressionPair::is_identity));
        assert_eq!(c.level_sizes_comp(), h.level_sizes());
    }

    #[test]
    fn non_categorical_attributes_rejected() {
        let h = triangle_h(&[0]);
        let x =
            AttributeMatrix::new(CsrMatrix::from_triplets(3, 1, vec![(0, 0, 1.0), (1, 0, 0.5), (2, 0, 1.0)]).unwrap());
        let bad = HDecomposition::from_parts(
            h.level_sizes().to_vec(),
            h.alphabets().to_vec(),
            (1..=2)
                .map(|l| h.relations(l).iter().map(|r| r.matrix.clone()).collect())
                .collect(),
            x,
            h.top_index().to_vec(),
        )
        .unwrap();
        match domain_compress(&bad) {
            Err(Error::NonCategorical { rows }) => assert_eq!(rows, vec![1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reconstruction_identities_hold_exactly() {
        let ds = GraphDataset::new(
            "t",
            vec![
                Graph::new(5, (1..5).map(|i| (i - 1, i))).unwrap(),
                Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
                Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap(),
            ],
            &[0, 1, 0],
        )
        .unwrap();
        let h: HDecomposition<Rational> = egnn_decompose(&ds, &degree_attributes(&ds).unwrap(), &[0, 1, 2]).unwrap();
        let c = domain_compress(&h).unwrap();
        let x = exact_attributes::<Rational>(h.attributes()).unwrap();
        let x_comp = exact_attributes::<Rational>(c.x_comp()).unwrap();
        assert_eq!(c.pair(0).d().matmul(&x_comp).unwrap(), x);
        for l in 0..=2 {
            let p = c.pair(l);
            assert_eq!(p.c().matmul(p.d()).unwrap(), CsrMatrix::identity(p.class_count()));
        }
        for l in 1..=2 {
            for (pi, rel) in h.relations(l).iter().enumerate() {
                let lhs = c.pair(l).d().matmul(c.relation(l, pi)).unwrap();
                let rhs = rel.matrix.matmul(c.pair(l - 1).d()).unwrap();
                assert_eq!(lhs, rhs);
                let direct = c
                    .pair(l)
                    .c()
                    .matmul(&rel.matrix)
                    .unwrap()
                    .matmul(c.pair(l - 1).d())
                    .unwrap();
                assert_eq!(&direct, c.relation(l, pi));
            }
        }
    }

    #[test]
    fn compression_is_idempotent() {
        let c = domain_compress(&triangle_h(&[0, 1, 2])).unwrap();
        let again = domain_compress(&c.to_decomposition()).unwrap();
        assert!(again.stack().iter().all(CompressionPair::is_identity));
    }

    #[test]
    fn decompress_duplicates_rows_per_class() {
        let c = domain_compress(&triangle_h(&[0, 1])).unwrap();
        let p = c.pair(1);
        let h_comp = array![[0.25, -1.0], [3.0, 0.5]];
        let full = decompress_representations(h_comp.view(), p).unwrap();
        for class in 0..p.class_count() {
            for &m in p.members(class) {
                assert_eq!(full.row(m), h_comp.row(class));
            }
        }
        let ident = CompressionPair::<Rational>::identity(2);
        assert_eq!(decompress_representations(h_comp.view(), &ident).unwrap(), h_comp);
        assert!(decompress_representations(h_comp.view(), c.pair(0)).is_err());
    }
}
