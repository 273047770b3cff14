use std::collections::HashMap;

use crate::scalar::ExactScalar;
use crate::sparse::CsrMatrix;

/// Compression matrix `C` (`m x n`) and decompression matrix `D` (`n x m`)
/// for one level with `n` objects in `m` classes.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressionPair<T> {
    c: CsrMatrix<T>,
    d: CsrMatrix<T>,
    classes: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl<T: ExactScalar> CompressionPair<T> {
    /// Builds the pair from a class id per original object. Class ids must
    /// cover `0..class_count` without gaps.
    pub fn from_classes(classes: Vec<usize>) -> Self {
        let class_count = classes.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); class_count];
        for (i, &c) in classes.iter().enumerate() {
            members[c].push(i);
        }
        assert!(members.iter().all(|m| !m.is_empty()), "class ids must be contiguous");
        let n = classes.len();
        let d = CsrMatrix::from_rows(class_count, classes.iter().map(|&c| vec![(c, T::one())]).collect())
            .expect("class ids in range");
        let c = CsrMatrix::from_rows(
            n,
            members
                .iter()
                .map(|m| {
                    let w = T::ratio(1, m.len() as i64);
                    m.iter().map(|&i| (i, w)).collect()
                })
                .collect(),
        )
        .expect("member ids in range");
        Self { c, d, classes, members }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_classes((0..n).collect())
    }

    /// Compression matrix: row `j` holds `1/k` on each of the `k` members of class `j`.
    pub fn c(&self) -> &CsrMatrix<T> {
        &self.c
    }

    /// Decompression matrix: row `i` holds a single 1 in the column of `i`'s class.
    pub fn d(&self) -> &CsrMatrix<T> {
        &self.d
    }

    pub fn class_count(&self) -> usize {
        self.members.len()
    }

    pub fn original_count(&self) -> usize {
        self.classes.len()
    }

    /// Class of each original object.
    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    /// Original objects of class `j`, ascending.
    pub fn members(&self, j: usize) -> &[usize] {
        &self.members[j]
    }

    /// First member of each class.
    pub fn representatives(&self) -> Vec<usize> {
        self.members.iter().map(|m| m[0]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.classes.iter().enumerate().all(|(i, &c)| i == c)
    }
}

/// Groups identical rows of `m`. Classes are numbered by first occurrence.
///
/// Rows are compared by their canonical sparse form (sorted columns, no
/// explicit zeros) through a hash map, so a hash collision always falls
/// back to full equality.
pub fn compute_cd<T: ExactScalar>(m: &CsrMatrix<T>) -> CompressionPair<T> {
    let mut seen: HashMap<(&[usize], &[T]), usize> = HashMap::with_capacity(m.rows());
    let classes = (0..m.rows())
        .map(|r| {
            let next = seen.len();
            *seen.entry(m.row(r)).or_insert(next)
        })
        .collect();
    CompressionPair::from_classes(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use ndarray::{array, Array2};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn exact(rows: Array2<i64>) -> CsrMatrix<Rational> {
        CsrMatrix::from_dense(rows.mapv(Rational::from).view())
    }

    #[test]
    fn worked_example() {
        let m = exact(array![[0, 0, 0], [1, 0, 1], [1, 1, 0], [0, 0, 0], [1, 1, 0]]);
        let cd = compute_cd(&m);
        assert_eq!(cd.classes(), &[0, 1, 2, 0, 2]);
        let z = q(0, 1);
        let h = q(1, 2);
        let one = q(1, 1);
        assert_eq!(
            cd.c().to_dense(),
            array![[h, z, z, h, z], [z, one, z, z, z], [z, z, h, z, h]]
        );
        let m_comp = cd.c().matmul(&m).unwrap();
        assert_eq!(m_comp, exact(array![[0, 0, 0], [1, 0, 1], [1, 1, 0]]));
        assert_eq!(cd.d().matmul(&m_comp).unwrap(), m);
        assert_eq!(cd.c().matmul(cd.d()).unwrap(), CsrMatrix::identity(3));
    }

    #[test]
    fn distinct_rows_give_identity() {
        let m = exact(array![[1, 0], [0, 1], [1, 1], [0, 0]]);
        let cd = compute_cd(&m);
        assert!(cd.is_identity());
        assert_eq!(cd.c(), &CsrMatrix::identity(4));
        assert_eq!(cd.d(), &CsrMatrix::identity(4));
    }

    #[test]
    fn empty_matrix() {
        let cd = compute_cd(&CsrMatrix::<Rational>::zeros(0, 3));
        assert_eq!(cd.class_count(), 0);
        assert_eq!(cd.original_count(), 0);
    }

    /// Quadratic pairwise grouping, independent of hashing.
    fn brute_force_classes(rows: &[Vec<i64>]) -> Vec<usize> {
        let mut distinct: Vec<&Vec<i64>> = Vec::new();
        rows.iter()
            .map(|row| {
                distinct.iter().position(|d| *d == row).unwrap_or_else(|| {
                    distinct.push(row);
                    distinct.len() - 1
                })
            })
            .collect()
    }

    #[test]
    fn seeded_duplicates_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rows: Vec<Vec<i64>> = (0..12).map(|_| (0..4).map(|_| rng.gen_range(0..3)).collect()).collect();
        for _ in 0..8 {
            let src = rows[rng.gen_range(0..rows.len())].clone();
            let at = rng.gen_range(0..=rows.len());
            rows.insert(at, src);
        }
        assert_eq!(rows.len(), 20);
        let dense = Array2::from_shape_fn((20, 4), |(r, c)| rows[r][c]);
        let cd = compute_cd(&exact(dense));
        assert_eq!(cd.classes(), brute_force_classes(&rows).as_slice());
        assert!(cd.class_count() < 20);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reconstruction_identities(rows in proptest::collection::vec(proptest::collection::vec(0i64..3, 3), 0..25)) {
                let n = rows.len();
                let dense = Array2::from_shape_fn((n, 3), |(r, c)| rows[r][c]);
                let m = exact(dense);
                let cd = compute_cd(&m);
                prop_assert_eq!(cd.c().matmul(cd.d()).unwrap(), CsrMatrix::identity(cd.class_count()));
                prop_assert_eq!(cd.d().matmul(&cd.c().matmul(&m).unwrap()).unwrap(), m.clone());
                let expected = brute_force_classes(&rows);
                prop_assert_eq!(cd.classes(), expected.as_slice());
                for r in 0..n {
                    prop_assert_eq!(cd.d().row(r).1, &[Rational::from(1)][..]);
                }
            }
        }
    }
}
