//! Hierarchical part-of decompositions.
//!
//! Level 0 holds atomic objects described by an attribute matrix. Every
//! object at level `l >= 1` is made of parts at level `l - 1`, each part
//! carrying a membership type from that level's alphabet. The relation
//! for type `π` is stored as a `|S_l| x |S_{l-1}|` sparse matrix.

mod egnn;
pub(crate) mod io;
mod validate;

pub use egnn::{egnn_decompose, ELEM, ROOT};
pub use io::{read_decomposition, write_decomposition, HDEC_MAGIC};
pub use validate::{decomposition_stats, validate_decomposition, DecompositionStats, RelationStats, Violation};

use crate::error::{Error, Result};
use crate::graph::AttributeMatrix;
use crate::scalar::ExactScalar;
use crate::sparse::CsrMatrix;

/// Membership types available at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipAlphabet {
    pub level: usize,
    pub types: Vec<String>,
}

impl MembershipAlphabet {
    pub fn new(level: usize, types: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            level,
            types: types.into_iter().map(Into::into).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.types.len()
    }
}

/// Part-of relation between level `level` and `level - 1` for one membership type.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationMatrix<T> {
    pub level: usize,
    pub mtype: usize,
    pub matrix: CsrMatrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HDecomposition<T> {
    level_sizes: Vec<usize>,
    alphabets: Vec<MembershipAlphabet>,
    /// `relations[l - 1][π]` for `l` in `1..=L`.
    relations: Vec<Vec<RelationMatrix<T>>>,
    attributes: AttributeMatrix,
    /// Top-level object -> dataset graph id.
    top_index: Vec<usize>,
}

impl<T: ExactScalar> HDecomposition<T> {
    /// Assembles a decomposition from raw parts. Only structural consistency
    /// needed to index the parts is checked here; use
    /// [`validate_decomposition`] for the full invariant set.
    pub fn from_parts(
        level_sizes: Vec<usize>,
        alphabets: Vec<MembershipAlphabet>,
        relations: Vec<Vec<CsrMatrix<T>>>,
        attributes: AttributeMatrix,
        top_index: Vec<usize>,
    ) -> Result<Self> {
        if level_sizes.is_empty() {
            return Err(Error::Argument("a decomposition needs at least one level".into()));
        }
        let top = level_sizes.len() - 1;
        if relations.len() != top || alphabets.len() != top {
            return Err(Error::shape(
                "decomposition levels",
                format!("{top} relation levels and alphabets"),
                format!("{} relation levels, {} alphabets", relations.len(), alphabets.len()),
            ));
        }
        for (i, (mats, alpha)) in relations.iter().zip(&alphabets).enumerate() {
            if mats.len() != alpha.size() {
                return Err(Error::shape("membership types", alpha.size(), mats.len()).with_level(i + 1));
            }
        }
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(i, mats)| {
                mats.into_iter()
                    .enumerate()
                    .map(|(mtype, matrix)| RelationMatrix {
                        level: i + 1,
                        mtype,
                        matrix,
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            level_sizes,
            alphabets,
            relations,
            attributes,
            top_index,
        })
    }

    /// Index of the top level, `L`.
    pub fn top_level(&self) -> usize {
        self.level_sizes.len() - 1
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    pub fn level_size(&self, l: usize) -> usize {
        self.level_sizes[l]
    }

    /// Alphabet of level `l >= 1`.
    pub fn alphabet(&self, l: usize) -> &MembershipAlphabet {
        &self.alphabets[l - 1]
    }

    pub fn alphabets(&self) -> &[MembershipAlphabet] {
        &self.alphabets
    }

    /// Relations of level `l >= 1`, one per membership type.
    pub fn relations(&self, l: usize) -> &[RelationMatrix<T>] {
        &self.relations[l - 1]
    }

    pub fn relation(&self, l: usize, mtype: usize) -> &CsrMatrix<T> {
        &self.relations[l - 1][mtype].matrix
    }

    pub fn attributes(&self) -> &AttributeMatrix {
        &self.attributes
    }

    pub fn top_index(&self) -> &[usize] {
        &self.top_index
    }

    /// Total stored entries: attribute nonzeros plus relation nonzeros.
    pub fn stored_entries(&self) -> usize {
        self.attributes.matrix().nnz() + self.relations.iter().flatten().map(|r| r.matrix.nnz()).sum::<usize>()
    }
}

impl Error {
    fn with_level(self, level: usize) -> Self {
        match self {
            Error::Shape {
                context,
                expected,
                found,
            } => Error::Shape {
                context,
                expected: format!("{expected} at level {level}"),
                found,
            },
            other => other,
        }
    }
}
