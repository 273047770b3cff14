use std::fmt;

use serde::{Deserialize, Serialize};

use super::io::{serialized_len, write_decomposition};
use super::HDecomposition;
use crate::scalar::ExactScalar;

/// A broken decomposition invariant, located by level and object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Relation `(level, mtype)` has the wrong shape.
    RelationShape {
        level: usize,
        mtype: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// An object at `level >= 1` has no parts under any membership type.
    NoParts { level: usize, object: usize },
    /// A relation entry other than 0/1 in an uncompressed decomposition.
    NonBinaryEntry {
        level: usize,
        mtype: usize,
        object: usize,
        part: usize,
    },
    /// The attribute matrix does not have one row per level-0 object.
    AttributeRows { expected: usize, found: usize },
    /// The top-level index does not cover the top level.
    TopIndex { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RelationShape {
                level,
                mtype,
                expected,
                found,
            } => write!(f, "level {level} type {mtype}: shape {found:?}, expected {expected:?}"),
            Violation::NoParts { level, object } => write!(f, "level {level} object {object} has no parts"),
            Violation::NonBinaryEntry {
                level,
                mtype,
                object,
                part,
            } => write!(f, "level {level} type {mtype}: non-binary entry at ({object}, {part})"),
            Violation::AttributeRows { expected, found } => {
                write!(f, "attribute matrix has {found} rows, expected {expected}")
            }
            Violation::TopIndex { expected, found } => {
                write!(f, "top index has {found} entries, expected {expected}")
            }
        }
    }
}

/// Checks every structural invariant; an empty list means the
/// decomposition is sound.
pub fn validate_decomposition<T: ExactScalar>(h: &HDecomposition<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    if h.attributes().rows() != h.level_size(0) {
        out.push(Violation::AttributeRows {
            expected: h.level_size(0),
            found: h.attributes().rows(),
        });
    }
    for l in 1..=h.top_level() {
        let expected = (h.level_size(l), h.level_size(l - 1));
        let mut has_part = vec![false; h.level_size(l)];
        for rel in h.relations(l) {
            let m = &rel.matrix;
            if m.shape() != expected {
                out.push(Violation::RelationShape {
                    level: l,
                    mtype: rel.mtype,
                    expected,
                    found: m.shape(),
                });
                continue;
            }
            for (r, c, v) in m.triplets() {
                has_part[r] = true;
                if v != T::one() {
                    out.push(Violation::NonBinaryEntry {
                        level: l,
                        mtype: rel.mtype,
                        object: r,
                        part: c,
                    });
                }
            }
        }
        out.extend(
            has_part
                .iter()
                .enumerate()
                .filter(|(_, &p)| !p)
                .map(|(object, _)| Violation::NoParts { level: l, object }),
        );
    }
    let top = h.level_size(h.top_level());
    if h.top_index().len() != top {
        out.push(Violation::TopIndex {
            expected: top,
            found: h.top_index().len(),
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationStats {
    pub level: usize,
    pub mtype: usize,
    pub name: String,
    pub nonzeros: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub level_sizes: Vec<usize>,
    pub attribute_nonzeros: usize,
    pub relations: Vec<RelationStats>,
    pub stored_entries: usize,
    pub serialized_bytes: usize,
}

pub fn decomposition_stats<T: ExactScalar>(h: &HDecomposition<T>) -> DecompositionStats {
    let relations = (1..=h.top_level())
        .flat_map(|l| {
            h.relations(l).iter().map(move |r| RelationStats {
                level: l,
                mtype: r.mtype,
                name: h.alphabet(l).types[r.mtype].clone(),
                nonzeros: r.matrix.nnz(),
            })
        })
        .collect();
    DecompositionStats {
        level_sizes: h.level_sizes().to_vec(),
        attribute_nonzeros: h.attributes().matrix().nnz(),
        relations,
        stored_entries: h.stored_entries(),
        serialized_bytes: serialized_len(|w| write_decomposition(h, w)),
    }
}
