//! `HDECC1` serialization of compressed decompositions.
//!
//! Same layout as `HDEC1` (magic line, then JSON), with the compressed
//! attribute and relation matrices plus, per level, the compression and
//! decompression matrices as `[row, col, numerator, denominator]` lists:
//!
//! ```text
//! { "version": 1,
//!   "level_sizes": [...], "level_sizes_comp": [...],
//!   "alphabets": [...],
//!   "relations": [{"level", "mtype", "rows", "cols", "entries"}, ...],
//!   "attributes": {"rows", "cols", "entries"},
//!   "stack": [{"c": {...}, "d": {...}}, ...],
//!   "top_index": [...] }
//! ```

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{CompressedDecomposition, CompressionPair};
use crate::error::{Error, Result};
use crate::hdecomp::io::{expect_magic, write_magic, AttributeRecord, ExactMatrixRecord, FORMAT_VERSION};
use crate::hdecomp::MembershipAlphabet;
use crate::scalar::ExactScalar;

pub const HDECC_MAGIC: &str = "HDECC1";

#[derive(Serialize, Deserialize)]
struct PairRecord {
    c: ExactMatrixRecord,
    d: ExactMatrixRecord,
}

#[derive(Serialize, Deserialize)]
struct RelationRecord {
    level: usize,
    mtype: usize,
    #[serde(flatten)]
    matrix: ExactMatrixRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompressedRecord {
    version: u32,
    level_sizes: Vec<usize>,
    level_sizes_comp: Vec<usize>,
    alphabets: Vec<Vec<String>>,
    relations: Vec<RelationRecord>,
    attributes: AttributeRecord,
    stack: Vec<PairRecord>,
    top_index: Vec<usize>,
}

pub fn write_compressed<T: ExactScalar, W: Write>(c: &CompressedDecomposition<T>, mut w: W) -> Result<()> {
    let record = CompressedRecord {
        version: FORMAT_VERSION,
        level_sizes: c.level_sizes_original(),
        level_sizes_comp: c.level_sizes_comp(),
        alphabets: c.alphabets().iter().map(|a| a.types.clone()).collect(),
        relations: (1..=c.top_level())
            .flat_map(|l| {
                c.relations(l).iter().enumerate().map(move |(mtype, m)| RelationRecord {
                    level: l,
                    mtype,
                    matrix: ExactMatrixRecord::from_matrix(m),
                })
            })
            .collect(),
        attributes: AttributeRecord::from_attributes(c.x_comp()),
        stack: c
            .stack()
            .iter()
            .map(|p| PairRecord {
                c: ExactMatrixRecord::from_matrix(p.c()),
                d: ExactMatrixRecord::from_matrix(p.d()),
            })
            .collect(),
        top_index: c.top_index().to_vec(),
    };
    write_magic(&mut w, HDECC_MAGIC)?;
    serde_json::to_writer(&mut w, &record).map_err(|e| Error::Serialization(e.to_string()))?;
    w.flush().map_err(|e| Error::Serialization(e.to_string()))
}

fn pair_from_record<T: ExactScalar>(rec: &PairRecord) -> Result<CompressionPair<T>> {
    let d = rec.d.to_matrix::<T>()?;
    let mut classes = Vec::with_capacity(d.rows());
    for r in 0..d.rows() {
        match d.row(r) {
            (&[c], [v]) if *v == T::one() => classes.push(c),
            _ => {
                return Err(Error::Serialization(format!(
                    "decompression row {r} must hold a single 1"
                )))
            }
        }
    }
    let pair = CompressionPair::from_classes(classes);
    if pair.class_count() != d.cols() || pair.c() != &rec.c.to_matrix::<T>()? {
        return Err(Error::Serialization(
            "compression matrix disagrees with decompression matrix".into(),
        ));
    }
    Ok(pair)
}

pub fn read_compressed<T: ExactScalar, R: Read>(r: R) -> Result<CompressedDecomposition<T>> {
    let reader = expect_magic(r, HDECC_MAGIC)?;
    let rec: CompressedRecord = serde_json::from_reader(reader).map_err(|e| Error::Serialization(e.to_string()))?;
    if rec.version != FORMAT_VERSION {
        return Err(Error::Serialization(format!("unsupported version {}", rec.version)));
    }
    let stack = rec
        .stack
        .iter()
        .map(pair_from_record)
        .collect::<Result<Vec<CompressionPair<T>>>>()?;
    if stack.is_empty() || stack.len() != rec.alphabets.len() + 1 {
        return Err(Error::Serialization("stack length disagrees with alphabets".into()));
    }
    let mut relations: Vec<Vec<_>> = rec.alphabets.iter().map(|_| Vec::new()).collect();
    for r in &rec.relations {
        if r.level == 0 || r.level > relations.len() || r.mtype != relations[r.level - 1].len() {
            return Err(Error::Serialization(format!(
                "relation ({}, {}) out of order",
                r.level, r.mtype
            )));
        }
        relations[r.level - 1].push(r.matrix.to_matrix::<T>()?);
    }
    let alphabets = rec
        .alphabets
        .into_iter()
        .enumerate()
        .map(|(i, t)| MembershipAlphabet::new(i + 1, t))
        .collect();
    Ok(CompressedDecomposition::from_parts(
        rec.attributes.to_attributes()?,
        relations,
        stack,
        alphabets,
        rec.top_index,
    ))
}
