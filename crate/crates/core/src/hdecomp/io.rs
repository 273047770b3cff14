//! `HDEC1` serialization.
//!
//! The first line is the magic string `HDEC1`; the remainder is a JSON
//! object:
//!
//! ```text
//! { "version": 1,
//!   "level_sizes": [|S_0|, ..., |S_L|],
//!   "alphabets": [[type names of level 1], ..., [type names of level L]],
//!   "relations": [{"level", "mtype", "rows", "cols",
//!                  "entries": [[row, col, numerator, denominator], ...]}, ...],
//!   "attributes": {"rows", "cols", "entries": [[row, col, value], ...]},
//!   "top_index": [graph id of each top-level object] }
//! ```
//!
//! Entries are listed row-major with ascending columns (CSR order).

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{HDecomposition, MembershipAlphabet};
use crate::error::{Error, Result};
use crate::graph::AttributeMatrix;
use crate::scalar::ExactScalar;
use crate::sparse::CsrMatrix;

pub const HDEC_MAGIC: &str = "HDEC1";
pub(crate) const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct ExactMatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64, i64)>,
}

impl ExactMatrixRecord {
    pub fn from_matrix<T: ExactScalar>(m: &CsrMatrix<T>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m
                .triplets()
                .map(|(r, c, v)| {
                    let (n, d) = v.to_parts();
                    (r, c, n, d)
                })
                .collect(),
        }
    }

    pub fn to_matrix<T: ExactScalar>(&self) -> Result<CsrMatrix<T>> {
        if let Some(&(r, c, _, _)) = self.entries.iter().find(|e| e.3 == 0) {
            return Err(Error::Serialization(format!("zero denominator at ({r}, {c})")));
        }
        CsrMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().map(|&(r, c, n, d)| (r, c, T::ratio(n, d))),
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct AttributeRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl AttributeRecord {
    pub fn from_attributes(x: &AttributeMatrix) -> Self {
        Self {
            rows: x.rows(),
            cols: x.width(),
            entries: x.matrix().triplets().collect(),
        }
    }

    pub fn to_attributes(&self) -> Result<AttributeMatrix> {
        Ok(AttributeMatrix::new(CsrMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().copied(),
        )?))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RelationRecord {
    level: usize,
    mtype: usize,
    #[serde(flatten)]
    matrix: ExactMatrixRecord,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionRecord {
    version: u32,
    level_sizes: Vec<usize>,
    alphabets: Vec<Vec<String>>,
    relations: Vec<RelationRecord>,
    attributes: AttributeRecord,
    top_index: Vec<usize>,
}

pub(crate) fn write_magic<W: Write>(w: &mut W, magic: &str) -> Result<()> {
    writeln!(w, "{magic}").map_err(|e| Error::Serialization(e.to_string()))
}

/// Reads the magic line and returns a reader positioned at the JSON body.
pub(crate) fn expect_magic<R: Read>(r: R, magic: &str) -> Result<BufReader<R>> {
    let mut reader = BufReader::new(r);
    let mut line = String::new();
    reader
        .read_line(&mut line)
        .map_err(|e| Error::Serialization(e.to_string()))?;
    if line.trim_end() != magic {
        return Err(Error::Serialization(format!(
            "expected header `{magic}`, found `{}`",
            line.trim_end()
        )));
    }
    Ok(reader)
}

pub fn write_decomposition<T: ExactScalar, W: Write>(h: &HDecomposition<T>, mut w: W) -> Result<()> {
    let record = DecompositionRecord {
        version: FORMAT_VERSION,
        level_sizes: h.level_sizes().to_vec(),
        alphabets: h.alphabets().iter().map(|a| a.types.clone()).collect(),
        relations: (1..=h.top_level())
            .flat_map(|l| h.relations(l))
            .map(|r| RelationRecord {
                level: r.level,
                mtype: r.mtype,
                matrix: ExactMatrixRecord::from_matrix(&r.matrix),
            })
            .collect(),
        attributes: AttributeRecord::from_attributes(h.attributes()),
        top_index: h.top_index().to_vec(),
    };
    write_magic(&mut w, HDEC_MAGIC)?;
    serde_json::to_writer(&mut w, &record).map_err(|e| Error::Serialization(e.to_string()))?;
    w.flush().map_err(|e| Error::Serialization(e.to_string()))
}

pub fn read_decomposition<T: ExactScalar, R: Read>(r: R) -> Result<HDecomposition<T>> {
    let reader = expect_magic(r, HDEC_MAGIC)?;
    let record: DecompositionRecord =
        serde_json::from_reader(reader).map_err(|e| Error::Serialization(e.to_string()))?;
    if record.version != FORMAT_VERSION {
        return Err(Error::Serialization(format!("unsupported version {}", record.version)));
    }
    let top = record.level_sizes.len().saturating_sub(1);
    let mut relations: Vec<Vec<CsrMatrix<T>>> = record.alphabets.iter().map(|a| Vec::with_capacity(a.len())).collect();
    for rel in &record.relations {
        if rel.level == 0 || rel.level > top || rel.level > relations.len() {
            return Err(Error::Serialization(format!(
                "relation level {} out of range",
                rel.level
            )));
        }
        if rel.mtype != relations[rel.level - 1].len() {
            return Err(Error::Serialization(format!(
                "relations of level {} are out of order",
                rel.level
            )));
        }
        relations[rel.level - 1].push(rel.matrix.to_matrix()?);
    }
    let alphabets = record
        .alphabets
        .into_iter()
        .enumerate()
        .map(|(i, types)| MembershipAlphabet::new(i + 1, types))
        .collect();
    HDecomposition::from_parts(
        record.level_sizes,
        alphabets,
        relations,
        record.attributes.to_attributes()?,
        record.top_index,
    )
}

/// Number of bytes [`write_decomposition`] produces.
pub(crate) fn serialized_len<F>(write: F) -> usize
where
    F: FnOnce(&mut CountingWriter) -> Result<()>,
{
    let mut counter = CountingWriter(0);
    write(&mut counter).expect("counting writer never fails");
    counter.0
}

pub(crate) struct CountingWriter(pub usize);

impl Write for CountingWriter {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0 += buf.len();
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}
