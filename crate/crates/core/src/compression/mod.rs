//! Lossless domain compression of H-decompositions.
//!
//! Objects that provably share a representation for every parameter
//! setting are collapsed level by level. Level-0 objects collapse when
//! their attribute rows are equal; a level-`l` object collapses with
//! another when, after the parts at level `l - 1` have been collapsed, both
//! have the same part counts under every membership type.
//!
//! Each level yields a [`CompressionPair`]: `D` maps every original object
//! to its class and `C` averages each class, so `C·D = I` and `D·C·M = M`
//! for any `M` that is constant on classes.

mod cd;
mod domain;
mod io;
mod report;

pub use cd::{compute_cd, CompressionPair};
pub use domain::{decompress_representations, domain_compress, CompressedDecomposition};
pub use io::{read_compressed, write_compressed, HDECC_MAGIC};
pub use report::{compression_report, CompressionReport, LevelRatio};
