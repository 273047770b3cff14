use serde::{Deserialize, Serialize};

use super::CompressedDecomposition;
use crate::hdecomp::io::{serialized_len, write_decomposition};
use crate::hdecomp::HDecomposition;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRatio {
    pub level: usize,
    pub original: usize,
    pub compressed: usize,
    pub ratio: f64,
}

/// Size comparison between a decomposition and its compressed form.
///
/// Stored entries count attribute and relation nonzeros. Serialized bytes
/// are measured in the `HDEC1` format for both sides, the compressed side
/// being the quotient decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionReport {
    pub levels: Vec<LevelRatio>,
    pub stored_entries_original: usize,
    pub stored_entries_compressed: usize,
    pub stored_entry_ratio: f64,
    pub serialized_bytes_original: usize,
    pub serialized_bytes_compressed: usize,
    pub serialized_byte_ratio: f64,
}

fn ratio(compressed: usize, original: usize) -> f64 {
    if original == 0 {
        1.0
    } else {
        compressed as f64 / original as f64
    }
}

pub fn compression_report<T: ExactScalar>(h: &HDecomposition<T>, c: &CompressedDecomposition<T>) -> CompressionReport {
    let levels = h
        .level_sizes()
        .iter()
        .zip(c.level_sizes_comp())
        .enumerate()
        .map(|(level, (&original, compressed))| LevelRatio {
            level,
            original,
            compressed,
            ratio: ratio(compressed, original),
        })
        .collect();
    let stored_original = h.stored_entries();
    let stored_compressed = c.stored_entries();
    let bytes_original = serialized_len(|w| write_decomposition(h, w));
    let quotient = c.to_decomposition();
    let bytes_compressed = serialized_len(|w| write_decomposition(&quotient, w));
    CompressionReport {
        levels,
        stored_entries_original: stored_original,
        stored_entries_compressed: stored_compressed,
        stored_entry_ratio: ratio(stored_compressed, stored_original),
        serialized_bytes_original: bytes_original,
        serialized_bytes_compressed: bytes_compressed,
        serialized_byte_ratio: ratio(bytes_compressed, bytes_original),
    }
}
