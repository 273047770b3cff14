//! Shift-aggregate-extract networks over hierarchical graph
//! decompositions, with lossless symmetry compression.
//!
//! The pipeline is: load a benchmark dataset ([`graph`]), build its
//! ego-graph decomposition ([`hdecomp`]), optionally collapse symmetric
//! objects ([`compression`]), then train and evaluate a network ([`net`])
//! under cross-validation ([`harness`]).
//!
//! Exact matrices are generic over [`ExactScalar`] and networks over
//! [`Real`]; the aliases below fix the usual choices.

pub mod compression;
pub mod error;
pub mod graph;
pub mod harness;
pub mod hdecomp;
pub mod net;
pub mod scalar;
pub mod sparse;

pub use error::{Error, Result};
pub use scalar::{ExactScalar, Real, Scalar};

/// Exact scalar used for relation and compression matrices.
pub type Rational = num_rational::Ratio<i64>;

pub type Decomposition = hdecomp::HDecomposition<Rational>;
pub type Compressed = compression::CompressedDecomposition<Rational>;
pub type Pair = compression::CompressionPair<Rational>;

pub type Model = net::SaenModel<f64>;
pub type Model32 = net::SaenModel<f32>;
pub type Input = net::NetInput<f64>;
