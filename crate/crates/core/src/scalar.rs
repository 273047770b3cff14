//! Scalar abstractions.
//!
//! Two families of numbers flow through the toolkit. Relation and
//! compression matrices are built over an [`ExactScalar`] so that row
//! equality (collapsibility) is decided exactly; network evaluation runs
//! over a [`Real`] floating-point type.

use std::fmt::Debug;
use std::hash::Hash;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Numbers that can be stored in a sparse matrix.
pub trait Scalar: Num + NumAssign + Copy + Debug + Send + Sync + 'static {}

impl<T> Scalar for T where T: Num + NumAssign + Copy + Debug + Send + Sync + 'static {}

/// Exact field elements: equality is decidable and hashable, and division
/// is exact. Floating-point types deliberately do not qualify.
pub trait ExactScalar: Scalar + Eq + Hash + FromPrimitive + ToPrimitive {
    /// Builds the value `numer / denom`.
    fn ratio(numer: i64, denom: i64) -> Self;
    /// Numerator and denominator in lowest terms.
    fn to_parts(&self) -> (i64, i64);
}

impl ExactScalar for Ratio<i64> {
    fn ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_parts(&self) -> (i64, i64) {
        (*self.numer(), *self.denom())
    }
}

/// Floating-point scalars used by the networks.
pub trait Real: Float + Scalar + FromPrimitive + ndarray::ScalarOperand + ndarray::LinalgScalar + Default {
    fn from_f64(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("representable constant")
    }

    /// Lossy conversion from any exact value.
    fn from_exact<E: ExactScalar>(v: &E) -> Self {
        let (n, d) = v.to_parts();
        <Self as Real>::from_f64(n as f64 / d as f64)
    }
}

impl Real for f32 {}
impl Real for f64 {}
