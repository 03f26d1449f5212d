//! Scalar abstraction for the analytic code paths.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type the analytic modules are generic over.
///
/// Implemented for `f32` and `f64`. Everything here needs `ln`, so exact
/// rational types are not supported.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal fits the scalar type")
    }

    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count fits the scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Strictly positive; false for NaN.
    fn is_positive(self) -> bool {
        self > Self::zero()
    }

    /// Zero or above; false for NaN.
    fn is_non_negative(self) -> bool {
        self >= Self::zero()
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// `H_m = 1 + 1/2 + ... + 1/m`, summed in ascending `k`. `H_0 = 0`.
pub fn harmonic<T: Scalar>(m: usize) -> T {
    (1..=m).fold(T::zero(), |acc, k| acc + T::one() / T::from_count(k))
}
