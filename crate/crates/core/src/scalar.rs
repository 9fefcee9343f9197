//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All core math is generic over [`Scalar`], which combines the `num-traits`
//! conversion/arithmetic bounds with `nalgebra::RealField` so the same code
//! drives dense tensor algebra and the SVD/QR factorizations. `f32` and `f64`
//! satisfy it; `f64` is the default precision used by the CLI (see the type
//! aliases at the crate root).

use num_traits::{FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
pub trait Scalar:
    nalgebra::RealField + FromPrimitive + ToPrimitive + NumAssign + std::iter::Sum + Copy
{
}

impl<T> Scalar for T where
    T: nalgebra::RealField + FromPrimitive + ToPrimitive + NumAssign + std::iter::Sum + Copy
{
}

/// Converts an `f64` constant into the working scalar type.
///
/// Panics only if `T` cannot represent any `f64`, which cannot happen for the
/// float types this crate is instantiated with.
#[inline]
pub fn cast<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("f64 constant must convert into the scalar type")
}
