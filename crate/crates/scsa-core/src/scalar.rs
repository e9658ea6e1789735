//! Scalar abstraction: every algorithm in this crate is generic over the
//! floating-point type through [`Scalar`].
//!
//! Operations that go through the dense symmetric eigensolver additionally
//! need the solver backend's real-field trait and bound on
//! [`SpectralScalar`]. Both `f32` and `f64` satisfy every bound in the
//! crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking if the value is not
    /// representable. Intended for literals and small integer casts.
    fn from_config(value: f64) -> Self {
        Self::from_f64(value).expect("constant not representable in scalar type")
    }

    /// `usize` cast used for averages and grid arithmetic.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Scalar types accepted by the dense symmetric eigensolver.
pub trait SpectralScalar: Scalar + faer_traits::RealField {}

impl<T: Scalar + faer_traits::RealField> SpectralScalar for T {}
