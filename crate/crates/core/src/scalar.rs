//! Scalar abstraction for the continuous-time machinery.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the trajectory functions are generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Default relative tolerance for adaptive quadrature at this precision.
    fn default_quad_tol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }
}

impl Scalar for f64 {
    fn default_quad_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn default_quad_tol() -> Self {
        1e-5
    }
}
