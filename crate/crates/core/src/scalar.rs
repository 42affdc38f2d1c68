//! Scalar traits the generic code is written against.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Float, FloatConst, Signed, ToPrimitive};

/// Exact integer coefficient ring: machine integers (checked) or `BigInt`.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + From<i64>
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl Coefficient for i64 {}
impl Coefficient for i128 {}
impl Coefficient for BigInt {}

/// Floating-point scalar for the geometric realization: `f32` or `f64`.
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}
