//! Scalar traits for the Weierstrass machinery.
//!
//! Curve invariants are integer polynomials in the coefficients, so they only
//! need ring operations and multiplication by small integers. That lets the
//! same code run over exact rationals, plain integers and truncated p-adic
//! integers, which have no context-free `zero()` or `one()`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num};

use crate::padic::PadicInt;

pub trait Scalar:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// `self * k`.
    fn scale(&self, k: i64) -> Self;

    fn is_zero_value(&self) -> bool;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn cube(&self) -> Self {
        self.square() * self.clone()
    }
}

/// Scalars with exact division, needed for `j` and coordinate changes.
pub trait FieldScalar: Scalar + Div<Output = Self> {
    /// The multiplicative identity of the same kind as `self`.
    fn one_like(&self) -> Self;
}

impl<T> Scalar for T
where
    T: Num + FromPrimitive + Clone + Debug + Neg<Output = T>,
{
    fn scale(&self, k: i64) -> Self {
        self.clone() * T::from_i64(k).expect("small integer constant")
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl<T> FieldScalar for num_rational::Ratio<T>
where
    T: num_integer::Integer + Clone + Debug + FromPrimitive + Neg<Output = T>,
    num_rational::Ratio<T>: FromPrimitive,
{
    fn one_like(&self) -> Self {
        num_traits::One::one()
    }
}

impl FieldScalar for f64 {
    fn one_like(&self) -> Self {
        1.0
    }
}

impl Scalar for PadicInt {
    fn scale(&self, k: i64) -> Self {
        PadicInt::scale(self, &k.into())
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}
