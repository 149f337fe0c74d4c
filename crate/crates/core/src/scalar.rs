//! Exact ordered-field scalars.
//!
//! Every numeric routine in the crate is written against [`Scalar`], which is
//! implemented for `num_rational::Ratio<I>` over any signed integer type. The
//! crate root fixes the default to arbitrary precision (`BigRational`); the
//! machine-width ratios (`Ratio<i64>`, `Ratio<i128>`) are useful for tests and
//! small inputs where overflow is known not to happen.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact, totally ordered field with a distinguished ring of integers.
pub trait Scalar:
    Clone + Ord + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// The integers embedded in the field.
    type Int: Clone + Integer + Signed + Debug + Display + Send + Sync + 'static;

    fn from_int(i: Self::Int) -> Self;

    fn from_i64(v: i64) -> Self;

    /// `Some` exactly when the value is integral.
    fn as_int(&self) -> Option<Self::Int>;

    fn is_integral(&self) -> bool {
        self.as_int().is_some()
    }

    /// Numerator and positive denominator in lowest terms.
    fn parts(&self) -> (Self::Int, Self::Int);

    fn to_big(&self) -> BigRational;

    /// `None` when the value does not fit the integer type.
    fn from_big(v: &BigRational) -> Option<Self>;

    /// Nearest double, for floating-point heuristics only.
    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.to_big()).unwrap_or(f64::NAN)
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Clone + Integer + Signed + Debug + Display + FromPrimitive + Send + Sync + 'static,
    I: Into<BigInt> + TryFrom<BigInt>,
{
    type Int = I;

    fn from_int(i: I) -> Self {
        Ratio::from_integer(i)
    }

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("i64 fits the integer type"))
    }

    fn as_int(&self) -> Option<I> {
        if self.is_integer() {
            Some(self.to_integer())
        } else {
            None
        }
    }

    fn parts(&self) -> (I, I) {
        (self.numer().clone(), self.denom().clone())
    }

    fn to_big(&self) -> BigRational {
        BigRational::new_raw(self.numer().clone().into(), self.denom().clone().into())
    }

    fn from_big(v: &BigRational) -> Option<Self> {
        let n = I::try_from(v.numer().clone()).ok()?;
        let d = I::try_from(v.denom().clone()).ok()?;
        Some(Ratio::new_raw(n, d))
    }
}

/// Integer helper used by the unimodular elimination: `(g, x, y)` with
/// `g = gcd(a, b) = x*a + y*b` and `g >= 0`.
pub(crate) fn ext_gcd<I: Clone + Integer + Signed>(a: &I, b: &I) -> (I, I, I) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
