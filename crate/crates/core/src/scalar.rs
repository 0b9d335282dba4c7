//! Scalar abstraction for the closed-form coefficients.
//!
//! Products, ratios and yields are written once over [`Scalar`] and
//! instantiated with [`Rational`] when exact equality matters, or with
//! [`Real`] for quick plotting and Monte Carlo comparisons.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive {}

impl<T> Scalar for T where T: Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive {}

pub type Rational = BigRational;
pub type Real = f64;

/// `p / q` in the scalar type.
pub fn ratio<S: Scalar>(p: u64, q: u64) -> S {
    from_u64::<S>(p) / from_u64::<S>(q)
}

pub fn from_u64<S: Scalar>(v: u64) -> S {
    S::from_u64(v).expect("every scalar type represents small integers")
}

pub fn from_big(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// `base^exp` by repeated squaring.
pub fn powi<S: Scalar>(base: S, mut exp: u32) -> S {
    let mut acc = S::one();
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    acc
}

pub fn to_f64<S: Scalar>(v: &S) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
