//! Scalar abstraction shared by the polynomial, matrix and simplex code.
//!
//! Everything that certifies runs on [`Rat`]. The same generic code also runs
//! on `f64` and on [`BigFloat`] for the floating-point search stages, where
//! only the final rounded result is re-checked exactly.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Num, Signed, ToPrimitive};

use crate::bigfloat::BigFloat;
use crate::Rat;

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_rat(r: &Rat) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn from_bigint(v: &BigInt) -> Self {
        Self::from_rat(&Rat::from_integer(v.clone()))
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl<const P: u32> Scalar for BigFloat<P> {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        BigFloat::from_rat(r)
    }
    fn from_i64(v: i64) -> Self {
        BigFloat::from_bigint(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigFloat::from_bigint(v.clone())
    }
}
