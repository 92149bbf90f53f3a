//! Binary floating point with a compile-time mantissa width.
//!
//! A value is `mant · 2^exp` with `|mant| < 2^P`. Every operation rounds to
//! nearest, so this is an ordinary float with a wide mantissa, nothing more.
//! It is only used to search for candidate functions; results are always
//! converted to [`Rat`] and re-certified.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, ParseBigIntError, Sign};
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::Rat;

#[derive(Clone, Debug)]
pub struct BigFloat<const P: u32> {
    mant: BigInt,
    exp: i64,
}

impl<const P: u32> BigFloat<P> {
    fn round(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let excess = mant.bits() as i64 - P as i64;
        if excess <= 0 {
            return BigFloat { mant, exp };
        }
        let half = BigInt::one() << (excess - 1) as usize;
        let mut q = (mant + half) >> excess as usize;
        let mut e = exp + excess;
        if q.bits() > P as u64 {
            q >>= 1usize;
            e += 1;
        }
        BigFloat { mant: q, exp: e }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::round(v, 0)
    }

    pub fn from_rat(r: &Rat) -> Self {
        let (num, den) = (r.numer(), r.denom());
        if num.is_zero() {
            return Self::zero();
        }
        let s = P as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let q = if s >= 0 {
            (num << s as usize) / den
        } else {
            num / (den << (-s) as usize)
        };
        Self::round(q, -s)
    }

    /// Exact value as a rational.
    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.mant << self.exp as usize)
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let (m, e) = if bits > 64 {
            (&self.mant >> (bits - 64) as usize, self.exp + bits - 64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return m * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split the scaling so intermediate powers stay finite
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Position just above the most significant bit (`|x| < 2^top`).
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.mant.is_zero(), other.mant.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let (a, b) = (self.mant.magnitude(), other.mant.magnitude());
        match self.exp.cmp(&other.exp) {
            Ordering::Greater => (a << (self.exp - other.exp) as usize).cmp(b),
            Ordering::Less => a.cmp(&(b << (other.exp - self.exp) as usize)),
            Ordering::Equal => a.cmp(b),
        }
    }

    /// Truncation toward zero.
    pub fn trunc(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            let d = BigInt::one() << (-self.exp) as usize;
            // BigInt division truncates toward zero
            &self.mant / d
        }
    }
}

impl<const P: u32> fmt::Display for BigFloat<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl<const P: u32> PartialEq for BigFloat<P> {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl<const P: u32> PartialOrd for BigFloat<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        Some(match (sa, sb) {
            (Sign::Minus, Sign::Minus) => other.cmp_abs(self),
            (Sign::Minus, _) => Ordering::Less,
            (_, Sign::Minus) => Ordering::Greater,
            _ => self.cmp_abs(other),
        })
    }
}

impl<const P: u32> Zero for BigFloat<P> {
    fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl<const P: u32> One for BigFloat<P> {
    fn one() -> Self {
        BigFloat { mant: BigInt::one(), exp: 0 }
    }
}

impl<const P: u32> Neg for BigFloat<P> {
    type Output = Self;
    fn neg(self) -> Self {
        BigFloat { mant: -self.mant, exp: self.exp }
    }
}

impl<const P: u32> Add for BigFloat<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.mant.is_zero() {
            return rhs;
        }
        if rhs.mant.is_zero() {
            return self;
        }
        // a summand far below the last kept bit cannot change the rounded sum
        let gap = self.top() - rhs.top();
        if gap > P as i64 + 2 {
            return self;
        }
        if -gap > P as i64 + 2 {
            return rhs;
        }
        let e = self.exp.min(rhs.exp);
        let a = self.mant << (self.exp - e) as usize;
        let b = rhs.mant << (rhs.exp - e) as usize;
        Self::round(a + b, e)
    }
}

impl<const P: u32> Sub for BigFloat<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u32> Mul for BigFloat<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::round(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl<const P: u32> Div for BigFloat<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.mant.is_zero(), "BigFloat division by zero");
        if self.mant.is_zero() {
            return self;
        }
        let s = (P as i64 + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (self.mant << s as usize) / &rhs.mant;
        Self::round(q, self.exp - rhs.exp - s)
    }
}

impl<const P: u32> Rem for BigFloat<P> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = (self.clone() / rhs.clone()).trunc();
        self - rhs * Self::from_bigint(q)
    }
}

impl<const P: u32> Num for BigFloat<P> {
    type FromStrRadixErr = ParseBigIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ParseBigIntError> {
        BigInt::from_str_radix(s, radix).map(Self::from_bigint)
    }
}

impl<const P: u32> Signed for BigFloat<P> {
    fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self.clone() - other.clone()
        }
    }
    fn signum(&self) -> Self {
        match self.mant.sign() {
            Sign::Minus => -Self::one(),
            Sign::NoSign => Self::zero(),
            Sign::Plus => Self::one(),
        }
    }
    fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }
    fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }
}

/// Round a rational to the nearest multiple of `1/den`.
pub fn round_to_denominator(x: &Rat, den: &BigInt) -> Rat {
    let scaled = x * Rat::from_integer(den.clone());
    let two = BigInt::from(2);
    let q = (scaled.numer() * &two + scaled.denom()).div_floor(&(scaled.denom() * &two));
    Rat::new(q, den.clone())
}
