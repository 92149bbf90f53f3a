//! Closed intervals with rational endpoints.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rat,
    hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn hull(&self, other: &RatInterval) -> Self {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            RatInterval { lo: b, hi: a }
        } else {
            RatInterval { lo: a, hi: b }
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            RatInterval { lo: Rat::zero(), hi: self.hi.clone().max(-self.lo.clone()) }
        } else if self.hi.is_negative() || self.hi.is_zero() {
            -self
        } else {
            self.clone()
        }
    }

    /// `1/x`, defined when the interval excludes zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains(&Rat::zero()) {
            return None;
        }
        Some(RatInterval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, other: &RatInterval) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    pub fn powi(&self, k: u32) -> Self {
        if k == 0 {
            return Self::point(Rat::one());
        }
        if k % 2 == 0 {
            let a = self.abs();
            let lo = num_traits::pow(a.lo, k as usize);
            let hi = num_traits::pow(a.hi, k as usize);
            return RatInterval { lo, hi };
        }
        RatInterval {
            lo: num_traits::pow(self.lo.clone(), k as usize),
            hi: num_traits::pow(self.hi.clone(), k as usize),
        }
    }

    /// Enclosure of `p` over the interval by Horner evaluation.
    pub fn eval_poly(&self, p: &Poly<Rat>) -> Self {
        p.coeffs().iter().rev().fold(Self::point(Rat::zero()), |acc, c| {
            &(&acc * self) + &Self::point(c.clone())
        })
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let c = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }
}

impl Add for RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: RatInterval) -> RatInterval {
        &self + &rhs
    }
}

impl Sub for RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: RatInterval) -> RatInterval {
        &self - &rhs
    }
}

impl Mul for RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: RatInterval) -> RatInterval {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn iv(a: i64, b: i64) -> RatInterval {
        RatInterval::new(rat(a, 1), rat(b, 1))
    }

    #[test]
    fn products_take_extreme_corners() {
        assert_eq!(&iv(-2, 3) * &iv(-5, 1), iv(-15, 10));
        assert_eq!(iv(-3, 2).powi(2), iv(0, 9));
        assert_eq!(iv(-3, -2).powi(2), iv(4, 9));
        assert_eq!(iv(-3, 2).powi(3), iv(-27, 8));
    }

    #[test]
    fn reciprocal_requires_zero_free() {
        assert!(iv(-1, 1).recip().is_none());
        assert_eq!(iv(2, 4).recip().unwrap(), RatInterval::new(rat(1, 4), rat(1, 2)));
    }

    #[test]
    #[should_panic]
    fn rejects_reversed_endpoints() {
        let _ = iv(2, 1);
    }

    proptest! {
        #[test]
        fn operations_enclose_pointwise_results(a in -20i64..20, w in 0i64..10, b in -20i64..20, v in 0i64..10,
                                                s in 0i64..=8, t in 0i64..=8) {
            let x = iv(a, a + w);
            let y = iv(b, b + v);
            let px = rat(a, 1) + rat(w * s, 8);
            let py = rat(b, 1) + rat(v * t, 8);
            prop_assert!((&x + &y).contains(&(&px + &py)));
            prop_assert!((&x - &y).contains(&(&px - &py)));
            prop_assert!((&x * &y).contains(&(&px * &py)));
            let p = Poly::new(vec![rat(3, 1), rat(-2, 1), rat(1, 2), rat(1, 1)]);
            prop_assert!(x.eval_poly(&p).contains(&p.eval(&px)));
        }
    }
}
