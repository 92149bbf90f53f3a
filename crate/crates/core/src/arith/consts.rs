//! Certified rational enclosures of π, e^{-z} and square roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::RatInterval;
use super::{ceil, int};
use crate::error::Error;
use crate::Rat;

/// Truncation orders for the alternating exponential series. The partial sum
/// up to an even order bounds `e^{-z}` from above, up to an odd order from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpOrders {
    pub even: u32,
    pub odd: u32,
}

impl Default for ExpOrders {
    fn default() -> Self {
        ExpOrders { even: 350, odd: 351 }
    }
}

/// Largest argument accepted by [`exp_neg_enclosure`].
pub const EXP_DOMAIN_MAX: i64 = 60;

/// `floor(2^shift · atan(1/x))` up to an additive error of `err` units, by the
/// alternating arctangent series in fixed point.
fn atan_inv_fixed(x: u32, shift: usize) -> (BigInt, u64) {
    let one = BigInt::one() << shift;
    let x2 = BigInt::from(x) * x;
    let mut power = one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut err = 1u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
        // one unit each from the two truncating divisions
        err += 2;
    }
    (sum, err)
}

/// Rational enclosure of π of width below `2^{-bits}`.
///
/// The result is the pair of consecutive dyadic rationals with denominator
/// `2^{bits+1}` around π, which makes enclosures for increasing `bits` nested.
pub fn pi_enclosure(bits: u32) -> RatInterval {
    assert!(bits >= 8, "pi_enclosure needs at least 8 bits");
    let grid = bits as usize + 1;
    let mut guard = 32 + 2 * (usize::BITS - bits.leading_zeros()) as usize;
    loop {
        let shift = grid + guard;
        // Machin: π = 16 atan(1/5) − 4 atan(1/239)
        let (a, ea) = atan_inv_fixed(5, shift);
        let (b, eb) = atan_inv_fixed(239, shift);
        let approx = a * 16 - b * 4;
        let err = BigInt::from(16 * ea + 4 * eb);
        let lo: BigInt = (&approx - &err) >> guard;
        let hi: BigInt = (&approx + &err) >> guard;
        if lo == hi {
            let den = BigInt::one() << grid;
            return RatInterval::new(Rat::new(lo.clone(), den.clone()), Rat::new(lo + 1, den));
        }
        guard *= 2;
    }
}

/// Partial sum `Σ_{i=0}^{order} (-z)^i / i!`, evaluated in integers and
/// reduced once at the end.
fn exp_partial_sum(z: &Rat, order: u32) -> Rat {
    let (p, q) = (z.numer(), z.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in (1..=order).rev() {
        // 1 + (-z/k) · num/den
        let qk = q * BigInt::from(k);
        num = &qk * &den - p * &num;
        den *= qk;
    }
    Rat::new(num, den)
}

/// Enclosure of `e^{-z}` for `0 ≤ z ≤ 60` with the default orders 350/351.
pub fn exp_neg_enclosure(z: &Rat) -> Result<RatInterval, Error> {
    exp_neg_enclosure_with(z, ExpOrders::default())
}

pub fn exp_neg_enclosure_with(z: &Rat, orders: ExpOrders) -> Result<RatInterval, Error> {
    if z.is_negative() || *z > int(EXP_DOMAIN_MAX) {
        return Err(Error::Domain(format!("exp_neg_enclosure needs 0 <= z <= {EXP_DOMAIN_MAX}, got {z}")));
    }
    if orders.even % 2 != 0 || orders.odd % 2 != 1 {
        return Err(Error::Domain("exp truncation orders must be one even and one odd".into()));
    }
    // the alternating tail bound needs the omitted terms to be decreasing
    if BigInt::from(orders.even.min(orders.odd)) < ceil(z) {
        return Err(Error::Domain(format!("truncation orders {orders:?} too low for z = {z}")));
    }
    if z.is_zero() {
        return Ok(RatInterval::point(Rat::one()));
    }
    let hi = exp_partial_sum(z, orders.even);
    let lo = exp_partial_sum(z, orders.odd).max(Rat::zero());
    Ok(RatInterval::new(lo, hi))
}

/// Relative precision of [`exp_neg_any`] in bits.
pub const EXP_BITS: u32 = 320;

/// Enclosure of `e^{-z}` for any `z ≥ 0` with relative width about
/// `2^-EXP_BITS`. The argument is halved until it is at most 1/2, the short
/// series is summed there, and the result is squared back with outward
/// dyadic rounding at every step so the rationals stay small.
pub fn exp_neg_any(z: &Rat) -> RatInterval {
    assert!(!z.is_negative(), "exp_neg_any needs z >= 0");
    if z.is_zero() {
        return RatInterval::point(Rat::one());
    }
    let mut m = 0u32;
    while z > &(Rat::from_integer(BigInt::one() << m as usize) / int(2)) {
        m += 1;
    }
    let prec = EXP_BITS + m + 16;
    let y = z / Rat::from_integer(BigInt::one() << m as usize);
    let grid = BigInt::one() << prec as usize;
    let y_lo = Rat::new((y.clone() * Rat::from_integer(grid.clone())).floor().to_integer(), grid.clone());
    let y_hi = Rat::new((y * Rat::from_integer(grid.clone())).ceil().to_integer(), grid);
    // y ≤ 1/2, so the k-th term is below 2^-k / k! and these orders leave
    // an error far under 2^-prec
    let order = 2 * (prec / 8 + 8);
    let mut lo = round_rel(&exp_partial_sum(&y_hi, order + 1), prec, false);
    let mut hi = round_rel(&exp_partial_sum(&y_lo, order), prec, true);
    for _ in 0..m {
        lo = round_rel(&(&lo * &lo), prec, false);
        hi = round_rel(&(&hi * &hi), prec, true);
    }
    RatInterval::new(lo, hi)
}

/// Round a positive rational to `bits` significant bits, up or down.
fn round_rel(x: &Rat, bits: u32, up: bool) -> Rat {
    let mag = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = bits as i64 - mag;
    let scale = if shift >= 0 {
        Rat::from_integer(BigInt::one() << shift as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-shift) as usize)
    };
    let t = x * &scale;
    let r = if up { t.ceil() } else { t.floor() };
    r / scale
}

/// Enclosure of `e^{-z}` for every `z` in a nonnegative interval.
pub fn exp_neg_interval(z: &RatInterval) -> RatInterval {
    let lo = exp_neg_any(z.hi()).lo().clone();
    let hi = exp_neg_any(z.lo()).hi().clone();
    RatInterval::new(lo, hi)
}

/// `[⌊√x·2^bits⌋, ⌈√x·2^bits⌉] / 2^bits` for `x ≥ 0`.
pub fn sqrt_enclosure(x: &Rat, bits: u32) -> RatInterval {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scaled = (x.numer() << (2 * bits as usize)) / x.denom();
    let s = scaled.sqrt();
    let exact = &s * &s == scaled && (x.numer() << (2 * bits as usize)) % x.denom() == BigInt::zero();
    let den = BigInt::one() << bits as usize;
    let hi = if exact { s.clone() } else { &s + 1 };
    RatInterval::new(Rat::new(s, den.clone()), Rat::new(hi, den))
}

/// Enclosure of `√x` for every `x` in a nonnegative interval.
pub fn sqrt_interval(x: &RatInterval, bits: u32) -> RatInterval {
    RatInterval::new(
        sqrt_enclosure(x.lo(), bits).lo().clone(),
        sqrt_enclosure(x.hi(), bits).hi().clone(),
    )
}

/// Enclosure of `π^k`.
pub fn pi_power(k: u32, bits: u32) -> RatInterval {
    pi_enclosure(bits + 2 * k + 8).powi(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{dec, factorial, rat};

    /// π to 60 digits, from the published decimal expansion.
    const PI_60: &str = "3.14159265358979323846264338327950288419716939937510582097494";

    #[test]
    fn pi_width_and_containment() {
        let reference = dec(PI_60);
        let slack = Rat::new(1.into(), super::super::pow10(58));
        for bits in [8, 16, 64, 128, 180] {
            let e = pi_enclosure(bits);
            assert!(e.width() < Rat::new(1.into(), BigInt::one() << bits as usize));
            assert!(e.lo() < &(&reference + &slack));
            assert!(e.hi() > &(&reference - &slack));
        }
    }

    #[test]
    fn pi_64_bits_rounds_to_double() {
        let e = pi_enclosure(64);
        assert_eq!(format!("{:.15}", super::super::to_f64(e.lo())), "3.141592653589793");
        assert_eq!(format!("{:.15}", super::super::to_f64(e.hi())), "3.141592653589793");
    }

    #[test]
    fn pi_enclosures_are_nested() {
        let mut prev = pi_enclosure(8);
        for bits in 9..120 {
            let e = pi_enclosure(bits);
            assert!(prev.contains_interval(&e), "bits {bits}");
            prev = e;
        }
        assert_eq!(pi_enclosure(64), pi_enclosure(64));
    }

    #[test]
    fn exp_at_zero_and_one() {
        assert_eq!(exp_neg_enclosure(&Rat::zero()).unwrap(), RatInterval::point(Rat::one()));
        // 1/e to 40 digits, independent reference
        let inv_e = dec("0.3678794411714423215955237701614608674458");
        let e = exp_neg_enclosure(&int(1)).unwrap();
        let slack = dec("1e-39");
        assert!(e.lo() <= &(&inv_e + &slack) && e.hi() >= &(&inv_e - &slack));
        assert!(e.width() < dec("1e-300"));
    }

    #[test]
    fn exp_width_at_sixty_matches_first_omitted_term() {
        let e = exp_neg_enclosure(&int(60)).unwrap();
        assert!(!e.lo().is_negative());
        // width is exactly the first omitted term 60^351/351!
        let term = Rat::new(BigInt::from(60).pow(351), factorial(351));
        assert_eq!(e.width(), term);
        assert!(term < dec("1e-30"));
    }

    #[test]
    fn exp_domain_errors() {
        assert!(exp_neg_enclosure(&int(-1)).is_err());
        assert!(exp_neg_enclosure(&rat(601, 10)).is_err());
        assert!(exp_neg_enclosure_with(&int(30), ExpOrders { even: 20, odd: 21 }).is_err());
        assert!(exp_neg_enclosure_with(&int(3), ExpOrders { even: 21, odd: 20 }).is_err());
    }

    #[test]
    fn exp_orders_nest() {
        let z = rat(157, 10);
        let low = exp_neg_enclosure_with(&z, ExpOrders { even: 40, odd: 41 }).unwrap();
        let high = exp_neg_enclosure_with(&z, ExpOrders { even: 60, odd: 61 }).unwrap();
        assert!(low.contains_interval(&high));
    }

    #[test]
    fn exp_beyond_series_domain() {
        let e = exp_neg_any(&int(120));
        let sq = exp_neg_enclosure(&int(60)).unwrap().powi(2);
        assert!(e.lo() <= sq.hi() && sq.lo() <= e.hi());
        assert!(e.width() < e.lo() / Rat::from_integer(crate::arith::pow10(90)));
        let band = exp_neg_interval(&RatInterval::new(int(1), int(2)));
        assert!(band.contains(&dec("0.2")) && band.contains(&dec("0.3")));
    }

    #[test]
    fn square_roots() {
        let r = sqrt_enclosure(&int(2), 40);
        assert!(r.lo() * r.lo() <= int(2) && r.hi() * r.hi() >= int(2));
        assert!(r.width() <= Rat::new(1.into(), BigInt::one() << 40usize));
        assert_eq!(sqrt_enclosure(&rat(9, 4), 10), RatInterval::point(rat(3, 2)));
        assert!(sqrt_interval(&RatInterval::new(int(4), int(9)), 8).contains_interval(&RatInterval::new(int(2), int(3))));
    }

    proptest::proptest! {
        #[test]
        fn exp_enclosures_are_ordered(n in 0i64..=6000) {
            let z = rat(n, 100);
            let e = exp_neg_enclosure_with(&z, ExpOrders { even: 200, odd: 201 }).unwrap();
            proptest::prop_assert!(e.lo() <= e.hi());
            let f = exp_neg_enclosure(&z).unwrap();
            proptest::prop_assert!(e.contains_interval(&f));
            let g = exp_neg_any(&z);
            proptest::prop_assert!(g.lo() <= f.hi() && f.lo() <= g.hi());
        }
    }
}
