//! Exact rational helpers, certified enclosures and real-root analysis.

pub mod consts;
pub mod interval;
pub mod roots;

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Rat;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn floor(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rat) -> BigInt {
    -(-x.numer()).div_floor(x.denom())
}

pub fn rat_pow(x: &Rat, k: u32) -> Rat {
    Pow::pow(x, k)
}

/// Parse `p/q`, an integer, or a decimal literal such as `-6.733e-27`, as the
/// exact rational it denotes.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = BigInt::from_str(&format!("{ip}{fp}0")).map_err(|_| bad())? / 10;
    let e = exp - fp.len() as i64;
    let mut v = if e >= 0 {
        Rat::from_integer(digits * pow10(e as u32))
    } else {
        Rat::new(digits, pow10((-e) as u32))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

/// Shorthand for literals known to be valid.
pub fn dec(s: &str) -> Rat {
    parse_rat(s).expect("valid rational literal")
}

/// Decimal scientific rendering with `sig` significant digits, rounded toward
/// zero. Used for reports; never for decisions.
pub fn sci(x: &Rat, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ten = int(10);
    let scaled = |e: i64| -> Rat {
        if e >= 0 {
            &a / Pow::pow(&ten, e as u32)
        } else {
            &a * Pow::pow(&ten, (-e) as u32)
        }
    };
    while scaled(e) >= int(10) {
        e += 1;
    }
    while scaled(e) < int(1) {
        e -= 1;
    }
    let m = scaled(e) * Rat::from_integer(pow10(sig.saturating_sub(1) as u32));
    let digits = floor(&m).to_string();
    let (head, tail) = digits.split_at(1);
    let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
    let sign = if neg { "-" } else { "" };
    if e == 0 {
        format!("{sign}{body}")
    } else {
        format!("{sign}{body}e{e}")
    }
}

/// Exact rendering: integer or `p/q`.
pub fn exact_str(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Approximate value for logging and heuristics.
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_literals() {
        assert_eq!(dec("6.733e-27"), Rat::new(6733.into(), pow10(30)));
        assert_eq!(dec("-1.5"), rat(-3, 2));
        assert_eq!(dec("22/7"), rat(22, 7));
        assert_eq!(dec("2e8"), int(200_000_000));
        assert_eq!(dec(".25"), rat(1, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn floors_and_ceilings() {
        assert_eq!(floor(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil(&int(5)), BigInt::from(5));
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(24, 3), BigInt::from(2024));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(factorial(12), BigInt::from(479_001_600u64));
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(sci(&dec("6.43801e-12"), 6), "6.43801e-12");
        assert_eq!(sci(&int(196560), 6), "1.96560e5");
        assert_eq!(sci(&rat(-1, 3), 3), "-3.33e-1");
        assert_eq!(sci(&int(7), 2), "7.0");
    }

    proptest! {
        #[test]
        fn rational_arithmetic_is_exact(a in any::<i64>(), b in 1i64..i64::MAX,
                                        c in any::<i64>(), d in 1i64..i64::MAX) {
            let x = Rat::new(a.into(), b.into());
            let y = Rat::new(c.into(), d.into());
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert!(x.denom() > &BigInt::zero());
            prop_assert_eq!(x.numer().gcd(x.denom()), BigInt::one());
        }

        #[test]
        fn decimal_round_trip(m in -10_000_000i64..10_000_000, e in -40i64..40) {
            let s = format!("{m}e{e}");
            let v = dec(&s);
            let expect = if e >= 0 { Rat::from_integer(BigInt::from(m) * pow10(e as u32)) }
                         else { Rat::new(m.into(), pow10((-e) as u32)) };
            prop_assert_eq!(v, expect);
        }
    }
}
