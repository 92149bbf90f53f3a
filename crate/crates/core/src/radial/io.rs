//! Text formats for coefficient and root lists.
//!
//! Coefficient files: the dimension, then the base-10 exponent of the
//! global scale, then one integer coefficient per line in index order.
//! The first two lines may carry a leading keyword (`dim 24`, `scale 3000`).
//! Root files hold one exact rational per line (`p/q` or a decimal literal).
//! Blank lines are ignored and `#` starts a comment in both.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::RadialFn;
use crate::arith::{exact_str, parse_rat, pow10};
use crate::error::{Error, Result};
use crate::Rat;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn header_value(line: (usize, &str), key: &str) -> Result<u32> {
    let (no, l) = line;
    let mut parts = l.split_whitespace();
    let first = parts.next().unwrap_or("");
    let v = if first.eq_ignore_ascii_case(key) { parts.next().unwrap_or("") } else { first };
    if parts.next().is_some() {
        return Err(Error::Parse(format!("line {no}: trailing data after {key}")));
    }
    v.parse::<u32>().map_err(|_| Error::Parse(format!("line {no}: expected {key}, got {l:?}")))
}

pub fn parse_coeffs(text: &str) -> Result<RadialFn> {
    let mut lines = content_lines(text);
    let n = header_value(lines.next().ok_or_else(|| Error::Parse("empty coefficient file".into()))?, "dim")?;
    let e = header_value(lines.next().ok_or_else(|| Error::Parse("missing scale line".into()))?, "scale")?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::Parse(format!("dimension {n} is not a positive even integer")));
    }
    let mut coeffs = Vec::new();
    for (no, l) in lines {
        let v: BigInt = l.parse().map_err(|_| Error::Parse(format!("line {no}: expected an integer, got {l:?}")))?;
        coeffs.push(Rat::from_integer(v));
    }
    if coeffs.is_empty() {
        return Err(Error::Parse("no coefficients".into()));
    }
    Ok(RadialFn::new(n, coeffs, Rat::from_integer(pow10(e))))
}

/// Inverse of [`parse_coeffs`]; needs integer coefficients and a power of
/// ten scale.
pub fn write_coeffs(f: &RadialFn) -> Result<String> {
    let e = decimal_exponent(&f.scale).ok_or_else(|| Error::Format("scale is not a power of ten".into()))?;
    let mut out = format!("dim {}\nscale {e}\n", f.n);
    for (i, c) in f.coeffs.iter().enumerate() {
        if !c.is_integer() {
            return Err(Error::Format(format!("coefficient {i} is not an integer")));
        }
        out.push_str(&c.numer().to_string());
        out.push('\n');
    }
    Ok(out)
}

fn decimal_exponent(s: &Rat) -> Option<u32> {
    if !s.is_integer() {
        return None;
    }
    let mut v = s.numer().clone();
    let ten = BigInt::from(10);
    let mut e = 0;
    while !v.is_one() {
        if v.is_zero() || !(&v % &ten).is_zero() {
            return None;
        }
        v /= &ten;
        e += 1;
    }
    Some(e)
}

pub fn parse_roots(text: &str) -> Result<Vec<Rat>> {
    content_lines(text)
        .map(|(no, l)| parse_rat(l).map_err(|_| Error::Parse(format!("line {no}: not a rational: {l:?}"))))
        .collect()
}

pub fn write_roots(roots: &[Rat]) -> String {
    roots.iter().map(|r| exact_str(r) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{dec, int, rat};

    #[test]
    fn coefficient_round_trip() {
        let f = RadialFn::new(24, vec![int(7), int(-3), int(0), int(12)], Rat::from_integer(pow10(5)));
        let text = write_coeffs(&f).unwrap();
        assert_eq!(parse_coeffs(&text).unwrap(), f);
    }

    #[test]
    fn coefficient_file_tolerates_comments_and_bare_headers() {
        let f = parse_coeffs("# generated\n 8 \n\n2   # exponent\n1\n  -5\n").unwrap();
        assert_eq!(f.n, 8);
        assert_eq!(f.scale, int(100));
        assert_eq!(f.coeffs, vec![int(1), int(-5)]);
    }

    #[test]
    fn malformed_coefficient_files() {
        for bad in ["", "dim 24\n", "dim 7\nscale 0\n1\n", "dim 8\nscale 0\n1.5\n", "dim 8\nscale x\n1\n", "dim 8\nscale 0\n"] {
            assert!(matches!(parse_coeffs(bad), Err(Error::Parse(_))), "{bad:?}");
        }
    }

    #[test]
    fn writing_requires_integral_data() {
        let f = RadialFn::new(8, vec![rat(1, 2)], int(1));
        assert!(write_coeffs(&f).is_err());
        let g = RadialFn::new(8, vec![int(1)], int(3));
        assert!(write_coeffs(&g).is_err());
    }

    #[test]
    fn roots_accept_fractions_and_decimals() {
        let r = parse_roots("25.13274122\n# c\n-3/4\n1e-3\n").unwrap();
        assert_eq!(r, vec![dec("25.13274122"), rat(-3, 4), rat(1, 1000)]);
        assert_eq!(parse_roots(&write_roots(&r)).unwrap(), r);
        assert!(parse_roots("1/0\n").is_err());
        assert!(parse_roots("abc\n").is_err());
    }
}
