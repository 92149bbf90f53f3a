//! Laguerre and Gegenbauer polynomial families with exact coefficients.
//!
//! Both families use the parameter `n/2 - 1` for an even dimension `n`.
//! Quantities involving `vol(S^{n-1})` are stored as a rational times an
//! explicit power of π.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, int};
use crate::{Rat, UniPoly};

/// Dimension together with the shared Laguerre/Gegenbauer parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoParam {
    pub n: u32,
    pub param: Rat,
}

impl OrthoParam {
    pub fn new(n: u32) -> Self {
        assert!(n >= 2 && n % 2 == 0, "dimension must be even and at least 2");
        OrthoParam { n, param: int(n as i64 / 2 - 1) }
    }
}

/// A rational multiple of `π^pi_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple<T> {
    pub coeff: T,
    pub pi_exp: i32,
}

/// `L_i^α` from the three-term recurrence.
pub fn laguerre(i: usize, alpha: &Rat) -> UniPoly {
    laguerre_family(i, alpha).pop().expect("family is nonempty")
}

/// `L_0^α, …, L_i^α`.
pub fn laguerre_family(i: usize, alpha: &Rat) -> Vec<UniPoly> {
    let mut out = vec![UniPoly::one()];
    if i >= 1 {
        out.push(UniPoly::new(vec![Rat::one() + alpha, -Rat::one()]));
    }
    for k in 2..=i {
        let kr = int(k as i64);
        let lin = UniPoly::new(vec![int(2 * k as i64 - 1) + alpha, -Rat::one()]);
        let next = &(&lin * &out[k - 1]) - &out[k - 2].scale(&(&kr + alpha - Rat::one()));
        out.push(next.scale(&kr.recip()));
    }
    out
}

/// `C_i^λ` from the three-term recurrence.
pub fn gegenbauer(i: usize, lambda: &Rat) -> UniPoly {
    gegenbauer_family(i, lambda).pop().expect("family is nonempty")
}

/// `C_0^λ, …, C_i^λ`.
pub fn gegenbauer_family(i: usize, lambda: &Rat) -> Vec<UniPoly> {
    let two = int(2);
    let mut out = vec![UniPoly::one()];
    if i >= 1 {
        out.push(UniPoly::new(vec![Rat::zero(), &two * lambda]));
    }
    for k in 2..=i {
        let kr = int(k as i64);
        let a = &two * (&kr + lambda - Rat::one());
        let b = &kr + &two * lambda - &two;
        let next = &(&UniPoly::x().scale(&a) * &out[k - 1]) - &out[k - 2].scale(&b);
        out.push(next.scale(&kr.recip()));
    }
    out
}

/// Dimension of the degree-`i` spherical harmonics on `S^{n-1}`.
pub fn harmonic_dimension(i: u64, n: u64) -> BigInt {
    binomial(n - 2 + i, n - 2) + if i >= 1 { binomial(n - 3 + i, n - 2) } else { BigInt::zero() }
}

/// `vol(S^{n-1}) = 2 π^{n/2} / (n/2 - 1)!` for even `n`.
pub fn sphere_volume(n: u32) -> PiMultiple<Rat> {
    assert!(n % 2 == 0, "sphere volume is only rational in π for even n");
    PiMultiple { coeff: Rat::new(2.into(), factorial(n / 2 - 1)), pi_exp: (n / 2) as i32 }
}

/// `C_i^λ(x) / C_i^λ(1) · dim_i / vol(S^{n-1})`, the normalization under which
/// the sum of `C_i(⟨x, y⟩)` over a code is the squared norm of a harmonic
/// evaluation functional. The polynomial multiplies `π^{-n/2}`.
pub fn normalized_gegenbauer(i: usize, n: u32) -> PiMultiple<UniPoly> {
    let p = OrthoParam::new(n);
    let c = gegenbauer(i, &p.param);
    let at_one = c.eval(&Rat::one());
    let vol = sphere_volume(n);
    let scale = Rat::from_integer(harmonic_dimension(i as u64, n as u64)) / (at_one * vol.coeff);
    PiMultiple { coeff: c.scale(&scale), pi_exp: -vol.pi_exp }
}

/// Coefficients `f_0..f_d` with `p = Σ f_i C_i^λ`, by back substitution
/// against the triangular change of basis.
pub fn gegenbauer_expand(p: &UniPoly, lambda: &Rat) -> Vec<Rat> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    let basis = gegenbauer_family(d, lambda);
    let mut rem = p.clone();
    let mut out = vec![Rat::zero(); d + 1];
    for k in (0..=d).rev() {
        let f = rem.coeff(k) / basis[k].lead();
        if !f.is_zero() {
            rem = &rem - &basis[k].scale(&f);
        }
        out[k] = f;
    }
    debug_assert!(rem.is_zero());
    out
}

/// Inverse of [`gegenbauer_expand`].
pub fn gegenbauer_sum(coeffs: &[Rat], lambda: &Rat) -> UniPoly {
    if coeffs.is_empty() {
        return UniPoly::zero();
    }
    let basis = gegenbauer_family(coeffs.len() - 1, lambda);
    coeffs.iter().zip(&basis).fold(UniPoly::zero(), |acc, (c, b)| &acc + &b.scale(c))
}

/// `Γ(m + 1/2) / √π = (2m)! / (4^m m!)`.
fn half_gamma(m: u32) -> Rat {
    Rat::new(factorial(2 * m), BigInt::from(4).pow(m) * factorial(m))
}

/// `∫_{-1}^{1} p(t) (1 - t²)^{λ - 1/2} dt` for a nonnegative integer `λ`,
/// returned as the coefficient of π.
pub fn weighted_integral(p: &UniPoly, lambda: u32) -> Rat {
    // ∫ t^{2k} (1-t²)^{λ-1/2} = Γ(k+1/2) Γ(λ+1/2) / Γ(k+λ+1)
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(j, c)| j % 2 == 0 && !c.is_zero())
        .map(|(j, c)| {
            let k = (j / 2) as u32;
            c * half_gamma(k) * half_gamma(lambda) / Rat::from_integer(factorial(k + lambda))
        })
        .fold(Rat::zero(), |a, b| a + b)
}

/// `∫_{S^{n-1}} g(⟨w, z⟩) dw` for a polynomial `g` and unit `z`, as a rational
/// multiple of `π^{n/2}`.
pub fn sphere_integral(g: &UniPoly, n: u32) -> PiMultiple<Rat> {
    // vol(S^{n-2}) ∫ g(t) (1-t²)^{(n-3)/2} dt, with vol(S^{n-2}) = 2π^{(n-1)/2} / Γ((n-1)/2)
    let lambda = n / 2 - 1;
    let vol_lower = Rat::new(2.into(), 1.into()) / half_gamma(lambda);
    PiMultiple { coeff: vol_lower * weighted_integral(g, lambda), pi_exp: (n / 2) as i32 }
}

/// Reproducing-kernel identity `∫ C_i(⟨w,z⟩)² dw = C_i(1)`, which pins down the
/// normalization of [`normalized_gegenbauer`] independently of the dimension
/// formula used to build it.
pub fn reproducing_kernel_holds(i: usize, n: u32) -> bool {
    let c = normalized_gegenbauer(i, n);
    let lhs = sphere_integral(&(&c.coeff * &c.coeff), n);
    let rhs = c.coeff.eval(&Rat::one());
    lhs.pi_exp + 2 * c.pi_exp == c.pi_exp && lhs.coeff == rhs
}

/// `L_i^α(0) = binom(i + α, i)` for integer `α`.
pub fn laguerre_at_zero(i: u64, alpha: u64) -> BigInt {
    binomial(i + alpha, i)
}

/// Coefficient of π in `∫_{-1}^1 C_i C_j (1-x²)^{λ-1/2}`.
pub fn gegenbauer_inner(i: usize, j: usize, lambda: u32) -> Rat {
    let l = int(lambda as i64);
    weighted_integral(&(&gegenbauer(i, &l) * &gegenbauer(j, &l)), lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn ip(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn laguerre_low_degrees() {
        let a = int(11);
        assert_eq!(laguerre(0, &a), UniPoly::one());
        assert_eq!(laguerre(1, &a), ip(&[12, -1]));
        // 2 L_2 = (14 - z)(12 - z) - 12, equivalently z²/2 - 13z + 78
        let expect = (&ip(&[14, -1]) * &ip(&[12, -1]) - ip(&[12])).scale(&rat(1, 2));
        assert_eq!(laguerre(2, &a), expect);
        assert_eq!(expect, UniPoly::new(vec![int(78), int(-13), rat(1, 2)]));
    }

    #[test]
    fn gegenbauer_low_degrees() {
        assert_eq!(gegenbauer(0, &int(11)), UniPoly::one());
        assert_eq!(gegenbauer(1, &int(11)), ip(&[0, 22]));
        // 2 C_2 = 8z · 6z - 6, matching the closed form 2λ(λ+1)z² - λ
        assert_eq!(gegenbauer(2, &int(3)), ip(&[-3, 0, 24]));
    }

    #[test]
    fn laguerre_recurrence_and_value_at_zero() {
        for alpha in [3i64, 11] {
            let a = int(alpha);
            let fam = laguerre_family(40, &a);
            for i in 2..=40usize {
                let lhs = fam[i].scale(&int(i as i64));
                let rhs = &(&ip(&[2 * i as i64 - 1 + alpha, -1]) * &fam[i - 1]) - &fam[i - 2].scale(&int(i as i64 + alpha - 1));
                assert_eq!(lhs, rhs);
                assert_eq!(fam[i].eval(&Rat::zero()), Rat::from_integer(laguerre_at_zero(i as u64, alpha as u64)));
            }
        }
    }

    #[test]
    fn expansion_of_basis_elements_is_unit() {
        for lambda in [3i64, 11] {
            let l = int(lambda);
            let fam = gegenbauer_family(40, &l);
            for (i, c) in fam.iter().enumerate() {
                let e = gegenbauer_expand(c, &l);
                assert_eq!(e.len(), i + 1);
                assert!(e[..i].iter().all(|v| v.is_zero()));
                assert_eq!(e[i], Rat::one());
            }
        }
    }

    #[test]
    fn orthogonality() {
        for lambda in [3u32, 11] {
            for i in 0..=6 {
                for j in 0..=6 {
                    let v = gegenbauer_inner(i, j, lambda);
                    assert_eq!(v.is_zero(), i != j, "λ={lambda} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn normalized_constant_term() {
        let c0 = normalized_gegenbauer(0, 24);
        assert_eq!(c0.pi_exp, -12);
        assert_eq!(c0.coeff, UniPoly::constant(Rat::new(factorial(12), 24.into())));
        assert_eq!(c0.coeff, UniPoly::constant(int(19_958_400)));
    }

    #[test]
    fn normalized_value_at_one_is_harmonic_dimension() {
        for i in 0..=10usize {
            let c = normalized_gegenbauer(i, 24);
            let dim = binomial(22 + i as u64, 22) + binomial(21 + i as u64, 22);
            let vol = sphere_volume(24);
            assert_eq!(c.coeff.eval(&Rat::one()), Rat::from_integer(dim) / vol.coeff);
        }
    }

    #[test]
    fn reproducing_kernel_fixes_normalization() {
        for n in [4u32, 8, 24] {
            for i in 0..=10 {
                assert!(reproducing_kernel_holds(i, n), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn antipodal_pair_cancels_odd_degree() {
        // {e, -e}: C_1(1)·2 + C_1(-1)·2 = 0
        for n in [8u32, 24] {
            let c = normalized_gegenbauer(1, n).coeff;
            let s = (c.eval(&int(1)) + c.eval(&int(-1))) * int(2);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn sphere_volume_matches_known_values() {
        // vol(S^7) = π^4 / 3, vol(S^23) = π^12 / 19958400
        assert_eq!(sphere_volume(8), PiMultiple { coeff: rat(1, 3), pi_exp: 4 });
        assert_eq!(sphere_volume(24), PiMultiple { coeff: rat(1, 19_958_400), pi_exp: 12 });
    }

    proptest! {
        #[test]
        fn expansion_round_trips(c in prop::collection::vec(-100i64..100, 0..14), lambda in 1i64..12) {
            let p = ip(&c);
            let l = int(lambda);
            prop_assert_eq!(gegenbauer_sum(&gegenbauer_expand(&p, &l), &l), p);
        }
    }
}
