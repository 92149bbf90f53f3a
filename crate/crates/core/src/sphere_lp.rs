//! Linear programming bounds for spherical codes, the kissing polynomials of
//! dimensions 8 and 24, the near-design defect bound and exact sphere moments.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::consts::{pi_power, sqrt_interval};
use crate::arith::interval::RatInterval;
use crate::arith::roots::{certify_sign, Region, RootMethod, Want};
use crate::arith::{binomial, factorial, int, rat};
use crate::error::{Error, Result};
use crate::ortho::{gegenbauer, gegenbauer_expand, harmonic_dimension, sphere_volume, OrthoParam};
use crate::{Rat, UniPoly};

const PI_BITS: u32 = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct CodeBoundCertificate {
    pub poly: UniPoly,
    pub n: u32,
    pub cos_phi: Rat,
    pub bound: RatInterval,
    /// Coefficients in the standard Gegenbauer basis `C_i^{n/2-1}`.
    pub expansion: Vec<Rat>,
}

/// Certified bound `f(1)/f_0` on the size of a code in `S^{n-1}` whose inner
/// products avoid `(cos_phi, 1)`.
pub fn lp_code_bound(f: &UniPoly, n: u32, cos_phi: &Rat) -> Result<CodeBoundCertificate> {
    let lambda = OrthoParam::new(n).param;
    let expansion = gegenbauer_expand(f, &lambda);
    if expansion.is_empty() || !expansion[0].is_positive() {
        return Err(Error::ExpansionNegative(0));
    }
    if let Some(i) = expansion.iter().position(|c| c.is_negative()) {
        return Err(Error::ExpansionNegative(i));
    }
    let region = Region::Closed(-Rat::one(), cos_phi.clone());
    certify_sign(f, &region, Want::NonPos, &[], RootMethod::Sturm)
        .map_err(|w| Error::SignViolation { side: "code".into(), witness: w.interval() })?;
    let bound = RatInterval::point(f.eval(&Rat::one()) / &expansion[0]);
    Ok(CodeBoundCertificate { poly: f.clone(), n, cos_phi: cos_phi.clone(), bound, expansion })
}

/// `1 - 1/(2(1+ε)²)`, the cosine of the smallest angle between nearly
/// minimal vectors whose lengths differ by a factor at most `1+ε`.
pub fn perturbed_cos(eps: &Rat) -> Rat {
    let s = Rat::one() + eps;
    Rat::one() - (int(2) * &s * &s).recip()
}

/// Kissing polynomial with its last root moved to [`perturbed_cos`]`(eps)`,
/// scaled so that its constant Gegenbauer coefficient is exactly 1.
pub fn kissing_poly(n: u32, eps: &Rat) -> Result<UniPoly> {
    if eps.is_negative() || eps >= &Rat::one() {
        return Err(Error::Domain("eps must lie in [0, 1)".into()));
    }
    let lin = |r: Rat| UniPoly::linear_root(r);
    let sq = |r: Rat| lin(r).pow(2);
    let core = match n {
        24 => lin(int(-1)) * sq(rat(-1, 2)) * sq(rat(-1, 4)) * sq(Rat::zero()) * sq(rat(1, 4)),
        8 => lin(int(-1)) * sq(rat(-1, 2)) * sq(Rat::zero()),
        _ => return Err(Error::Domain(format!("no kissing polynomial for n = {n}"))),
    };
    let f = core * lin(perturbed_cos(eps));
    let f0 = gegenbauer_expand(&f, &OrthoParam::new(n).param)[0].clone();
    Ok(f.scale(&f0.recip()))
}

/// `C_i = κ_i · C_i^λ · π^{-n/2}`; returns the rational `κ_i`.
fn normalization_factor(i: usize, n: u32) -> Rat {
    let lambda = OrthoParam::new(n).param;
    let at_one = gegenbauer(i, &lambda).eval(&Rat::one());
    Rat::from_integer(harmonic_dimension(i as u64, n as u64)) / (at_one * sphere_volume(n).coeff)
}

/// Enclosure of `√(slack · max_i 1/c_i)` where `c_i` are the coefficients of
/// `f_eps` against the normalized Gegenbauer polynomials, `1 ≤ i ≤ deg`.
/// With `slack ⊇ N·f(1) − N²` this bounds the combined size of the harmonic
/// sums of a code of size `N`.
pub fn design_defect_constant(f_eps: &UniPoly, n: u32, code_size: u64, slack: &RatInterval) -> Result<RatInterval> {
    let exact = lp_slack(f_eps, code_size);
    if !slack.contains(&exact) {
        return Err(Error::PreconditionViolation(format!("slack {slack} misses N·f(1) − N² = {exact}")));
    }
    if slack.hi().is_zero() && slack.lo().is_zero() {
        return Ok(RatInterval::point(Rat::zero()));
    }
    let lambda = OrthoParam::new(n).param;
    let a = gegenbauer_expand(f_eps, &lambda);
    let mut worst = Rat::zero();
    for (i, ai) in a.iter().enumerate().skip(1) {
        if !ai.is_positive() {
            return Err(Error::NonpositiveCoefficient(i));
        }
        // 1/c_i = κ_i / a_i · π^{-n/2}
        let r = normalization_factor(i, n) / ai;
        if r > worst {
            worst = r;
        }
    }
    let pi = pi_power(n / 2, PI_BITS);
    let inv_pi = RatInterval::new(pi.hi().recip(), pi.lo().recip());
    let max_inv = inv_pi.scale(&worst);
    let lo = if slack.lo().is_negative() { Rat::zero() } else { slack.lo().clone() };
    let prod = RatInterval::new(lo * max_inv.lo(), slack.hi() * max_inv.hi());
    Ok(sqrt_interval(&prod, PI_BITS))
}

/// `N·f(1) − N²` exactly.
pub fn lp_slack(f: &UniPoly, code_size: u64) -> Rat {
    let n = Rat::from_integer(BigInt::from(code_size));
    &n * f.eval(&Rat::one()) - &n * &n
}

/// `(2m-1)!!` with the convention `(-1)!! = 1`.
fn double_factorial_odd(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * (2 * k - 1))
}

/// Average of `⟨z,u⟩^i ⟨z,v⟩^j` over the unit sphere `S^{n-1}`, as a
/// polynomial in `γ = ⟨u,v⟩`.
///
/// Uses the Gaussian reduction: the Gaussian moment `E[(X·u)^i (X·v)^j]`
/// (Isserlis over the pairings) divided by the radial moment `E|X|^{i+j}`.
pub fn sphere_moment(i: u32, j: u32, n: u32) -> UniPoly {
    if (i + j) % 2 == 1 {
        return UniPoly::zero();
    }
    let half = rat(1, 2);
    let mut coeffs = vec![Rat::zero(); (i.min(j) + 1) as usize];
    for k in 0..=i.min(j) {
        if (i - k) % 2 == 1 || (j - k) % 2 == 1 {
            continue;
        }
        // pairings with k mixed pairs, the rest paired within each factor
        let count = binomial(i as u64, k as u64)
            * binomial(j as u64, k as u64)
            * factorial(k)
            * double_factorial_odd((i - k) / 2)
            * double_factorial_odd((j - k) / 2);
        let pairs = (i + j) / 2;
        coeffs[k as usize] = Rat::from_integer(count) * crate::arith::rat_pow(&half, pairs);
    }
    // E|X|^{2p} = Γ(n/2 + p)/Γ(n/2) for density e^{-|x|²}/π^{n/2}
    let p = (i + j) / 2;
    let radial = (0..p).fold(Rat::one(), |acc, t| acc * rat(n as i64 + 2 * t as i64, 2));
    UniPoly::new(coeffs).scale(&radial.recip())
}

/// Largest total absolute coefficient of `N·G_{i,j}(γ₀ + s) − N·G_{i,j}(γ₀)`
/// as a polynomial in `s`, over `i, j ≤ max_deg` and the given centres γ₀.
/// For `|s| ≤ 1` this bounds how far the moment targets move when the
/// base inner product is off by `s`.
pub fn moment_coeff_bound(n: u32, code_size: u64, max_deg: u32, centers: &[Rat]) -> Rat {
    let big_n = Rat::from_integer(BigInt::from(code_size));
    let mut best = Rat::zero();
    for i in 0..=max_deg {
        for j in 0..=max_deg {
            let g = sphere_moment(i, j, n).scale(&big_n);
            for c in centers {
                let shifted = g.taylor_shift(c);
                let s = shifted.coeffs().iter().skip(1).fold(Rat::zero(), |acc, x| acc + x.abs());
                if s > best {
                    best = s;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dec;
    use crate::ortho::normalized_gegenbauer;

    fn appendix_poly(n: u32) -> UniPoly {
        let lin = |r: Rat| UniPoly::linear_root(r);
        let sq = |r: Rat| lin(r).pow(2);
        match n {
            24 => lin(int(-1)) * sq(rat(-1, 2)) * sq(rat(-1, 4)) * sq(Rat::zero()) * sq(rat(1, 4)) * lin(rat(1, 2)),
            _ => lin(int(-1)) * sq(rat(-1, 2)) * sq(Rat::zero()) * lin(rat(1, 2)),
        }
    }

    #[test]
    fn kissing_numbers_are_exact() {
        let c = lp_code_bound(&appendix_poly(24), 24, &rat(1, 2)).unwrap();
        assert_eq!(c.bound, RatInterval::point(int(196560)));
        let c = lp_code_bound(&appendix_poly(8), 8, &rat(1, 2)).unwrap();
        assert_eq!(c.bound, RatInterval::point(int(240)));
    }

    #[test]
    fn scaling_does_not_change_the_bound() {
        let f = appendix_poly(8).scale(&rat(7, 3));
        assert_eq!(lp_code_bound(&f, 8, &rat(1, 2)).unwrap().bound, RatInterval::point(int(240)));
    }

    #[test]
    fn wrong_sign_polynomial_is_rejected() {
        // positive somewhere on [-1, 1/2]
        let f = -&appendix_poly(8);
        assert!(lp_code_bound(&f, 8, &rat(1, 2)).is_err());
        // nonnegative expansion but positive inside the cap region
        let g = UniPoly::new(vec![int(1), int(1)]);
        assert!(matches!(lp_code_bound(&g, 8, &rat(1, 2)), Err(Error::SignViolation { .. })));
    }

    #[test]
    fn kissing_poly_is_normalized_and_matches_unperturbed() {
        for n in [8, 24] {
            let f = kissing_poly(n, &Rat::zero()).unwrap();
            let a = gegenbauer_expand(&f, &OrthoParam::new(n).param);
            assert_eq!(a[0], Rat::one());
            let g = appendix_poly(n);
            assert_eq!(f.scale(&g.lead()).scale(&f.lead().recip()), g.scale(&g.lead()).scale(&g.lead().recip()));
            let eps = dec("1e-3");
            assert_eq!(gegenbauer_expand(&kissing_poly(n, &eps).unwrap(), &OrthoParam::new(n).param)[0], Rat::one());
        }
        assert!(kissing_poly(16, &Rat::zero()).is_err());
    }

    #[test]
    fn perturbed_kissing_expansion_is_nonnegative() {
        let f = kissing_poly(24, &dec("6.733e-27")).unwrap();
        let a = gegenbauer_expand(&f, &OrthoParam::new(24).param);
        assert!(a.iter().all(|c| !c.is_negative()));
    }

    #[test]
    fn zero_slack_gives_zero_defect() {
        let f = kissing_poly(8, &Rat::zero()).unwrap();
        let d = design_defect_constant(&f, 8, 240, &RatInterval::point(Rat::zero())).unwrap();
        assert_eq!(d, RatInterval::point(Rat::zero()));
        let g = kissing_poly(8, &dec("1e-3")).unwrap();
        assert!(matches!(
            design_defect_constant(&g, 8, 240, &RatInterval::point(Rat::zero())),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn defect_constants_meet_published_bounds() {
        for (n, size, eps, slack_cap, cap) in [
            (24, 196560, "6.733e-27", "7.9775e-15", "2.50193e-5"),
            (8, 240, "1.45e-13", "1", "3.48e-4"),
        ] {
            let f = kissing_poly(n, &dec(eps)).unwrap();
            let slack = lp_slack(&f, size);
            assert!(!slack.is_negative() && slack < dec(slack_cap), "n={n} slack {}", crate::arith::sci(&slack, 6));
            let d = design_defect_constant(&f, n, size, &RatInterval::point(slack)).unwrap();
            assert!(d.hi() <= &dec(cap), "n={n} defect {}", crate::arith::sci(d.hi(), 8));
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(sphere_moment(0, 0, 24), UniPoly::one());
        assert_eq!(sphere_moment(2, 0, 24), UniPoly::constant(rat(1, 24)));
        assert_eq!(sphere_moment(1, 1, 24), UniPoly::new(vec![Rat::zero(), rat(1, 24)]));
        assert!(sphere_moment(3, 2, 24).is_zero());
        // average of x_1^4 on S^{n-1} is 3/(n(n+2))
        assert_eq!(sphere_moment(4, 0, 8), UniPoly::constant(rat(3, 80)));
    }

    #[test]
    fn moment_symmetry_and_diagonal() {
        for n in [8, 24] {
            for i in 0..=4 {
                for j in 0..=4 {
                    assert_eq!(sphere_moment(i, j, n), sphere_moment(j, i, n));
                    let at_one = sphere_moment(i, j, n).eval(&Rat::one());
                    assert_eq!(at_one, sphere_moment(i + j, 0, n).eval(&Rat::zero()));
                }
            }
        }
    }

    #[test]
    fn moment_matches_sphere_integral_for_powers() {
        // average of ⟨z,u⟩^k via the one-variable sphere integral
        for n in [8u32, 24] {
            for k in 0..=8u32 {
                let mono = UniPoly::new((0..=k).map(|t| if t == k { Rat::one() } else { Rat::zero() }).collect());
                let int = crate::ortho::sphere_integral(&mono, n);
                let avg = int.coeff / sphere_volume(n).coeff;
                assert_eq!(sphere_moment(k, 0, n).eval(&Rat::zero()), avg, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn moment_coefficient_bounds() {
        let leech: Vec<Rat> = [0, 1, -1, 2, -2].iter().map(|&k| rat(k, 4)).collect();
        assert!(moment_coeff_bound(24, 196560, 4, &leech) <= int(8190));
        let e8: Vec<Rat> = [0, 1, -1].iter().map(|&k| rat(k, 2)).collect();
        assert!(moment_coeff_bound(8, 240, 2, &e8) <= int(30));
        // the constant moment never moves
        assert_eq!(moment_coeff_bound(24, 196560, 0, &leech), Rat::zero());
    }

    #[test]
    fn small_antipodal_code_respects_bound() {
        // ±e_1..±e_5 in S^7: ten points, inner products 0 and -1
        let bound = lp_code_bound(&appendix_poly(8), 8, &rat(1, 2)).unwrap().bound;
        assert!(int(10) <= *bound.lo());
    }

    #[test]
    fn harmonic_sums_of_a_code_are_nonnegative() {
        // cross polytope ±e_i in R^8 together with the 16 points (±1,±1,±1,±1,0,0,0,0)/2
        let mut pts: Vec<Vec<Rat>> = Vec::new();
        for i in 0..8 {
            for s in [-1, 1] {
                let mut v = vec![Rat::zero(); 8];
                v[i] = int(s);
                pts.push(v);
            }
        }
        for mask in 0..16u32 {
            let v: Vec<Rat> = (0..8)
                .map(|k| if k < 4 { rat(if mask >> k & 1 == 1 { -1 } else { 1 }, 2) } else { Rat::zero() })
                .collect();
            pts.push(v);
        }
        for i in 0..=8 {
            let c = normalized_gegenbauer(i, 8).coeff;
            let mut total = Rat::zero();
            for x in &pts {
                for y in &pts {
                    let ip = x.iter().zip(y).fold(Rat::zero(), |a, (p, q)| a + p * q);
                    total += c.eval(&ip);
                }
            }
            assert!(!total.is_negative(), "degree {i}");
        }
    }
}
