//! Truncated Poisson summation as a consistency check on radial functions
//! and lattice data: `Σ_{x∈Λ} f(x) = |Λ|⁻¹ Σ_{t∈Λ*} f̂(t)`.
//!
//! Both sides are summed exactly over the shells within the cutoff and the
//! remainders are bounded rigorously, so a correct setup always yields an
//! enclosure containing 0.

use num_traits::{One, Signed, Zero};

use super::RadialFn;
use crate::arith::consts::{exp_neg_any, pi_enclosure, sqrt_enclosure, sqrt_interval};
use crate::arith::{ceil, floor, int, rat_pow};
use crate::error::{Error, Result};
use crate::lattice::{gram_shells, EnumConfig, LatticeData};
use crate::{Rat, RatInterval, RatMatrix};

const BITS: u32 = 256;

#[derive(Clone, Debug)]
pub struct PoissonReport {
    /// `Σ_{|x| ≤ R} f(x)`, origin included.
    pub primal: RatInterval,
    /// `|Λ|⁻¹ Σ_{|t| ≤ R} f̂(t)` over the dual lattice.
    pub dual: RatInterval,
    /// Bounds on the omitted parts of each sum (before the covolume factor
    /// for the dual side it is already applied).
    pub primal_tail: Rat,
    pub dual_tail: Rat,
    /// Encloses the difference of the two complete sums.
    pub residual: RatInterval,
}

pub fn poisson_residual(f: &RadialFn, l: &LatticeData, radius_cutoff: &Rat) -> Result<RatInterval> {
    Ok(poisson_report(f, l, radius_cutoff)?.residual)
}

pub fn poisson_report(f: &RadialFn, l: &LatticeData, radius_cutoff: &Rat) -> Result<PoissonReport> {
    if radius_cutoff.is_negative() {
        return Err(Error::Domain("cutoff radius must be nonnegative".into()));
    }
    if f.n as usize != l.n {
        return Err(Error::Domain(format!("function dimension {} differs from lattice dimension {}", f.n, l.n)));
    }
    let bound = radius_cutoff * radius_cutoff;
    let cfg = EnumConfig::default();
    let dual_gram = l.gram.inverse().ok_or(Error::SingularBasis)?;
    let inv_covol = sqrt_interval(&RatInterval::point(l.gram.det()), BITS).recip().ok_or(Error::SingularBasis)?;
    let fhat = f.fourier();

    let primal = shell_sum(f, &l.gram, &bound, &cfg)?;
    let dual = &shell_sum(&fhat, &dual_gram, &bound, &cfg)? * &inv_covol;
    let primal_tail = tail_bound(f, &l.gram, &bound, &cfg)?;
    let dual_tail = tail_bound(&fhat, &dual_gram, &bound, &cfg)? * inv_covol.hi();

    let diff = &primal - &dual;
    let residual = RatInterval::new(diff.lo() - &dual_tail, diff.hi() + &primal_tail);
    Ok(PoissonReport { primal, dual, primal_tail, dual_tail, residual })
}

fn shell_sum(f: &RadialFn, gram: &RatMatrix, bound: &Rat, cfg: &EnumConfig) -> Result<RatInterval> {
    let mut acc = f.eval_norm(&Rat::zero(), BITS);
    for (norm, count) in gram_shells(gram, bound, cfg)? {
        acc = &acc + &f.eval_norm(&norm, BITS).scale(&int(count as i64));
    }
    Ok(acc)
}

/// Upper bound on `Σ_{Q(x) > bound} |f(x)|`.
///
/// On the norm slab `(k, k+1]` the number of points is at most
/// `(1 + 2√(k+1)/λ)^n` (disjoint balls of radius `λ/2`, `λ²` the minimal
/// norm), and `|f| ≤ A·(2π(k+1))^d e^{-πk} / scale` where `A` is the sum of
/// the absolute coefficients of the radial polynomial. The ratio of
/// consecutive majorants decreases in `k`, so once it drops to 1/2 the
/// remainder is at most the current term.
fn tail_bound(f: &RadialFn, gram: &RatMatrix, bound: &Rat, cfg: &EnumConfig) -> Result<Rat> {
    let n = gram.rows() as u32;
    let d = f.degree() as u32;
    let a: Rat = f.radial_poly().coeffs().iter().map(|c| c.abs()).sum::<Rat>() / f.scale.abs();
    if a.is_zero() {
        return Ok(Rat::zero());
    }
    let lambda = sqrt_enclosure(&min_norm(gram, cfg)?, 64).lo().clone();
    let pi = pi_enclosure(BITS);
    let term = |k: &Rat| -> Result<Rat> {
        let k1 = k + Rat::one();
        let count = rat_pow(&(Rat::one() + int(2) * sqrt_enclosure(&k1, 64).hi() / &lambda), n);
        let poly = rat_pow(&(int(2) * pi.hi() * &k1), d);
        let gauss = exp_neg_any(&(pi.lo() * k)).hi().clone();
        Ok(round_up(&(&a * count * poly * gauss)))
    };
    let mut k = Rat::from_integer(floor(bound));
    let mut total = Rat::zero();
    let mut cur = term(&k)?;
    for _ in 0..10_000 {
        let next_k = &k + Rat::one();
        let next = term(&next_k)?;
        total += &cur;
        if &next * int(2) <= cur {
            return Ok(total + next * int(2));
        }
        cur = next;
        k = next_k;
    }
    Err(Error::ResourceLimit("tail majorant does not decay".into()))
}

/// Smallest nonzero norm of the form, found by enumerating growing balls.
fn min_norm(gram: &RatMatrix, cfg: &EnumConfig) -> Result<Rat> {
    let mut b = (0..gram.rows()).map(|i| gram[(i, i)].clone()).min().expect("nonempty");
    loop {
        if let Some((m, _)) = gram_shells(gram, &b, cfg)?.into_iter().next() {
            return Ok(m);
        }
        b = &b * int(2);
    }
}

/// Upward rounding to a 128-bit mantissa, keeping the rationals small.
fn round_up(x: &Rat) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let bits = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = 128 - bits;
    let two = Rat::from_integer(2.into());
    let s = if shift >= 0 { rat_pow(&two, shift as u32) } else { rat_pow(&two, (-shift) as u32).recip() };
    Rat::from_integer(ceil(&(x * &s))) / s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lattice::e8_lattice;
    use num_bigint::BigInt;

    fn z2() -> LatticeData {
        let b = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        LatticeData::new(b, BigInt::one()).unwrap()
    }

    #[test]
    fn gaussian_on_z2() {
        let r = poisson_residual(&RadialFn::gaussian(2), &z2(), &int(5)).unwrap();
        assert!(r.contains(&Rat::zero()));
        assert!(r.width() < rat(1, 1_000_000_000));
    }

    #[test]
    fn gaussian_on_e8() {
        let rep = poisson_report(&RadialFn::gaussian(8), &e8_lattice(), &int(6)).unwrap();
        assert!(rep.residual.contains(&Rat::zero()));
        assert!(rep.residual.width() < rat(1, 10i64.pow(18)));
        assert!(rep.primal_tail < rat(1, 10i64.pow(18)));
    }

    #[test]
    fn non_gaussian_on_a_skew_lattice() {
        // covolume 3/2, so the dual side has a nontrivial factor
        let b = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(1), BigInt::from(3)]];
        let l = LatticeData::new(b, BigInt::from(2)).unwrap();
        let f = RadialFn::new(2, vec![int(3), int(-1), rat(1, 2)], int(1));
        let r = poisson_residual(&f, &l, &int(4)).unwrap();
        assert!(r.contains(&Rat::zero()), "{r:?}");
        assert!(r.width() < rat(1, 1_000_000));
    }

    #[test]
    fn zero_cutoff_keeps_only_the_origin() {
        let f = RadialFn::gaussian(8);
        let rep = poisson_report(&f, &e8_lattice(), &Rat::zero()).unwrap();
        assert!(rep.primal.contains(&Rat::one()));
        assert!(rep.dual.contains(&Rat::one()));
        assert!(rep.residual.contains(&Rat::zero()));
        assert!(rep.primal_tail > int(1));
    }

    #[test]
    fn a_wrong_covolume_is_detected() {
        // a function that is not an eigenfunction pairing still satisfies
        // Poisson; feeding the dual of the wrong lattice must not
        let f = RadialFn::gaussian(2);
        let b = vec![vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        let l = LatticeData::new(b, BigInt::one()).unwrap();
        let rep = poisson_report(&f, &l, &int(5)).unwrap();
        assert!(rep.residual.contains(&Rat::zero()));
        let wrong = &rep.primal - &rep.dual.scale(&int(2));
        assert!(!wrong.contains(&Rat::zero()));
    }
}
