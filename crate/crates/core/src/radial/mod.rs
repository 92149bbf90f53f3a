//! Radial Fourier eigenfunction expansions on `R^n`.
//!
//! A [`RadialFn`] is `f(x) = p(2π|x|²) e^{-π|x|²} / scale` with
//! `p = Σ c_i i! L_i^{n/2-1}`. Each Laguerre term is a Fourier eigenfunction
//! with eigenvalue `(-1)^i`, so the transform only flips odd coefficients.
//! Radii enter as squared norms `t = |x|²` so that every bound stays rational.

pub mod certify;
pub mod io;
pub mod newton;
pub mod poisson;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::consts::{exp_neg_interval, pi_enclosure};
use crate::arith::interval::RatInterval;
use crate::arith::{factorial, int};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ortho::laguerre_family;
use crate::scalar::Scalar;
use crate::{Rat, UniPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct RadialFn {
    pub n: u32,
    pub coeffs: Vec<Rat>,
    pub scale: Rat,
}

impl RadialFn {
    pub fn new(n: u32, coeffs: Vec<Rat>, scale: Rat) -> Self {
        assert!(n >= 2 && n % 2 == 0, "radial functions need an even dimension");
        assert!(scale.is_positive(), "scale must be positive");
        RadialFn { n, coeffs, scale }
    }

    /// `e^{-π|x|²}`, fixed by the Fourier transform.
    pub fn gaussian(n: u32) -> Self {
        Self::new(n, vec![Rat::one()], Rat::one())
    }

    pub fn alpha(&self) -> Rat {
        int(self.n as i64 / 2 - 1)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn fourier(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        RadialFn { n: self.n, coeffs, scale: self.scale.clone() }
    }

    /// `Σ c_i i! L_i(z)`, scale not applied.
    pub fn radial_poly(&self) -> UniPoly {
        if self.coeffs.is_empty() {
            return UniPoly::zero();
        }
        let fam = laguerre_family(self.degree(), &self.alpha());
        let mut fact = BigInt::one();
        let mut acc = UniPoly::zero();
        for (i, (c, l)) in self.coeffs.iter().zip(&fam).enumerate() {
            if i > 0 {
                fact *= i;
            }
            if !c.is_zero() {
                acc = &acc + &l.scale(&(c * Rat::from_integer(fact.clone())));
            }
        }
        acc
    }

    /// `f(0)`, exactly.
    pub fn at_origin(&self) -> Rat {
        self.radial_poly().eval(&Rat::zero()) / &self.scale
    }

    /// Enclosure of `f(x)` for every `|x|²` in `norms`, with π known to `bits`.
    pub fn eval_norms(&self, norms: &RatInterval, bits: u32) -> RatInterval {
        assert!(!norms.lo().is_negative(), "norms are nonnegative");
        let p = self.radial_poly();
        let z = z_range(norms, bits);
        let poly = z.eval_poly(&p);
        let gauss = exp_neg_interval(&z.scale(&Rat::new(1.into(), 2.into())));
        (&poly * &gauss).scale(&self.scale.recip())
    }

    pub fn eval_norm(&self, t: &Rat, bits: u32) -> RatInterval {
        self.eval_norms(&RatInterval::point(t.clone()), bits)
    }
}

pub fn fourier(f: &RadialFn) -> RadialFn {
    f.fourier()
}

pub fn radial_poly(f: &RadialFn) -> UniPoly {
    f.radial_poly()
}

/// Enclosure of `2π t` over an interval of norms.
pub fn z_range(norms: &RatInterval, bits: u32) -> RatInterval {
    let pi = pi_enclosure(bits);
    let two = int(2);
    RatInterval::new(&two * pi.lo() * norms.lo(), &two * pi.hi() * norms.hi())
}

/// A rational `z` below `2π t`, used where a sign condition must cover every
/// argument from `2π t` upward.
pub fn z_below(t: &Rat, bits: u32) -> Rat {
    z_range(&RatInterval::point(t.clone()), bits).lo().clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Roots of `f` itself.
    F,
    /// Roots of the Fourier transform.
    FHat,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::F => "f",
            Side::FHat => "fhat",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForcedRoot {
    pub at: Rat,
    pub mult: u32,
    pub side: Side,
}

/// Prescribed roots in the variable `z = 2π|x|²`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootSpec {
    roots: Vec<ForcedRoot>,
}

impl RootSpec {
    pub fn new(roots: Vec<ForcedRoot>) -> Result<Self> {
        for side in [Side::F, Side::FHat] {
            let locs: Vec<&Rat> = roots.iter().filter(|r| r.side == side).map(|r| &r.at).collect();
            if locs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(format!("{} roots must be strictly increasing", side.name())));
            }
        }
        if roots.iter().any(|r| r.mult == 0 || r.mult > 2) {
            return Err(Error::Domain("forced root multiplicity must be 1 or 2".into()));
        }
        Ok(RootSpec { roots })
    }

    pub fn roots(&self) -> &[ForcedRoot] {
        &self.roots
    }

    /// Number of linear conditions, counting a double root twice.
    pub fn conditions(&self) -> usize {
        self.roots.iter().map(|r| r.mult as usize).sum()
    }

    pub fn on(&self, side: Side) -> Vec<(Rat, u32)> {
        self.roots.iter().filter(|r| r.side == side).map(|r| (r.at.clone(), r.mult)).collect()
    }

    pub fn double_roots(&self, side: Side) -> Vec<Rat> {
        self.on(side).into_iter().filter(|(_, m)| *m == 2).map(|(r, _)| r).collect()
    }
}

/// Values `L_0(z)..L_d(z)` and derivatives by the three-term recurrences,
/// in any scalar type. Uses `L_i^α' = -L_{i-1}^{α+1}`.
pub fn laguerre_values<T: Scalar>(d: usize, alpha: &T, z: &T) -> (Vec<T>, Vec<T>) {
    let vals = laguerre_scalar(d, alpha, z);
    let shifted = laguerre_scalar(d.saturating_sub(1), &(alpha.clone() + T::one()), z);
    let mut ders = vec![T::zero(); d + 1];
    for i in 1..=d {
        ders[i] = -shifted[i - 1].clone();
    }
    (vals, ders)
}

fn laguerre_scalar<T: Scalar>(d: usize, alpha: &T, z: &T) -> Vec<T> {
    let mut out = vec![T::one()];
    if d >= 1 {
        out.push(T::one() + alpha.clone() - z.clone());
    }
    for k in 2..=d {
        let kt = T::from_i64(k as i64);
        let a = T::from_i64(2 * k as i64 - 1) + alpha.clone() - z.clone();
        let b = kt.clone() + alpha.clone() - T::one();
        let next = (a * out[k - 1].clone() - b * out[k - 2].clone()) / kt;
        out.push(next);
    }
    out
}

/// Linear conditions of a root spec on the unknowns `a_1..a_d`, where the
/// polynomial is `1 + Σ a_i L_i` and its transform `1 + Σ (-1)^i a_i L_i`.
pub fn forced_root_system<T: Scalar>(spec: &RootSpec, degree: usize, alpha: &T, at: impl Fn(&Rat) -> T) -> (Vec<Vec<T>>, Vec<T>) {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for root in spec.roots() {
        let z = at(&root.at);
        let (vals, ders) = laguerre_values(degree, alpha, &z);
        let sgn = |i: usize| root.side == Side::FHat && i % 2 == 1;
        let row = |v: &[T]| -> Vec<T> { (1..=degree).map(|i| if sgn(i) { -v[i].clone() } else { v[i].clone() }).collect() };
        rows.push(row(&vals));
        rhs.push(-T::one());
        if root.mult == 2 {
            rows.push(row(&ders));
            rhs.push(T::zero());
        }
    }
    (rows, rhs)
}

/// Exact coefficients of the function with constant Laguerre coefficient 1
/// and the prescribed roots.
pub fn solve_forced_roots(spec: &RootSpec, degree: usize, n: u32) -> Result<RadialFn> {
    let alpha = int(n as i64 / 2 - 1);
    if degree == 0 {
        return if spec.conditions() == 0 { Ok(RadialFn::gaussian(n)) } else { Err(Error::SingularSystem) };
    }
    let (rows, rhs) = forced_root_system(spec, degree, &alpha, |r| r.clone());
    if rows.len() < degree {
        return Err(Error::SingularSystem);
    }
    let a = Matrix::from_rows(rows).solve_unique(&rhs).ok_or(Error::SingularSystem)?;
    let mut coeffs = vec![Rat::one()];
    for (i, ai) in a.into_iter().enumerate() {
        coeffs.push(ai / Rat::from_integer(factorial(i as u32 + 1)));
    }
    Ok(RadialFn::new(n, coeffs, Rat::one()))
}

/// Counting-function recipe: with `z_i = ⌊2π(m + 2(i-1)) 10^D⌋ / 10^D` for
/// the shell norms `m, m+2, …`, a single root at `z_2` and double roots at
/// `z_3..z_k` on the function side, double roots at `z_1..z_k` on the
/// transform side. Degree `4k - 3`.
pub fn counting_recipe(min_norm: u32, k: usize, digits: u32) -> (RootSpec, usize) {
    assert!(k >= 2);
    let den = crate::arith::pow10(digits);
    let pi = pi_enclosure(64 + 4 * digits);
    let z = |i: usize| -> Rat {
        let norm = int(min_norm as i64 + 2 * (i as i64 - 1));
        let scaled = int(2) * &norm * Rat::from_integer(den.clone());
        // π is irrational, so the floor is the same at both ends once the
        // enclosure is tight enough
        let lo = crate::arith::floor(&(&scaled * pi.lo()));
        let hi = crate::arith::floor(&(&scaled * pi.hi()));
        assert_eq!(lo, hi, "π enclosure too wide for the requested digits");
        Rat::new(lo, den.clone())
    };
    let mut roots = vec![ForcedRoot { at: z(2), mult: 1, side: Side::F }];
    for i in 3..=k {
        roots.push(ForcedRoot { at: z(i), mult: 2, side: Side::F });
    }
    for i in 1..=k {
        roots.push(ForcedRoot { at: z(i), mult: 2, side: Side::FHat });
    }
    (RootSpec::new(roots).expect("recipe roots increase"), 4 * k - 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn fourier_flips_odd_coefficients() {
        let g = RadialFn::gaussian(24);
        assert_eq!(g.fourier(), g);
        let f = RadialFn::new(24, vec![int(1), int(1)], int(1));
        assert_eq!(f.fourier().coeffs, vec![int(1), int(-1)]);
        let h = RadialFn::new(8, vec![rat(3, 7), int(-2), rat(5, 3), int(9)], int(10));
        assert_eq!(h.fourier().fourier(), h);
    }

    #[test]
    fn radial_poly_examples() {
        assert_eq!(RadialFn::gaussian(24).radial_poly(), UniPoly::one());
        let f = RadialFn::new(24, vec![int(0), int(1)], int(1));
        assert_eq!(f.radial_poly(), UniPoly::new(vec![int(12), int(-1)]));
        let h = RadialFn::new(8, vec![int(1), int(2), int(3), int(4)], int(1));
        assert_eq!(h.radial_poly().degree(), Some(3));
    }

    #[test]
    fn gaussian_values() {
        // e^{-π} at |x|² = 1, reference 0.0432139182637722...
        let e = RadialFn::gaussian(8).eval_norm(&int(1), 80);
        let reference = crate::arith::dec("0.04321391826377224977");
        let slack = crate::arith::dec("1e-20");
        assert!(e.lo() <= &(&reference + &slack) && e.hi() >= &(&reference - &slack));
        assert!(e.width() < slack);
    }

    #[test]
    fn scalar_laguerre_matches_polynomials() {
        let alpha = int(11);
        let z = rat(37, 3);
        let (v, d) = laguerre_values(12, &alpha, &z);
        let fam = laguerre_family(12, &alpha);
        for i in 0..=12 {
            assert_eq!(v[i], fam[i].eval(&z));
            assert_eq!(d[i], fam[i].derivative().eval(&z));
        }
        let (vf, _) = laguerre_values(12, &11.0f64, &(37.0 / 3.0));
        assert!((vf[12] - crate::arith::to_f64(&v[12])).abs() < 1e-6 * crate::arith::to_f64(&v[12]).abs().max(1.0));
    }

    #[test]
    fn forced_roots_are_exact() {
        let spec = RootSpec::new(vec![
            ForcedRoot { at: int(30), mult: 1, side: Side::F },
            ForcedRoot { at: int(40), mult: 2, side: Side::F },
            ForcedRoot { at: int(25), mult: 2, side: Side::FHat },
        ])
        .unwrap();
        let f = solve_forced_roots(&spec, 5, 24).unwrap();
        let p = f.radial_poly();
        let q = f.fourier().radial_poly();
        assert!(p.eval(&int(30)).is_zero());
        assert!(p.eval(&int(40)).is_zero() && p.derivative().eval(&int(40)).is_zero());
        assert!(q.eval(&int(25)).is_zero() && q.derivative().eval(&int(25)).is_zero());
        assert_eq!(f.coeffs[0], int(1));
    }

    #[test]
    fn forced_root_edge_cases() {
        assert_eq!(solve_forced_roots(&RootSpec::default(), 0, 24).unwrap(), RadialFn::gaussian(24));
        let one_double = RootSpec::new(vec![ForcedRoot { at: int(10), mult: 2, side: Side::F }]).unwrap();
        // two conditions, three unknowns
        assert_eq!(solve_forced_roots(&one_double, 3, 24), Err(Error::SingularSystem));
        assert!(RootSpec::new(vec![
            ForcedRoot { at: int(3), mult: 2, side: Side::F },
            ForcedRoot { at: int(2), mult: 2, side: Side::F },
        ])
        .is_err());
    }

    #[test]
    fn recipe_locations() {
        let (spec, d) = counting_recipe(4, 10, 8);
        assert_eq!(d, 37);
        assert_eq!(spec.conditions(), 37);
        // z_1 = ⌊8π·10^8⌋/10^8 = 25.13274122
        assert_eq!(spec.on(Side::FHat)[0].0, rat(2_513_274_122, 100_000_000));
        assert_eq!(spec.on(Side::F)[0], (rat(3_769_911_184, 100_000_000), 1));
    }
}
