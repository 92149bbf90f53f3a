//! Floating-point search for packing functions with forced double roots,
//! followed by exact rounding and re-certification.
//!
//! The free parameters are the double-root locations `ρ_j` of `f` and `σ_j`
//! of `f̂` (in `z = 2π|x|²`). For fixed locations the coefficients solve a
//! square linear system: `f(0) = f̂(0)`, `p(ρ_j) = -δ`, `p'(ρ_j) = 0`,
//! `q(σ_j) = δ`, `q'(σ_j) = 0`, with `p`, `q` the radial polynomials of
//! `f`, `f̂`. The offset `δ` keeps both functions strictly on the correct side
//! near the touching points, so rounding the coefficients cannot create a
//! sign change there. The objective is the first positive root `r` of `p`;
//! its gradient comes from implicit differentiation of the system, and a
//! quasi-Newton (BFGS) step with backtracking moves the locations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::certify::{certify_packing_bound, PackingCertificate, PI_BITS};
use super::{laguerre_values, ForcedRoot, RadialFn, RootSpec, Side};
use crate::arith::consts::{pi_enclosure, sqrt_enclosure};
use crate::arith::interval::RatInterval;
use crate::arith::roots::{certify_sign, real_roots, refine_sign_change, sign_at, Region, RootMethod, Want};
use crate::arith::{dec, factorial, int, pow10};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::Rat;

#[derive(Clone, Debug)]
pub struct NewtonConfig {
    /// Working precision of the search in bits; rounded up to 128, 256, 512,
    /// 1024 or 2048.
    pub precision_bits: u32,
    /// Offset `δ` of the near-double roots from zero.
    pub offset: Rat,
    /// Decimal digits kept when rounding coefficients; `None` picks enough
    /// to keep the rounding error far below `δ`.
    pub digits: Option<u32>,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { precision_bits: 512, offset: dec("1e-8"), digits: None }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonResult {
    /// Final double-root locations, exact dyadic rationals.
    pub spec: RootSpec,
    pub f: RadialFn,
    pub certificate: PackingCertificate,
    /// Quasi-Newton steps actually taken.
    pub steps: usize,
}

impl NewtonResult {
    /// Certified `r / √m` against the minimal norm `m`, as an `f64` for reports.
    pub fn ratio_to_min_distance(&self) -> Option<f64> {
        let ratio = self.certificate.ratio.as_ref()?;
        let n = self.f.n as f64;
        Some(Scalar::to_f64(ratio.hi()).powf(1.0 / n))
    }
}

/// Default starting locations for `k` double roots of `f` and `m` of `f̂`:
/// `f` at the norms `m0 + 2j` (j = 1..k), `f̂` at `m0 + 2j` (j = 0..m-1).
pub fn default_spec(min_norm: u32, k: usize, m: usize) -> RootSpec {
    let z = |norm: usize| -> Rat {
        let pi = pi_enclosure(64);
        let v = int(2 * norm as i64) * pi.lo();
        Rat::new(crate::arith::floor(&(v * int(1_000_000))), BigInt::from(1_000_000))
    };
    let mut roots: Vec<ForcedRoot> = (1..=k)
        .map(|j| ForcedRoot { at: z(min_norm as usize + 2 * j), mult: 2, side: Side::F })
        .collect();
    roots.extend((0..m).map(|j| ForcedRoot { at: z(min_norm as usize + 2 * j), mult: 2, side: Side::FHat }));
    RootSpec::new(roots).expect("increasing defaults")
}

/// `spec` with one more double root on each side, placed one spacing past
/// the current last root. Used to warm-start a larger search.
pub fn extend_spec(spec: &RootSpec) -> RootSpec {
    let mut roots = spec.roots().to_vec();
    for side in [Side::F, Side::FHat] {
        let locs = spec.double_roots(side);
        let next = match locs.len() {
            0 => continue,
            1 => &locs[0] * int(2),
            l => &locs[l - 1] * int(2) - &locs[l - 2],
        };
        roots.push(ForcedRoot { at: next, mult: 2, side });
    }
    RootSpec::new(roots).expect("extension keeps order")
}

/// Optimize the double-root locations of `initial` for `iterations` steps,
/// round, and certify. Uses [`NewtonConfig::default`] apart from the
/// precision.
pub fn newton_construct(initial: &RootSpec, n: u32, iterations: usize, precision_bits: u32) -> Result<NewtonResult> {
    let cfg = NewtonConfig { precision_bits, ..NewtonConfig::default() };
    newton_construct_with(initial, n, iterations, &cfg)
}

pub fn newton_construct_with(initial: &RootSpec, n: u32, iterations: usize, cfg: &NewtonConfig) -> Result<NewtonResult> {
    if initial.roots().iter().any(|r| r.mult != 2) {
        return Err(Error::Domain("the search moves double roots only".into()));
    }
    let theta: Vec<f64> = initial
        .double_roots(Side::F)
        .iter()
        .chain(initial.double_roots(Side::FHat).iter())
        .map(Scalar::to_f64)
        .collect();
    match cfg.precision_bits {
        0..=128 => run::<128>(initial, n, theta, iterations, cfg),
        129..=256 => run::<256>(initial, n, theta, iterations, cfg),
        257..=512 => run::<512>(initial, n, theta, iterations, cfg),
        513..=1024 => run::<1024>(initial, n, theta, iterations, cfg),
        1025..=2048 => run::<2048>(initial, n, theta, iterations, cfg),
        b => Err(Error::ResourceLimit(format!("precision {b} bits exceeds 2048"))),
    }
}

fn run<const P: u32>(
    initial: &RootSpec,
    n: u32,
    theta: Vec<f64>,
    iterations: usize,
    cfg: &NewtonConfig,
) -> Result<NewtonResult> {
    let k = initial.double_roots(Side::F).len();
    let prob = Problem::<BigFloat<P>>::new(n, k, &cfg.offset);
    let (theta, steps) = prob.optimize(theta, iterations)?;
    let spec = if steps == 0 { initial.clone() } else { spec_from(&theta, k)? };
    let locs: Vec<Rat> = spec.double_roots(Side::F).into_iter().chain(spec.double_roots(Side::FHat)).collect();
    let a = prob.solve(&locs).ok_or(Error::SingularSystem)?;
    let r_float = prob.first_root(&a).ok_or_else(|| Error::CertificationFailed("no sign change of f".into()))?;
    let f = round_coefficients(&a, n, cfg, &prob, &theta);
    let r = certified_radius(&f, r_float.to_f64())?;
    let certificate = certify_packing_bound(&f, &RatInterval::point(r)).map_err(|e| match e {
        Error::SignViolation { side, witness } => {
            Error::CertificationFailed(format!("rounded function fails on {side} near {witness}"))
        }
        other => other,
    })?;
    Ok(NewtonResult { spec, f, certificate, steps })
}

fn spec_from(theta: &[f64], k: usize) -> Result<RootSpec> {
    let roots = theta
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let at = BigRational::from_float(t).ok_or_else(|| Error::NoProgress(0))?;
            Ok(ForcedRoot { at, mult: 2, side: if j < k { Side::F } else { Side::FHat } })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = roots;
    sorted.sort_by(|a, b| (a.side, &a.at).cmp(&(b.side, &b.at)));
    RootSpec::new(sorted)
}

/// Round `c_i = a_i / i!` to `digits` decimals, then restore `f(0) = f̂(0)`
/// exactly through the linear coefficient. Every odd term's weight
/// `i! L_i(0) = (α+1)…(α+i)` is a multiple of `α + 1`, so the correction is
/// an integer.
fn round_coefficients<T: Scalar + ToRat>(a: &[T], n: u32, cfg: &NewtonConfig, prob: &Problem<T>, theta: &[f64]) -> RadialFn {
    let digits = cfg.digits.unwrap_or_else(|| prob.auto_digits(theta, &cfg.offset));
    let scale = pow10(digits);
    let alpha = n as u64 / 2 - 1;
    let mut ints = vec![scale.clone()];
    for (i, ai) in a.iter().enumerate().skip(1) {
        let c = ai.to_rat() / Rat::from_integer(factorial(i as u32));
        ints.push((c * Rat::from_integer(scale.clone())).round().to_integer());
    }
    let weight = |i: usize| -> BigInt { (1..=i as u64).fold(BigInt::one(), |acc, t| acc * (alpha + t)) };
    let odd_sum: BigInt = ints.iter().enumerate().skip(3).step_by(2).map(|(i, c)| c * weight(i)).sum();
    if ints.len() > 1 {
        let (q, rem) = odd_sum.div_rem(&weight(1));
        debug_assert!(rem.is_zero());
        ints[1] = -q;
    }
    RadialFn::new(n, ints.into_iter().map(Rat::from_integer).collect(), Rat::from_integer(scale))
}

/// [`certified_radius`] for a function given from outside: the first sign
/// change of `f` from positive to negative is located exactly first.
pub fn first_root_radius(f: &RadialFn) -> Result<Rat> {
    let p = f.radial_poly();
    let domain = RatInterval::new(Rat::zero(), int(10_000));
    let iv = real_roots(&p, &domain, &dec("1e-12"))
        .into_iter()
        .find(|iv| sign_at(&p, iv.lo()) == std::cmp::Ordering::Greater && sign_at(&p, iv.hi()) == std::cmp::Ordering::Less)
        .ok_or_else(|| Error::CertificationFailed("f has no sign change on z in (0, 10000]".into()))?;
    let mid = (iv.lo() + iv.hi()) / int(2);
    certified_radius(f, Scalar::to_f64(&mid))
}

/// Smallest rational `r` with `2π r² ≥` the first positive root of `f`,
/// after proving `f > 0` below that root.
fn certified_radius(f: &RadialFn, z_guess: f64) -> Result<Rat> {
    let p = f.radial_poly();
    let fail = |m: &str| Error::CertificationFailed(m.to_string());
    let guess = BigRational::from_float(z_guess).ok_or_else(|| fail("non-finite root estimate"))?;
    let rel = dec("1e-9");
    let lo = &guess * (Rat::one() - &rel);
    let hi = &guess * (Rat::one() + &rel);
    if sign_at(&p, &lo) != std::cmp::Ordering::Greater || sign_at(&p, &hi) != std::cmp::Ordering::Less {
        return Err(fail("no sign change around the estimated root"));
    }
    certify_sign(&p, &Region::Closed(Rat::zero(), lo.clone()), Want::NonNeg, &[], RootMethod::Descartes)
        .map_err(|w| fail(&format!("f changes sign before its first root estimate, near {}", w.interval())))?;
    let iv = refine_sign_change(&p, &RatInterval::new(lo, hi), &dec("1e-40"));
    let pi = pi_enclosure(PI_BITS);
    let r_sq = iv.hi() / (int(2) * pi.lo());
    Ok(sqrt_enclosure(&r_sq, 160).hi().clone())
}

trait ToRat {
    fn to_rat(&self) -> Rat;
}

impl<const P: u32> ToRat for BigFloat<P> {
    fn to_rat(&self) -> Rat {
        BigFloat::to_rat(self)
    }
}

/// Square system for fixed locations, in a float type `T`.
struct Problem<T> {
    n: u32,
    k: usize,
    alpha: T,
    offset: T,
}

impl<T: Scalar + ToRat> Problem<T> {
    fn new(n: u32, k: usize, offset: &Rat) -> Self {
        Problem { n, k, alpha: T::from_i64(n as i64 / 2 - 1), offset: T::from_rat(offset) }
    }

    fn degree(&self, theta: &[f64]) -> usize {
        1 + 2 * theta.len()
    }

    fn sign(&self, j: usize, i: usize) -> bool {
        j >= self.k && i % 2 == 1
    }

    fn matrix(&self, theta: &[f64]) -> (Matrix<T>, Vec<T>) {
        let locs: Vec<Rat> = theta.iter().map(|&t| float_rat(t)).collect();
        self.matrix_at(&locs)
    }

    fn matrix_at(&self, locs: &[Rat]) -> (Matrix<T>, Vec<T>) {
        let d = 1 + 2 * locs.len();
        let (l0, _) = laguerre_values(d, &self.alpha, &T::zero());
        let mut rows = vec![(1..=d).map(|i| if i % 2 == 1 { l0[i].clone() } else { T::zero() }).collect::<Vec<_>>()];
        let mut rhs = vec![T::zero()];
        for (j, t) in locs.iter().enumerate() {
            let (v, dv) = laguerre_values(d, &self.alpha, &T::from_rat(t));
            let signed = |w: &[T]| -> Vec<T> {
                (1..=d).map(|i| if self.sign(j, i) { -w[i].clone() } else { w[i].clone() }).collect()
            };
            rows.push(signed(&v));
            rhs.push(if j < self.k { -T::one() - self.offset.clone() } else { -T::one() + self.offset.clone() });
            rows.push(signed(&dv));
            rhs.push(T::zero());
        }
        (Matrix::from_rows(rows), rhs)
    }

    /// `a_0 = 1, a_1..a_d`.
    fn solve(&self, locs: &[Rat]) -> Option<Vec<T>> {
        let (m, rhs) = self.matrix_at(locs);
        let x = m.solve(&rhs)?;
        Some(std::iter::once(T::one()).chain(x).collect())
    }

    fn eval(&self, a: &[T], z: &T, fhat: bool, deriv: usize) -> T {
        let d = a.len() - 1;
        let vals = laguerre_deriv(d, &self.alpha, z, deriv);
        a.iter().zip(&vals).enumerate().fold(T::zero(), |acc, (i, (ai, li))| {
            let t = ai.clone() * li.clone();
            if fhat && i % 2 == 1 {
                acc - t
            } else {
                acc + t
            }
        })
    }

    /// First positive root of `p`, by a coarse scan and bisection.
    fn first_root(&self, a: &[T]) -> Option<T> {
        let h = T::from_rat(&Rat::new(1.into(), 4.into()));
        let mut z = T::zero();
        let limit = T::from_i64(4000);
        while self.eval(a, &(z.clone() + h.clone()), false, 0) > T::zero() {
            z = z + h.clone();
            if z > limit {
                return None;
            }
        }
        let (mut lo, mut hi) = (z.clone(), z + h);
        let two = T::from_i64(2);
        for _ in 0..120 {
            let mid = (lo.clone() + hi.clone()) / two.clone();
            if self.eval(a, &mid, false, 0) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    /// First root and its gradient with respect to the locations.
    fn objective(&self, theta: &[f64]) -> Option<(f64, Vec<f64>)> {
        let (m, rhs) = self.matrix(theta);
        let a: Vec<T> = std::iter::once(T::one()).chain(m.solve(&rhs)?).collect();
        let r = self.first_root(&a)?;
        let d = a.len() - 1;
        let (lr, _) = laguerre_values(d, &self.alpha, &r);
        let w = m.transpose().solve(&lr[1..].to_vec())?;
        let dp = self.eval(&a, &r, false, 1);
        if dp.is_zero() {
            return None;
        }
        let grad = theta
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let curv = self.eval(&a, &T::from_rat(&float_rat(t)), j >= self.k, 2);
                (w[2 + 2 * j].clone() * curv / dp.clone()).to_f64()
            })
            .collect();
        Some((r.to_f64(), grad))
    }

    fn optimize(&self, mut theta: Vec<f64>, iterations: usize) -> Result<(Vec<f64>, usize)> {
        if iterations == 0 {
            return Ok((theta, 0));
        }
        let dim = theta.len();
        // without a cap the outermost root can escape to infinity, which
        // just lowers the effective degree and ruins the rounding
        let cap = 2.0 * theta.iter().cloned().fold(0.0, f64::max);
        let (mut r, mut g) = self.objective(&theta).ok_or(Error::SingularSystem)?;
        let mut h = identity(dim);
        let mut steps = 0;
        for _ in 0..iterations {
            let mut dir: Vec<f64> = mat_vec(&h, &g).iter().map(|v| -v).collect();
            let mut slope = dot(&g, &dir);
            if slope >= 0.0 {
                h = identity(dim);
                dir = g.iter().map(|v| -v).collect();
                slope = dot(&g, &dir);
            }
            let mut step = 1.0;
            let mut accepted = None;
            while step > 1e-12 {
                let cand: Vec<f64> = theta.iter().zip(&dir).map(|(t, d)| t + step * d).collect();
                if admissible(&cand, self.k, cap) {
                    if let Some((r2, g2)) = self.objective(&cand) {
                        if r2 < r + 1e-4 * step * slope {
                            accepted = Some((cand, r2, g2));
                            break;
                        }
                    }
                }
                step /= 2.0;
            }
            let Some((cand, r2, g2)) = accepted else {
                if steps == 0 {
                    return Err(Error::NoProgress(0));
                }
                break;
            };
            let s: Vec<f64> = cand.iter().zip(&theta).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g2.iter().zip(&g).map(|(a, b)| a - b).collect();
            bfgs_update(&mut h, &s, &y);
            theta = cand;
            r = r2;
            g = g2;
            steps += 1;
        }
        Ok((theta, steps))
    }

    /// Decimal digits so that rounding moves `p` by far less than `δ` on the
    /// range holding the roots.
    fn auto_digits(&self, theta: &[f64], offset: &Rat) -> u32 {
        let zmax = theta.iter().cloned().fold(0.0, f64::max) * 1.25 + 10.0;
        let d = self.degree(theta);
        let mut worst = 1.0f64;
        for s in 0..=64 {
            let z = zmax * s as f64 / 64.0;
            let (v, _) = laguerre_values(d, &(self.n as f64 / 2.0 - 1.0), &z);
            let mut fact = 1.0f64;
            let mut tot = 0.0;
            for (i, li) in v.iter().enumerate() {
                if i > 0 {
                    fact *= i as f64;
                }
                tot += fact * li.abs();
            }
            worst = worst.max(tot);
        }
        let off = Scalar::to_f64(offset);
        (worst / off).log10().ceil().max(0.0) as u32 + 12
    }
}

/// `d^k/dz^k L_i^α(z) = (-1)^k L_{i-k}^{α+k}(z)`.
fn laguerre_deriv<T: Scalar>(d: usize, alpha: &T, z: &T, k: usize) -> Vec<T> {
    let shifted = alpha.clone() + T::from_i64(k as i64);
    let (v, _) = laguerre_values(d, &shifted, z);
    (0..=d)
        .map(|i| {
            if i < k {
                T::zero()
            } else if k % 2 == 1 {
                -v[i - k].clone()
            } else {
                v[i - k].clone()
            }
        })
        .collect()
}

fn float_rat(t: f64) -> Rat {
    BigRational::from_float(t).expect("finite location")
}

fn admissible(theta: &[f64], k: usize, cap: f64) -> bool {
    let inc = |w: &[f64]| w.windows(2).all(|p| p[0] < p[1]) && w.iter().all(|&x| x > 0.0 && x < cap);
    inc(&theta[..k]) && inc(&theta[k..])
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64]) {
    let sy = dot(s, y);
    if sy <= 1e-300 {
        return;
    }
    let rho = 1.0 / sy;
    let n = s.len();
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn zero_iterations_certify_the_initial_solve() {
        let spec = default_spec(2, 2, 2);
        let res = newton_construct(&spec, 8, 0, 256).unwrap();
        assert_eq!(res.steps, 0);
        assert_eq!(res.spec, spec);
        assert!(res.certificate.checks.iter().all(|c| c.pass));
        let ratio = res.ratio_to_min_distance().unwrap();
        assert!(ratio > 1.0 && ratio < 1.2, "{ratio}");
    }

    #[test]
    fn optimizing_improves_the_radius() {
        let spec = default_spec(2, 2, 2);
        let before = newton_construct(&spec, 8, 0, 256).unwrap().ratio_to_min_distance().unwrap();
        let after = newton_construct(&spec, 8, 30, 256).unwrap();
        assert!(after.steps > 0);
        assert!(after.ratio_to_min_distance().unwrap() < before);
    }

    #[test]
    fn external_radius_matches_the_construction() {
        let res = newton_construct(&default_spec(2, 2, 2), 8, 5, 256).unwrap();
        let r = first_root_radius(&res.f).unwrap();
        let want = res.certificate.r.hi();
        assert!(((&r - want) / want).abs() < dec("1e-30"));
        let neg = RadialFn::new(8, vec![int(-1)], int(1));
        assert!(first_root_radius(&neg).is_err());
    }

    #[test]
    fn rounded_coefficients_keep_exact_normalization() {
        let res = newton_construct(&default_spec(2, 2, 2), 8, 5, 256).unwrap();
        assert_eq!(res.f.radial_poly().eval(&Rat::zero()), res.f.fourier().radial_poly().eval(&Rat::zero()));
        assert!(res.f.coeffs.iter().all(|c| c.is_integer()));
    }

    #[test]
    fn single_roots_are_rejected() {
        let spec = RootSpec::new(vec![ForcedRoot { at: int(20), mult: 1, side: Side::F }]).unwrap();
        assert!(matches!(newton_construct(&spec, 8, 1, 256), Err(Error::Domain(_))));
    }

    #[test]
    fn extension_appends_one_root_per_side() {
        let s = default_spec(2, 3, 2);
        let e = extend_spec(&s);
        assert_eq!(e.double_roots(Side::F).len(), 4);
        assert_eq!(e.double_roots(Side::FHat).len(), 3);
        assert!(e.double_roots(Side::F)[3] > s.double_roots(Side::F)[2]);
    }

    #[test]
    fn derivative_helper_matches_polynomials() {
        let alpha = int(3);
        let z = Rat::new(7.into(), 2.into());
        let fam = crate::ortho::laguerre_family(6, &alpha);
        for k in 0..3 {
            let v = laguerre_deriv(6, &alpha, &z, k);
            for i in 0..=6 {
                let mut p = fam[i].clone();
                for _ in 0..k {
                    p = p.derivative();
                }
                assert_eq!(v[i], p.eval(&z), "i={i} k={k}");
            }
        }
    }
}
