//! Local optimality of a perfect eutactic lattice against small Gram
//! perturbations `S + ρT` with `max |t_ij| ≤ 1`.
//!
//! Two facts are combined. The determinant cannot drop quickly:
//! `det(S + ρT) ≥ det S - cρ²` once the linear term vanishes, with `c` built
//! from sums of absolute minors. The minimum cannot stay put: some minimal
//! vector `u` has `uᵀTu ≤ -α`, so the minimum falls by a factor
//! `1 - ρα/m`. The density ratio is then below 1 on a whole interval.

pub mod alpha;
pub mod simplex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::consts::sqrt_enclosure;
use crate::arith::roots::real_roots;
use crate::arith::{binomial, exact_str, int, rat_pow};
use crate::error::{Error, Result};
use crate::lattice::{integer_form, MinVectorSet};
use crate::matrix::bareiss_i128;
use crate::{Rat, RatInterval, RatMatrix, UniPoly};

pub use alpha::{alpha_chain, alpha_exact_lp, alpha_exact_lp_min, frame_check, AlphaChain, AlphaEntry};

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(x: i64) -> u64 {
    x.rem_euclid(PRIME as i64) as u64
}

/// Rank of the span of the forms `u uᵀ` over the minimal vectors, in basis
/// coefficients. A lattice is perfect when this is `n(n+1)/2`.
///
/// Elimination runs modulo a 61-bit prime and stops at full rank. A rank
/// modulo `p` never exceeds the rational rank, so full rank is exact; below
/// that the forms are re-ranked over the rationals.
pub fn perfection_rank(minvecs: &MinVectorSet, n: usize) -> usize {
    let full = n * (n + 1) / 2;
    let features = |u: &[i64]| -> Vec<i64> {
        let mut f = Vec::with_capacity(full);
        for i in 0..n {
            for j in i..n {
                f.push(u[i] * u[j]);
            }
        }
        f
    };
    // echelon rows, each normalized to 1 at its pivot
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    for u in &minvecs.coeffs {
        let mut v: Vec<u64> = features(u).into_iter().map(to_mod).collect();
        for (p, r) in &rows {
            let f = v[*p];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x + PRIME - mulmod(f, *y)) % PRIME;
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[p], PRIME - 2);
            v.iter_mut().for_each(|x| *x = mulmod(*x, inv));
            rows.push((p, v));
            if rows.len() == full {
                return full;
            }
        }
    }
    let m = RatMatrix::from_rows(
        minvecs.coeffs.iter().map(|u| features(u).into_iter().map(int).collect()).collect(),
    );
    m.rank()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Adjugate {
    pub adj: RatMatrix,
    pub det: Rat,
    /// `Σ |s̃_ij|`.
    pub abs_sum: Rat,
}

pub fn adjugate(gram: &RatMatrix) -> Adjugate {
    let adj = gram.adjugate();
    let abs_sum = adj.abs_entry_sum();
    Adjugate { det: gram.det(), adj, abs_sum }
}

/// Default cap on the number of minors [`minor_abs_sum`] will evaluate.
pub const MINOR_LIMIT: u64 = 1_000_000;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Sum of `|det|` over all square minors of size `n - k`, i.e. the minors
/// complementary to the `k × k` blocks of a perturbation.
pub fn minor_abs_sum(gram: &RatMatrix, k: usize) -> Result<Rat> {
    minor_abs_sum_limited(gram, k, MINOR_LIMIT)
}

pub fn minor_abs_sum_limited(gram: &RatMatrix, k: usize, limit: u64) -> Result<Rat> {
    let n = gram.rows();
    if k > n {
        return Err(Error::Domain(format!("minor order {k} exceeds dimension {n}")));
    }
    let count = binomial(n as u64, k as u64).pow(2);
    let count_u64 = count.to_u64().unwrap_or(u64::MAX);
    if count_u64 > limit {
        return Err(Error::TooManyMinors(count_u64));
    }
    let size = n - k;
    let (den, ints) = integer_form(gram);
    let small: Option<Vec<Vec<i128>>> =
        ints.iter().map(|r| r.iter().map(|x| x.to_i128()).collect()).collect();
    let subsets = combinations(n, size);
    let mut total = BigInt::zero();
    for rows in &subsets {
        for cols in &subsets {
            let det = small
                .as_ref()
                .and_then(|s| {
                    let mut a: Vec<Vec<i128>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| s[i][j]).collect()).collect();
                    bareiss_i128(&mut a).map(BigInt::from)
                })
                .unwrap_or_else(|| {
                    let m: Vec<Vec<BigInt>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| ints[i][j].clone()).collect()).collect();
                    crate::matrix::det_bareiss(&m)
                });
            total += det.abs();
        }
    }
    Ok(Rat::new(total, den.pow(size as u32)))
}

/// Upper bound for `x^(e/2)` with `x ≥ 0`.
fn half_power_upper(x: &Rat, e: u32) -> Rat {
    let base = rat_pow(x, e / 2);
    if e % 2 == 0 {
        base
    } else {
        base * sqrt_enclosure(x, 64).hi().clone()
    }
}

/// Hadamard bound on [`minor_abs_sum`]: every row of an `(n-k)`-minor has
/// at most one diagonal entry, so its squared length is at most
/// `d² + (n-k-1)o²` for `d, o` the largest diagonal and off-diagonal sizes.
pub fn hadamard_minor_bound(n: usize, k: usize, diag: &Rat, offdiag: &Rat) -> Rat {
    let size = n - k;
    if size == 0 {
        return Rat::one();
    }
    let row_sq = diag * diag + int(size as i64 - 1) * offdiag * offdiag;
    let count = Rat::from_integer(binomial(n as u64, k as u64).pow(2));
    count * half_power_upper(&row_sq, size as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DrhoTerm {
    pub k: usize,
    pub minor_sum: Rat,
    pub exact: bool,
    /// Upper bound on `k^(k/2) · minor_sum · ρ_max^(k-2)`.
    pub contribution: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DrhoBound {
    /// `det(S + ρT) ≥ det S - cρ²` for `0 < ρ ≤ rho_max`.
    pub c: Rat,
    pub rho_max: Rat,
    pub terms: Vec<DrhoTerm>,
}

/// Expanding `det(S + ρT)` over the `k × k` submatrices of `T` gives
/// `Σ_k ρ^k Σ ±det(T_block) · det(complementary minor of S)`. The `k = 1` term
/// is `ρ Σ s̃_ij t_ij`, which vanishes on the admissible perturbations, a
/// `k × k` block with entries in `[-1, 1]` has `|det| ≤ k^(k/2)`, and each
/// cofactor is one of the minors counted by [`minor_abs_sum`].
///
/// Orders with at most `exact_limit` minors are summed exactly, the rest
/// use [`hadamard_minor_bound`].
pub fn drho_lower_bound(gram: &RatMatrix, rho_max: &Rat, exact_limit: u64) -> Result<DrhoBound> {
    let n = gram.rows();
    let mut diag = Rat::zero();
    let mut off = Rat::zero();
    for i in 0..n {
        for j in 0..n {
            let a = gram[(i, j)].abs();
            if i == j {
                diag = diag.max(a);
            } else {
                off = off.max(a);
            }
        }
    }
    let mut terms = Vec::new();
    let mut c = Rat::zero();
    for k in 2..=n {
        let (minor_sum, exact) = match minor_abs_sum_limited(gram, k, exact_limit) {
            Ok(s) => (s, true),
            Err(Error::TooManyMinors(_)) => (hadamard_minor_bound(n, k, &diag, &off), false),
            Err(e) => return Err(e),
        };
        let block = half_power_upper(&int(k as i64), k as u32);
        let contribution = block * &minor_sum * rat_pow(rho_max, k as u32 - 2);
        c += &contribution;
        terms.push(DrhoTerm { k, minor_sum, exact, contribution });
    }
    Ok(DrhoBound { c, rho_max: rho_max.clone(), terms })
}

/// Bound on `max |t_ij|` for the perturbation that carries the lattice
/// basis to a nearby configuration whose inner products deviate by at most
/// `dev`, normalized so that the perturbed determinant equals `det S`.
///
/// With `|Δdet| ≤ adj_sum·dev`, rescaling by `(1 - adj_sum·dev/n)⁻¹` costs
/// at most `max_gram · adj_sum·dev/n` per entry.
pub fn final_inequality(dev: &Rat, adj_sum: &Rat, max_gram: &Rat, n: usize) -> Result<Rat> {
    let shift = adj_sum * dev / int(n as i64);
    if shift >= Rat::one() {
        return Err(Error::PreconditionViolation(format!(
            "determinant shift {} is not below 1",
            exact_str(&shift)
        )));
    }
    Ok((dev + max_gram * &shift) / (Rat::one() - shift))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationBound {
    pub n: usize,
    pub min_norm: Rat,
    pub alpha: Rat,
    pub c: Rat,
    /// The ratio `(1 - ρα/m)(1 - cρ²)^(-1/n)` is below 1 on `(0, rho_max]`.
    pub rho_max: Rat,
    /// The ratio evaluated at `rho_max`, as an enclosure of its `n`-th power.
    pub ratio_pow_at_max: RatInterval,
}

/// Certifies `(1 - ρα/m)ⁿ < 1 - cρ²` for every `ρ ∈ (0, rho_max]`.
///
/// Both sides agree at `ρ = 0`; the difference divided by `ρ` is a
/// polynomial with value `nα/m` at zero, shown root free on the interval.
pub fn local_optimality_certificate(
    n: usize,
    min_norm: &Rat,
    alpha: &Rat,
    c: &Rat,
    rho_max: &Rat,
) -> Result<PerturbationBound> {
    if !rho_max.is_positive() || !alpha.is_positive() {
        return Err(Error::CertificationFailed(format!(
            "need α > 0 and ρ_max > 0, got α = {} and ρ_max = {}",
            exact_str(alpha),
            exact_str(rho_max)
        )));
    }
    let one = Rat::one();
    let slope = alpha / min_norm;
    let lhs = UniPoly::new(vec![one.clone(), -&slope]).pow(n as u32);
    let rhs = UniPoly::new(vec![one.clone(), Rat::zero(), -c]);
    if !(&one - &slope * rho_max).is_positive() || !rhs.eval(rho_max).is_positive() {
        return Err(Error::CertificationFailed("a factor changes sign before ρ_max".into()));
    }
    let diff = &rhs - &lhs;
    let h = UniPoly::new(diff.coeffs().iter().skip(1).cloned().collect());
    if !h.eval(&Rat::zero()).is_positive() {
        return Err(Error::CertificationFailed("no first-order decrease at ρ = 0".into()));
    }
    let domain = RatInterval::new(Rat::zero(), rho_max.clone());
    let width = rho_max / int(1 << 20);
    if let Some(root) = real_roots(&h, &domain, &width).first() {
        return Err(Error::CertificationFailed(format!(
            "ratio reaches 1 near ρ = {}",
            crate::arith::sci(&root.mid(), 6)
        )));
    }
    let at_max = lhs.eval(rho_max) / rhs.eval(rho_max);
    Ok(PerturbationBound {
        n,
        min_norm: min_norm.clone(),
        alpha: alpha.clone(),
        c: c.clone(),
        rho_max: rho_max.clone(),
        ratio_pow_at_max: RatInterval::point(at_max),
    })
}
