//! Intersection numbers from moment identities, and the error budget that
//! lets a perturbed configuration inherit them.
//!
//! For a code of size `N` that is a spherical design of high enough
//! strength, summing `⟨x,z⟩^i ⟨y,z⟩^j` over `z` gives
//! `Σ_{α,β} α^i β^j P_γ(α,β) = N·G_{i,j}(γ)` with `G` the sphere moment.
//! The entries with `α` or `β` equal to `±1` are Kronecker deltas and move
//! to the right-hand side.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::SchemeTable;
use crate::arith::consts::{pi_power, sqrt_interval};
use crate::arith::{exact_str, factorial, int, rat, rat_pow};
use crate::error::{Error, Result};
use crate::sphere_lp::{moment_coeff_bound, sphere_moment};
use crate::{Rat, RatInterval, RatMatrix};

const BITS: u32 = 256;

fn is_unit(x: &Rat) -> bool {
    x.abs() == Rat::one()
}

/// Labels other than `±1`, the unknown columns of the system.
fn unknowns(labels: &[Rat]) -> Vec<Rat> {
    labels.iter().filter(|x| !is_unit(x)).cloned().collect()
}

/// Rows `(i, j)` for `0 ≤ i, j < d`, columns `(α, β)` over the given labels,
/// entries `α^i β^j`, where `d` is the number of labels.
pub fn moment_matrix(labels: &[Rat]) -> RatMatrix {
    let d = labels.len();
    RatMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = ((r / d) as u32, (r % d) as u32);
        let (a, b) = (&labels[c / d], &labels[c % d]);
        rat_pow(a, i) * rat_pow(b, j)
    })
}

/// `max_i Σ_j |A_ij|`.
pub fn inverse_inf_norm(a: &RatMatrix) -> Result<Rat> {
    Ok(a.inverse().ok_or(Error::SingularSystem)?.inf_norm())
}

/// `‖A⁻¹‖_∞` for the moment matrix on exactly the labels given; `n` only
/// selects the ambient dimension for validation.
pub fn moment_matrix_inverse_norm(n: u32, labels: &[Rat]) -> Result<Rat> {
    if n < 2 {
        return Err(Error::Domain("dimension must be at least 2".into()));
    }
    inverse_inf_norm(&moment_matrix(labels))
}

/// `P_γ(α, β)` when `α` or `β` is `±1`.
fn boundary(gamma: &Rat, a: &Rat, b: &Rat) -> Rat {
    let delta = |x: &Rat, y: &Rat| if x == y { Rat::one() } else { Rat::zero() };
    if a == &Rat::one() {
        delta(b, gamma)
    } else if a == &-Rat::one() {
        delta(b, &-gamma)
    } else if b == &Rat::one() {
        delta(a, gamma)
    } else {
        delta(a, &-gamma)
    }
}

/// Solve the moment system for one class `γ ≠ ±1`. Returns the full block
/// `P_γ(α, β)` over `labels` (boundary entries included).
pub fn moment_system_solve(gamma: &Rat, n: u32, code_size: u64, labels: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    if is_unit(gamma) {
        return Err(Error::Domain("the classes ±1 are boundary data, not unknowns".into()));
    }
    if !labels.contains(gamma) {
        return Err(Error::Domain(format!("{} is not a label", exact_str(gamma))));
    }
    let u = unknowns(labels);
    let d = u.len();
    let big_n = Rat::from_integer(BigInt::from(code_size));
    let mut rhs = Vec::with_capacity(d * d);
    for i in 0..d as u32 {
        for j in 0..d as u32 {
            let mut v = &big_n * sphere_moment(i, j, n).eval(gamma);
            for a in labels {
                for b in labels {
                    if is_unit(a) || is_unit(b) {
                        v -= rat_pow(a, i) * rat_pow(b, j) * boundary(gamma, a, b);
                    }
                }
            }
            rhs.push(v);
        }
    }
    let sol = moment_matrix(&u).solve_unique(&rhs).ok_or(Error::SingularSystem)?;
    let mut block = vec![vec![Rat::zero(); labels.len()]; labels.len()];
    for (ai, a) in labels.iter().enumerate() {
        for (bi, b) in labels.iter().enumerate() {
            block[ai][bi] = if is_unit(a) || is_unit(b) {
                boundary(gamma, a, b)
            } else {
                let ua = u.iter().position(|x| x == a).expect("unknown label");
                let ub = u.iter().position(|x| x == b).expect("unknown label");
                sol[ua * d + ub].clone()
            };
        }
    }
    Ok(block)
}

/// Whole table from the moment system; the `±1` blocks follow from the
/// valencies `k_α = Σ_β P_γ(α, β)`.
pub fn moment_table(n: u32, code_size: u64, labels: &[Rat]) -> Result<SchemeTable> {
    let mut t = SchemeTable::zeros(labels.to_vec());
    let mut valency: Option<Vec<Rat>> = None;
    for (gi, g) in labels.iter().enumerate() {
        if is_unit(g) {
            continue;
        }
        let block = moment_system_solve(g, n, code_size, labels)?;
        valency.get_or_insert_with(|| block.iter().map(|row| row.iter().sum()).collect());
        t.p[gi] = block;
    }
    let k = valency.ok_or_else(|| Error::Domain("no class other than ±1".into()))?;
    for (gi, g) in labels.iter().enumerate() {
        if !is_unit(g) {
            continue;
        }
        for (ai, a) in labels.iter().enumerate() {
            // γ = 1: z determines both inner products; γ = -1: they are opposite
            if let Some(bi) = labels.iter().position(|b| b == &(a * g)) {
                t.p[gi][ai][bi] = k[ai].clone();
            }
        }
    }
    Ok(t)
}

/// `√vol(S^{n-1}) = √(2π^{n/2} / (n/2 - 1)!)` for even `n`.
pub fn sphere_volume_sqrt(n: u32) -> Result<RatInterval> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Domain("only even dimensions are supported".into()));
    }
    let c = int(2) / Rat::from_integer(factorial(n / 2 - 1));
    Ok(sqrt_interval(&pi_power(n / 2, BITS).scale(&c), BITS))
}

/// Budget for dimensions 24 and 8 with their standard moment systems:
/// degrees up to 4 around `{0, ±1/4, ±1/2}`, and up to 2 around `{0, ±1/2}`.
pub fn perturbation_budget(n: u32, sigma: &Rat, design_defect: &Rat, code_size: u64) -> Result<RatInterval> {
    let (deg, centers): (u32, Vec<Rat>) = match n {
        24 => (4, [0, 1, -1, 2, -2].iter().map(|&k| rat(k, 4)).collect()),
        8 => (2, [0, 1, -1].iter().map(|&k| rat(k, 2)).collect()),
        _ => return Err(Error::Domain(format!("no standard moment system for n = {n}"))),
    };
    perturbation_budget_with(n, sigma, design_defect, code_size, deg, &centers)
}

/// `N(1+2σ)σ + Kσ + D·√vol(S^{n-1})` with `K` the moment coefficient bound:
/// how far the moment identities can be violated by a code whose inner
/// products are within `σ` of the labels and whose design defect is `D`.
pub fn perturbation_budget_with(
    n: u32,
    sigma: &Rat,
    design_defect: &Rat,
    code_size: u64,
    max_deg: u32,
    centers: &[Rat],
) -> Result<RatInterval> {
    if sigma >= &rat(1, 10) || sigma.is_negative() {
        return Err(Error::SigmaTooLarge(exact_str(sigma)));
    }
    if design_defect.is_negative() {
        return Err(Error::Domain("negative design defect".into()));
    }
    let big_n = Rat::from_integer(BigInt::from(code_size));
    let k = moment_coeff_bound(n, code_size, max_deg, centers);
    let exact = &big_n * (Rat::one() + int(2) * sigma) * sigma + k * sigma;
    if design_defect.is_zero() {
        return Ok(RatInterval::point(exact));
    }
    let vol = sphere_volume_sqrt(n)?.scale(design_defect);
    Ok(RatInterval::new(&exact + vol.lo(), &exact + vol.hi()))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{e8_table, leech_table};
    use super::*;
    use crate::arith::{dec, to_f64};
    use crate::scheme::{e8_labels, leech_labels};
    use proptest::prelude::*;

    #[test]
    fn leech_examples() {
        let l = leech_labels();
        let p0 = moment_system_solve(&Rat::zero(), 24, 196560, &l).unwrap();
        let pos = |x: Rat| l.iter().position(|y| *y == x).unwrap();
        assert_eq!(p0[pos(rat(1, 2))][pos(rat(1, 4))], int(1024));
        let ph = moment_system_solve(&rat(1, 2), 24, 196560, &l).unwrap();
        assert_eq!(ph[pos(Rat::zero())][pos(Rat::zero())], int(49896));
    }

    #[test]
    fn moment_tables_equal_direct_counts() {
        assert_eq!(&moment_table(24, 196560, &leech_labels()).unwrap(), leech_table());
        assert_eq!(&moment_table(8, 240, &e8_labels()).unwrap(), e8_table());
    }

    #[test]
    fn unit_classes_are_not_unknowns() {
        assert!(moment_system_solve(&Rat::one(), 24, 196560, &leech_labels()).is_err());
        assert!(moment_system_solve(&rat(1, 3), 24, 196560, &leech_labels()).is_err());
    }

    #[test]
    fn inverse_norms() {
        let l24: Vec<Rat> = [0, 1, -1, 2, -2].iter().map(|&k| rat(k, 4)).collect();
        assert_eq!(moment_matrix_inverse_norm(24, &l24).unwrap(), int(7225));
        let l8: Vec<Rat> = [0, 1, -1].iter().map(|&k| rat(k, 2)).collect();
        assert_eq!(moment_matrix_inverse_norm(8, &l8).unwrap(), int(25));
        // the five-label set {0, ±1/2, ±1} with degrees up to 4
        assert_eq!(moment_matrix_inverse_norm(8, &e8_labels()).unwrap(), int(100));
        assert_eq!(inverse_inf_norm(&RatMatrix::from_rows(vec![vec![int(2)]])).unwrap(), rat(1, 2));
        // repeated label: singular
        assert_eq!(moment_matrix_inverse_norm(8, &[int(0), int(0)]), Err(Error::SingularSystem));
    }

    #[test]
    fn volume_factors() {
        // π^2/√3 and π^6/√19958400
        let v8 = to_f64(&sphere_volume_sqrt(8).unwrap().mid());
        assert!((v8 - std::f64::consts::PI.powi(2) / 3f64.sqrt()).abs() < 1e-12);
        let v24 = to_f64(&sphere_volume_sqrt(24).unwrap().mid());
        assert!((v24 - std::f64::consts::PI.powi(6) / 19958400f64.sqrt()).abs() < 1e-15);
        assert!(sphere_volume_sqrt(7).is_err());
    }

    #[test]
    fn published_budgets() {
        let b = perturbation_budget(24, &dec("6.43801e-12"), &dec("2.50193e-5"), 196560).unwrap();
        assert!(b.hi() < &dec("6.7023e-6"));
        assert!(b.hi() * int(7225) < dec("0.05"));
        let b = perturbation_budget(8, &dec("8.89e-6"), &dec("3.48e-4"), 240).unwrap();
        assert!(b.hi() < &dec("4.4e-3"));
        assert!(b.hi() * int(100) <= dec("0.44"));
    }

    #[test]
    fn budget_edge_cases() {
        assert_eq!(perturbation_budget(24, &Rat::zero(), &Rat::zero(), 196560).unwrap(), RatInterval::point(Rat::zero()));
        assert!(matches!(perturbation_budget(24, &rat(1, 10), &Rat::zero(), 196560), Err(Error::SigmaTooLarge(_))));
        assert!(perturbation_budget(16, &Rat::zero(), &Rat::zero(), 4320).is_err());
    }

    proptest! {
        #[test]
        fn budget_grows_with_sigma(a in 0u32..1000, b in 0u32..1000) {
            let (lo, hi) = (a.min(b), a.max(b));
            let s = |k: u32| rat(k as i64, 1_000_000);
            let d = dec("1e-5");
            let x = perturbation_budget(8, &s(lo), &d, 240).unwrap();
            let y = perturbation_budget(8, &s(hi), &d, 240).unwrap();
            prop_assert!(x.lo() <= y.lo() && x.hi() <= y.hi());
        }
    }
}
