//! The Gram matrix of the code, scaled by the eutaxy constant, is an
//! orthogonal projection of rank `n`.
//!
//! With `A_α` the adjacency matrix of class `α` (so `A_1 = I`), the matrix
//! `P = mC Σ_α α A_α` has entries `C⟨u_i, u_j⟩` for minimal norm `m`.
//! Since `A_α A_β = Σ_γ P_γ(α,β) A_γ`, `P² = P` reduces to one scalar
//! identity per class.

use num_traits::{One, Zero};

use super::SchemeTable;
use crate::arith::exact_str;
use crate::lattice::MinVectorSet;
use crate::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    pub passed: bool,
    /// `(γ, coefficient of A_γ in P², coefficient in P)` for each failing class.
    pub mismatches: Vec<(Rat, Rat, Rat)>,
    /// `m·N·C`.
    pub trace: Rat,
}

impl ProjectionReport {
    pub fn witness(&self) -> Option<String> {
        self.mismatches.first().map(|(g, got, want)| {
            format!("coefficient of class {} is {} in P² but {} in P", exact_str(g), exact_str(got), exact_str(want))
        })
    }
}

pub fn bose_mesner_projection_check(
    table: &SchemeTable,
    n: u32,
    code_size: u64,
    c: &Rat,
    min_norm: &Rat,
) -> ProjectionReport {
    let mc = min_norm * c;
    let mut mismatches = Vec::new();
    for (gi, g) in table.labels.iter().enumerate() {
        let mut sq = Rat::zero();
        for (ai, a) in table.labels.iter().enumerate() {
            for (bi, b) in table.labels.iter().enumerate() {
                sq += a * b * &table.p[gi][ai][bi];
            }
        }
        let got = &mc * &mc * sq;
        let want = &mc * g;
        if got != want {
            mismatches.push((g.clone(), got, want));
        }
    }
    let trace = &mc * Rat::from_integer(code_size.into());
    let passed = mismatches.is_empty() && trace == Rat::from_integer(n.into());
    ProjectionReport { passed, mismatches, trace }
}

/// `C Σ u uᵀ = I`, i.e. `⟨x,x⟩ = C Σ ⟨x,u⟩²` for every `x`.
pub fn eutaxy_check(minvecs: &MinVectorSet, c: &Rat) -> bool {
    let Some(first) = minvecs.coords.first() else {
        return false;
    };
    let n = first.len();
    let mut sum = vec![0i128; n * n];
    for v in &minvecs.coords {
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            for j in 0..n {
                sum[i * n + j] += (v[i] * v[j]) as i128;
            }
        }
    }
    // coordinates carry a factor √scale_sq
    let s = Rat::from_integer(minvecs.scale_sq.into());
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = c * Rat::from_integer(sum[i * n + j].into()) / &s;
            e == if i == j { Rat::one() } else { Rat::zero() }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{e8_table, leech_table};
    use super::*;
    use crate::arith::{int, rat};
    use crate::lattice::{e8_lattice, enumerate_short_vectors, leech_lattice, EnumConfig};

    #[test]
    fn leech_gram_is_a_rank_24_projection() {
        let r = bose_mesner_projection_check(leech_table(), 24, 196560, &rat(1, 32760), &int(4));
        assert!(r.passed, "{:?}", r.witness());
        assert_eq!(r.trace, int(24));
    }

    #[test]
    fn e8_gram_is_a_rank_8_projection() {
        let r = bose_mesner_projection_check(e8_table(), 8, 240, &rat(1, 60), &int(2));
        assert!(r.passed, "{:?}", r.witness());
        assert_eq!(r.trace, int(8));
    }

    #[test]
    fn corrupted_entry_is_caught_with_its_class() {
        let mut t = e8_table().clone();
        let h = rat(1, 2);
        let v = t.get(&h, &h, &h).unwrap() + int(1);
        t.set(&h, &h, &h, v);
        let r = bose_mesner_projection_check(&t, 8, 240, &rat(1, 60), &int(2));
        assert!(!r.passed);
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!(r.mismatches[0].0, h);
        assert!(r.witness().unwrap().contains("class 1/2"));
    }

    #[test]
    fn wrong_constant_fails() {
        let r = bose_mesner_projection_check(e8_table(), 8, 240, &rat(1, 61), &int(2));
        assert!(!r.passed);
    }

    #[test]
    fn eutaxy_constants() {
        let e8 = enumerate_short_vectors(&e8_lattice(), &int(2), &EnumConfig::default()).unwrap();
        assert!(eutaxy_check(&e8, &rat(1, 60)));
        assert!(!eutaxy_check(&e8, &rat(1, 61)));
        let leech = enumerate_short_vectors(&leech_lattice(), &int(4), &EnumConfig::default()).unwrap();
        assert!(eutaxy_check(&leech, &rat(1, 32760)));
        assert!(!eutaxy_check(&leech, &rat(1, 32761)));
    }

    #[test]
    fn eutaxy_depends_on_the_subset() {
        // one vector from each antipodal pair is still eutactic, a smaller
        // subset is not
        let mut e8 = enumerate_short_vectors(&e8_lattice(), &int(2), &EnumConfig::default()).unwrap();
        e8.coords.truncate(120);
        assert!(eutaxy_check(&e8, &rat(1, 30)));
        e8.coords.truncate(100);
        assert!(!eutaxy_check(&e8, &rat(1, 25)));
    }
}
