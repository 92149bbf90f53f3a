//! Explicit minimal vectors used by the perfection and orthogonal-frame
//! arguments, with membership and inner-product self-checks.

use num_bigint::BigInt;
use num_traits::Signed;

use super::LatticeData;
use crate::Rat;

#[derive(Clone, Debug)]
pub struct NamedVector {
    pub name: String,
    /// Scaled coordinates.
    pub coords: Vec<BigInt>,
    /// Coefficients in the lattice basis, when the vector is in the lattice.
    pub coeffs: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct Witnesses {
    /// `u, v, w1, w2, w3` with `⟨u,v⟩ = 1`, `⟨u,w_i⟩ = 2`, `⟨v,w_i⟩ = 0`,
    /// `⟨w_i,w_j⟩ = 0`. Leech only.
    pub config: Vec<NamedVector>,
    /// Orthogonal frame `w1, v1, w3, v3, ...` of minimal vectors.
    pub frame: Vec<NamedVector>,
}

impl Witnesses {
    pub fn all(&self) -> impl Iterator<Item = &NamedVector> {
        self.config.iter().chain(&self.frame)
    }

    /// Largest absolute basis coefficient, or `None` if some witness is not
    /// a lattice vector.
    pub fn max_coefficient(&self) -> Option<BigInt> {
        let mut best = BigInt::default();
        for v in self.all() {
            for x in v.coeffs.as_ref()? {
                best = best.max(x.abs());
            }
        }
        Some(best)
    }
}

fn named(l: &LatticeData, name: String, coords: Vec<i64>) -> NamedVector {
    let coords: Vec<BigInt> = coords.into_iter().map(BigInt::from).collect();
    let coeffs = l.coefficients_of(&coords);
    NamedVector { name, coords, coeffs }
}

/// Pairs `(x_i + x_{i+1}) h` and `(x_i - x_{i+1}) h` for odd `i`, where `h`
/// is the scaled height of a minimal vector supported on two coordinates.
fn frame(l: &LatticeData, h: i64) -> Vec<NamedVector> {
    let mut out = Vec::new();
    for i in (0..l.n).step_by(2) {
        let mut w = vec![0; l.n];
        w[i] = h;
        w[i + 1] = h;
        let mut v = w.clone();
        v[i + 1] = -h;
        out.push(named(l, format!("w{}", i + 1), w));
        out.push(named(l, format!("v{}", i + 1), v));
    }
    out
}

pub fn leech_witness_vectors(l: &LatticeData) -> Witnesses {
    let mut u = vec![1; 24];
    u[23] = -3;
    let mut v = vec![0; 24];
    v[22] = -4;
    v[23] = -4;
    let mut w1 = vec![0; 24];
    w1[..8].fill(2);
    let mut w2 = vec![0; 24];
    w2[22] = 4;
    w2[23] = -4;
    let mut w3 = vec![0; 24];
    for k in [8, 9, 12, 13, 16, 17, 20, 21] {
        w3[k] = 2;
    }
    let config = [("u", u), ("v", v), ("w1", w1), ("w2", w2), ("w3", w3)]
        .into_iter()
        .map(|(name, c)| named(l, name.to_string(), c))
        .collect();
    Witnesses { config, frame: frame(l, 4) }
}

pub fn e8_witness_vectors(l: &LatticeData) -> Witnesses {
    Witnesses { config: Vec::new(), frame: frame(l, 2) }
}

/// Gram matrix of a list of named vectors.
pub fn gram_of(l: &LatticeData, vs: &[NamedVector]) -> Vec<Vec<Rat>> {
    vs.iter().map(|a| vs.iter().map(|b| l.inner(&a.coords, &b.coords)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::lattice::{e8_lattice, leech_lattice};
    use num_traits::Zero;

    #[test]
    fn leech_configuration_inner_products() {
        let l = leech_lattice();
        let w = leech_witness_vectors(&l);
        let g = gram_of(&l, &w.config);
        for i in 0..5 {
            assert_eq!(g[i][i], int(4));
        }
        assert_eq!(g[0][1], int(1));
        for i in 2..5 {
            assert_eq!(g[0][i], int(2));
            assert_eq!(g[1][i], int(0));
            for j in i + 1..5 {
                assert_eq!(g[i][j], int(0));
            }
        }
    }

    #[test]
    fn frames_are_orthogonal_bases_of_minimal_vectors() {
        for (l, m) in [(leech_lattice(), 4), (e8_lattice(), 2)] {
            let w = if l.n == 24 { leech_witness_vectors(&l) } else { e8_witness_vectors(&l) };
            assert_eq!(w.frame.len(), l.n);
            let g = gram_of(&l, &w.frame);
            for i in 0..l.n {
                for j in 0..l.n {
                    assert_eq!(g[i][j], if i == j { int(m) } else { Rat::zero() });
                }
            }
        }
    }

    #[test]
    fn witnesses_lie_in_the_lattice_within_the_coefficient_bound() {
        let l = leech_lattice();
        let w = leech_witness_vectors(&l);
        assert!(w.all().all(|v| v.coeffs.is_some()), "some witness is not a lattice vector");
        assert!(w.max_coefficient().unwrap() <= BigInt::from(156));
        let e = e8_lattice();
        let w8 = e8_witness_vectors(&e);
        assert!(w8.all().all(|v| v.coeffs.is_some()));
    }
}
