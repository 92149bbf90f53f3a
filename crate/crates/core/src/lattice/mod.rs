//! Lattices stored as integer bases with a common `1/√s` factor, so that
//! coordinates, inner products and Gram entries stay rational.

mod enumerate;
pub mod witness;

pub use witness::{e8_witness_vectors, gram_of, leech_witness_vectors, NamedVector, Witnesses};

pub use enumerate::{
    enumerate_gram, enumerate_short_vectors, enumerate_with, gram_shells, theta_partial, EnumConfig, EnumStats, MinVectorSet,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::consts::sqrt_interval;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{Rat, RatInterval, RatMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeData {
    pub n: usize,
    /// Rows are the basis vectors multiplied by `√scale_sq`.
    pub basis: Vec<Vec<BigInt>>,
    pub scale_sq: BigInt,
    pub gram: RatMatrix,
    pub covolume: RatInterval,
}

impl LatticeData {
    pub fn new(basis: Vec<Vec<BigInt>>, scale_sq: BigInt) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("basis must be a nonempty square matrix".into()));
        }
        if !scale_sq.is_positive() {
            return Err(Error::Domain("scale_sq must be positive".into()));
        }
        let s = Rat::from_integer(scale_sq.clone());
        let gram = Matrix::from_fn(n, n, |i, j| {
            let dot: BigInt = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
            Rat::from_integer(dot) / &s
        });
        let det = gram.det();
        if !det.is_positive() {
            return Err(Error::SingularBasis);
        }
        let covolume = sqrt_interval(&RatInterval::point(det), 128);
        Ok(LatticeData { n, basis, scale_sq, gram, covolume })
    }

    pub fn basis_matrix(&self) -> RatMatrix {
        Matrix::from_fn(self.n, self.n, |i, j| Rat::from_integer(self.basis[i][j].clone()))
    }

    /// Squared length of the lattice vector with the given basis coefficients.
    pub fn norm_of(&self, coeffs: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += &self.gram[(i, j)] * Rat::from_integer((coeffs[i] * coeffs[j]).into());
            }
        }
        acc
    }

    /// Scaled coordinates `c·B` of the vector with coefficients `c`.
    pub fn coords_of(&self, coeffs: &[i64]) -> Vec<BigInt> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| &self.basis[i][j] * coeffs[i]).sum())
            .collect()
    }

    /// Basis coefficients of a vector given in scaled coordinates, or `None`
    /// if it is not in the lattice.
    pub fn coefficients_of(&self, coords: &[BigInt]) -> Option<Vec<BigInt>> {
        let bt = self.basis_matrix().transpose();
        let x: Vec<Rat> = coords.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let c = bt.solve_unique(&x)?;
        c.iter().all(|v| v.is_integer()).then(|| c.into_iter().map(|v| v.to_integer()).collect())
    }

    /// Inner product of two vectors in scaled coordinates.
    pub fn inner(&self, a: &[BigInt], b: &[BigInt]) -> Rat {
        let dot: BigInt = a.iter().zip(b).map(|(x, y)| x * y).sum();
        Rat::new(dot, self.scale_sq.clone())
    }

    /// Common denominator of the Gram entries and the integer Gram matrix it
    /// produces.
    pub fn integer_gram(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        integer_form(&self.gram)
    }
}

/// `(d, d·G)` with `d` the least common denominator of `G`.
pub fn integer_form(g: &RatMatrix) -> (BigInt, Vec<Vec<BigInt>>) {
    let mut den = BigInt::one();
    for row in g.to_rows() {
        for x in row {
            den = num_integer::Integer::lcm(&den, x.denom());
        }
    }
    let d = Rat::from_integer(den.clone());
    let rows = g.to_rows().into_iter().map(|r| r.into_iter().map(|x| (x * &d).to_integer()).collect()).collect();
    (den, rows)
}

/// The Leech lattice in the basis of minimal vectors used throughout,
/// with `scale_sq = 8`.
pub fn leech_lattice() -> LatticeData {
    parse_lattice(include_str!("data/leech_basis.txt")).expect("bundled Leech basis")
}

/// The Gram matrix of [`leech_lattice`] as published, kept separately so the
/// computed one can be compared against it.
pub fn leech_reference_gram() -> Vec<Vec<i64>> {
    include_str!("data/leech_gram.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|x| x.parse().expect("integer")).collect())
        .collect()
}

/// E8 in a basis of minimal vectors, stored doubled with `scale_sq = 4`.
pub fn e8_lattice() -> LatticeData {
    let mut rows = vec![vec![0i64; 8]; 8];
    rows[0][0] = 2;
    rows[0][1] = 2;
    rows[1][0] = 2;
    rows[1][1] = -2;
    for i in 2..7 {
        rows[i][i - 1] = 2;
        rows[i][i] = -2;
    }
    rows[7] = vec![1; 8];
    let basis = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    LatticeData::new(basis, BigInt::from(4)).expect("E8 basis is nonsingular")
}

/// Exact inverse of the true basis. `scaled` holds `√s · B⁻¹`, so the real
/// entries are `scaled / √s`.
#[derive(Clone, Debug)]
pub struct BasisInverse {
    pub scaled: RatMatrix,
    pub max_abs_scaled: Rat,
    pub scale_sq: BigInt,
}

pub fn basis_inverse(l: &LatticeData) -> Result<BasisInverse> {
    let inv = l.basis_matrix().inverse().ok_or(Error::SingularBasis)?;
    let s = Rat::from_integer(l.scale_sq.clone());
    let scaled = inv.map(|x| x * &s);
    let max_abs_scaled = scaled.max_abs_entry();
    Ok(BasisInverse { scaled, max_abs_scaled, scale_sq: l.scale_sq.clone() })
}

/// Bound `n · max|B⁻¹| · |u|_∞` on the basis coefficients of any vector whose
/// scaled coordinates are at most `scaled_sup` in absolute value. The two
/// `1/√s` factors combine into one rational `1/s`.
pub fn coefficient_bound(l: &LatticeData, scaled_sup: &Rat) -> Result<Rat> {
    let inv = basis_inverse(l)?;
    Ok(Rat::from_integer(l.n.into()) * inv.max_abs_scaled * scaled_sup / Rat::from_integer(l.scale_sq.clone()))
}

/// Lattice file: `n scale_sq` on the first line, then `n` rows of `n`
/// integers. `#` starts a comment.
pub fn parse_lattice(text: &str) -> Result<LatticeData> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (no, head) = lines.next().ok_or_else(|| Error::Parse("empty lattice file".into()))?;
    let head: Vec<&str> = head.split_whitespace().collect();
    let bad = |no: usize, what: &str| Error::Parse(format!("line {no}: {what}"));
    if head.len() != 2 {
        return Err(bad(no, "expected `n scale_sq`"));
    }
    let n: usize = head[0].parse().map_err(|_| bad(no, "bad dimension"))?;
    let s: BigInt = head[1].parse().map_err(|_| bad(no, "bad scale"))?;
    let mut basis = Vec::with_capacity(n);
    for (no, l) in lines {
        let row = l
            .split_whitespace()
            .map(|x| x.parse::<BigInt>().map_err(|_| bad(no, "non-integer entry")))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(bad(no, &format!("expected {n} entries, found {}", row.len())));
        }
        basis.push(row);
    }
    if basis.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", basis.len())));
    }
    LatticeData::new(basis, s)
}

pub fn write_lattice(l: &LatticeData) -> String {
    let mut out = format!("{} {}\n", l.n, l.scale_sq);
    for row in &l.basis {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
