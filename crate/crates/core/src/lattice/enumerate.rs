//! Short-vector enumeration over the Gram form.
//!
//! Depth-first Fincke–Pohst search on a floating Cholesky decomposition.
//! The float bound carries a relative slack, so it can only over-include;
//! every candidate is then checked with the exact integer Gram matrix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{integer_form, LatticeData};
use crate::error::{Error, Result};
use crate::{Rat, RatMatrix};

#[derive(Clone, Debug)]
pub struct EnumConfig {
    /// Search nodes allowed before giving up with `BoundTooLarge`.
    pub node_limit: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { node_limit: 100_000_000 }
    }
}

/// All nonzero vectors up to a norm bound, sorted lexicographically by
/// scaled coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct MinVectorSet {
    pub coeffs: Vec<Vec<i64>>,
    pub coords: Vec<Vec<i64>>,
    /// Index into `shells` for each vector.
    pub shell_of: Vec<usize>,
    /// `(norm, count)` in increasing norm.
    pub shells: Vec<(Rat, usize)>,
    /// `√scale_sq` factor of `coords`.
    pub scale_sq: i64,
}

impl MinVectorSet {
    pub fn count(&self) -> usize {
        self.coords.len()
    }

    /// The common norm when all vectors lie on one shell.
    pub fn norm(&self) -> Option<&Rat> {
        match self.shells.as_slice() {
            [(m, _)] => Some(m),
            _ => None,
        }
    }

    /// Subset on a single shell.
    pub fn shell(&self, norm: &Rat) -> MinVectorSet {
        let Some(k) = self.shells.iter().position(|(m, _)| m == norm) else {
            return MinVectorSet { shells: vec![], ..self.filtered(|_| false) };
        };
        let mut out = self.filtered(|i| self.shell_of[i] == k);
        out.shells = vec![self.shells[k].clone()];
        out.shell_of = vec![0; out.coords.len()];
        out
    }

    fn filtered(&self, keep: impl Fn(usize) -> bool) -> MinVectorSet {
        let idx: Vec<usize> = (0..self.coords.len()).filter(|&i| keep(i)).collect();
        MinVectorSet {
            coeffs: idx.iter().map(|&i| self.coeffs[i].clone()).collect(),
            coords: idx.iter().map(|&i| self.coords[i].clone()).collect(),
            shell_of: idx.iter().map(|&i| self.shell_of[i]).collect(),
            shells: self.shells.clone(),
            scale_sq: self.scale_sq,
        }
    }

    /// Scaled inner product `scale_sq · ⟨x_i, x_j⟩`.
    pub fn scaled_inner(&self, i: usize, j: usize) -> i64 {
        self.coords[i].iter().zip(&self.coords[j]).map(|(a, b)| a * b).sum()
    }

    /// One vector per line, scaled integer coordinates.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for v in &self.coords {
            let cells: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

pub struct EnumStats {
    pub nodes: u64,
    /// Denominator of the integer Gram form used for the exact check.
    pub den: i128,
}

/// Visit every nonzero `x` with `Q(x) ≤ bound`, passing its coefficients and
/// `den · Q(x)` as an integer.
pub fn enumerate_with(
    l: &LatticeData,
    bound: &Rat,
    cfg: &EnumConfig,
    visit: impl FnMut(&[i64], i128),
) -> Result<EnumStats> {
    enumerate_gram(&l.gram, bound, cfg, visit)
}

/// Same as [`enumerate_with`] for a bare positive definite Gram matrix.
pub fn enumerate_gram(
    gram: &RatMatrix,
    bound: &Rat,
    cfg: &EnumConfig,
    mut visit: impl FnMut(&[i64], i128),
) -> Result<EnumStats> {
    let n = gram.rows();
    let (den, g) = integer_form(gram);
    let too_big = || Error::Domain("Gram entries exceed 64 bits".into());
    let den = den.to_i128().ok_or_else(too_big)?;
    let g: Vec<Vec<i128>> = g
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().ok_or_else(too_big)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    // den·Q(x) ≤ limit, with limit = floor(den·bound)
    let scaled = bound * Rat::from_integer(BigInt::from(den));
    if scaled < Rat::from_integer(0.into()) {
        return Ok(EnumStats { nodes: 0, den });
    }
    let limit = scaled.floor().to_integer().to_i128().ok_or_else(too_big)?;

    let q = cholesky(&g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<Vec<f64>>>())
        .ok_or(Error::Domain("Gram matrix is not positive definite".into()))?;
    let budget = limit as f64 * (1.0 + 1e-9) + 1e-9;

    let mut x = vec![0i64; n];
    let mut nodes = 0u64;
    let mut search = Search { n, q: &q, g: &g, limit, x: &mut x, nodes: &mut nodes, node_limit: cfg.node_limit };
    search.level(n - 1, budget, &mut visit)?;
    Ok(EnumStats { nodes, den })
}

struct Search<'a> {
    n: usize,
    q: &'a [Vec<f64>],
    g: &'a [Vec<i128>],
    limit: i128,
    x: &'a mut [i64],
    nodes: &'a mut u64,
    node_limit: u64,
}

impl Search<'_> {
    fn level(&mut self, i: usize, remaining: f64, visit: &mut impl FnMut(&[i64], i128)) -> Result<()> {
        let u: f64 = (i + 1..self.n).map(|j| self.q[i][j] * self.x[j] as f64).sum();
        let rad = (remaining.max(0.0) / self.q[i][i]).sqrt();
        let lo = (-u - rad).ceil() as i64;
        let hi = (-u + rad).floor() as i64;
        for v in lo..=hi {
            *self.nodes += 1;
            if *self.nodes > self.node_limit {
                return Err(Error::BoundTooLarge { projected: *self.nodes, cap: self.node_limit });
            }
            self.x[i] = v;
            let t = v as f64 + u;
            let rest = remaining - self.q[i][i] * t * t;
            if i == 0 {
                if self.x.iter().any(|&c| c != 0) {
                    let qx = quad(self.g, self.x);
                    if qx <= self.limit {
                        visit(self.x, qx);
                    }
                }
            } else {
                self.level(i - 1, rest, visit)?;
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

fn quad(g: &[Vec<i128>], x: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in g.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let s: i128 = row.iter().zip(x).map(|(a, &b)| a * b as i128).sum();
        acc += s * x[i] as i128;
    }
    acc
}

/// `Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²`.
fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut q = a.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
        if q[i][i] <= 0.0 {
            return None;
        }
    }
    Some(q)
}

pub fn enumerate_short_vectors(l: &LatticeData, bound: &Rat, cfg: &EnumConfig) -> Result<MinVectorSet> {
    let mut found: Vec<(Vec<i64>, i128)> = Vec::new();
    let stats = enumerate_with(l, bound, cfg, |x, q| found.push((x.to_vec(), q)))?;
    let basis: Vec<Vec<i64>> = l
        .basis
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or(Error::Domain("basis entries exceed 64 bits".into()))).collect())
        .collect::<Result<_>>()?;
    let scale_sq = l.scale_sq.to_i64().ok_or(Error::Domain("scale exceeds 64 bits".into()))?;
    let n = l.n;
    let mut rows: Vec<(Vec<i64>, Vec<i64>, i128)> = found
        .into_iter()
        .map(|(c, q)| {
            let coords = (0..n).map(|j| (0..n).map(|i| c[i] * basis[i][j]).sum()).collect();
            (coords, c, q)
        })
        .collect();
    rows.sort_unstable();
    let mut norms: BTreeMap<i128, usize> = BTreeMap::new();
    for (_, _, q) in &rows {
        *norms.entry(*q).or_default() += 1;
    }
    let index: BTreeMap<i128, usize> = norms.keys().enumerate().map(|(k, &q)| (q, k)).collect();
    let shells = norms.iter().map(|(&q, &c)| (Rat::new(q.into(), stats.den.into()), c)).collect();
    let shell_of = rows.iter().map(|(_, _, q)| index[q]).collect();
    let (coords, coeffs) = rows.into_iter().map(|(x, c, _)| (x, c)).unzip();
    Ok(MinVectorSet { coeffs, coords, shell_of, shells, scale_sq })
}

/// Shell sizes `(norm, count)` for all nonzero norms up to `bound`, without
/// storing the vectors.
pub fn theta_partial(l: &LatticeData, bound: &Rat, cfg: &EnumConfig) -> Result<Vec<(Rat, u64)>> {
    gram_shells(&l.gram, bound, cfg)
}

/// [`theta_partial`] for a bare Gram matrix.
pub fn gram_shells(gram: &RatMatrix, bound: &Rat, cfg: &EnumConfig) -> Result<Vec<(Rat, u64)>> {
    let mut counts: BTreeMap<i128, u64> = BTreeMap::new();
    let stats = enumerate_gram(gram, bound, cfg, |_, q| *counts.entry(q).or_default() += 1)?;
    Ok(counts.into_iter().map(|(q, c)| (Rat::new(q.into(), stats.den.into()), c)).collect())
}
