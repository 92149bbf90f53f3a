//! Association schemes carried by the minimal vectors of a lattice:
//! pair classification, intersection numbers by direct count and by the
//! moment system, the projection and eutaxy identities, and the interval
//! chains that pin down inner products of perturbed configurations.

mod chains;
mod moments;
mod projection;

pub use chains::{
    basis_transfer_check, first_pass_sigma, inner_product_chain, sigma_chain, BasisTransfer, ChainEntry,
    FirstPassSigma, InnerProductChain, SigmaChain, TransferParams,
};
pub use moments::{
    inverse_inf_norm, moment_matrix, moment_matrix_inverse_norm, moment_system_solve, moment_table,
    perturbation_budget, perturbation_budget_with, sphere_volume_sqrt,
};
pub use projection::{bose_mesner_projection_check, eutaxy_check, ProjectionReport};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::arith::{exact_str, int, rat};
use crate::error::{Error, Result};
use crate::lattice::MinVectorSet;
use crate::Rat;

/// Unit vectors `u/|u|` for one shell of lattice vectors.
///
/// The coordinates are the scaled integer coordinates of the shell, so the
/// unit inner product of a pair is `scaled_inner / scaled_norm` exactly.
/// The full Gram matrix is never stored; entries are produced on demand.
#[derive(Clone, Debug)]
pub struct SphericalCode {
    pub dim: usize,
    /// Row-major `count × dim` scaled coordinates.
    data: Vec<i32>,
    /// Common value of `scale_sq · |u|²`.
    pub scaled_norm: i64,
    /// Norm of the underlying lattice vectors.
    pub norm: Rat,
}

impl SphericalCode {
    /// Code from a single shell of a vector set.
    pub fn from_min_vectors(v: &MinVectorSet) -> Result<Self> {
        let norm = v.norm().ok_or_else(|| Error::Domain("vector set spans several shells".into()))?.clone();
        let mut code = Self::from_vectors(&v.coords)?;
        code.norm = norm;
        Ok(code)
    }

    /// Code from integer vectors of one common norm.
    pub fn from_vectors(vs: &[Vec<i64>]) -> Result<Self> {
        let first = vs.first().ok_or_else(|| Error::Domain("empty code".into()))?;
        let dim = first.len();
        let scaled_norm: i64 = first.iter().map(|x| x * x).sum();
        if scaled_norm == 0 {
            return Err(Error::Domain("zero vector in code".into()));
        }
        let mut data = Vec::with_capacity(vs.len() * dim);
        for v in vs {
            if v.len() != dim || v.iter().map(|x| x * x).sum::<i64>() != scaled_norm {
                return Err(Error::Domain("code vectors must share one dimension and norm".into()));
            }
            for &x in v {
                data.push(i32::try_from(x).map_err(|_| Error::Domain("coordinate too large".into()))?);
            }
        }
        Ok(SphericalCode { dim, data, scaled_norm, norm: Rat::from_integer(scaled_norm.into()) })
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn row(&self, i: usize) -> &[i32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    fn scaled_inner(&self, i: usize, j: usize) -> i64 {
        self.row(i).iter().zip(self.row(j)).map(|(a, b)| (a * b) as i64).sum()
    }

    /// `⟨u_i/|u_i|, u_j/|u_j|⟩`.
    pub fn unit_inner(&self, i: usize, j: usize) -> Rat {
        rat(self.scaled_inner(i, j), self.scaled_norm)
    }

    /// Whether `-u` is in the code for every `u`.
    pub fn is_antipodal(&self) -> bool {
        let mut rows: Vec<&[i32]> = (0..self.len()).map(|i| self.row(i)).collect();
        rows.sort();
        (0..self.len()).all(|i| {
            let neg: Vec<i32> = self.row(i).iter().map(|x| -x).collect();
            rows.binary_search(&neg.as_slice()).is_ok()
        })
    }
}

/// Which pairs a classification covers.
#[derive(Clone, Debug, PartialEq)]
pub enum PairScope {
    All,
    /// Pairs `(i, j)` with `i` in the list and `j` arbitrary.
    Rows(Vec<usize>),
}

/// Assignment of pair inner products to labels.
///
/// Inner products of one shell are integers in `[-M, M]` after scaling by
/// the scaled norm `M`, so the assignment is a lookup table on that range.
#[derive(Clone, Debug)]
pub struct Classification {
    pub labels: Vec<Rat>,
    pub tol: Rat,
    pub scope: PairScope,
    /// Pairs checked, diagonal included.
    pub pairs_checked: u64,
    table: Vec<Option<u8>>,
    offset: i64,
}

impl Classification {
    #[inline]
    fn label_of_scaled(&self, s: i64) -> Option<u8> {
        self.table.get((s + self.offset) as usize).copied().flatten()
    }

    pub fn label_index(&self, code: &SphericalCode, i: usize, j: usize) -> Option<usize> {
        self.label_of_scaled(code.scaled_inner(i, j)).map(usize::from)
    }

    pub fn is_complete(&self) -> bool {
        self.scope == PairScope::All
    }
}

pub fn classify_pairs(code: &SphericalCode, labels: &[Rat], tol: &Rat) -> Result<Classification> {
    classify_pairs_in(code, labels, tol, PairScope::All)
}

/// Classify the pairs in `scope`; fails on the first pair whose inner
/// product is not within `tol` of a label.
pub fn classify_pairs_in(code: &SphericalCode, labels: &[Rat], tol: &Rat, scope: PairScope) -> Result<Classification> {
    if labels.is_empty() || labels.len() > u8::MAX as usize {
        return Err(Error::Domain("need between 1 and 255 labels".into()));
    }
    if tol.is_negative() {
        return Err(Error::Domain("negative tolerance".into()));
    }
    let mut sorted = labels.to_vec();
    sorted.sort();
    for w in sorted.windows(2) {
        if &(tol * int(2)) >= &(&w[1] - &w[0]) {
            return Err(Error::PreconditionViolation(format!(
                "tolerance {} is not below half the gap between labels {} and {}",
                exact_str(tol),
                exact_str(&w[0]),
                exact_str(&w[1])
            )));
        }
    }
    let m = code.scaled_norm;
    let table: Vec<Option<u8>> = (-m..=m)
        .map(|s| {
            let x = rat(s, m);
            labels.iter().position(|l| (&x - l).abs() <= *tol).map(|k| k as u8)
        })
        .collect();
    let mut c = Classification { labels: labels.to_vec(), tol: tol.clone(), scope: scope.clone(), pairs_checked: 0, table, offset: m };
    let rows: Vec<usize> = match &scope {
        PairScope::All => (0..code.len()).collect(),
        PairScope::Rows(r) => r.clone(),
    };
    for &i in &rows {
        if i >= code.len() {
            return Err(Error::Domain(format!("row {i} outside the code")));
        }
        // all pairs: the upper triangle suffices by symmetry
        let start = if scope == PairScope::All { i } else { 0 };
        for j in start..code.len() {
            let s = code.scaled_inner(i, j);
            if c.label_of_scaled(s).is_none() {
                return Err(Error::UnclassifiablePair(i, j, exact_str(&rat(s, m))));
            }
        }
        c.pairs_checked += (code.len() - start) as u64;
    }
    Ok(c)
}

/// Which base pairs the triple count visits.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseScope {
    /// Every ordered pair.
    All,
    /// For each listed first vector and each class, up to `per_class`
    /// partners spread evenly through that class.
    Sample { rows: Vec<usize>, per_class: usize },
}

/// Intersection numbers `P_γ(α, β) = #{z : ⟨x,z⟩ = α, ⟨y,z⟩ = β}` for
/// `⟨x,y⟩ = γ`, indexed by positions in `labels`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeTable {
    pub labels: Vec<Rat>,
    pub p: Vec<Vec<Vec<Rat>>>,
}

impl SchemeTable {
    pub fn zeros(labels: Vec<Rat>) -> Self {
        let k = labels.len();
        SchemeTable { labels, p: vec![vec![vec![Rat::zero(); k]; k]; k] }
    }

    pub fn index_of(&self, x: &Rat) -> Option<usize> {
        self.labels.iter().position(|l| l == x)
    }

    pub fn get(&self, gamma: &Rat, alpha: &Rat, beta: &Rat) -> Option<&Rat> {
        Some(&self.p[self.index_of(gamma)?][self.index_of(alpha)?][self.index_of(beta)?])
    }

    pub fn set(&mut self, gamma: &Rat, alpha: &Rat, beta: &Rat, v: Rat) {
        let (g, a, b) = (self.idx(gamma), self.idx(alpha), self.idx(beta));
        self.p[g][a][b] = v;
    }

    fn idx(&self, x: &Rat) -> usize {
        self.index_of(x).unwrap_or_else(|| panic!("{} is not a label", exact_str(x)))
    }

    /// `k_α = #{z : ⟨x,z⟩ = α}`, read off the `γ = 1` block.
    pub fn valency(&self, alpha: &Rat) -> Option<&Rat> {
        self.get(&Rat::one(), alpha, alpha)
    }

    /// First violated identity among the four symmetries and the row sums,
    /// or `None` when the table is consistent.
    pub fn consistency_violation(&self) -> Option<String> {
        let one = Rat::one();
        for g in &self.labels {
            for a in &self.labels {
                for b in &self.labels {
                    let v = self.get(g, a, b)?;
                    let checks = [
                        ("transpose", self.get(g, b, a)),
                        ("negation", self.get(g, &-a, &-b)),
                        ("sign flip", self.get(&-g, a, &-b)),
                    ];
                    for (name, w) in checks {
                        if w != Some(v) {
                            return Some(format!(
                                "{name} symmetry fails at ({}, {}, {})",
                                exact_str(g),
                                exact_str(a),
                                exact_str(b)
                            ));
                        }
                    }
                }
                if g.abs() != one {
                    let row: Rat = self.labels.iter().map(|b| self.get(g, a, b).cloned().unwrap_or_default()).sum();
                    if Some(&row) != self.valency(a) {
                        return Some(format!("row sum at ({}, {}) is {}", exact_str(g), exact_str(a), exact_str(&row)));
                    }
                }
            }
        }
        None
    }

    /// One line `gamma alpha beta count`, sorted numerically.
    pub fn export(&self) -> String {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&i, &j| self.labels[i].cmp(&self.labels[j]));
        let mut out = String::new();
        for &g in &order {
            for &a in &order {
                for &b in &order {
                    let l = &self.labels;
                    let _ = writeln!(out, "{} {} {} {}", exact_str(&l[g]), exact_str(&l[a]), exact_str(&l[b]), exact_str(&self.p[g][a][b]));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<(Rat, Rat, Rat), Rat> = BTreeMap::new();
        let mut labels: Vec<Rat> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != 4 {
                return Err(Error::Parse(format!("line {}: expected 4 fields", ln + 1)));
            }
            let v: Vec<Rat> = cells.iter().map(|c| crate::arith::parse_rat(c)).collect::<Result<_>>()?;
            for x in &v[..3] {
                if !labels.contains(x) {
                    labels.push(x.clone());
                }
            }
            entries.insert((v[0].clone(), v[1].clone(), v[2].clone()), v[3].clone());
        }
        labels.sort();
        let k = labels.len();
        if entries.len() != k * k * k {
            return Err(Error::Parse(format!("expected {} entries, found {}", k * k * k, entries.len())));
        }
        let mut t = SchemeTable::zeros(labels);
        for ((g, a, b), v) in entries {
            t.set(&g, &a, &b, v);
        }
        Ok(t)
    }
}

/// Evenly spaced picks from a list.
fn spread(items: &[usize], k: usize) -> Vec<usize> {
    if items.len() <= k {
        return items.to_vec();
    }
    (0..k).map(|t| items[t * items.len() / k]).collect()
}

/// Direct triple count. Every visited base pair of a class must give the
/// same counts, otherwise the code does not carry an association scheme.
pub fn count_intersection_numbers(code: &SphericalCode, cls: &Classification, scope: &BaseScope) -> Result<SchemeTable> {
    let k = cls.labels.len();
    let n = code.len();
    let mut table: Vec<Option<(usize, usize, Vec<u64>)>> = vec![None; k];
    let rows: Vec<usize> = match scope {
        BaseScope::All => (0..n).collect(),
        BaseScope::Sample { rows, .. } => rows.clone(),
    };
    let label = |i: usize, j: usize| -> Result<usize> {
        cls.label_index(code, i, j).ok_or_else(|| Error::UnclassifiablePair(i, j, exact_str(&code.unit_inner(i, j))))
    };
    let mut lx = vec![0usize; n];
    let mut hist = vec![0u64; k * k];
    for &x in &rows {
        for z in 0..n {
            lx[z] = label(x, z)?;
        }
        let partners: Vec<usize> = match scope {
            BaseScope::All => (0..n).collect(),
            BaseScope::Sample { per_class, .. } => {
                let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); k];
                for (y, &l) in lx.iter().enumerate() {
                    by_class[l].push(y);
                }
                by_class.iter().flat_map(|c| spread(c, *per_class)).collect()
            }
        };
        for y in partners {
            hist.iter_mut().for_each(|h| *h = 0);
            for z in 0..n {
                hist[lx[z] * k + label(y, z)?] += 1;
            }
            let g = lx[y];
            match &table[g] {
                None => table[g] = Some((x, y, hist.clone())),
                Some((x0, y0, h0)) if *h0 != hist => {
                    return Err(Error::NotAScheme(format!(
                        "base pairs ({x0}, {y0}) and ({x}, {y}) of class {} disagree",
                        exact_str(&cls.labels[g])
                    )));
                }
                _ => {}
            }
        }
    }
    let mut out = SchemeTable::zeros(cls.labels.clone());
    for (g, entry) in table.into_iter().enumerate() {
        let (_, _, h) = entry.ok_or_else(|| {
            Error::MissingSchemeFact(format!("no base pair of class {} was visited", exact_str(&cls.labels[g])))
        })?;
        for a in 0..k {
            for b in 0..k {
                out.p[g][a][b] = Rat::from_integer(h[a * k + b].into());
            }
        }
    }
    Ok(out)
}

/// Labels `{0, ±1/4, ±1/2, ±1}` of the Leech code.
pub fn leech_labels() -> Vec<Rat> {
    [-4, -2, -1, 0, 1, 2, 4].iter().map(|&k| rat(k, 4)).collect()
}

/// Labels `{0, ±1/2, ±1}` of the E8 code.
pub fn e8_labels() -> Vec<Rat> {
    [-2, -1, 0, 1, 2].iter().map(|&k| rat(k, 2)).collect()
}
