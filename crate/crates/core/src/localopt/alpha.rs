//! Lower bounds `α` such that every admissible perturbation `T` (symmetric,
//! `max |t_ij| = 1`, `Σ s̃_ij t_ij = 0`) has a minimal vector `u` with
//! `T(u) = uᵀTu ≤ -α`.
//!
//! Write `α(β, ±)` for the guarantee obtained from one entry: if
//! `T(x, y) = t` with `⟨x, y⟩ = β` and `t` of the given sign, some minimal
//! vector has `T(u) ≤ -α(β, ±)|t|`. Each bound comes from a minimal vector
//! `z = Σ c_a v_a`: expanding `T(z)` isolates `t`, and every other term is
//! controlled by a bound already known, which is what [`transfer_bound`] does.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::simplex::{Cmp, LinearProgram, LpMethod, LpSolution};
use crate::arith::{exact_str, int, rat};
use crate::error::{Error, Result};
use crate::lattice::{gram_of, LatticeData, MinVectorSet, NamedVector, Witnesses};
use crate::scheme::SchemeTable;
use crate::{Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaEntry {
    /// Inner product `⟨x, y⟩` in lattice units.
    pub beta: Rat,
    /// Sign of `t`.
    pub positive: bool,
    pub alpha: Rat,
    /// `|k|` and the weights whose sum `W` gives `α = |k| / W`; empty for
    /// the base cases and for bounds obtained by symmetry.
    pub numerator: Rat,
    pub weights: Vec<Rat>,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaChain {
    pub entries: Vec<AlphaEntry>,
    pub alpha: Rat,
}

impl AlphaChain {
    pub fn get(&self, beta: &Rat, positive: bool) -> Option<&AlphaEntry> {
        self.entries.iter().find(|e| &e.beta == beta && e.positive == positive)
    }
}

type Known = BTreeMap<(Rat, bool), Rat>;

/// One step of the derivation. `gram` lists the witness vectors, `c` the
/// combination `z` (which must be minimal of norm `m`), `pair` the entry
/// carrying `t`. Returns `None` if some needed bound is still unknown.
///
/// With `k = 2 c_x c_y`, `-k t = Σ_a c_a² T(v_a) + Σ_{a<b} 2 c_a c_b T(v_a, v_b) - T(z)`
/// over the remaining pairs. Multiplying by the sign of `-kt` makes the left
/// side `|k||t|`. Under the hypothesis `T(u) > -α|t|` for all `u`, a term
/// `e · T(p, q)` with `⟨p, q⟩ = γ` is at most `e/α(γ, +)` (for `e > 0`) or
/// `|e|/α(γ, -)` (for `e < 0`) times `α|t|`, so `α ≥ |k| / Σ weights`.
pub fn transfer_bound(
    gram: &[Vec<Rat>],
    c: &[Rat],
    pair: (usize, usize),
    positive: bool,
    m: &Rat,
    known: &BTreeMap<(Rat, bool), Rat>,
) -> Result<Option<(Rat, Vec<Rat>)>> {
    let len = c.len();
    let mut norm = Rat::zero();
    for a in 0..len {
        for b in 0..len {
            norm += &c[a] * &c[b] * &gram[a][b];
        }
    }
    if &norm != m {
        return Err(Error::PreconditionViolation(format!(
            "combination has norm {}, not the minimum {}",
            exact_str(&norm),
            exact_str(m)
        )));
    }
    let (x, y) = pair;
    let k = int(2) * &c[x] * &c[y];
    if k.is_zero() {
        return Err(Error::PreconditionViolation("combination does not involve the pair".into()));
    }
    // f = sign(-k t)
    let f = if k.is_positive() != positive { int(1) } else { int(-1) };
    let mut terms: Vec<(Rat, Rat)> = Vec::new();
    for a in 0..len {
        terms.push((&f * &c[a] * &c[a], gram[a][a].clone()));
        for b in a + 1..len {
            if (a, b) != (x.min(y), x.max(y)) {
                terms.push((&f * int(2) * &c[a] * &c[b], gram[a][b].clone()));
            }
        }
    }
    terms.push((-&f, m.clone()));
    let mut weights = Vec::new();
    for (e, g) in terms {
        if e.is_zero() {
            continue;
        }
        let Some(a) = known.get(&(g, e.is_positive())) else {
            return Ok(None);
        };
        weights.push(e.abs() / a);
    }
    let total: Rat = weights.iter().sum();
    Ok(Some((k.abs() / total, weights)))
}

/// Checks that the frame is `n` pairwise orthogonal lattice vectors of
/// norm `min_norm`, via their basis coefficients `B`: `B S Bᵀ = m I`.
/// Summing `T` over such a frame gives `m Σ s̃_ij t_ij / det S = 0`.
pub fn frame_check(l: &LatticeData, frame: &[NamedVector], min_norm: &Rat) -> Result<()> {
    if frame.len() != l.n {
        return Err(Error::MissingWitness(format!(
            "orthogonal frame has {} vectors, need {}",
            frame.len(),
            l.n
        )));
    }
    let mut rows = Vec::new();
    for v in frame {
        let coeffs = v
            .coeffs
            .as_ref()
            .ok_or_else(|| Error::MissingWitness(format!("frame vector {} is not in the lattice", v.name)))?;
        rows.push(coeffs.iter().map(|x| Rat::from_integer(x.clone())).collect());
    }
    let b = RatMatrix::from_rows(rows);
    let bsb = &(&b * &l.gram) * &b.transpose();
    for i in 0..l.n {
        for j in 0..l.n {
            let want = if i == j { min_norm.clone() } else { Rat::zero() };
            if bsb[(i, j)] != want {
                return Err(Error::PreconditionViolation(format!(
                    "frame Gram entry ({i}, {j}) is {}",
                    exact_str(&bsb[(i, j)])
                )));
            }
        }
    }
    Ok(())
}

fn sign_name(positive: bool) -> &'static str {
    if positive {
        "+"
    } else {
        "-"
    }
}

/// Derives `α(β, ±)` for every inner product `β` of minimal vectors and
/// returns their minimum.
///
/// Base cases: `α(m, -) = 1` (take `u = x`) and `α(m, +) = 1/(n-1)` from
/// the frame identity. Then, in lattice units:
/// `β = m/2` uses `z = x - y`; `β = 0` uses `z = x + y - w` with
/// `⟨x,w⟩ = ⟨y,w⟩ = m/2`, which exists when the scheme has
/// `P_0(1/2, 1/2) > 0`; any other `β` needs the explicit configuration
/// `(y, x, w1, w2, w3)` with `z = 2y - x - w1 - w2 - w3`. Bounds for `-β`
/// follow from replacing `y` by `-y`.
pub fn alpha_chain(l: &LatticeData, table: &SchemeTable, witnesses: &Witnesses, min_norm: &Rat) -> Result<AlphaChain> {
    let m = min_norm.clone();
    let n = l.n;
    frame_check(l, &witnesses.frame, &m)?;
    let mut known: Known = BTreeMap::new();
    let mut entries = Vec::new();
    let mut record = |known: &mut Known, beta: Rat, positive: bool, alpha: Rat, numerator: Rat, weights: Vec<Rat>, rule: String| {
        known.insert((beta.clone(), positive), alpha.clone());
        known.insert((-&beta, !positive), alpha.clone());
        entries.push(AlphaEntry { beta, positive, alpha, numerator, weights, rule });
    };
    record(&mut known, m.clone(), false, Rat::one(), Rat::one(), Vec::new(), "u = x".into());
    record(
        &mut known,
        m.clone(),
        true,
        rat(1, n as i64 - 1),
        Rat::one(),
        Vec::new(),
        format!("orthogonal frame of {n} vectors"),
    );

    let half = &m / int(2);
    let mut pending: Vec<Rat> = table
        .labels
        .iter()
        .map(|x| x * &m)
        .filter(|b| !b.is_negative() && b < &m)
        .collect();
    pending.sort();
    pending.reverse();
    while !pending.is_empty() {
        let mut progressed = false;
        let mut still = Vec::new();
        for beta in pending {
            let (gram, c, rule) = if beta == half {
                let g = vec![vec![m.clone(), half.clone()], vec![half.clone(), m.clone()]];
                (g, vec![int(1), int(-1)], "z = x - y".to_string())
            } else if beta.is_zero() {
                let fact = table
                    .get(&Rat::zero(), &rat(1, 2), &rat(1, 2))
                    .ok_or_else(|| Error::MissingSchemeFact("P_0(1/2, 1/2)".into()))?;
                if !fact.is_positive() {
                    return Err(Error::MissingSchemeFact("P_0(1/2, 1/2) is zero".into()));
                }
                let z = Rat::zero();
                let g = vec![
                    vec![m.clone(), z.clone(), half.clone()],
                    vec![z, m.clone(), half.clone()],
                    vec![half.clone(), half.clone(), m.clone()],
                ];
                (g, vec![int(1), int(1), int(-1)], "z = x + y - w".to_string())
            } else {
                if witnesses.config.len() != 5 {
                    return Err(Error::MissingWitness(format!(
                        "configuration for inner product {}",
                        exact_str(&beta)
                    )));
                }
                let g = gram_of(l, &witnesses.config);
                if g[0][1] != beta {
                    return Err(Error::MissingWitness(format!(
                        "configuration pair has inner product {}, need {}",
                        exact_str(&g[0][1]),
                        exact_str(&beta)
                    )));
                }
                // config order is (y, x, w1, w2, w3)
                (g, vec![int(2), int(-1), int(-1), int(-1), int(-1)], "z = 2y - x - w1 - w2 - w3".to_string())
            };
            let mut done = true;
            for positive in [true, false] {
                if known.contains_key(&(beta.clone(), positive)) && !beta.is_zero() {
                    continue;
                }
                match transfer_bound(&gram, &c, (0, 1), positive, &m, &known)? {
                    Some((a, w)) => {
                        let better = known.get(&(beta.clone(), positive)).is_none_or(|old| &a > old);
                        if better {
                            record(&mut known, beta.clone(), positive, a, int(2) * (&c[0] * &c[1]).abs(), w, rule.clone());
                        }
                    }
                    None => done = false,
                }
            }
            if done {
                progressed = true;
            } else {
                still.push(beta);
            }
        }
        if !progressed && !still.is_empty() {
            return Err(Error::MissingSchemeFact(format!(
                "no derivation order reaches inner product {}",
                exact_str(&still[0])
            )));
        }
        pending = still;
    }
    // with β = 0 the two signs are symmetric, so both get the larger bound
    for positive in [true, false] {
        let a = known[&(Rat::zero(), positive)].clone();
        match entries.iter_mut().find(|e| e.beta.is_zero() && e.positive == positive) {
            Some(e) => e.alpha = a,
            None => entries.push(AlphaEntry {
                beta: Rat::zero(),
                positive,
                alpha: a,
                numerator: Rat::one(),
                weights: Vec::new(),
                rule: format!("symmetric to (0, {})", sign_name(!positive)),
            }),
        }
    }
    entries.sort_by(|a, b| b.beta.cmp(&a.beta).then(b.positive.cmp(&a.positive)));
    let alpha = entries.iter().map(|e| e.alpha.clone()).min().expect("base cases present");
    Ok(AlphaChain { entries, alpha })
}

/// Vectors above this count need `allow_large` in [`alpha_exact_lp_min`].
pub const LP_VECTOR_LIMIT: usize = 10_000;

/// Exact optimum of `min_T max_u -T(u)` over admissible `T` with
/// `t_{i0 j0}` fixed to `±1`: the best `α` for that entry.
///
/// Variables are `x_ij = t_ij + 1 ∈ [0, 2]` for `i ≤ j` and `a ≥ 0`;
/// only one of each pair `±u` is needed.
pub fn alpha_exact_lp(
    minvecs: &MinVectorSet,
    adj: &RatMatrix,
    i0: usize,
    j0: usize,
    positive: bool,
) -> Result<LpSolution> {
    let n = adj.rows();
    let (i0, j0) = (i0.min(j0), i0.max(j0));
    let mut index = vec![vec![usize::MAX; n]; n];
    let mut vars = 0;
    for i in 0..n {
        for j in i..n {
            if (i, j) != (i0, j0) {
                index[i][j] = vars;
                vars += 1;
            }
        }
    }
    let a_var = vars;
    let t0 = if positive { int(1) } else { int(-1) };
    let mut lp = LinearProgram::new(vars + 1);
    lp.objective[a_var] = int(1);
    let weight = |u: &[i64], i: usize, j: usize| -> Rat {
        let w = u[i] * u[j];
        int(if i == j { w } else { 2 * w })
    };
    let mut seen = std::collections::HashSet::new();
    for u in &minvecs.coeffs {
        let neg: Vec<i64> = u.iter().map(|x| -x).collect();
        if seen.contains(&neg) {
            continue;
        }
        seen.insert(u.clone());
        // Σ w (x - 1) + w0 t0 + a ≥ 0
        let mut row = vec![Rat::zero(); vars + 1];
        let mut rhs = Rat::zero();
        for i in 0..n {
            for j in i..n {
                let w = weight(u, i, j);
                if (i, j) == (i0, j0) {
                    rhs -= &w * &t0;
                } else {
                    rhs += &w;
                    row[index[i][j]] = w;
                }
            }
        }
        row[a_var] = int(1);
        lp.add_row(row, Cmp::Ge, rhs);
    }
    let mut row = vec![Rat::zero(); vars + 1];
    let mut rhs = Rat::zero();
    for i in 0..n {
        for j in i..n {
            let s = if i == j { adj[(i, j)].clone() } else { int(2) * &adj[(i, j)] };
            if (i, j) == (i0, j0) {
                rhs -= &s * &t0;
            } else {
                rhs += &s;
                row[index[i][j]] = s;
            }
        }
    }
    lp.add_row(row, Cmp::Eq, rhs);
    for v in 0..vars {
        let mut row = vec![Rat::zero(); vars + 1];
        row[v] = int(1);
        lp.add_row(row, Cmp::Le, int(2));
    }
    lp.solve()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactAlpha {
    pub alpha: Rat,
    /// Entry `(i0, j0)` and sign of `t` attaining the minimum.
    pub worst: (usize, usize, bool),
    pub programs: usize,
    /// Programs whose floating-point basis failed the exact certificate.
    pub fallbacks: usize,
}

/// Minimum of [`alpha_exact_lp`] over all entries and both signs.
pub fn alpha_exact_lp_min(minvecs: &MinVectorSet, adj: &RatMatrix, allow_large: bool) -> Result<ExactAlpha> {
    if minvecs.coeffs.len() > LP_VECTOR_LIMIT && !allow_large {
        return Err(Error::ResourceLimit(format!(
            "{} minimal vectors exceed the exact LP limit of {}",
            minvecs.coeffs.len(),
            LP_VECTOR_LIMIT
        )));
    }
    let n = adj.rows();
    let mut best: Option<ExactAlpha> = None;
    let (mut programs, mut fallbacks) = (0, 0);
    for i in 0..n {
        for j in i..n {
            for positive in [true, false] {
                let sol = alpha_exact_lp(minvecs, adj, i, j, positive)?;
                programs += 1;
                if sol.method == LpMethod::ExactPivoting {
                    fallbacks += 1;
                }
                let a = sol.value;
                if best.as_ref().is_none_or(|b| a < b.alpha) {
                    best = Some(ExactAlpha { alpha: a, worst: (i, j, positive), programs: 0, fallbacks: 0 });
                }
            }
        }
    }
    let mut best = best.expect("n ≥ 1");
    best.programs = programs;
    best.fallbacks = fallbacks;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use crate::scheme::tests::{e8_table as e8_scheme, leech_table as leech_scheme};
    use super::*;
    use crate::lattice::{e8_lattice, e8_witness_vectors, leech_lattice, leech_witness_vectors};

    fn e8_minvecs() -> &'static MinVectorSet {
        static MV: std::sync::OnceLock<MinVectorSet> = std::sync::OnceLock::new();
        MV.get_or_init(|| crate::lattice::enumerate_short_vectors(&e8_lattice(), &int(2), &Default::default()).unwrap())
    }

    #[test]
    fn leech_chain() {
        let l = leech_lattice();
        let w = leech_witness_vectors(&l);
        let ch = alpha_chain(&l, leech_scheme(), &w, &int(4)).unwrap();
        let get = |b: i64, p: bool| ch.get(&int(b), p).unwrap().alpha.clone();
        assert_eq!(get(4, false), int(1));
        assert_eq!(get(4, true), rat(1, 23));
        assert_eq!(get(2, false), rat(2, 25));
        assert_eq!(get(2, true), rat(2, 47));
        assert_eq!(get(0, true), rat(1, 60));
        assert_eq!(get(0, false), rat(1, 60));
        assert_eq!(get(1, true), rat(4, 1055));
        assert_eq!(get(1, false), rat(4, 1033));
        assert_eq!(ch.alpha, rat(4, 1055));
        let e = ch.get(&int(1), true).unwrap();
        let total: Rat = e.weights.iter().sum();
        assert_eq!(total, int(1055));
        assert_eq!(e.numerator, int(4));
        let total: Rat = ch.get(&int(1), false).unwrap().weights.iter().sum();
        assert_eq!(total, int(1033));
    }

    #[test]
    fn e8_chain() {
        let l = e8_lattice();
        let w = e8_witness_vectors(&l);
        let ch = alpha_chain(&l, e8_scheme(), &w, &int(2)).unwrap();
        let get = |b: i64, p: bool| ch.get(&int(b), p).unwrap().alpha.clone();
        assert_eq!(get(2, false), int(1));
        assert_eq!(get(2, true), rat(1, 7));
        assert_eq!(get(1, false), rat(2, 9));
        assert_eq!(get(1, true), rat(2, 15));
        assert_eq!(get(0, true), rat(1, 20));
        assert_eq!(ch.alpha, rat(1, 20));
    }

    #[test]
    fn missing_witnesses_are_reported() {
        let l = leech_lattice();
        let mut w = leech_witness_vectors(&l);
        w.config.clear();
        assert!(matches!(alpha_chain(&l, leech_scheme(), &w, &int(4)), Err(Error::MissingWitness(_))));
        let mut w = leech_witness_vectors(&l);
        w.frame.pop();
        assert!(matches!(alpha_chain(&l, leech_scheme(), &w, &int(4)), Err(Error::MissingWitness(_))));
    }

    #[test]
    fn frame_must_be_orthogonal() {
        let l = e8_lattice();
        let mut w = e8_witness_vectors(&l);
        w.frame[1] = w.frame[0].clone();
        assert!(matches!(frame_check(&l, &w.frame, &int(2)), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn frame_sum_vanishes_on_admissible_perturbations() {
        // Σ_frame T(v) = m Σ s̃_ij t_ij / det S
        let l = e8_lattice();
        let w = e8_witness_vectors(&l);
        let adj = l.gram.adjugate();
        let b = RatMatrix::from_rows(
            w.frame.iter().map(|v| v.coeffs.as_ref().unwrap().iter().map(|x| Rat::from_integer(x.clone())).collect()).collect(),
        );
        let t = RatMatrix::from_fn(8, 8, |i, j| rat(((i * 7 + j * 7 + i * j) % 11) as i64 - 5, 5));
        let btb = &(&b * &t) * &b.transpose();
        let trace: Rat = (0..8).map(|i| btb[(i, i)].clone()).sum();
        let mut pairing = Rat::zero();
        for i in 0..8 {
            for j in 0..8 {
                pairing += &adj[(i, j)] * &t[(i, j)];
            }
        }
        assert_eq!(trace, int(2) * pairing);
    }

    #[test]
    fn single_entry_programs() {
        let l = e8_lattice();
        let adj = l.gram.adjugate();
        let mv = e8_minvecs();
        let a = alpha_exact_lp(mv, &adj, 0, 0, true).unwrap();
        assert_eq!(a.value, rat(1, 7));
        let b = alpha_exact_lp(mv, &adj, 0, 0, false).unwrap();
        assert!(b.value >= rat(1, 7));
        // the certified optimum is the exact simplex optimum
        assert_eq!(a.method, LpMethod::CertifiedBasis);
    }

    #[test]
    fn e8_exact_optimum_is_one_seventh() {
        let l = e8_lattice();
        let r = alpha_exact_lp_min(e8_minvecs(), &l.gram.adjugate(), false).unwrap();
        assert_eq!(r.alpha, rat(1, 7));
        assert_eq!(r.programs, 72);
        // the derived chain is weaker than the exact optimum
        assert!(rat(1, 20) < r.alpha);
    }

    #[test]
    fn leech_program_needs_opt_in() {
        let l = leech_lattice();
        let mv = crate::lattice::enumerate_short_vectors(&l, &int(4), &Default::default()).unwrap();
        let adj = l.gram.adjugate();
        assert!(matches!(alpha_exact_lp_min(&mv, &adj, false), Err(Error::ResourceLimit(_))));
    }
}
