//! Interval chains bounding the inner products of a near-lattice whose
//! short vectors have lengths within small relative windows of the
//! reference shells.
//!
//! Nearly minimal vectors have norm in `[m, m(1+ε)²]`; differences landing
//! on the next shells have norms in `[s(1-t)², s(1+t)²]`. Each chain is
//! evaluated in exact interval arithmetic, treating distinct vectors as
//! independent quantities.

use num_traits::{One, Signed, Zero};

use super::SchemeTable;
use crate::arith::roots::real_roots;
use crate::arith::{exact_str, int, rat};
use crate::error::{Error, Result};
use crate::lattice::{coefficient_bound, LatticeData};
use crate::sphere_lp::{kissing_poly, lp_slack, perturbed_cos};
use crate::{Rat, RatInterval};

#[derive(Clone, Debug, PartialEq)]
pub struct ChainEntry {
    pub label: Rat,
    pub bound: RatInterval,
}

impl ChainEntry {
    pub fn deviation(&self) -> Rat {
        let below = &self.label - self.bound.lo();
        let above = self.bound.hi() - &self.label;
        below.max(above).max(Rat::zero())
    }
}

fn max_deviation(entries: &[ChainEntry]) -> Rat {
    entries.iter().map(ChainEntry::deviation).max().unwrap_or_default()
}

/// Adds the mirrored entry `-label` with the negated interval.
fn mirrored(entries: Vec<ChainEntry>) -> Vec<ChainEntry> {
    let mut out = Vec::new();
    for e in entries {
        if !e.label.is_zero() {
            out.push(ChainEntry { label: -&e.label, bound: -&e.bound });
        }
        out.push(e);
    }
    out.sort_by(|a, b| a.label.cmp(&b.label));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaChain {
    /// Bounds on `⟨u/|u|, v/|v|⟩` per approximate value.
    pub entries: Vec<ChainEntry>,
    pub sigma: Rat,
}

fn window(s: i64, t: &Rat) -> RatInterval {
    let s = int(s);
    let one = Rat::one();
    RatInterval::new(&s * (&one - t) * (&one - t), &s * (&one + t) * (&one + t))
}

/// `⟨u,v⟩ = (|u|² + |v|² - |u-v|²)/2` normalized by `|u||v|`.
fn normalized(norm: &RatInterval, diff: &RatInterval) -> RatInterval {
    let ip = (&(norm + norm) - diff).scale(&rat(1, 2));
    // |u||v| ranges over the same interval as a single norm
    ip.div(norm).expect("norm interval is positive")
}

fn check_small(name: &str, x: &Rat) -> Result<()> {
    if x.is_negative() || x >= &crate::arith::dec("1e-5") {
        return Err(Error::PreconditionViolation(format!("{name} = {} is not in [0, 1e-5)", exact_str(x))));
    }
    Ok(())
}

/// Refined bound on the deviation of unit inner products from the labels,
/// using the length windows of the shells reached by `u - v`. `omega`
/// (the window of the norm-10 shell) is accepted for completeness but not
/// needed: the negative labels follow from replacing `v` by `-v`.
pub fn sigma_chain(eps: &Rat, mu: &Rat, nu: &Rat, omega: &Rat, n: u32) -> Result<SigmaChain> {
    for (name, x) in [("eps", eps), ("mu", mu), ("nu", nu), ("omega", omega)] {
        check_small(name, x)?;
    }
    let one = Rat::one();
    let entries = match n {
        24 => {
            let norm = RatInterval::new(int(4), int(4) * (&one + eps) * (&one + eps));
            vec![
                ChainEntry { label: rat(1, 4), bound: normalized(&norm, &window(6, mu)) },
                ChainEntry { label: Rat::zero(), bound: normalized(&norm, &window(8, nu)) },
                ChainEntry { label: rat(1, 2), bound: normalized(&norm, &norm) },
            ]
        }
        8 => {
            let norm = RatInterval::new(int(2), int(2) * (&one + eps) * (&one + eps));
            vec![
                ChainEntry { label: Rat::zero(), bound: normalized(&norm, &window(4, mu)) },
                ChainEntry { label: rat(1, 2), bound: normalized(&norm, &norm) },
            ]
        }
        _ => return Err(Error::Domain(format!("no shell windows for n = {n}"))),
    };
    let entries = mirrored(entries);
    let sigma = max_deviation(&entries);
    Ok(SigmaChain { entries, sigma })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstPassSigma {
    /// Lower bound on every off-diagonal term of the code's energy sum.
    pub threshold: Rat,
    /// Components of `{x ∈ [-1, cos φ] : f_ε(x) ≥ threshold}`, outer bounds.
    pub components: Vec<RatInterval>,
    pub sigma: Rat,
}

fn dist_to(labels: &[Rat], x: &Rat) -> Rat {
    labels.iter().map(|l| (x - l).abs()).min().expect("labels nonempty")
}

/// Coarse deviation bound from the perturbed kissing polynomial alone.
///
/// Each off-diagonal term `f_ε(⟨x,y⟩)` is nonpositive and appears four
/// times, so none is below `-(N f_ε(1) - N²)/4`. The inner products lie in
/// the superlevel set of that threshold, whose components are found by
/// isolating the real roots of `f_ε - threshold`.
pub fn first_pass_sigma(n: u32, eps: &Rat) -> Result<FirstPassSigma> {
    let (size, labels): (u64, Vec<Rat>) = match n {
        24 => (196560, [-4, -2, -1, 0, 1, 2].iter().map(|&k| rat(k, 4)).collect()),
        8 => (240, [-2, -1, 0, 1].iter().map(|&k| rat(k, 2)).collect()),
        _ => return Err(Error::Domain(format!("no kissing configuration for n = {n}"))),
    };
    let f = kissing_poly(n, eps)?;
    let slack = lp_slack(&f, size);
    if slack.is_negative() {
        return Err(Error::PreconditionViolation(format!("N f(1) - N² = {} is negative", exact_str(&slack))));
    }
    let threshold = -(&slack / int(4));
    let g = &f - &crate::UniPoly::constant(threshold.clone());
    let top = perturbed_cos(eps);
    let dom = RatInterval::new(int(-1), top.clone());
    let width = crate::arith::dec("1e-40");
    let roots = real_roots(&g, &dom, &width);

    // breakpoints: domain ends and root enclosures, in order
    let mut cuts: Vec<RatInterval> = vec![RatInterval::point(int(-1))];
    cuts.extend(roots.iter().cloned());
    cuts.push(RatInterval::point(top));
    let mut components = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.hi() >= b.lo() {
            continue;
        }
        let mid = (a.hi() + b.lo()) / int(2);
        if !g.eval(&mid).is_negative() {
            components.push(RatInterval::new(a.lo().clone(), b.hi().clone()));
        }
    }
    // isolated touching points
    for r in &roots {
        if !components.iter().any(|c| c.contains_interval(r)) {
            components.push(r.clone());
        }
    }
    components.sort_by(|a, b| a.lo().cmp(b.lo()));

    let mut sigma = Rat::zero();
    for c in &components {
        // distance to the label set is 1-Lipschitz and peaks at the ends or
        // at a midpoint between consecutive labels
        let mut cands = vec![c.lo().clone(), c.hi().clone()];
        for w in labels.windows(2) {
            let m = (&w[0] + &w[1]) / int(2);
            if c.contains(&m) {
                cands.push(m);
            }
        }
        for x in cands {
            sigma = sigma.max(dist_to(&labels, &x));
        }
    }
    Ok(FirstPassSigma { threshold, components, sigma })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InnerProductChain {
    /// Bounds on unnormalized `⟨u,v⟩` per approximate value (the top label
    /// is the norm itself).
    pub entries: Vec<ChainEntry>,
    pub max_deviation: Rat,
}

fn scheme_fact(scheme: &SchemeTable, gamma: Rat, alpha: Rat, beta: Rat) -> Result<()> {
    match scheme.get(&gamma, &alpha, &beta) {
        Some(v) if v.is_positive() => Ok(()),
        _ => Err(Error::MissingSchemeFact(format!(
            "need a z with ⟨x,z⟩ = {} and ⟨y,z⟩ = {} for ⟨x,y⟩ = {}",
            exact_str(&alpha),
            exact_str(&beta),
            exact_str(&gamma)
        ))),
    }
}

/// `u, v, w1, w2, w3` with norms 4, `⟨u,v⟩ = 1`, `⟨u,w_i⟩ = 2` and all
/// other products 0.
fn is_quarter_configuration(g: &[Vec<Rat>]) -> bool {
    if g.len() != 5 || g.iter().any(|r| r.len() != 5) {
        return false;
    }
    (0..5).all(|i| {
        (0..5).all(|j| {
            let want = match (i.min(j), i.max(j)) {
                (a, b) if a == b => 4,
                (0, 1) => 1,
                (0, _) => 2,
                _ => 0,
            };
            g[i][j] == int(want)
        })
    })
}

/// Replays the lemma chain for unnormalized inner products of nearly
/// minimal vectors. In dimension 24 the value 1 needs a configuration
/// `u, v, w1, w2, w3` whose Gram matrix is passed as `config_gram`; it
/// exists in the reference lattice and transfers through the scheme
/// isomorphism.
pub fn inner_product_chain(eps: &Rat, scheme: &SchemeTable, n: u32, config_gram: Option<&[Vec<Rat>]>) -> Result<InnerProductChain> {
    if eps.is_negative() {
        return Err(Error::Domain("negative eps".into()));
    }
    let m: i64 = match n {
        24 => 4,
        8 => 2,
        _ => return Err(Error::Domain(format!("no chain for n = {n}"))),
    };
    let one = Rat::one();
    let norm = RatInterval::new(int(m), int(m) * (&one + eps) * (&one + eps));
    // ⟨u,v⟩ ≈ m/2: u - v is nearly minimal
    let half = (&(&norm + &norm) - &norm).scale(&rat(1, 2));
    // ⟨u,v⟩ ≈ 0: split through a w with ⟨u,w⟩ ≈ ⟨v,w⟩ ≈ m/2
    scheme_fact(scheme, Rat::zero(), rat(1, 2), rat(1, 2))?;
    let zero = &half - &half;
    let mut entries =
        vec![ChainEntry { label: int(m), bound: norm.clone() }, ChainEntry { label: int(m / 2), bound: half.clone() }];
    if n == 24 {
        // X = 2u - v - w1 - w2 - w3 is a nonzero lattice vector near a
        // minimal one; expand |X|² and solve for ⟨u,v⟩
        if !config_gram.is_some_and(is_quarter_configuration) {
            return Err(Error::MissingSchemeFact("no configuration u, v, w1, w2, w3 for the value 1".into()));
        }
        let mut acc = norm.scale(&int(4));
        for _ in 0..4 {
            acc = &acc + &norm;
        }
        acc = &acc - &half.scale(&int(12));
        acc = &acc + &zero.scale(&int(12));
        acc = &acc - &norm;
        entries.push(ChainEntry { label: one.clone(), bound: acc.scale(&rat(1, 4)) });
    }
    entries.push(ChainEntry { label: Rat::zero(), bound: zero });
    let entries = mirrored(entries);
    let max_deviation = max_deviation(&entries);
    Ok(InnerProductChain { entries, max_deviation })
}

#[derive(Clone, Debug)]
pub struct TransferParams {
    pub eps: Rat,
    pub mu: Rat,
    /// Minimal norm and the next norm of the reference lattice.
    pub min_norm: Rat,
    pub next_norm: Rat,
    /// Largest absolute scaled coordinate of a minimal vector.
    pub coord_sup: Rat,
    /// Inner-product error allowed per pair.
    pub max_dev: Rat,
    /// Optional absolute ceiling on the norm budget.
    pub cap: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisTransfer {
    pub coefficient_bound: Rat,
    /// `c² n² δ`: error in the norm of `Σ c_i u_i`.
    pub norm_budget: Rat,
    /// Room below the next shell.
    pub norm_gap: Rat,
    /// `n c δ`: error in `⟨u, Σ c_i u_i⟩`.
    pub inner_budget: Rat,
    /// Largest error that still forces `u = Σ c_i u_i`.
    pub inner_gap: Rat,
    pub passed: bool,
}

/// Checks that a basis of nearly minimal vectors reproduces every nearly
/// minimal vector with the coefficients it has in the reference lattice.
pub fn basis_transfer_check(l: &LatticeData, p: &TransferParams) -> Result<BasisTransfer> {
    let cb = coefficient_bound(l, &p.coord_sup)?;
    let n = int(l.n as i64);
    let one = Rat::one();
    let norm_budget = &cb * &cb * &n * &n * &p.max_dev;
    let inner_budget = &n * &cb * &p.max_dev;
    let norm_gap = &p.next_norm * (&one - &p.mu) * (&one - &p.mu) - &p.min_norm;
    let grow = (&one + &p.eps) * (&one + &p.eps) - &one;
    let inner_gap = (&p.min_norm - int(2) * &p.min_norm * grow) / int(2);
    let passed = norm_budget < norm_gap && inner_budget < inner_gap && p.cap.as_ref().is_none_or(|c| &norm_budget < c);
    Ok(BasisTransfer { coefficient_bound: cb, norm_budget, norm_gap, inner_budget, inner_gap, passed })
}
