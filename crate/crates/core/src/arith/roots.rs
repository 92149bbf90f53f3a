//! Real-root counting, isolation and sign certification for rational
//! polynomials.
//!
//! Everything here runs on primitive integer coefficient vectors: rational
//! inputs are scaled by a positive factor first, which never changes signs.
//! Evaluation at `a/b` uses the homogenised form `Σ c_i a^i b^{d-i}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::RatInterval;
use crate::error::Error;
use crate::{Rat, UniPoly};

/// Primitive integer coefficients proportional to `p` by a positive factor.
pub fn int_coeffs(p: &UniPoly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    primitive(ints)
}

fn primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
    let g = c.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in &mut c {
            *v /= &g;
        }
    }
    c
}

fn deg(c: &[BigInt]) -> usize {
    c.len() - 1
}

/// Sign of `Σ c_i x^i` at rational `x`.
pub fn sign_at_int(c: &[BigInt], x: &Rat) -> Ordering {
    if c.is_empty() {
        return Ordering::Equal;
    }
    let (a, b) = (x.numer(), x.denom());
    let mut acc = c[deg(c)].clone();
    let mut pb = BigInt::one();
    for ci in c[..deg(c)].iter().rev() {
        pb *= b;
        acc = acc * a + ci * &pb;
    }
    acc.sign_cmp()
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sign of `p(x)` computed with integer arithmetic only.
pub fn sign_at(p: &UniPoly, x: &Rat) -> Ordering {
    sign_at_int(&int_coeffs(p), x)
}

fn sign_at_pos_inf(c: &[BigInt]) -> Ordering {
    c.last().map_or(Ordering::Equal, |l| l.sign_cmp())
}

fn sign_at_neg_inf(c: &[BigInt]) -> Ordering {
    let s = sign_at_pos_inf(c);
    if c.len() % 2 == 0 {
        s.reverse()
    } else {
        s
    }
}

fn sign_changes<'a>(signs: impl IntoIterator<Item = &'a Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for &s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn coeff_sign_changes(c: &[BigInt]) -> usize {
    let signs: Vec<Ordering> = c.iter().map(|v| v.sign_cmp()).collect();
    sign_changes(&signs)
}

/// A point on the extended real line used as an interval endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    NegInf,
    At(Rat),
    PosInf,
}

/// Sturm chain of integer polynomials. Each entry is a nonzero multiple of
/// the classical remainder `-rem(S_{i-1}, S_i)` by a positive factor, so sign
/// variations agree with the textbook chain.
///
/// Built from the subresultant remainder sequence: its exact divisions keep
/// coefficient growth linear in the chain index without computing contents,
/// which for inputs with tens of thousands of bits is far cheaper than
/// repeated big-integer gcds.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<Vec<BigInt>>,
}

fn derivative_int(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, v)| v * BigInt::from(i)).collect()
}

fn trim(r: &mut Vec<BigInt>) {
    while r.last().is_some_and(|v| v.is_zero()) {
        r.pop();
    }
}

/// `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = &b[deg(b)];
    let db = deg(b);
    for k in (0..=deg(a) - db).rev() {
        let top = db + k;
        let q = if r.len() > top { r[top].clone() } else { BigInt::zero() };
        for v in r.iter_mut() {
            *v *= lb;
        }
        if !q.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &q * bj;
            }
        }
    }
    trim(&mut r);
    r
}

fn sign_of(v: &BigInt) -> i8 {
    if v.is_negative() {
        -1
    } else {
        1
    }
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let p0 = int_coeffs(p);
        let mut chain = vec![p0.clone()];
        if p0.len() == 1 {
            return SturmChain { chain };
        }
        // subresultant sequence r_i with signs s_i such that s_i·r_i is a
        // positive multiple of the classical Sturm polynomial
        let mut rs = vec![p0.clone(), derivative_int(&p0)];
        let mut signs: Vec<i8> = vec![1, 1];
        let mut delta = deg(&rs[0]) - deg(&rs[1]);
        let mut beta = if delta % 2 == 0 { -BigInt::one() } else { BigInt::one() };
        let mut psi = -BigInt::one();
        chain.push(rs[1].clone());
        loop {
            let k = rs.len();
            let (a, b) = (&rs[k - 2], &rs[k - 1]);
            if b.len() <= 1 {
                break;
            }
            let pr = prem(a, b);
            if pr.is_empty() {
                break;
            }
            let q: Vec<BigInt> = pr
                .iter()
                .map(|v| {
                    let (d, m) = v.div_rem(&beta);
                    debug_assert!(m.is_zero(), "subresultant division is exact");
                    d
                })
                .collect();
            // rem(S_{k-2}, S_{k-1}) = pos · s_{k-2} · pr / lc^(delta+1)
            let lc = &b[deg(b)];
            let lc_pow_sign = if lc.is_negative() && (delta + 1) % 2 == 1 { -1 } else { 1 };
            let s = -signs[k - 2] * lc_pow_sign * sign_of(&beta);
            let mut next = q.clone();
            if s < 0 {
                for v in &mut next {
                    *v = -&*v;
                }
            }
            chain.push(next);
            // advance the subresultant bookkeeping
            let new_delta = deg(b) - deg(&q);
            let neg_lc = -lc.clone();
            psi = num_traits::pow(neg_lc.clone(), delta) / num_traits::pow(psi, delta - 1);
            beta = &neg_lc * num_traits::pow(psi.clone(), new_delta);
            delta = new_delta;
            signs.push(s);
            rs.push(q);
        }
        SturmChain { chain }
    }

    pub fn variations(&self, x: &Endpoint) -> usize {
        let signs: Vec<Ordering> = self
            .chain
            .iter()
            .map(|c| match x {
                Endpoint::NegInf => sign_at_neg_inf(c),
                Endpoint::PosInf => sign_at_pos_inf(c),
                Endpoint::At(v) => sign_at_int(c, v),
            })
            .collect();
        sign_changes(&signs)
    }

    /// Distinct roots in the open interval `(a, b)`; neither endpoint may be
    /// a root.
    pub fn count(&self, a: &Endpoint, b: &Endpoint) -> Result<usize, Error> {
        for e in [a, b] {
            if let Endpoint::At(v) = e {
                if sign_at_int(&self.chain[0], v) == Ordering::Equal {
                    return Err(Error::EndpointRoot(v.clone()));
                }
            }
        }
        Ok(self.variations(a).saturating_sub(self.variations(b)))
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// Number of distinct real roots of `p` in the open interval.
pub fn sturm_root_count(p: &UniPoly, interval: &RatInterval) -> Result<usize, Error> {
    if p.is_zero() {
        return Err(Error::Domain("root count of the zero polynomial".into()));
    }
    SturmChain::new(p).count(&Endpoint::At(interval.lo().clone()), &Endpoint::At(interval.hi().clone()))
}

/// An open interval `(a, b)` or an open ray `(a, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Span {
    Open(Rat, Rat),
    Ray(Rat),
}

fn taylor_shift_one(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

/// Primitive integer coefficients of `q(a + w·z)`.
fn affine_int(c: &[BigInt], a: &Rat, w: &Rat) -> Vec<BigInt> {
    let p = UniPoly::new(c.iter().map(|v| Rat::from_integer(v.clone())).collect());
    let shifted = p.taylor_shift(a);
    let mut wk = Rat::one();
    let scaled: Vec<Rat> = shifted
        .coeffs()
        .iter()
        .map(|ci| {
            let v = ci * &wk;
            wk *= w;
            v
        })
        .collect();
    int_coeffs(&UniPoly::new(scaled))
}

/// Sign variations of the Möbius transform that maps `(0, ∞)` onto `(0, 1)`
/// for a polynomial already moved to the unit interval.
fn unit_variations(c: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = c.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    coeff_sign_changes(&r)
}

/// Descartes-type bound on the roots of `p` in the span, with its parity.
pub fn jacobi_root_bound(p: &UniPoly, span: &Span) -> (usize, u8) {
    assert!(!p.is_zero(), "root bound of the zero polynomial");
    let c = int_coeffs(p);
    let v = match span {
        Span::Ray(a) => coeff_sign_changes(&affine_int(&c, a, &Rat::one())),
        Span::Open(a, b) => {
            assert!(a < b, "empty interval");
            unit_variations(&affine_int(&c, a, &(b - a)))
        }
    };
    (v, (v % 2) as u8)
}

/// Halves of a unit-interval polynomial: `2^d q(w/2)` and `2^d q((w+1)/2)`.
fn split_unit(c: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = deg(c);
    let left: Vec<BigInt> = c.iter().enumerate().map(|(i, v)| v << (d - i)).collect();
    let mut right = left.clone();
    taylor_shift_one(&mut right);
    (primitive(left), primitive(right))
}

/// Outcome of exploring a span with Descartes bisection.
#[derive(Clone, Debug, PartialEq)]
pub enum DescartesOutcome {
    /// No root in the open span.
    RootFree { pieces: usize },
    /// A sub-interval with exactly one simple root.
    SimpleRoot(RatInterval),
    /// An exact rational root at a bisection point.
    ExactRoot(Rat),
    /// Bisection did not settle within the node budget (multiple roots or
    /// extremely close clusters).
    Unsettled,
}

const DESCARTES_NODE_BUDGET: usize = 200_000;

/// Power of two above every positive root of `c` (Cauchy-type bound).
fn positive_root_bound(c: &[BigInt]) -> BigInt {
    let d = deg(c);
    let lead = c[d].abs();
    let m = c[..d].iter().map(|v| v.abs()).max().unwrap_or_default();
    // 1 + max|c_i|/|c_d|, rounded up to a power of two
    let q: BigInt = Integer::div_ceil(&m, &lead) + 1;
    BigInt::one() << q.bits()
}

/// Explore the open span for roots with sign-variation counts. The
/// polynomial is handled in integer form throughout.
pub fn descartes_explore(p: &UniPoly, span: &Span) -> DescartesOutcome {
    let c = int_coeffs(p);
    match span {
        Span::Open(a, b) => explore_interval(&c, a, b),
        Span::Ray(a) => {
            let shifted = affine_int(&c, a, &Rat::one());
            if coeff_sign_changes(&shifted) == 0 {
                return DescartesOutcome::RootFree { pieces: 1 };
            }
            let bound = Rat::from_integer(positive_root_bound(&shifted));
            explore_interval(&c, a, &(a + bound))
        }
    }
}

fn explore_interval(c: &[BigInt], a: &Rat, b: &Rat) -> DescartesOutcome {
    if c.len() <= 1 {
        return DescartesOutcome::RootFree { pieces: 1 };
    }
    let width = b - a;
    let unit = affine_int(c, a, &width);
    // (poly on unit interval, numerator k, depth j): sub-interval [k/2^j, (k+1)/2^j]
    let mut stack = vec![(unit, BigInt::zero(), 0u32)];
    let mut pieces = 0;
    let mut nodes = 0;
    let to_orig = |k: &BigInt, j: u32| -> Rat { a + &width * Rat::new(k.clone(), BigInt::one() << j as usize) };
    while let Some((q, k, j)) = stack.pop() {
        nodes += 1;
        if nodes > DESCARTES_NODE_BUDGET {
            return DescartesOutcome::Unsettled;
        }
        match unit_variations(&q) {
            0 => pieces += 1,
            1 => {
                return DescartesOutcome::SimpleRoot(RatInterval::new(to_orig(&k, j), to_orig(&(&k + 1), j)));
            }
            _ => {
                let (left, right) = split_unit(&q);
                if right[0].is_zero() {
                    return DescartesOutcome::ExactRoot(to_orig(&(2 * &k + 1), j + 1));
                }
                stack.push((right, 2 * &k + 1, j + 1));
                stack.push((left, 2 * k, j + 1));
            }
        }
    }
    DescartesOutcome::RootFree { pieces }
}

/// Squarefree decomposition `p = c · Π f_k^k` with monic, pairwise coprime
/// `f_k`; returns `(c, [(f_k, k)])`.
pub fn squarefree_decomposition(p: &UniPoly) -> (Rat, Vec<(UniPoly, u32)>) {
    assert!(!p.is_zero(), "decomposition of the zero polynomial");
    let c = p.lead();
    let f = p.monic();
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return (c, out);
    }
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.div_rem(&a0).0;
    let mut d = &fp.div_rem(&a0).0 - &b.derivative();
    let mut k = 1;
    while b.degree().is_some_and(|deg| deg > 0) {
        let a = b.gcd(&d);
        let nb = b.div_rem(&a).0;
        let nc = d.div_rem(&a).0;
        d = &nc - &nb.derivative();
        if a.degree().is_some_and(|deg| deg > 0) {
            out.push((a.monic(), k));
        }
        b = nb;
        k += 1;
    }
    (c, out)
}

/// Product of the odd-multiplicity factors, times the leading coefficient.
/// It has the same sign as `p` wherever `p` is nonzero.
pub fn odd_part(p: &UniPoly) -> UniPoly {
    let (c, factors) = squarefree_decomposition(p);
    factors
        .into_iter()
        .filter(|(_, k)| k % 2 == 1)
        .fold(UniPoly::constant(c), |acc, (f, _)| &acc * &f)
}

/// Divide out `(z - r)^m` exactly; `None` if `r` is not a root of that
/// multiplicity.
pub fn divide_root(p: &UniPoly, r: &Rat, m: u32) -> Option<UniPoly> {
    let lin = UniPoly::linear_root(r.clone());
    let mut q = p.clone();
    for _ in 0..m {
        let (quo, rem) = q.div_rem(&lin);
        if !rem.is_zero() {
            return None;
        }
        q = quo;
    }
    Some(q)
}

/// Default width below which isolating intervals are accepted.
pub fn default_isolation_width() -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << 20usize)
}

/// Disjoint intervals each holding exactly one root of `p` in the closed
/// domain, narrower than the default width.
pub fn isolate_roots(p: &UniPoly, domain: &RatInterval) -> Result<Vec<RatInterval>, Error> {
    isolate_roots_with(p, domain, &default_isolation_width())
}

pub fn isolate_roots_with(p: &UniPoly, domain: &RatInterval, max_width: &Rat) -> Result<Vec<RatInterval>, Error> {
    if p.is_zero() {
        return Err(Error::Domain("root isolation of the zero polynomial".into()));
    }
    let g = p.gcd(&p.derivative());
    if g.degree().is_some_and(|d| d > 0) {
        let at_ends = [domain.lo(), domain.hi()].iter().any(|x| g.eval(x).is_zero());
        if at_ends || g_has_root_inside(&g, domain)? {
            return Err(Error::NotSquarefree);
        }
    }
    let mut q = p.clone();
    let mut out = Vec::new();
    for end in [domain.lo(), domain.hi()] {
        if q.eval(end).is_zero() {
            q = divide_root(&q, end, 1).expect("endpoint root divides");
            out.push(RatInterval::point(end.clone()));
        }
    }
    if domain.lo() == domain.hi() {
        out.dedup();
        return Ok(out);
    }
    let chain = SturmChain::new(&q);
    let mut stack = vec![(domain.lo().clone(), domain.hi().clone())];
    while let Some((a, b)) = stack.pop() {
        let n = chain.count(&Endpoint::At(a.clone()), &Endpoint::At(b.clone()))?;
        if n == 0 {
            continue;
        }
        if n == 1 && &b - &a < *max_width {
            out.push(RatInterval::new(a, b));
            continue;
        }
        let (m, split) = split_point(&q, &a, &b);
        if let Some(root) = split {
            out.push(RatInterval::point(root.clone()));
            let eps = (&b - &a) / Rat::from_integer(4.into());
            let (l, r) = shrink_around(&q, &root, &a, &b, eps)?;
            stack.push((r, b));
            stack.push((a, l));
        } else {
            stack.push((m.clone(), b));
            stack.push((a, m));
        }
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    Ok(out)
}

fn g_has_root_inside(g: &UniPoly, domain: &RatInterval) -> Result<bool, Error> {
    if domain.lo() == domain.hi() {
        return Ok(false);
    }
    Ok(sturm_root_count(g, domain)? > 0)
}

/// Midpoint of `(a, b)`, or the exact root there if `q` vanishes at it.
fn split_point(q: &UniPoly, a: &Rat, b: &Rat) -> (Rat, Option<Rat>) {
    let m = (a + b) / Rat::from_integer(2.into());
    if sign_at(q, &m) == Ordering::Equal {
        (m.clone(), Some(m))
    } else {
        (m, None)
    }
}

/// Points `l < root < r` inside `[a, b]` with no other root of `q` in `[l, r]`.
fn shrink_around(q: &UniPoly, root: &Rat, a: &Rat, b: &Rat, mut eps: Rat) -> Result<(Rat, Rat), Error> {
    let quo = divide_root(q, root, 1).expect("exact root divides");
    let chain = SturmChain::new(&quo);
    loop {
        let l = (root - &eps).max(a.clone());
        let r = (root + &eps).min(b.clone());
        let clear = [&l, &r]
            .iter()
            .all(|x| sign_at(q, x) != Ordering::Equal && sign_at(&quo, x) != Ordering::Equal);
        if clear && chain.count(&Endpoint::At(l.clone()), &Endpoint::At(r.clone()))? == 0 {
            return Ok((l, r));
        }
        eps /= Rat::from_integer(2.into());
    }
}

/// Refine an interval with a sign change of `p` at its endpoints down to the
/// given width by bisection. Returns a point interval if a bisection point is
/// an exact root.
pub fn refine_sign_change(p: &UniPoly, iv: &RatInterval, width: &Rat) -> RatInterval {
    let c = int_coeffs(p);
    let (mut a, mut b) = (iv.lo().clone(), iv.hi().clone());
    let sa = sign_at_int(&c, &a);
    if sa == Ordering::Equal {
        return RatInterval::point(a);
    }
    if sign_at_int(&c, &b) == Ordering::Equal {
        return RatInterval::point(b);
    }
    assert_ne!(sa, sign_at_int(&c, &b), "no sign change to refine");
    while &b - &a >= *width {
        let m = (&a + &b) / Rat::from_integer(2.into());
        match sign_at_int(&c, &m) {
            Ordering::Equal => return RatInterval::point(m),
            s if s == sa => a = m,
            _ => b = m,
        }
    }
    RatInterval::new(a, b)
}

/// Closed region on which a sign condition is certified.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Closed(Rat, Rat),
    From(Rat),
}

impl Region {
    fn lo(&self) -> &Rat {
        match self {
            Region::Closed(a, _) | Region::From(a) => a,
        }
    }

    fn span(&self) -> Option<Span> {
        match self {
            Region::Closed(a, b) if a == b => None,
            Region::Closed(a, b) => Some(Span::Open(a.clone(), b.clone())),
            Region::From(a) => Some(Span::Ray(a.clone())),
        }
    }

    fn sample(&self) -> Rat {
        match self {
            Region::Closed(a, b) => (a + b) / Rat::from_integer(2.into()),
            Region::From(a) => a + Rat::one(),
        }
    }

    fn contains_interior(&self, r: &Rat) -> bool {
        match self {
            Region::Closed(a, b) => a < r && r < b,
            Region::From(a) => a < r,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Want {
    NonNeg,
    NonPos,
}

impl Want {
    fn accepts(self, s: Ordering) -> bool {
        match self {
            Want::NonNeg => s != Ordering::Less,
            Want::NonPos => s != Ordering::Greater,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    Descartes,
    Sturm,
}

/// Evidence that a sign condition fails.
#[derive(Clone, Debug, PartialEq)]
pub enum SignWitness {
    /// The polynomial has the wrong strict sign at this point.
    Point(Rat),
    /// A root of odd multiplicity lies in this interval, so the sign flips.
    Crossing(RatInterval),
}

impl SignWitness {
    pub fn interval(&self) -> RatInterval {
        match self {
            SignWitness::Point(p) => RatInterval::point(p.clone()),
            SignWitness::Crossing(iv) => iv.clone(),
        }
    }
}

/// Summary of a successful sign certification.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCert {
    pub method: RootMethod,
    /// Degree of the polynomial whose interior was proven root free.
    pub reduced_degree: usize,
    /// Bisection pieces (Descartes) or Sturm chain length.
    pub work: usize,
}

/// Certify `p ≥ 0` (or `≤ 0`) on a closed region.
///
/// `known` lists exact roots with multiplicities that are divided out first;
/// even multiplicities never change sign, odd ones are only accepted outside
/// the interior of the region. Whatever remains is reduced to its odd part
/// if it has repeated roots.
pub fn certify_sign(
    p: &UniPoly,
    region: &Region,
    want: Want,
    known: &[(Rat, u32)],
    method: RootMethod,
) -> Result<SignCert, SignWitness> {
    let mut q = p.clone();
    let mut flip = false;
    for (r, m) in known {
        q = divide_root(&q, r, *m).unwrap_or_else(|| panic!("{r} is not a root of multiplicity {m}"));
        if m % 2 == 1 {
            if region.contains_interior(r) {
                return Err(SignWitness::Crossing(RatInterval::point(r.clone())));
            }
            if r > region.lo() {
                flip = !flip;
            }
        }
    }
    if flip {
        q = -&q;
    }
    if q.is_zero() {
        return Ok(SignCert { method, reduced_degree: 0, work: 0 });
    }
    match certify_reduced(&q, region, want, method) {
        Ok(cert) => Ok(cert),
        Err(None) => certify_reduced(&odd_part(&q), region, want, method).map_err(|w| {
            w.unwrap_or_else(|| SignWitness::Crossing(RatInterval::point(region.sample())))
        }),
        Err(Some(w)) => Err(w),
    }
}

/// `Err(None)` means the interior could not be settled without a
/// squarefree reduction.
fn certify_reduced(q: &UniPoly, region: &Region, want: Want, method: RootMethod) -> Result<SignCert, Option<SignWitness>> {
    let c = int_coeffs(q);
    let ends: Vec<Rat> = match region {
        Region::Closed(a, b) => vec![a.clone(), b.clone()],
        Region::From(a) => vec![a.clone()],
    };
    for e in &ends {
        if !want.accepts(sign_at_int(&c, e)) {
            return Err(Some(SignWitness::Point(e.clone())));
        }
    }
    if let Region::From(_) = region {
        if !want.accepts(sign_at_pos_inf(&c)) {
            return Err(Some(SignWitness::Point(large_point(&c, region.lo()))));
        }
    }
    let Some(span) = region.span() else {
        return Ok(SignCert { method, reduced_degree: deg(&c), work: 0 });
    };
    let work = match method {
        RootMethod::Descartes => match descartes_explore(q, &span) {
            DescartesOutcome::RootFree { pieces } => pieces,
            DescartesOutcome::SimpleRoot(iv) => return Err(Some(SignWitness::Crossing(iv))),
            DescartesOutcome::ExactRoot(_) | DescartesOutcome::Unsettled => return Err(None),
        },
        RootMethod::Sturm => {
            let mut r = q.clone();
            for e in &ends {
                while sign_at(&r, e) == Ordering::Equal {
                    r = divide_root(&r, e, 1).expect("endpoint root divides");
                }
            }
            let chain = SturmChain::new(&r);
            let (a, b) = match &span {
                Span::Open(a, b) => (Endpoint::At(a.clone()), Endpoint::At(b.clone())),
                Span::Ray(a) => (Endpoint::At(a.clone()), Endpoint::PosInf),
            };
            if chain.count(&a, &b).expect("endpoint roots removed") > 0 {
                return Err(None);
            }
            chain.len()
        }
    };
    // root free interior: one interior sample decides the sign
    if !want.accepts(sign_at_int(&c, &region.sample())) {
        return Err(Some(SignWitness::Point(region.sample())));
    }
    Ok(SignCert { method, reduced_degree: deg(&c), work })
}

fn large_point(c: &[BigInt], from: &Rat) -> Rat {
    from.abs() + Rat::from_integer(positive_root_bound(c)) + Rat::one()
}

/// Roots of `p` in the closed region, isolated to the given width, after
/// removing repeated factors.
pub fn real_roots(p: &UniPoly, domain: &RatInterval, width: &Rat) -> Vec<RatInterval> {
    if p.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let g = p.gcd(&p.derivative());
    let sqf = p.div_rem(&g).0;
    isolate_roots_with(&sqf, domain, width).expect("squarefree part isolates")
}
