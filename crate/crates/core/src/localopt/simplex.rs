//! Dense two-phase simplex with Bland's rule.
//!
//! [`LinearProgram::solve`] first runs the simplex in `f64` to find a
//! candidate optimal basis, then certifies it exactly: the basic solution is
//! feasible, the dual solution is feasible and both objectives agree. If
//! the certificate fails, the exact rational simplex runs from scratch.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{Rat, RatMatrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `minimize c·x` subject to the rows and `x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub rows: Vec<(Vec<Rat>, Cmp, Rat)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpMethod {
    /// Floating-point basis with an exact optimality certificate.
    CertifiedBasis,
    /// Exact rational pivoting.
    ExactPivoting,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rat,
    pub x: Vec<Rat>,
    pub pivots: usize,
    pub method: LpMethod,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { objective: vec![Rat::zero(); num_vars], rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<Rat>, cmp: Cmp, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars(), "row length");
        self.rows.push((coeffs, cmp, rhs));
    }

    pub fn solve(&self) -> Result<LpSolution> {
        if let Some(sol) = self.float_basis().and_then(|b| self.certify_basis(&b)) {
            return Ok(sol);
        }
        self.solve_exact()
    }

    /// Exact rational simplex only.
    pub fn solve_exact(&self) -> Result<LpSolution> {
        let tol = Rat::zero();
        let (_, x, value, pivots) = Tableau::build(self, tol).run(&self.objective)?;
        Ok(LpSolution { value, x, pivots, method: LpMethod::ExactPivoting })
    }

    /// Optimal basis of the `f64` relaxation: the basic structural variables
    /// and the rows whose slack is nonbasic.
    fn float_basis(&self) -> Option<Basis> {
        let f = LinearProgram64 {
            objective: self.objective.iter().map(Scalar::to_f64).collect(),
            rows: self
                .rows
                .iter()
                .map(|(a, c, b)| (a.iter().map(Scalar::to_f64).collect(), *c, b.to_f64()))
                .collect(),
        };
        let t = Tableau::build(&f, 1e-9);
        let slack_of = t.slack_of.clone();
        let (basis, ..) = t.run(&f.objective).ok()?;
        let n = self.num_vars();
        let structural: Vec<usize> = basis.iter().copied().filter(|&b| b < n).collect();
        let basic_slack: Vec<usize> = basis.iter().copied().filter(|&b| b >= n).collect();
        let tight = (0..self.rows.len())
            .filter(|&r| slack_of[r].is_none_or(|s| !basic_slack.contains(&s)))
            .collect();
        Some(Basis { structural, tight })
    }

    /// Exact check that `basis` is optimal; `None` if it is not.
    fn certify_basis(&self, basis: &Basis) -> Option<LpSolution> {
        let k = basis.structural.len();
        if k != basis.tight.len() {
            return None;
        }
        let n = self.num_vars();
        let mut x = vec![Rat::zero(); n];
        let mut y = vec![Rat::zero(); self.rows.len()];
        if k > 0 {
            let a = RatMatrix::from_fn(k, k, |i, j| self.rows[basis.tight[i]].0[basis.structural[j]].clone());
            let b: Vec<Rat> = basis.tight.iter().map(|&r| self.rows[r].2.clone()).collect();
            let xb = a.solve_unique(&b)?;
            let cb: Vec<Rat> = basis.structural.iter().map(|&j| self.objective[j].clone()).collect();
            let yb = a.transpose().solve_unique(&cb)?;
            for (j, v) in basis.structural.iter().zip(xb) {
                x[*j] = v;
            }
            for (r, v) in basis.tight.iter().zip(yb) {
                y[*r] = v;
            }
        }
        if x.iter().any(Signed::is_negative) {
            return None;
        }
        for ((a, cmp, b), yr) in self.rows.iter().zip(&y) {
            let lhs: Rat = a.iter().zip(&x).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * v).sum();
            let ok = match cmp {
                Cmp::Le => lhs <= *b && !yr.is_positive(),
                Cmp::Ge => lhs >= *b && !yr.is_negative(),
                Cmp::Eq => lhs == *b,
            };
            if !ok {
                return None;
            }
        }
        for j in 0..n {
            let mut reduced = self.objective[j].clone();
            for ((a, _, _), yr) in self.rows.iter().zip(&y) {
                if !yr.is_zero() && !a[j].is_zero() {
                    reduced -= yr * &a[j];
                }
            }
            if reduced.is_negative() {
                return None;
            }
        }
        let value: Rat = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        let dual: Rat = self.rows.iter().zip(&y).map(|((_, _, b), yr)| b * yr).sum();
        (value == dual).then(|| LpSolution { value, x, pivots: 0, method: LpMethod::CertifiedBasis })
    }
}

struct Basis {
    structural: Vec<usize>,
    tight: Vec<usize>,
}

struct LinearProgram64 {
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Cmp, f64)>,
}

trait Rows<T> {
    fn num_vars(&self) -> usize;
    fn rows(&self) -> Vec<(&[T], Cmp, &T)>;
}

impl Rows<Rat> for LinearProgram {
    fn num_vars(&self) -> usize {
        self.objective.len()
    }
    fn rows(&self) -> Vec<(&[Rat], Cmp, &Rat)> {
        self.rows.iter().map(|(a, c, b)| (a.as_slice(), *c, b)).collect()
    }
}

impl Rows<f64> for LinearProgram64 {
    fn num_vars(&self) -> usize {
        self.objective.len()
    }
    fn rows(&self) -> Vec<(&[f64], Cmp, &f64)> {
        self.rows.iter().map(|(a, c, b)| (a.as_slice(), *c, b)).collect()
    }
}

struct Tableau<T: Scalar> {
    /// Rows of `[A | b]`.
    a: Matrix<T>,
    basis: Vec<usize>,
    n_orig: usize,
    /// Columns at or beyond this index are artificial.
    art_start: usize,
    slack_of: Vec<Option<usize>>,
    tol: T,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &impl Rows<T>, tol: T) -> Self {
        let n = lp.num_vars();
        let rows = lp.rows();
        let n_slack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Cmp::Le || r.2.is_negative()).count();
        let width = n + n_slack + n_art + 1;
        let mut a = Matrix::zeros(rows.len(), width);
        let mut basis = Vec::with_capacity(rows.len());
        let mut slack_of = Vec::with_capacity(rows.len());
        let (mut s, mut t) = (n, n + n_slack);
        for (i, (coeffs, cmp, rhs)) in rows.iter().enumerate() {
            let flip = rhs.is_negative();
            let sgn = |x: T| if flip { -x } else { x };
            for (j, c) in coeffs.iter().enumerate() {
                a[(i, j)] = sgn(c.clone());
            }
            a[(i, width - 1)] = sgn((*rhs).clone());
            let slack_col = match cmp {
                Cmp::Eq => None,
                Cmp::Le | Cmp::Ge => {
                    let one = if *cmp == Cmp::Le { T::one() } else { -T::one() };
                    a[(i, s)] = sgn(one);
                    s += 1;
                    Some(s - 1)
                }
            };
            slack_of.push(slack_col);
            // a slack with coefficient +1 can start in the basis
            match slack_col {
                Some(c) if a[(i, c)].is_positive() => basis.push(c),
                _ => {
                    a[(i, t)] = T::one();
                    basis.push(t);
                    t += 1;
                }
            }
        }
        Tableau { a, basis, n_orig: n, art_start: n + n_slack, slack_of, tol, pivots: 0 }
    }

    fn pos(&self, x: &T) -> bool {
        *x > self.tol
    }

    fn neg(&self, x: &T) -> bool {
        *x < -self.tol.clone()
    }

    fn zero(&self, x: &T) -> bool {
        !self.pos(x) && !self.neg(x)
    }

    fn width(&self) -> usize {
        self.a.cols() - 1
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [T]) {
        let w = self.a.cols();
        let p = self.a[(r, c)].clone();
        for j in 0..w {
            if !self.a[(r, j)].is_zero() {
                self.a[(r, j)] = self.a[(r, j)].clone() / p.clone();
            }
        }
        let prow = self.a.row(r).to_vec();
        let nz: Vec<usize> = (0..w).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.a.rows() {
            if i == r || self.a[(i, c)].is_zero() {
                continue;
            }
            let f = self.a[(i, c)].clone();
            for &j in &nz {
                self.a[(i, j)] = self.a[(i, j)].clone() - f.clone() * prow[j].clone();
            }
            self.a[(i, c)] = T::zero();
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                obj[j] = obj[j].clone() - f.clone() * prow[j].clone();
            }
            obj[c] = T::zero();
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimizes the reduced-cost row `obj` (last entry is minus the value)
    /// over columns below `limit`.
    fn optimize(&mut self, obj: &mut [T], limit: usize) -> Result<()> {
        let rhs = self.width();
        loop {
            let Some(c) = (0..limit).find(|&j| self.neg(&obj[j])) else {
                return Ok(());
            };
            let mut best: Option<(T, usize)> = None;
            for i in 0..self.a.rows() {
                let x = &self.a[(i, c)];
                if self.pos(x) {
                    let ratio = self.a[(i, rhs)].clone() / x.clone();
                    let better = match &best {
                        None => true,
                        Some((q, b)) => {
                            let d = ratio.clone() - q.clone();
                            self.neg(&d) || (self.zero(&d) && self.basis[i] < self.basis[*b])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, r)) = best else {
                return Err(Error::Domain("linear program is unbounded".into()));
            };
            self.pivot(r, c, obj);
        }
    }

    /// Reduced costs of `cost` for the current basis.
    fn priced(&self, cost: &[T]) -> Vec<T> {
        let mut obj = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if !obj[b].is_zero() {
                let f = obj[b].clone();
                for (o, x) in obj.iter_mut().zip(self.a.row(i)) {
                    if !x.is_zero() {
                        *o = o.clone() - f.clone() * x.clone();
                    }
                }
            }
        }
        obj
    }

    /// Returns the final basis, the solution, the optimum and the pivot count.
    fn run(mut self, objective: &[T]) -> Result<(Vec<usize>, Vec<T>, T, usize)> {
        let w = self.width();
        if self.basis.iter().any(|&b| b >= self.art_start) {
            let mut cost = vec![T::zero(); w + 1];
            for c in cost.iter_mut().take(w).skip(self.art_start) {
                *c = T::one();
            }
            let mut obj = self.priced(&cost);
            self.optimize(&mut obj, w)?;
            if !self.zero(&obj[w]) {
                return Err(Error::Infeasible);
            }
            // drive remaining artificials out, dropping redundant rows
            let mut i = 0;
            while i < self.a.rows() {
                if self.basis[i] >= self.art_start {
                    match (0..self.art_start).find(|&j| !self.zero(&self.a[(i, j)])) {
                        Some(j) => {
                            let mut dummy = vec![T::zero(); w + 1];
                            self.pivot(i, j, &mut dummy);
                        }
                        None => {
                            let keep: Vec<usize> = (0..self.a.rows()).filter(|&r| r != i).collect();
                            let cols: Vec<usize> = (0..=w).collect();
                            self.a = self.a.submatrix(&keep, &cols);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![T::zero(); w + 1];
        cost[..self.n_orig].clone_from_slice(objective);
        let mut obj = self.priced(&cost);
        let limit = self.art_start;
        self.optimize(&mut obj, limit)?;
        let mut x = vec![T::zero(); self.n_orig];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_orig {
                x[b] = self.a[(i, w)].clone();
            }
        }
        let value = -obj[w].clone();
        Ok((self.basis, x, value, self.pivots))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn one_variable() {
        // maximize α subject to α ≤ 3
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(-1)];
        lp.add_row(vec![int(1)], Cmp::Le, int(3));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(-3));
        assert_eq!(s.x, vec![int(3)]);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(-3), int(-5)];
        lp.add_row(vec![int(1), int(0)], Cmp::Le, int(4));
        lp.add_row(vec![int(0), int(2)], Cmp::Le, int(12));
        lp.add_row(vec![int(3), int(2)], Cmp::Le, int(18));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(-36));
        assert_eq!(s.x, vec![int(2), int(6)]);
    }

    #[test]
    fn equality_and_lower_bounds() {
        // min x + y, x + y = 1, x ≥ 1/3, y ≥ 1/4
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(2)];
        lp.add_row(vec![int(1), int(1)], Cmp::Eq, int(1));
        lp.add_row(vec![int(1), int(0)], Cmp::Ge, rat(1, 3));
        lp.add_row(vec![int(0), int(1)], Cmp::Ge, rat(1, 4));
        let s = lp.solve().unwrap();
        assert_eq!(s.x, vec![rat(3, 4), rat(1, 4)]);
        assert_eq!(s.value, rat(5, 4));
    }

    #[test]
    fn negative_right_hand_sides() {
        // -x ≤ -2 means x ≥ 2
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(1)];
        lp.add_row(vec![int(-1)], Cmp::Le, int(-2));
        assert_eq!(lp.solve().unwrap().value, int(2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(1)];
        lp.add_row(vec![int(1)], Cmp::Le, int(1));
        lp.add_row(vec![int(1)], Cmp::Ge, int(2));
        assert_eq!(lp.solve(), Err(Error::Infeasible));
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(-1)];
        lp.add_row(vec![int(1)], Cmp::Ge, int(0));
        assert!(matches!(lp.solve(), Err(Error::Domain(_))));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook rule; Bland terminates
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![rat(-3, 4), int(150), rat(-1, 50), int(6)];
        lp.add_row(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], Cmp::Le, int(0));
        lp.add_row(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], Cmp::Le, int(0));
        lp.add_row(vec![int(0), int(0), int(1), int(0)], Cmp::Le, int(1));
        assert_eq!(lp.solve().unwrap().value, rat(-1, 20));
    }

    #[test]
    fn certified_basis_agrees_with_exact_pivoting() {
        let mut lp = LinearProgram::new(3);
        lp.objective = vec![int(-2), int(-3), int(-4)];
        lp.add_row(vec![int(3), int(2), int(1)], Cmp::Le, int(10));
        lp.add_row(vec![int(2), int(5), int(3)], Cmp::Le, int(15));
        lp.add_row(vec![int(1), int(1), int(1)], Cmp::Ge, rat(1, 3));
        let a = lp.solve().unwrap();
        let b = lp.solve_exact().unwrap();
        assert_eq!(a.method, LpMethod::CertifiedBasis);
        assert_eq!(b.method, LpMethod::ExactPivoting);
        assert_eq!(a.value, b.value);
        assert_eq!(a.value, int(-20));
    }

    #[test]
    fn wrong_basis_is_rejected() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(-3), int(-5)];
        lp.add_row(vec![int(1), int(0)], Cmp::Le, int(4));
        lp.add_row(vec![int(0), int(2)], Cmp::Le, int(12));
        lp.add_row(vec![int(3), int(2)], Cmp::Le, int(18));
        // vertex (4, 3) is feasible but not optimal
        let b = Basis { structural: vec![0, 1], tight: vec![0, 2] };
        assert!(lp.certify_basis(&b).is_none());
        let b = Basis { structural: vec![0, 1], tight: vec![1, 2] };
        assert_eq!(lp.certify_basis(&b).unwrap().value, int(-36));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(1)];
        lp.add_row(vec![int(1), int(1)], Cmp::Eq, int(2));
        lp.add_row(vec![int(2), int(2)], Cmp::Eq, int(4));
        assert_eq!(lp.solve().unwrap().value, int(2));
    }
}
