//! Dense matrices over a [`Scalar`], plus fraction-free integer determinants.

use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;
use crate::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Sum of absolute values of all entries.
    pub fn abs_entry_sum(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc + x.abs())
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> T {
        self.data
            .iter()
            .map(Signed::abs)
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }

    /// Infinity norm: largest absolute row sum.
    pub fn inf_norm(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, x| acc + x.abs()))
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }

    /// Row echelon reduction in place with partial pivoting on the largest
    /// magnitude. Returns the pivot columns and the sign of the row permutation.
    fn eliminate(&mut self, rhs_cols: usize) -> (Vec<usize>, bool) {
        let ncols = self.cols - rhs_cols;
        let mut pivots = Vec::new();
        let mut flipped = false;
        let mut r = 0;
        for c in 0..ncols {
            if r == self.rows {
                break;
            }
            let best = (r..self.rows)
                .filter(|&i| !self[(i, c)].is_zero())
                .max_by(|&a, &b| {
                    self[(a, c)].abs().partial_cmp(&self[(b, c)].abs()).expect("unordered scalar")
                });
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                flipped = !flipped;
            }
            let pv = self[(r, c)].clone();
            for i in r + 1..self.rows {
                if self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone() / pv.clone();
                for j in c..self.cols {
                    let t = f.clone() * self[(r, j)].clone();
                    self[(i, j)] = self[(i, j)].clone() - t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, flipped)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(0).0.len()
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let (pivots, flipped) = m.eliminate(0);
        if pivots.len() < self.rows {
            return T::zero();
        }
        let d = (0..self.rows).fold(T::one(), |acc, i| acc * m[(i, i)].clone());
        if flipped {
            -d
        } else {
            d
        }
    }

    /// Solve `A X = B` for square nonsingular `A`; `None` if singular.
    pub fn solve_many(&self, b: &Matrix<T>) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.rows, self.rows);
        let n = self.rows;
        let k = b.cols;
        let mut aug = Self::from_fn(n, n + k, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[(i, j - n)].clone()
            }
        });
        let (pivots, _) = aug.eliminate(k);
        if pivots.len() < n {
            return None;
        }
        let mut x = Self::zeros(n, k);
        for col in 0..k {
            for i in (0..n).rev() {
                let mut s = aug[(i, n + col)].clone();
                for j in i + 1..n {
                    s = s - aug[(i, j)].clone() * x[(j, col)].clone();
                }
                x[(i, col)] = s / aug[(i, i)].clone();
            }
        }
        Some(x)
    }

    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let bm = Matrix { rows: b.len(), cols: 1, data: b.to_vec() };
        self.solve_many(&bm).map(|x| x.data)
    }

    /// Unique solution of a possibly rectangular system `A x = b`; `None` if
    /// the system is inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let (m, d) = (self.rows, self.cols);
        let mut aug = Self::from_fn(m, d + 1, |i, j| if j < d { self[(i, j)].clone() } else { b[i].clone() });
        let (pivots, _) = aug.eliminate(1);
        if pivots.len() < d {
            return None;
        }
        if (d..m).any(|i| !aug[(i, d)].is_zero()) {
            return None;
        }
        let mut x = vec![T::zero(); d];
        for i in (0..d).rev() {
            let mut s = aug[(i, d)].clone();
            for j in i + 1..d {
                s = s - aug[(i, j)].clone() * x[j].clone();
            }
            x[i] = s / aug[(i, i)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve_many(&Self::identity(self.rows))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)].clone()
                * other[(i % other.rows, j % other.cols)].clone()
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl Matrix<Rat> {
    /// Adjugate matrix `adj(S)` with `S · adj(S) = det(S) · I`.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let d = self.det();
        if !d.is_zero() {
            let inv = self.inverse().expect("nonzero determinant");
            return inv.map(|x| x * &d);
        }
        // singular: cofactors directly
        Self::from_fn(n, n, |i, j| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = self.submatrix(&rows, &cols).det();
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    /// Entries as integers when every entry is integral.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.is_integer().then(|| x.to_integer()))
                    .collect()
            })
            .collect()
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }
}

// ---- Fraction-free integer determinants ----

/// Bareiss elimination on an integer matrix.
///
/// Runs in `i128` and restarts on `BigInt` if any intermediate overflows.
/// Every intermediate of Bareiss is itself a minor of the input, so for Gram
/// matrices with small entries the fast path almost always suffices.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let small: Option<Vec<Vec<i128>>> =
        m.iter().map(|row| row.iter().map(ToPrimitive::to_i128).collect()).collect();
    if let Some(mut a) = small {
        if let Some(d) = bareiss_i128(&mut a) {
            return BigInt::from(d);
        }
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    bareiss_big(&mut a)
}

/// `None` on overflow, and also for a zero pivot column so that the caller's
/// exact path decides that case.
pub fn bareiss_i128(a: &mut [Vec<i128>]) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let p = (k + 1..n).find(|&i| a[i][k] != 0)?;
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_big(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
