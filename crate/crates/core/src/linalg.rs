//! Dense matrices over the scalar field with deterministic row reduction.
//!
//! Pivot rule: within a column, the first row holding a nonzero constant
//! wins; otherwise the first row holding any nonzero entry.

use std::fmt;

use crate::scalar::{Rational, ScalarError, ScalarExpr};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ScalarExpr>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i).to_vec())).finish()
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<ScalarExpr>),
    Inconsistent,
    /// A particular solution (free variables set to 0) and a nullspace basis.
    Family { particular: Vec<ScalarExpr>, nullspace: Vec<Vec<ScalarExpr>> },
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ScalarExpr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ScalarExpr::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ScalarExpr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<ScalarExpr>], rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ScalarExpr) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ScalarExpr) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ScalarExpr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ScalarExpr> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &ScalarExpr> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self.get(i, k).is_zero() && !other.get(k, j).is_zero())
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[ScalarExpr]) -> Vec<ScalarExpr> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&k| !self.get(i, k).is_zero() && !v[k].is_zero())
                    .map(|k| self.get(i, k) * &v[k])
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, k: &ScalarExpr) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * k)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ScalarExpr::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Substitute a point into every entry.
    pub fn eval(&self, point: &[Rational]) -> Result<Matrix, ScalarError> {
        let data = self.data.iter().map(|e| e.eval(point).map(ScalarExpr::constant)).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.eval_f64(point)).collect()).collect()
    }

    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        let nonzero = (from..self.rows).filter(|&i| !self.get(i, col).is_zero());
        let mut first = None;
        for i in nonzero {
            if self.get(i, col).is_constant() {
                return Some(i);
            }
            first.get_or_insert(i);
        }
        first
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan elimination restricted to the first `limit` columns.
    fn reduce(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(col, r) else { continue };
            self.swap_rows(r, p);
            let inv = self.get(r, col).recip().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &(&f * self.get(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce(self.cols);
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Rank after substituting a point.
    pub fn rank_at(&self, point: &[Rational]) -> Result<usize, ScalarError> {
        Ok(self.eval(point)?.rank())
    }

    pub fn determinant(&self) -> ScalarExpr {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = ScalarExpr::one();
        for col in 0..n {
            let Some(p) = m.pick_pivot(col, col) else { return ScalarExpr::zero() };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = &det * &piv;
            let inv = piv.recip().expect("pivot is nonzero");
            for i in col + 1..n {
                let f = m.get(i, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(i, j) - &(&f * m.get(col, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, ScalarExpr::one());
        }
        let pivots = aug.reduce(n);
        if pivots.len() < n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Basis of the right kernel, one vector per free column (free entry = 1).
    pub fn nullspace(&self) -> Vec<Vec<ScalarExpr>> {
        let Echelon { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ScalarExpr::zero(); self.cols];
                v[f] = ScalarExpr::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Solve `self * x = b`.
    pub fn solve(&self, b: &[ScalarExpr]) -> Solution {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.reduce(self.cols);
        if (pivots.len()..self.rows).any(|i| !aug.get(i, self.cols).is_zero()) {
            return Solution::Inconsistent;
        }
        let mut x = vec![ScalarExpr::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        if pivots.len() == self.cols {
            return Solution::Unique(x);
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let nullspace = free
            .iter()
            .map(|&f| {
                let mut v = vec![ScalarExpr::zero(); self.cols];
                v[f] = ScalarExpr::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -aug.get(r, f);
                }
                v
            })
            .collect();
        Solution::Family { particular: x, nullspace }
    }
}

/// Coefficients expressing `v` in the span of `basis`, if it lies there.
pub fn express_in_span(basis: &[Vec<ScalarExpr>], v: &[ScalarExpr]) -> Option<Vec<ScalarExpr>> {
    if basis.is_empty() {
        return v.iter().all(ScalarExpr::is_zero).then(Vec::new);
    }
    let m = Matrix::from_columns(basis, v.len());
    match m.solve(v) {
        Solution::Unique(x) => Some(x),
        Solution::Family { particular, .. } => Some(particular),
        Solution::Inconsistent => None,
    }
}
