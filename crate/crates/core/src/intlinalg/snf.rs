//! Smith normal form with unimodular transforms.
//!
//! Elimination works on a dense copy. Pivots are always the nonzero entry of
//! least absolute value in the active submatrix, ties broken by smallest row
//! and then smallest column, so the output is deterministic.



use super::matrix::SparseMatrix;
use crate::scalar::Coefficient;

/// `u * a * v == s`, with `u_inv * u == 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult<T> {
    pub u: SparseMatrix<T>,
    pub u_inv: SparseMatrix<T>,
    pub s: SparseMatrix<T>,
    pub v: SparseMatrix<T>,
}

impl<T: Coefficient> SnfResult<T> {
    /// Nonzero diagonal entries `d1 | d2 | ...`.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.rank()).map(|i| self.s.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        let k = self.s.rows().min(self.s.cols());
        (0..k).take_while(|&i| self.s.entry(i, i).is_some()).count()
    }
}

pub(crate) struct Dense<T> {
    pub(crate) a: Vec<Vec<T>>,
    pub(crate) rows: usize,
    pub(crate) cols: usize,
}

impl<T: Coefficient> Dense<T> {
    pub(crate) fn from_sparse(m: &SparseMatrix<T>) -> Self {
        Self { a: m.to_dense(), rows: m.rows(), cols: m.cols() }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut a = vec![vec![T::zero(); n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { a, rows: n, cols: n }
    }

    pub(crate) fn to_sparse(&self) -> SparseMatrix<T> {
        SparseMatrix::from_dense_rows(&self.a, self.cols)
    }

    /// row[dst] += q * row[src]
    pub(crate) fn row_axpy(&mut self, dst: usize, src: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        let (d, s) = two_mut(&mut self.a, dst, src);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                x.add_mul_assign(y, q);
            }
        }
    }

    /// col[dst] += q * col[src]
    pub(crate) fn col_axpy(&mut self, dst: usize, src: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            if !row[src].is_zero() {
                let y = row[src].clone();
                row[dst].add_mul_assign(&y, q);
            }
        }
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
        }
    }

    pub(crate) fn neg_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::replace(x, T::zero());
        }
    }

    pub(crate) fn neg_col(&mut self, j: usize) {
        for row in &mut self.a {
            row[j] = -std::mem::replace(&mut row[j], T::zero());
        }
    }
}

fn two_mut<X>(v: &mut [X], i: usize, j: usize) -> (&mut X, &X) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

struct SnfState<T> {
    a: Dense<T>,
    u: Dense<T>,
    u_inv: Dense<T>,
    v: Dense<T>,
}

impl<T: Coefficient> SnfState<T> {
    fn row_axpy(&mut self, dst: usize, src: usize, q: &T) {
        self.a.row_axpy(dst, src, q);
        self.u.row_axpy(dst, src, q);
        // inverse of (row dst += q row src) applied on the right of u_inv
        self.u_inv.col_axpy(src, dst, &-q.clone());
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &T) {
        self.a.col_axpy(dst, src, q);
        self.v.col_axpy(dst, src, q);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap_rows(i, j);
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn neg_row(&mut self, i: usize) {
        self.a.neg_row(i);
        self.u.neg_row(i);
        self.u_inv.neg_col(i);
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if x.is_unit() {
                    return Some((i, j));
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let (m, n) = (self.a.rows, self.a.cols);
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a.a[t][t].clone();
                let mut clean = true;
                for i in t + 1..m {
                    if self.a.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a.a[i][t].div_floor(&p);
                    self.row_axpy(i, t, &-q);
                    if !self.a.a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    if self.a.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a.a[t][j].div_floor(&p);
                    self.col_axpy(j, t, &-q);
                    if !self.a.a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    let (pi, pj) = self.min_pivot(t).expect("pivot region is nonzero");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // divisibility of the remaining block
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a.a[i][j].is_multiple_of(&p)));
                match offender {
                    Some(i) => self.row_axpy(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a.a[t][t].is_negative() {
                self.neg_row(t);
            }
            t += 1;
        }
    }
}

/// Smith normal form `u * a * v = s` with unimodular `u`, `v`.
pub fn smith_normal_form<T: Coefficient>(a: &SparseMatrix<T>) -> SnfResult<T> {
    let (m, n) = a.shape();
    let mut st = SnfState { a: Dense::from_sparse(a), u: Dense::identity(m), u_inv: Dense::identity(m), v: Dense::identity(n) };
    st.run();
    SnfResult { u: st.u.to_sparse(), u_inv: st.u_inv.to_sparse(), s: st.a.to_sparse(), v: st.v.to_sparse() }
}

/// Exact determinant.
pub fn determinant<T: Coefficient>(a: &SparseMatrix<T>) -> T {
    assert_eq!(a.rows(), a.cols(), "determinant of non-square matrix");
    bareiss_det(a)
}

/// Exact determinant via Bareiss fraction-free elimination.
pub fn bareiss_det<T: Coefficient>(m: &SparseMatrix<T>) -> T {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut a = m.to_dense();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return T::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
