//! Integer lattices in canonical column Hermite form.

use super::error::LinalgError;
use super::matrix::{SparseMatrix, SparseVec};
use super::snf::{smith_normal_form, SnfResult};
use crate::scalar::Coefficient;

/// A subgroup of `Z^ambient_dim`, stored as a canonical basis.
///
/// The basis is the column Hermite form of any generating set: column `j`
/// has its first nonzero entry (the pivot, positive) in row `pivot_rows[j]`,
/// pivot rows strictly increase, and every entry of an earlier column in a
/// later pivot row lies in `[0, pivot)`. Two lattices are equal exactly when
/// their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<T> {
    ambient_dim: usize,
    basis: SparseMatrix<T>,
    pivot_rows: Vec<usize>,
}

/// Column echelon reduction of dense columns, optionally tracking the
/// unimodular transform. Returns pivot rows; columns past the pivots are zero.
fn column_echelon<T: Coefficient>(cols: &mut [Vec<T>], dim: usize, mut transform: Option<&mut [Vec<T>]>, normalize: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for row in 0..dim {
        if next == cols.len() {
            break;
        }
        loop {
            // least-magnitude nonzero entry in this row among unfinished columns
            let mut best: Option<(usize, T)> = None;
            for (j, col) in cols.iter().enumerate().skip(next) {
                if col[row].is_zero() {
                    continue;
                }
                let a = col[row].abs();
                if best.as_ref().is_none_or(|(_, b)| a < *b) {
                    let unit = a.is_one();
                    best = Some((j, a));
                    if unit {
                        break;
                    }
                }
            }
            let Some((p, _)) = best else { break };
            let mut clean = true;
            for j in next..cols.len() {
                if j == p || cols[j][row].is_zero() {
                    continue;
                }
                let q = -cols[j][row].div_floor(&cols[p][row]);
                col_axpy(cols, j, p, &q);
                if let Some(t) = transform.as_deref_mut() {
                    col_axpy(t, j, p, &q);
                }
                if !cols[j][row].is_zero() {
                    clean = false;
                }
            }
            if clean {
                cols.swap(next, p);
                if let Some(t) = transform.as_deref_mut() {
                    t.swap(next, p);
                }
                if cols[next][row].is_negative() {
                    negate(&mut cols[next]);
                    if let Some(t) = transform.as_deref_mut() {
                        negate(&mut t[next]);
                    }
                }
                if normalize {
                    for c in 0..next {
                        let q = -cols[c][row].div_floor(&cols[next][row]);
                        col_axpy(cols, c, next, &q);
                    }
                }
                pivots.push(row);
                next += 1;
                break;
            }
        }
    }
    pivots
}

fn col_axpy<T: Coefficient>(cols: &mut [Vec<T>], dst: usize, src: usize, q: &T) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = cols.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = cols.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            x.add_mul_assign(y, q);
        }
    }
}

fn negate<T: Coefficient>(v: &mut [T]) {
    for x in v {
        *x = -std::mem::replace(x, T::zero());
    }
}

fn dense_columns<T: Coefficient>(m: &SparseMatrix<T>) -> Vec<Vec<T>> {
    m.columns().iter().map(|c| c.to_dense(m.rows())).collect()
}

impl<T: Coefficient> Lattice<T> {
    /// Lattice spanned by the columns of `gens`, canonicalized.
    pub fn from_generators(gens: &SparseMatrix<T>) -> Self {
        let dim = gens.rows();
        let mut cols = dense_columns(gens);
        let pivots = column_echelon(&mut cols, dim, None, true);
        cols.truncate(pivots.len());
        let basis = SparseMatrix::from_columns(dim, cols.iter().map(|c| SparseVec::from_dense(c)).collect());
        Self { ambient_dim: dim, basis, pivot_rows: pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: SparseMatrix::zeros(ambient_dim, 0), pivot_rows: Vec::new() }
    }

    /// All of `Z^ambient_dim`.
    pub fn full(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: SparseMatrix::identity(ambient_dim), pivot_rows: (0..ambient_dim).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &SparseMatrix<T> {
        &self.basis
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the lattice. Forward substitution along the pivot rows.
    pub fn coordinates(&self, v: &SparseVec<T>) -> Option<Vec<T>> {
        let mut rest = v.clone();
        let mut coords = Vec::with_capacity(self.rank());
        for (j, &row) in self.pivot_rows.iter().enumerate() {
            let col = self.basis.column(j);
            let x = rest.get(row).cloned().unwrap_or_else(T::zero);
            let p = col.get(row).expect("pivot present");
            if !x.is_multiple_of(p) {
                return None;
            }
            let q = x / p.clone();
            if !q.is_zero() {
                rest = rest.axpy(&-q.clone(), col);
            }
            coords.push(q);
        }
        rest.is_empty().then_some(coords)
    }

    pub fn contains(&self, v: &SparseVec<T>) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice<T>) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Lattice<T>) -> Result<Lattice<T>, LinalgError> {
        self.check_dim(other)?;
        Ok(Lattice::from_generators(&self.basis.hstack(&other.basis)))
    }

    fn check_dim(&self, other: &Lattice<T>) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(())
    }

    /// `|det|` of the basis when it is square (full rank).
    pub fn covolume(&self) -> Option<T> {
        (self.rank() == self.ambient_dim).then(|| {
            self.pivot_rows.iter().enumerate().fold(T::one(), |acc, (j, &r)| acc * self.basis.get(r, j))
        })
    }
}

/// Canonical basis of the column span of `gens`.
pub fn hermite_basis<T: Coefficient>(gens: &SparseMatrix<T>) -> Lattice<T> {
    Lattice::from_generators(gens)
}

/// Basis of `{x : a x = 0}`.
pub fn integer_kernel<T: Coefficient>(a: &SparseMatrix<T>) -> Lattice<T> {
    let n = a.cols();
    let mut cols = dense_columns(a);
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();
    let pivots = column_echelon(&mut cols, a.rows(), Some(&mut v), false);
    let kernel: Vec<SparseVec<T>> = v[pivots.len()..].iter().map(|c| SparseVec::from_dense(c)).collect();
    Lattice::from_generators(&SparseMatrix::from_columns(n, kernel))
}

/// Reusable integer solver for `a x = b`, built from one Smith decomposition.
#[derive(Clone, Debug)]
pub struct IntegerSolver<T> {
    snf: SnfResult<T>,
    diag: Vec<T>,
}

impl<T: Coefficient> IntegerSolver<T> {
    pub fn new(a: &SparseMatrix<T>) -> Self {
        let snf = smith_normal_form(a);
        let diag = snf.invariant_factors();
        Self { snf, diag }
    }

    pub fn solve(&self, b: &SparseVec<T>) -> Result<Option<SparseVec<T>>, LinalgError> {
        let rows = self.snf.u.cols();
        if b.max_index().is_some_and(|m| m >= rows) {
            return Err(LinalgError::DimensionMismatch { expected: rows, found: b.max_index().unwrap() + 1 });
        }
        let c = self.snf.u.mul_vec(b);
        let mut y = Vec::new();
        for (i, ci) in c.iter() {
            match self.diag.get(i) {
                Some(d) if ci.is_multiple_of(d) => y.push((i, ci.clone() / d.clone())),
                _ => return Ok(None),
            }
        }
        Ok(Some(self.snf.v.mul_vec(&SparseVec::from_pairs(y))))
    }
}

/// Some `x` with `a x = b` over the integers, if one exists.
pub fn solve_integer<T: Coefficient>(a: &SparseMatrix<T>, b: &[T]) -> Result<Option<Vec<T>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let x = IntegerSolver::new(a).solve(&SparseVec::from_dense(b))?;
    Ok(x.map(|x| x.to_dense(a.cols())))
}

pub fn lattice_intersection<T: Coefficient>(l1: &Lattice<T>, l2: &Lattice<T>) -> Result<Lattice<T>, LinalgError> {
    l1.check_dim(l2)?;
    let r1 = l1.rank();
    let stacked = l1.basis.hstack(&l2.basis.neg());
    let kernel = integer_kernel(&stacked);
    let gens: Vec<SparseVec<T>> = kernel
        .basis()
        .columns()
        .iter()
        .map(|k| l1.basis.mul_vec(&k.remap(|i| (i < r1).then_some(i))))
        .collect();
    Ok(Lattice::from_generators(&SparseMatrix::from_columns(l1.ambient_dim, gens)))
}

/// `{x : m x in target}` for a map `m: Z^cols -> Z^rows`.
pub fn preimage<T: Coefficient>(m: &SparseMatrix<T>, target: &Lattice<T>) -> Result<Lattice<T>, LinalgError> {
    if m.rows() != target.ambient_dim() {
        return Err(LinalgError::AmbientMismatch { left: m.rows(), right: target.ambient_dim() });
    }
    let n = m.cols();
    let stacked = m.hstack(&target.basis().neg());
    let kernel = integer_kernel(&stacked);
    let gens: Vec<SparseVec<T>> = kernel.basis().columns().iter().map(|k| k.remap(|i| (i < n).then_some(i))).collect();
    Ok(Lattice::from_generators(&SparseMatrix::from_columns(n, gens)))
}
