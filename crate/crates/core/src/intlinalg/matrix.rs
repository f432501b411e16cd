use std::fmt;

use crate::scalar::Coefficient;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec<T> {
    entries: Vec<(usize, T)>,
}

impl<T> Default for SparseVec<T> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<T: Coefficient> SparseVec<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from arbitrary `(index, value)` pairs; duplicates are summed and
    /// zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, T)>>(pairs: I) -> Self {
        let mut entries: Vec<(usize, T)> = pairs.into_iter().collect();
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, T)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.clone() + v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Self { entries: out }
    }

    pub fn unit(index: usize) -> Self {
        Self { entries: vec![(index, T::one())] }
    }

    pub fn from_dense(values: &[T]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<T> {
        let mut out = vec![T::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: &T, other: &SparseVec<T>) -> SparseVec<T> {
        if factor.is_zero() || other.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, va)), Some((ib, vb))) => {
                    if ia < ib {
                        out.push((*ia, va.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, vb.clone() * factor.clone()));
                        b.next();
                    } else {
                        let mut s = va.clone();
                        s.add_mul_assign(vb, factor);
                        if !s.is_zero() {
                            out.push((*ia, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, va)), None) => {
                    out.push((*ia, va.clone()));
                    a.next();
                }
                (None, Some((ib, vb))) => {
                    out.push((*ib, vb.clone() * factor.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec<T>) -> SparseVec<T> {
        self.axpy(&T::one(), other)
    }

    pub fn sub(&self, other: &SparseVec<T>) -> SparseVec<T> {
        self.axpy(&-T::one(), other)
    }

    pub fn scale(&self, factor: &T) -> SparseVec<T> {
        if factor.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.clone() * factor.clone())).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec<T> {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v.clone())).collect() }
    }

    /// Keep the entries whose index maps to `Some`, reindexed.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVec<T> {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, v)| map(*i).map(|j| (j, v.clone()))))
    }

    pub fn dot(&self, other: &SparseVec<T>) -> T {
        let mut acc = T::zero();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((ia, va)), Some((ib, vb))) = (a.peek(), b.peek()) {
            if ia < ib {
                a.next();
            } else if ib < ia {
                b.next();
            } else {
                acc.add_mul_assign(va, vb);
                a.next();
                b.next();
            }
        }
        acc
    }
}

impl<T: Coefficient> FromIterator<(usize, T)> for SparseVec<T> {
    fn from_iter<I: IntoIterator<Item = (usize, T)>>(iter: I) -> Self {
        SparseVec::from_pairs(iter)
    }
}

/// Column-major sparse matrix over an integer ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<T>>,
}

impl<T: Coefficient> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: n, columns: (0..n).map(SparseVec::unit).collect() }
    }

    /// Build from columns; panics if a column has an index `>= rows`.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec<T>>) -> Self {
        for c in &columns {
            if let Some(max) = c.max_index() {
                assert!(max < rows, "column entry {max} out of range for {rows} rows");
            }
        }
        Self { rows, cols: columns.len(), columns }
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, T)>>(rows: usize, cols: usize, triplets: I) -> Self {
        let mut buckets: Vec<Vec<(usize, T)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of range {rows}x{cols}");
            buckets[c].push((r, v));
        }
        Self { rows, cols, columns: buckets.into_iter().map(SparseVec::from_pairs).collect() }
    }

    /// Row-major nested slices; every row must have `cols` entries.
    pub fn from_dense_rows(rows: &[Vec<T>], cols: usize) -> Self {
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                assert_eq!(row.len(), cols, "ragged dense input");
                row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))
            })
            .filter(|(_, _, v)| !v.is_zero());
        Self::from_triplets(rows.len(), cols, trip)
    }

    /// Convenience for tests and fixtures.
    pub fn from_i32_rows(rows: &[&[i32]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::from(v)).collect()).collect();
        Self::from_dense_rows(&dense, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_empty)
    }

    pub fn column(&self, j: usize) -> &SparseVec<T> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<T>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec<T>> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.columns[c].get(r).cloned().unwrap_or_else(T::zero)
    }

    pub fn entry(&self, r: usize, c: usize) -> Option<&T> {
        self.columns[c].get(r)
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols);
        let col = &self.columns[c];
        let mut pairs: Vec<(usize, T)> = col.iter().filter(|(i, _)| *i != r).map(|(i, x)| (i, x.clone())).collect();
        pairs.push((r, v));
        self.columns[c] = SparseVec::from_pairs(pairs);
    }

    pub fn set_column(&mut self, c: usize, col: SparseVec<T>) {
        if let Some(max) = col.max_index() {
            assert!(max < self.rows);
        }
        self.columns[c] = col;
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.entries().map(|(r, c, v)| (c, r, v.clone())))
    }

    /// Row-major view: for each row the `(col, value)` pairs in increasing column order.
    pub fn row_lists(&self) -> Vec<Vec<(usize, T)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            out[r].push((c, v.clone()));
        }
        out
    }

    pub fn mul_vec(&self, x: &SparseVec<T>) -> SparseVec<T> {
        let mut acc = Accumulator::new(self.rows);
        for (k, xk) in x.iter() {
            acc.add_scaled(&self.columns[k], xk);
        }
        acc.drain()
    }

    pub fn mul(&self, other: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut acc = Accumulator::new(self.rows);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                for (k, v) in col.iter() {
                    acc.add_scaled(&self.columns[k], v);
                }
                acc.drain()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, columns }
    }

    pub fn add(&self, other: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> SparseMatrix<T> {
        SparseMatrix { rows: self.rows, cols: self.cols, columns: self.columns.iter().map(SparseVec::neg).collect() }
    }

    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix<T> {
        SparseMatrix { rows: self.rows, cols: cols.len(), columns: cols.iter().map(|&c| self.columns[c].clone()).collect() }
    }

    /// Restrict to the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> SparseMatrix<T> {
        let mut map = vec![None; self.rows];
        for (new, &old) in rows.iter().enumerate() {
            map[old] = Some(new);
        }
        SparseMatrix {
            rows: rows.len(),
            cols: self.cols,
            columns: self.columns.iter().map(|c| c.remap(|i| map[i])).collect(),
        }
    }

    pub fn hstack(&self, other: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        SparseMatrix { rows: self.rows, cols: columns.len(), columns }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.columns.iter().enumerate().all(|(j, c)| c.len() == 1 && c.get(j).is_some_and(|v| v.is_one()))
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries().map(|(_, _, v)| v.abs()).max().unwrap_or_else(T::zero)
    }
}

impl<T: fmt::Debug> fmt::Debug for SparseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_map()
            .entries(self.columns.iter().enumerate().flat_map(|(j, c)| c.entries.iter().map(move |(i, v)| ((*i, j), v))))
            .finish()
    }
}

/// Dense scratch accumulator reused across columns of a product.
pub(crate) struct Accumulator<T> {
    values: Vec<T>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl<T: Coefficient> Accumulator<T> {
    pub(crate) fn new(len: usize) -> Self {
        Self { values: vec![T::zero(); len], touched: Vec::new(), mark: vec![false; len] }
    }

    pub(crate) fn add_scaled(&mut self, v: &SparseVec<T>, factor: &T) {
        for (i, x) in v.iter() {
            if !self.mark[i] {
                self.mark[i] = true;
                self.touched.push(i);
            }
            self.values[i].add_mul_assign(x, factor);
        }
    }

    pub(crate) fn drain(&mut self) -> SparseVec<T> {
        self.touched.sort_unstable();
        let mut entries = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let v = std::mem::replace(&mut self.values[i], T::zero());
            if !v.is_zero() {
                entries.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec { entries }
    }
}
