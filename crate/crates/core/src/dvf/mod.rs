//! Discrete vector fields on a boundary matrix.
//!
//! Indices are 0-based positions in the matrix: a vector `(a, b)` pairs row
//! `a` (a face) with column `b` (its coface). The textual form `(a;b)` is
//! 1-based, as in matrix notation.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::intlinalg::SparseMatrix;
use crate::scalar::Coefficient;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VectorField {
    /// `(source row, target column)` in acceptance order.
    pub vectors: Vec<(usize, usize)>,
}

impl VectorField {
    pub fn new(vectors: Vec<(usize, usize)>) -> Self {
        Self { vectors }
    }

    /// From 1-based `(a;b)` pairs.
    pub fn from_one_based(pairs: &[(usize, usize)]) -> Self {
        Self { vectors: pairs.iter().map(|&(a, b)| (a - 1, b - 1)).collect() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        self.vectors.iter().map(|v| v.0)
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.vectors.iter().map(|v| v.1)
    }

    /// Vectors sorted by source row.
    pub fn sorted(&self) -> Vec<(usize, usize)> {
        let mut v = self.vectors.clone();
        v.sort();
        v
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vectors.iter().map(|(a, b)| format!("({};{})", a + 1, b + 1)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DvfViolation {
    OutOfBounds { vector: usize, row: usize, col: usize },
    /// `M[row, col]` is not `±1`.
    NotRegular { vector: usize, row: usize, col: usize },
    DuplicateSource { row: usize },
    DuplicateTarget { col: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DvfReport {
    pub violations: Vec<DvfViolation>,
}

impl DvfReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DvfError {
    #[error("malformed vector field: {0:?}")]
    Malformed(Vec<DvfViolation>),
    #[error("matrix entry ({row}, {col}) decreases filtration ({row_filt} > {col_filt})")]
    NotMonotone { row: usize, col: usize, row_filt: usize, col_filt: usize },
    #[error("expected {expected} filtration indices, found {found}")]
    FiltrationLength { expected: usize, found: usize },
}

/// Bounds, `±1` entries and distinctness.
pub fn check_vector_field<T: Coefficient>(m: &SparseMatrix<T>, v: &VectorField) -> DvfReport {
    let mut violations = Vec::new();
    let mut rows = vec![false; m.rows()];
    let mut cols = vec![false; m.cols()];
    for (k, &(a, b)) in v.vectors.iter().enumerate() {
        if a >= m.rows() || b >= m.cols() {
            violations.push(DvfViolation::OutOfBounds { vector: k, row: a, col: b });
            continue;
        }
        if !m.entry(a, b).is_some_and(|x| x.is_unit()) {
            violations.push(DvfViolation::NotRegular { vector: k, row: a, col: b });
        }
        if std::mem::replace(&mut rows[a], true) {
            violations.push(DvfViolation::DuplicateSource { row: a });
        }
        if std::mem::replace(&mut cols[b], true) {
            violations.push(DvfViolation::DuplicateTarget { col: b });
        }
    }
    DvfReport { violations }
}

/// Outcome of [`is_admissible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// A loop `a1 > a2 > ... > a1` (first node repeated at the end).
    pub cycle: Option<Vec<usize>>,
    /// Every relation `a > a'` induced by the field, sorted.
    pub edges: Vec<(usize, usize)>,
    /// The relations between source rows only, sorted.
    pub source_relations: Vec<(usize, usize)>,
}

/// Relation graph: for each vector `(a, b)`, `a > a'` for every other face
/// `a'` of column `b`. Admissible exactly when acyclic.
pub fn is_admissible<T: Coefficient>(m: &SparseMatrix<T>, v: &VectorField) -> Result<Admissibility, DvfError> {
    let report = check_vector_field(m, v);
    if !report.is_valid() {
        return Err(DvfError::Malformed(report.violations));
    }
    let mut adj = vec![Vec::new(); m.rows()];
    let mut edges = Vec::new();
    for &(a, b) in &v.vectors {
        for (r, _) in m.column(b).iter() {
            if r != a {
                adj[a].push(r);
                edges.push((a, r));
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    edges.sort_unstable();
    edges.dedup();
    let mut is_source = vec![false; m.rows()];
    for a in v.sources() {
        is_source[a] = true;
    }
    let source_relations = edges.iter().copied().filter(|&(_, r)| is_source[r]).collect();
    let cycle = find_cycle(&adj);
    Ok(Admissibility { admissible: cycle.is_none(), cycle, edges, source_relations })
}

/// Iterative three-colour DFS from each node in increasing order, children in
/// increasing order. Returns the first back-edge loop found.
fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut colour = vec![WHITE; adj.len()];
    for root in 0..adj.len() {
        if colour[root] != WHITE {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        colour[root] = GREY;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&child) = adj[node].get(*next) {
                *next += 1;
                match colour[child] {
                    WHITE => {
                        colour[child] = GREY;
                        stack.push((child, 0));
                    }
                    GREY => {
                        let start = stack.iter().position(|&(x, _)| x == child).unwrap();
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|&(x, _)| x).collect();
                        cycle.push(child);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                colour[node] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// Incremental relation graph used by the greedy construction.
struct Greedy {
    adj: Vec<Vec<usize>>,
    has_incoming: Vec<bool>,
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<usize>,
}

impl Greedy {
    fn new(rows: usize) -> Self {
        Self { adj: vec![Vec::new(); rows], has_incoming: vec![false; rows], stamp: vec![0; rows], epoch: 0, stack: Vec::new() }
    }

    /// Does any of `faces` (other than `a`) already reach `a`?
    fn reaches(&mut self, a: usize, faces: impl Iterator<Item = usize>) -> bool {
        if !self.has_incoming[a] {
            return false;
        }
        self.epoch += 1;
        self.stack.clear();
        for f in faces {
            if f != a && self.stamp[f] != self.epoch {
                self.stamp[f] = self.epoch;
                self.stack.push(f);
            }
        }
        while let Some(x) = self.stack.pop() {
            for &y in &self.adj[x] {
                if y == a {
                    return true;
                }
                if self.stamp[y] != self.epoch {
                    self.stamp[y] = self.epoch;
                    self.stack.push(y);
                }
            }
        }
        false
    }

    fn accept(&mut self, a: usize, faces: impl Iterator<Item = usize>) {
        for f in faces {
            if f != a {
                self.adj[a].push(f);
                self.has_incoming[f] = true;
            }
        }
    }
}

/// Maximal admissible field by a single greedy pass in reading order: rows
/// ascending; in each row, columns ascending; accept the first free column
/// with a `±1` entry that keeps the relation graph acyclic.
///
/// One pass is maximal: the graph only gains edges, so a rejected candidate
/// stays rejected.
pub fn max_admissible_dvf<T: Coefficient>(m: &SparseMatrix<T>) -> VectorField {
    let rows = m.row_lists();
    let mut used_col = vec![false; m.cols()];
    let mut graph = Greedy::new(m.rows());
    let mut vectors = Vec::new();
    for (a, row) in rows.iter().enumerate() {
        for (b, x) in row {
            if used_col[*b] || !x.is_unit() {
                continue;
            }
            let faces = m.column(*b).indices();
            if graph.reaches(a, faces) {
                continue;
            }
            graph.accept(a, m.column(*b).indices());
            used_col[*b] = true;
            vectors.push((a, *b));
            break;
        }
    }
    VectorField { vectors }
}

/// Filtration-compatible maximal field: the greedy pass runs separately on
/// each diagonal block of equal filtration index (blocks in parallel), and
/// the results are concatenated in increasing filtration order.
///
/// Every relation leaving a block points to a strictly earlier filtration
/// index, so blockwise acyclicity implies acyclicity on the whole matrix.
pub fn filtered_max_dvf<T: Coefficient>(
    m: &SparseMatrix<T>,
    row_filts: &[usize],
    col_filts: &[usize],
) -> Result<VectorField, DvfError> {
    if row_filts.len() != m.rows() {
        return Err(DvfError::FiltrationLength { expected: m.rows(), found: row_filts.len() });
    }
    if col_filts.len() != m.cols() {
        return Err(DvfError::FiltrationLength { expected: m.cols(), found: col_filts.len() });
    }
    for (r, c, _) in m.entries() {
        if row_filts[r] > col_filts[c] {
            return Err(DvfError::NotMonotone { row: r, col: c, row_filt: row_filts[r], col_filt: col_filts[c] });
        }
    }
    let mut levels: Vec<usize> = row_filts.iter().chain(col_filts).copied().collect();
    levels.sort_unstable();
    levels.dedup();
    let blocks: Vec<Vec<(usize, usize)>> = levels
        .par_iter()
        .map(|&lvl| {
            let rows: Vec<usize> = (0..m.rows()).filter(|&r| row_filts[r] == lvl).collect();
            let cols: Vec<usize> = (0..m.cols()).filter(|&c| col_filts[c] == lvl).collect();
            if rows.is_empty() || cols.is_empty() {
                return Vec::new();
            }
            let block = m.select_columns(&cols).select_rows(&rows);
            max_admissible_dvf(&block).vectors.into_iter().map(|(a, b)| (rows[a], cols[b])).collect()
        })
        .collect();
    Ok(VectorField { vectors: blocks.into_iter().flatten().collect() })
}
