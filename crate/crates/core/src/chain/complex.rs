use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::error::ChainError;
use crate::intlinalg::{SparseMatrix, SparseVec};
use crate::scalar::Coefficient;

pub type CellId = usize;

/// Geometric payload attached to a cell by the image builders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellLabel {
    /// Grid vertices `(row, col)` spanned by the cell.
    Grid(Vec<(usize, usize)>),
    /// Abstract vertex indices.
    Simplex(Vec<usize>),
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellLabel::Grid(vs) => {
                let parts: Vec<String> = vs.iter().map(|(r, c)| format!("{r},{c}")).collect();
                write!(f, "grid:{}", parts.join(";"))
            }
            CellLabel::Simplex(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "simplex:{}", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: CellId,
    pub dim: usize,
    /// First step containing the cell, in `[1, steps]`.
    pub filt: usize,
    pub label: Option<CellLabel>,
}

/// Finite filtered chain complex with distinguished bases.
///
/// `boundary(n)` is `d_n : C_n -> C_{n-1}` as a `|β_{n-1}| x |β_n|` matrix in
/// basis order; `d_0` has zero rows. The complex is immutable once built.
#[derive(Clone)]
pub struct FilteredComplex<T> {
    steps: usize,
    bases: Vec<Vec<Cell>>,
    boundaries: Vec<SparseMatrix<T>>,
    index: HashMap<CellId, (usize, usize)>,
}

impl<T: Coefficient> PartialEq for FilteredComplex<T> {
    fn eq(&self, other: &Self) -> bool {
        self.steps == other.steps && self.bases == other.bases && self.boundaries == other.boundaries
    }
}

impl<T> fmt::Debug for FilteredComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<usize> = self.bases.iter().map(Vec::len).collect();
        write!(f, "FilteredComplex(steps={}, cells={counts:?})", self.steps)
    }
}

impl<T: Coefficient> FilteredComplex<T> {
    /// Checks shapes, degrees, id uniqueness and filtration range. Algebraic
    /// conditions (d∘d = 0, monotone boundaries) are left to
    /// [`validate_complex`](super::validate_complex).
    pub fn new(steps: usize, bases: Vec<Vec<Cell>>, boundaries: Vec<SparseMatrix<T>>) -> Result<Self, ChainError> {
        if boundaries.len() != bases.len() {
            return Err(ChainError::ShapeMismatch {
                degree: bases.len().min(boundaries.len()),
                expected: (bases.len(), 0),
                found: (boundaries.len(), 0),
            });
        }
        let mut index = HashMap::new();
        for (n, basis) in bases.iter().enumerate() {
            let expected = (if n == 0 { 0 } else { bases[n - 1].len() }, basis.len());
            if boundaries[n].shape() != expected {
                return Err(ChainError::ShapeMismatch { degree: n, expected, found: boundaries[n].shape() });
            }
            for (pos, cell) in basis.iter().enumerate() {
                if cell.dim != n {
                    return Err(ChainError::WrongDegree { id: cell.id, expected: n, found: cell.dim });
                }
                if cell.filt < 1 || cell.filt > steps {
                    return Err(ChainError::FiltrationOutOfRange { id: cell.id, filt: cell.filt, steps });
                }
                if index.insert(cell.id, (n, pos)).is_some() {
                    return Err(ChainError::DuplicateId(cell.id));
                }
            }
        }
        Ok(Self { steps, bases, boundaries, index })
    }

    /// Complex with `degrees` empty bases.
    pub fn empty(steps: usize, degrees: usize) -> Self {
        let boundaries = (0..degrees).map(|_| SparseMatrix::zeros(0, 0)).collect();
        Self { steps, bases: vec![Vec::new(); degrees], boundaries, index: HashMap::new() }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of stored degrees, `N + 1`.
    pub fn num_degrees(&self) -> usize {
        self.bases.len()
    }

    /// Cells of degree `n`; empty outside the stored range.
    pub fn basis(&self, n: usize) -> &[Cell] {
        self.bases.get(n).map_or(&[], |b| b.as_slice())
    }

    pub fn bases(&self) -> &[Vec<Cell>] {
        &self.bases
    }

    pub fn boundary(&self, n: usize) -> &SparseMatrix<T> {
        &self.boundaries[n]
    }

    pub fn boundaries(&self) -> &[SparseMatrix<T>] {
        &self.boundaries
    }

    /// `d_n`, or a zero matrix of the right shape outside the stored range.
    pub fn boundary_or_zero(&self, n: usize) -> SparseMatrix<T> {
        match self.boundaries.get(n) {
            Some(d) => d.clone(),
            None => SparseMatrix::zeros(if n == 0 { 0 } else { self.basis(n - 1).len() }, self.basis(n).len()),
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases.iter().enumerate().map(|(n, b)| if n % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) }).sum()
    }

    /// `(degree, position)` of a cell.
    pub fn position(&self, id: CellId) -> Option<(usize, usize)> {
        self.index.get(&id).copied()
    }

    pub fn cell(&self, id: CellId) -> Option<&Cell> {
        self.position(id).map(|(n, p)| &self.bases[n][p])
    }

    /// Filtration indices of the degree-`n` basis.
    pub fn filtrations(&self, n: usize) -> Vec<usize> {
        self.basis(n).iter().map(|c| c.filt).collect()
    }

    /// Positions of degree-`n` cells with filtration index `<= i`.
    pub fn positions_up_to(&self, n: usize, i: usize) -> Vec<usize> {
        self.basis(n).iter().enumerate().filter(|(_, c)| c.filt <= i).map(|(p, _)| p).collect()
    }

    /// Cell counts per degree among cells born exactly at `step`.
    pub fn counts_at_step(&self, step: usize) -> Vec<usize> {
        self.bases.iter().map(|b| b.iter().filter(|c| c.filt == step).count()).collect()
    }

    pub fn max_id(&self) -> Option<CellId> {
        self.index.keys().max().copied()
    }
}

/// Incremental construction in creation order.
#[derive(Debug)]
pub struct ComplexBuilder<T> {
    steps: usize,
    cells: Vec<Vec<Cell>>,
    faces: Vec<(CellId, CellId, T)>,
    next_id: CellId,
}

impl<T: Coefficient> ComplexBuilder<T> {
    pub fn new(steps: usize) -> Self {
        Self { steps, cells: Vec::new(), faces: Vec::new(), next_id: 0 }
    }

    /// Ensure degrees `0..degrees` exist even if left empty.
    pub fn with_degrees(mut self, degrees: usize) -> Self {
        if self.cells.len() < degrees {
            self.cells.resize_with(degrees, Vec::new);
        }
        self
    }

    pub fn add_cell(&mut self, dim: usize, filt: usize, label: Option<CellLabel>) -> CellId {
        let id = self.next_id;
        self.push(Cell { id, dim, filt, label });
        id
    }

    pub fn add_cell_with_id(&mut self, id: CellId, dim: usize, filt: usize, label: Option<CellLabel>) {
        self.push(Cell { id, dim, filt, label });
    }

    fn push(&mut self, cell: Cell) {
        self.next_id = self.next_id.max(cell.id + 1);
        if self.cells.len() <= cell.dim {
            self.cells.resize_with(cell.dim + 1, Vec::new);
        }
        self.cells[cell.dim].push(cell);
    }

    /// Record `coeff` as the coefficient of `face` in `d(cell)`; repeated
    /// entries accumulate.
    pub fn add_face(&mut self, cell: CellId, face: CellId, coeff: T) {
        self.faces.push((cell, face, coeff));
    }

    pub fn build(self) -> Result<FilteredComplex<T>, ChainError> {
        let mut pos = HashMap::new();
        for (n, basis) in self.cells.iter().enumerate() {
            for (p, c) in basis.iter().enumerate() {
                if pos.insert(c.id, (n, p)).is_some() {
                    return Err(ChainError::DuplicateId(c.id));
                }
            }
        }
        let mut triplets: Vec<Vec<(usize, usize, T)>> = vec![Vec::new(); self.cells.len()];
        for (cell, face, coeff) in self.faces {
            let &(n, cp) = pos.get(&cell).ok_or(ChainError::UnknownCell(cell))?;
            let &(m, fp) = pos.get(&face).ok_or(ChainError::UnknownCell(face))?;
            if n == 0 || m + 1 != n {
                return Err(ChainError::BadFace { cell, face });
            }
            triplets[n].push((fp, cp, coeff));
        }
        let boundaries = triplets
            .into_iter()
            .enumerate()
            .map(|(n, t)| {
                let rows = if n == 0 { 0 } else { self.cells[n - 1].len() };
                SparseMatrix::from_triplets(rows, self.cells[n].len(), t)
            })
            .collect();
        FilteredComplex::new(self.steps, self.cells, boundaries)
    }
}

/// An element of `C_n`, keyed by cell id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ChainVector<T> {
    pub degree: usize,
    pub coeffs: BTreeMap<CellId, T>,
}

impl<T: Coefficient> ChainVector<T> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (CellId, T)>>(degree: usize, terms: I) -> Self {
        let mut coeffs: BTreeMap<CellId, T> = BTreeMap::new();
        for (id, v) in terms {
            let e = coeffs.entry(id).or_insert_with(T::zero);
            *e = e.clone() + v;
        }
        coeffs.retain(|_, v| !v.is_zero());
        Self { degree, coeffs }
    }

    /// Chain from a coordinate vector in the degree-`n` basis of `c`.
    pub fn from_coords(c: &FilteredComplex<T>, degree: usize, v: &SparseVec<T>) -> Self {
        let basis = c.basis(degree);
        Self { degree, coeffs: v.iter().map(|(p, x)| (basis[p].id, x.clone())).collect() }
    }

    /// Coordinates in the degree basis of `c`.
    pub fn to_coords(&self, c: &FilteredComplex<T>) -> Result<SparseVec<T>, ChainError> {
        let mut pairs = Vec::with_capacity(self.coeffs.len());
        for (id, x) in &self.coeffs {
            let (n, p) = c.position(*id).ok_or(ChainError::UnknownCell(*id))?;
            if n != self.degree {
                return Err(ChainError::ChainDegree { expected: self.degree, found: n });
            }
            pairs.push((p, x.clone()));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, id: CellId) -> T {
        self.coeffs.get(&id).cloned().unwrap_or_else(T::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest filtration index in the support, 0 for the zero chain.
    pub fn max_filtration(&self, c: &FilteredComplex<T>) -> Option<usize> {
        self.coeffs.keys().map(|id| c.cell(*id).map(|x| x.filt)).try_fold(0, |acc, f| f.map(|f| acc.max(f)))
    }
}

impl<T: Coefficient> fmt::Display for ChainVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.coeffs.iter().map(|(id, x)| format!("{x}*<{id}>")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A violation found by [`validate_complex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexViolation {
    /// `d_n(d_{n+1}(column)) != 0`.
    SquareNonzero { degree: usize, column: CellId },
    /// A face is born later than its coface.
    FiltrationInversion { cell: CellId, face: CellId, cell_filt: usize, face_filt: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub violations: Vec<ComplexViolation>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_complex<T: Coefficient>(c: &FilteredComplex<T>) -> ComplexReport {
    let mut violations = Vec::new();
    for n in 1..c.num_degrees() {
        let d = c.boundary(n);
        for (p, col) in d.columns().iter().enumerate() {
            let cell = &c.basis(n)[p];
            for (r, _) in col.iter() {
                let face = &c.basis(n - 1)[r];
                if face.filt > cell.filt {
                    violations.push(ComplexViolation::FiltrationInversion {
                        cell: cell.id,
                        face: face.id,
                        cell_filt: cell.filt,
                        face_filt: face.filt,
                    });
                }
            }
        }
        if n >= 2 {
            let dd = c.boundary(n - 1).mul(d);
            for (p, col) in dd.columns().iter().enumerate() {
                if !col.is_empty() {
                    violations.push(ComplexViolation::SquareNonzero { degree: n - 1, column: c.basis(n)[p].id });
                }
            }
        }
    }
    ComplexReport { violations }
}

/// `d_n x`; the boundary of a 0-chain is the empty chain.
pub fn apply_boundary<T: Coefficient>(c: &FilteredComplex<T>, x: &ChainVector<T>) -> Result<ChainVector<T>, ChainError> {
    if x.degree == 0 || x.degree >= c.num_degrees() {
        x.to_coords(c)?;
        return Ok(ChainVector::zero(x.degree.saturating_sub(1)));
    }
    let v = x.to_coords(c)?;
    Ok(ChainVector::from_coords(c, x.degree - 1, &c.boundary(x.degree).mul_vec(&v)))
}

/// Restriction to cells with filtration index `<= i`.
pub fn subcomplex_at<T: Coefficient>(c: &FilteredComplex<T>, i: usize) -> Result<FilteredComplex<T>, ChainError> {
    if i > c.steps() {
        return Err(ChainError::StepOutOfRange { step: i, steps: c.steps() });
    }
    let keep: Vec<Vec<usize>> = (0..c.num_degrees()).map(|n| c.positions_up_to(n, i)).collect();
    Ok(restrict(c, &keep))
}

/// Sub-basis complex on the given positions, which must span a subcomplex.
pub(crate) fn restrict<T: Coefficient>(c: &FilteredComplex<T>, keep: &[Vec<usize>]) -> FilteredComplex<T> {
    let bases: Vec<Vec<Cell>> = keep.iter().enumerate().map(|(n, ps)| ps.iter().map(|&p| c.basis(n)[p].clone()).collect()).collect();
    let boundaries = (0..c.num_degrees())
        .map(|n| {
            let cols = c.boundary(n).select_columns(&keep[n]);
            if n == 0 {
                cols
            } else {
                cols.select_rows(&keep[n - 1])
            }
        })
        .collect();
    FilteredComplex::new(c.steps(), bases, boundaries).expect("restriction of a valid complex")
}

/// Per-degree basis permutation: `new_to_old[n][p]` is the old position of
/// the cell now at position `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    pub new_to_old: Vec<Vec<usize>>,
}

impl Permutation {
    pub fn is_identity(&self) -> bool {
        self.new_to_old.iter().all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }

    pub fn old_to_new(&self, n: usize) -> Vec<usize> {
        let mut inv = vec![0; self.new_to_old[n].len()];
        for (new, &old) in self.new_to_old[n].iter().enumerate() {
            inv[old] = new;
        }
        inv
    }
}

/// Stable reorder of every basis by filtration index.
pub fn sort_by_filtration<T: Coefficient>(c: &FilteredComplex<T>) -> (FilteredComplex<T>, Permutation) {
    let new_to_old: Vec<Vec<usize>> = (0..c.num_degrees())
        .map(|n| {
            let mut order: Vec<usize> = (0..c.dim(n)).collect();
            order.sort_by_key(|&p| c.basis(n)[p].filt);
            order
        })
        .collect();
    (permute(c, &new_to_old), Permutation { new_to_old })
}

fn permute<T: Coefficient>(c: &FilteredComplex<T>, new_to_old: &[Vec<usize>]) -> FilteredComplex<T> {
    let perm = Permutation { new_to_old: new_to_old.to_vec() };
    let bases: Vec<Vec<Cell>> =
        new_to_old.iter().enumerate().map(|(n, ps)| ps.iter().map(|&p| c.basis(n)[p].clone()).collect()).collect();
    let boundaries = (0..c.num_degrees())
        .map(|n| {
            let cols = c.boundary(n).select_columns(&new_to_old[n]);
            if n == 0 {
                cols
            } else {
                let inv = perm.old_to_new(n - 1);
                SparseMatrix::from_columns(cols.rows(), cols.columns().iter().map(|col| col.remap(|r| Some(inv[r]))).collect())
            }
        })
        .collect();
    FilteredComplex::new(c.steps(), bases, boundaries).expect("permutation of a valid complex")
}
