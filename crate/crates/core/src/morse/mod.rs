//! Reductions induced by admissible discrete vector fields.
//!
//! For a field `V` on `d_k`, sources live in degree `k-1`, targets in degree
//! `k`, and every other cell of those degrees is critical. The reduction
//! keeps the critical cells, with their ids, filtration indices and labels.

use std::sync::Arc;

use thiserror::Error;

use crate::chain::{compose_reductions, restrict, CellId, ChainError, FilteredComplex, Reduction};
use crate::dvf::{check_vector_field, filtered_max_dvf, max_admissible_dvf, DvfError, DvfViolation, VectorField};
use crate::intlinalg::{Accumulator, SparseMatrix, SparseVec};
use crate::scalar::Coefficient;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("malformed vector field: {0:?}")]
    Malformed(Vec<DvfViolation>),
    /// Source rows along a loop, first repeated at the end.
    #[error("vector field is not admissible: loop through rows {0:?}")]
    Inadmissible(Vec<usize>),
    #[error("degree {degree} outside [1, {max}]")]
    Degree { degree: usize, max: usize },
    #[error(transparent)]
    Dvf(#[from] DvfError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// `W(σ)` for every vector `(σ, τ)`, as chains over the columns of `m`.
///
/// `W(σ) = ε(σ,τ) (τ - Σ ε(σ',τ) W(σ'))`, the sum over the other sources
/// `σ'` among the faces of `τ`. Each `W` is computed once, children first.
/// `W(a)` for every source `a` of `v`, with the order they were finished in
/// (every vector after the vectors it depends on).
fn source_inverses<T: Coefficient>(m: &SparseMatrix<T>, v: &VectorField) -> Result<(Vec<SparseVec<T>>, Vec<usize>), MorseError> {
    let report = check_vector_field(m, v);
    if !report.is_valid() {
        return Err(MorseError::Malformed(report.violations));
    }
    let mut vector_of = vec![usize::MAX; m.rows()];
    for (k, &(a, _)) in v.vectors.iter().enumerate() {
        vector_of[a] = k;
    }
    let vector_of = &vector_of;
    let deps = |k: usize| {
        let (a, b) = v.vectors[k];
        m.column(b).iter().filter(move |(r, _)| *r != a && vector_of[*r] != usize::MAX).map(move |(r, x)| (vector_of[r], x))
    };

    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut state = vec![WHITE; v.len()];
    let mut w: Vec<SparseVec<T>> = vec![SparseVec::new(); v.len()];
    let mut acc = Accumulator::new(m.cols());
    let mut finished = Vec::with_capacity(v.len());
    for root in 0..v.len() {
        if state[root] != WHITE {
            continue;
        }
        let mut stack = vec![(root, false)];
        while let Some((k, expanded)) = stack.pop() {
            if expanded {
                let (a, b) = v.vectors[k];
                let eps = m.get(a, b);
                acc.add_scaled(&SparseVec::unit(b), &eps);
                for (j, x) in deps(k) {
                    acc.add_scaled(&w[j], &-(eps.clone() * x.clone()));
                }
                w[k] = acc.drain();
                state[k] = BLACK;
                finished.push(k);
                continue;
            }
            if state[k] == BLACK {
                continue;
            }
            state[k] = GREY;
            stack.push((k, true));
            for (j, _) in deps(k) {
                match state[j] {
                    WHITE => stack.push((j, false)),
                    GREY => {
                        let cycle = crate::dvf::is_admissible(m, v)?.cycle.unwrap_or_else(|| vec![v.vectors[j].0]);
                        return Err(MorseError::Inadmissible(cycle));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok((w, finished))
}

/// `d21` restricted to `V`: rows are the sources and columns the targets,
/// both in the order of `v`.
pub fn d21<T: Coefficient>(m: &SparseMatrix<T>, v: &VectorField) -> SparseMatrix<T> {
    let rows: Vec<usize> = v.sources().collect();
    let cols: Vec<usize> = v.targets().collect();
    m.select_columns(&cols).select_rows(&rows)
}

/// Inverse of [`d21`] by the recursive formula: rows indexed by targets and
/// columns by sources, both in the order of `v`.
pub fn invert_d21<T: Coefficient>(m: &SparseMatrix<T>, v: &VectorField) -> Result<SparseMatrix<T>, MorseError> {
    let (w, _) = source_inverses(m, v)?;
    let mut target_pos = vec![usize::MAX; m.cols()];
    for (k, b) in v.targets().enumerate() {
        target_pos[b] = k;
    }
    Ok(SparseMatrix::from_columns(v.len(), w.iter().map(|col| col.remap(|c| Some(target_pos[c]))).collect()))
}

/// The reduction of `c` given by an admissible field `v` on `d_k`.
pub fn reduce_one_degree<T: Coefficient>(
    c: &Arc<FilteredComplex<T>>,
    k: usize,
    v: &VectorField,
) -> Result<Reduction<T>, MorseError> {
    let max = c.num_degrees().saturating_sub(1);
    if k == 0 || k > max {
        return Err(MorseError::Degree { degree: k, max });
    }
    let d = c.boundary(k);
    let (mut w, finished) = source_inverses(d, v)?;
    let (lo, hi) = (c.dim(k - 1), c.dim(k));

    let mut source_of_row = vec![usize::MAX; lo];
    let mut is_target = vec![false; hi];
    for (j, &(a, b)) in v.vectors.iter().enumerate() {
        source_of_row[a] = j;
        is_target[b] = true;
    }
    let crit_lo: Vec<usize> = (0..lo).filter(|&r| source_of_row[r] == usize::MAX).collect();
    let crit_hi: Vec<usize> = (0..hi).filter(|&b| !is_target[b]).collect();
    let mut lo_pos = vec![None; lo];
    for (p, &r) in crit_lo.iter().enumerate() {
        lo_pos[r] = Some(p);
    }
    let mut hi_pos = vec![None; hi];
    for (p, &b) in crit_hi.iter().enumerate() {
        hi_pos[b] = Some(p);
    }

    let mut keep: Vec<Vec<usize>> = (0..c.num_degrees()).map(|n| (0..c.dim(n)).collect()).collect();
    keep[k - 1] = crit_lo.clone();
    keep[k] = crit_hi.clone();
    let shell = restrict(c, &keep);

    // g_k(x) = x - W(d x restricted to sources)
    let mut acc = Accumulator::new(hi);
    let g_k_cols: Vec<SparseVec<T>> = crit_hi
        .iter()
        .map(|&b| {
            acc.add_scaled(&SparseVec::unit(b), &T::one());
            for (r, x) in d.column(b).iter() {
                if source_of_row[r] != usize::MAX {
                    acc.add_scaled(&w[source_of_row[r]], &-x.clone());
                }
            }
            acc.drain()
        })
        .collect();
    let g_k = SparseMatrix::from_columns(hi, g_k_cols);
    let d_new = d.mul(&g_k).select_rows(&crit_lo);

    // (d W(a))|crit = ε (d b|crit - Σ x_{a'} (d W(a'))|crit), same recursion as W
    let mut crit_dw: Vec<SparseVec<T>> = vec![SparseVec::new(); v.len()];
    let mut acc_lo = Accumulator::new(crit_lo.len());
    for &j in &finished {
        let (a, b) = v.vectors[j];
        let eps = d.get(a, b);
        for (r, x) in d.column(b).iter() {
            match (lo_pos[r], source_of_row[r]) {
                (Some(p), _) => acc_lo.add_scaled(&SparseVec::unit(p), &(eps.clone() * x.clone())),
                (None, i) if i != j => acc_lo.add_scaled(&crit_dw[i], &-(eps.clone() * x.clone())),
                _ => {}
            }
        }
        crit_dw[j] = acc_lo.drain();
    }

    let mut boundaries = shell.boundaries().to_vec();
    boundaries[k] = d_new;
    let dst = Arc::new(FilteredComplex::new(c.steps(), shell.bases().to_vec(), boundaries)?);

    let mut f = Vec::with_capacity(c.num_degrees());
    let mut g = Vec::with_capacity(c.num_degrees());
    let mut h = Vec::with_capacity(c.num_degrees());
    for n in 0..c.num_degrees() {
        if n == k - 1 {
            let cols = (0..lo)
                .map(|r| match source_of_row[r] {
                    usize::MAX => SparseVec::unit(lo_pos[r].unwrap()),
                    j => crit_dw[j].neg(),
                })
                .collect();
            f.push(SparseMatrix::from_columns(crit_lo.len(), cols));
            g.push(SparseMatrix::from_columns(lo, crit_lo.iter().map(|&r| SparseVec::unit(r)).collect()));
            let hcols = (0..lo)
                .map(|r| match source_of_row[r] {
                    usize::MAX => SparseVec::new(),
                    j => std::mem::take(&mut w[j]),
                })
                .collect();
            h.push(SparseMatrix::from_columns(hi, hcols));
        } else if n == k {
            let cols = (0..hi).map(|b| hi_pos[b].map_or_else(SparseVec::new, SparseVec::unit)).collect();
            f.push(SparseMatrix::from_columns(crit_hi.len(), cols));
            g.push(g_k.clone());
            h.push(SparseMatrix::zeros(c.dim(n + 1), hi));
        } else {
            f.push(SparseMatrix::identity(c.dim(n)));
            g.push(SparseMatrix::identity(c.dim(n)));
            h.push(SparseMatrix::zeros(c.dim(n + 1), c.dim(n)));
        }
    }
    let mut rho = Reduction::new(c.clone(), dst, f, g, h, 0)?;
    rho.homotopy_order = rho.measured_homotopy_order();
    Ok(rho)
}

/// Per-degree record of an iterated reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    /// `vectors[k]` is the size of the field used on `d_k` (index 0 unused).
    pub vectors: Vec<usize>,
    /// Fields as `(source id, target id)` pairs, per degree.
    pub fields: Vec<Vec<(CellId, CellId)>>,
    /// Cell counts per degree before reduction.
    pub original: Vec<usize>,
    /// Critical cell counts per degree after all passes.
    pub critical: Vec<usize>,
}

impl ReductionStats {
    pub fn total_critical(&self) -> usize {
        self.critical.iter().sum()
    }

    pub fn total_original(&self) -> usize {
        self.original.iter().sum()
    }
}

/// A composite reduction with its statistics.
#[derive(Clone, Debug)]
pub struct MorseReduction<T> {
    pub reduction: Reduction<T>,
    pub stats: ReductionStats,
}

fn iterate<T: Coefficient>(
    c: Arc<FilteredComplex<T>>,
    mut field: impl FnMut(&FilteredComplex<T>, usize) -> Result<VectorField, MorseError>,
) -> Result<MorseReduction<T>, MorseError> {
    let degrees = c.num_degrees();
    let mut stats = ReductionStats {
        vectors: vec![0; degrees],
        fields: vec![Vec::new(); degrees],
        original: c.counts(),
        critical: Vec::new(),
    };
    let mut total = Reduction::identity(c);
    for k in 1..degrees {
        let current = total.dst.clone();
        let v = field(&current, k)?;
        stats.vectors[k] = v.len();
        stats.fields[k] = v.vectors.iter().map(|&(a, b)| (current.basis(k - 1)[a].id, current.basis(k)[b].id)).collect();
        if v.is_empty() {
            continue;
        }
        let step = reduce_one_degree(&current, k, &v)?;
        total = compose_reductions(&total, &step)?;
    }
    stats.critical = total.dst.counts();
    Ok(MorseReduction { reduction: total, stats })
}

/// Reduce degrees `1..=N` in turn, each with the greedy maximal field on the
/// current (already reduced) boundary, ignoring the filtration.
pub fn reduce_complex<T: Coefficient>(c: Arc<FilteredComplex<T>>) -> Result<MorseReduction<T>, MorseError> {
    iterate(c, |cur, k| Ok(max_admissible_dvf(cur.boundary(k))))
}

/// As [`reduce_complex`], with filtration-block fields so the composite
/// homotopy has order 0.
pub fn reduce_filtered_complex<T: Coefficient>(c: Arc<FilteredComplex<T>>) -> Result<MorseReduction<T>, MorseError> {
    iterate(c, |cur, k| Ok(filtered_max_dvf(cur.boundary(k), &cur.filtrations(k - 1), &cur.filtrations(k))?))
}

#[cfg(test)]
mod tests;
