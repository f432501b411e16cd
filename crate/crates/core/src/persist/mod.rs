//! Integer persistent homology.
//!
//! Homology of each `K^i` is presented in summand coordinates `Z^{g_i}`
//! (torsion summands first). Subgroups of `H_n(K^j)` are lattices in
//! `Z^{g_j}` containing the relation lattice `Rel_j`, so images, preimages,
//! intersections and quotients all reduce to lattice arithmetic.

mod barcode;
mod cache;
mod field;
mod transfer;

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::chain::{ChainError, ChainVector, FilteredComplex};
use crate::intlinalg::{
    integer_kernel, lattice_intersection, preimage, quotient_presentation, AbelianGroup, IntegerSolver, Lattice,
    LinalgError, SparseMatrix, SparseVec,
};
use crate::scalar::Coefficient;

pub use barcode::{Bar, Barcode, BarcodeJsonError};
use cache::OnceCache;
pub use field::{field_mu, field_barcode, field_persistent_betti};
pub use transfer::{persistent_generators, transfer_bd_group, transfer_persistent_group, TransferWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PersistError {
    #[error("step {step} outside [0, {steps}]")]
    StepOutOfRange { step: usize, steps: usize },
    #[error("indices out of order: {0}")]
    IndexOrder(String),
    #[error("degree {degree} outside [0, {max}]")]
    Degree { degree: usize, max: usize },
    #[error("characteristic {0} is neither 0 nor prime")]
    Characteristic(u64),
    #[error("reduction is not filtration compatible: measured homotopy order {0}")]
    NotFiltered(usize),
    #[error("homotopy order {measured} exceeds the gap {gap}")]
    OrderBound { measured: usize, gap: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Death index of a bar: `Some(k)` for a class dying entering `K^k`, `None`
/// for one that never dies.
pub type Death = Option<usize>;

/// The matrix of `f^{i,j}_n : H_n(K^i) -> H_n(K^j)` in summand coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap<T> {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    /// `g_j x g_i`.
    pub matrix: SparseMatrix<T>,
}

type Shared<V> = Result<Arc<V>, PersistError>;

/// Persistence queries over one complex, with per-`(i, n)` homology and
/// per-`(i, j, n)` maps computed once and shared between threads.
pub struct Persistence<T> {
    complex: Arc<FilteredComplex<T>>,
    homology: OnceCache<(usize, usize), Shared<AbelianGroup<T>>>,
    maps: OnceCache<(usize, usize, usize), Shared<InducedMap<T>>>,
    persistent: OnceCache<(usize, usize, usize), Shared<Lattice<T>>>,
}

impl<T: Coefficient> Persistence<T> {
    pub fn new(complex: Arc<FilteredComplex<T>>) -> Self {
        Self { complex, homology: OnceCache::new(), maps: OnceCache::new(), persistent: OnceCache::new() }
    }

    pub fn complex(&self) -> &Arc<FilteredComplex<T>> {
        &self.complex
    }

    pub fn steps(&self) -> usize {
        self.complex.steps()
    }

    fn check_step(&self, step: usize) -> Result<(), PersistError> {
        if step > self.steps() {
            return Err(PersistError::StepOutOfRange { step, steps: self.steps() });
        }
        Ok(())
    }

    fn check_degree(&self, n: usize) -> Result<(), PersistError> {
        let degrees = self.complex.num_degrees();
        if n >= degrees {
            return Err(PersistError::Degree { degree: n, max: degrees.saturating_sub(1) });
        }
        Ok(())
    }

    /// `H_n(K^i)`; generators are cycles in `Z^{β_n}` supported on `K^i`.
    pub fn homology_at(&self, i: usize, n: usize) -> Result<Arc<AbelianGroup<T>>, PersistError> {
        self.check_step(i)?;
        self.check_degree(n)?;
        self.homology.get_or_init((i, n), || self.compute_homology(i, n).map(Arc::new))
    }

    fn compute_homology(&self, i: usize, n: usize) -> Result<AbelianGroup<T>, PersistError> {
        let c = &*self.complex;
        let dim = c.dim(n);
        let cols = c.positions_up_to(n, i);
        let kernel = integer_kernel(&c.boundary(n).select_columns(&cols));
        let cycles: Vec<SparseVec<T>> = kernel.basis().columns().iter().map(|k| k.remap(|p| Some(cols[p]))).collect();
        let z = Lattice::from_generators(&SparseMatrix::from_columns(dim, cycles));
        let b = if n + 1 < c.num_degrees() {
            Lattice::from_generators(&c.boundary(n + 1).select_columns(&c.positions_up_to(n + 1, i)))
        } else {
            Lattice::zero(dim)
        };
        Ok(quotient_presentation(&z, &b)?)
    }

    /// Generator `k` of `H_n(K^i)` as a chain.
    pub fn generator_chain(&self, i: usize, n: usize, coords: &[T]) -> Result<ChainVector<T>, PersistError> {
        let h = self.homology_at(i, n)?;
        Ok(ChainVector::from_coords(&self.complex, n, &summands_to_chain(&h, coords)))
    }

    pub fn induced_map(&self, i: usize, j: usize, n: usize) -> Result<Arc<InducedMap<T>>, PersistError> {
        self.check_step(j)?;
        if i > j {
            return Err(PersistError::IndexOrder(format!("induced map needs i <= j, got i={i}, j={j}")));
        }
        self.maps.get_or_init((i, j, n), || self.compute_map(i, j, n).map(Arc::new))
    }

    fn compute_map(&self, i: usize, j: usize, n: usize) -> Result<InducedMap<T>, PersistError> {
        let (hi, hj) = (self.homology_at(i, n)?, self.homology_at(j, n)?);
        let rel = hj.relation_lattice();
        let mut cols = Vec::with_capacity(hi.num_summands());
        for (k, gen) in hi.generators.iter().enumerate() {
            let coords = hj.coordinates_of(gen).ok_or_else(|| {
                PersistError::Internal(format!("cycle generator {k} of H_{n}(K^{i}) is not a cycle of K^{j}"))
            })?;
            let col = SparseVec::from_dense(&coords);
            if let Some(d) = hi.summand_order(k) {
                if !rel.contains(&col.scale(d)) {
                    return Err(PersistError::Internal(format!(
                        "f^{{{i},{j}}}_{n} is not well defined on torsion summand {k} of order {d}"
                    )));
                }
            }
            cols.push(col);
        }
        Ok(InducedMap { i, j, n, matrix: SparseMatrix::from_columns(hj.num_summands(), cols) })
    }

    /// `im f^{i,j} + Rel_j` in `Z^{g_j}`.
    pub fn persistent_lattice(&self, i: usize, j: usize, n: usize) -> Result<Arc<Lattice<T>>, PersistError> {
        self.check_step(j)?;
        if i > j {
            return Err(PersistError::IndexOrder(format!("persistent group needs i <= j, got i={i}, j={j}")));
        }
        self.persistent.get_or_init((i, j, n), || {
            let hj = self.homology_at(j, n)?;
            let rel = hj.relation_lattice();
            if i == 0 {
                return Ok(Arc::new(rel));
            }
            let f = self.induced_map(i, j, n)?;
            Ok(Arc::new(Lattice::from_generators(&f.matrix.hstack(rel.basis()))))
        })
    }

    /// `H^{i,j}_n`, the image of `H_n(K^i)` in `H_n(K^j)`. Generators are
    /// given in the summand coordinates of `H_n(K^j)`.
    pub fn persistent_group(&self, i: usize, j: usize, n: usize) -> Result<AbelianGroup<T>, PersistError> {
        let lat = self.persistent_lattice(i, j, n)?;
        let rel = self.homology_at(j, n)?.relation_lattice();
        Ok(quotient_presentation(&lat, &rel)?)
    }

    /// `H^{i,j}_n ∩ (f^{j,k})^{-1}(H^{i-1,k}_n)` as a lattice in `Z^{g_j}`.
    pub fn triple_lattice(&self, i: usize, j: usize, k: usize, n: usize) -> Result<Lattice<T>, PersistError> {
        if i == 0 || i > j || j > k {
            return Err(PersistError::IndexOrder(format!("triple group needs 1 <= i <= j <= k, got ({i},{j},{k})")));
        }
        self.check_step(k)?;
        let pers = self.persistent_lattice(i, j, n)?;
        let back = preimage(&self.induced_map(j, k, n)?.matrix, &*self.persistent_lattice(i - 1, k, n)?)?;
        Ok(lattice_intersection(&pers, &back)?)
    }

    pub fn triple_group(&self, i: usize, j: usize, k: usize, n: usize) -> Result<AbelianGroup<T>, PersistError> {
        let lat = self.triple_lattice(i, j, k, n)?;
        let rel = self.homology_at(j, n)?.relation_lattice();
        Ok(quotient_presentation(&lat, &rel)?)
    }

    /// `BD^{i,k}_n`: `H^{i,i,k} / H^{i,i,k-1}` for finite `k > i`, and
    /// `H^{i,m} / H^{i-1,m}` for `k = ∞`. Generators are in the summand
    /// coordinates of `H_n(K^i)` (finite `k`) or `H_n(K^m)` (infinite `k`).
    pub fn bd_group(&self, i: usize, k: Death, n: usize) -> Result<AbelianGroup<T>, PersistError> {
        if i == 0 {
            return Err(PersistError::IndexOrder("births start at step 1".into()));
        }
        self.check_step(i)?;
        match k {
            Some(k) => {
                if k <= i {
                    return Err(PersistError::IndexOrder(format!("death {k} must exceed birth {i}")));
                }
                let num = self.triple_lattice(i, i, k, n)?;
                let den = self.triple_lattice(i, i, k - 1, n)?;
                Ok(quotient_presentation(&num, &den)?)
            }
            None => {
                let m = self.steps();
                let num = self.persistent_lattice(i, m, n)?;
                let den = self.persistent_lattice(i - 1, m, n)?;
                Ok(quotient_presentation(&num, &den)?)
            }
        }
    }

    /// Chains supported on `K^i` representing the generators of a subgroup
    /// of `H_n(K^j)` that lies in `H^{i,j}_n`, one per summand.
    pub fn pull_back_generators(&self, i: usize, j: usize, n: usize, group: &AbelianGroup<T>) -> Result<Vec<ChainVector<T>>, PersistError> {
        let hi = self.homology_at(i, n)?;
        let hj = self.homology_at(j, n)?;
        let f = self.induced_map(i, j, n)?;
        let system = f.matrix.hstack(hj.relation_lattice().basis());
        let solver = IntegerSolver::new(&system);
        let gi = hi.num_summands();
        group
            .generators
            .iter()
            .map(|y| {
                let x = solver
                    .solve(y)?
                    .ok_or_else(|| PersistError::Internal(format!("class {y:?} is not in the image of H_{n}(K^{i})")))?;
                let coords = x.remap(|p| (p < gi).then_some(p)).to_dense(gi);
                Ok(ChainVector::from_coords(&self.complex, n, &summands_to_chain(&hi, &coords)))
            })
            .collect()
    }

    /// Bars for one degree and birth step.
    fn bars_born_at(&self, n: usize, i: usize, with_generators: bool) -> Result<Vec<Bar<T>>, PersistError> {
        let m = self.steps();
        let mut bars = Vec::new();
        let deaths = (i + 1..=m).map(Some).chain(std::iter::once(None));
        for k in deaths {
            let bd = self.bd_group(i, k, n)?;
            if bd.is_trivial() {
                continue;
            }
            let chains = if with_generators {
                let hi = self.homology_at(i, n)?;
                match k {
                    Some(_) => bd.generators.iter().map(|y| ChainVector::from_coords(&self.complex, n, &summands_to_chain(&hi, &y.to_dense(hi.num_summands())))).map(Some).collect(),
                    None => self.pull_back_generators(i, m, n, &bd)?.into_iter().map(Some).collect(),
                }
            } else {
                vec![None; bd.num_summands()]
            };
            for (label, generator) in bd.labels().into_iter().zip(chains) {
                bars.push(Bar { dim: n, birth: i, death: k, label, generator });
            }
        }
        Ok(bars)
    }

    /// One bar per cyclic summand of every `BD^{i,k}_n`.
    pub fn barcode(&self, with_generators: bool) -> Result<Barcode<T>, PersistError> {
        let m = self.steps();
        let jobs: Vec<(usize, usize)> = (0..self.complex.num_degrees()).flat_map(|n| (1..=m).map(move |i| (n, i))).collect();
        let parts: Result<Vec<Vec<Bar<T>>>, PersistError> =
            jobs.par_iter().map(|&(n, i)| self.bars_born_at(n, i, with_generators)).collect();
        let mut bars: Vec<Bar<T>> = parts?.into_iter().flatten().collect();
        bars.sort_by(Bar::order);
        Ok(Barcode { steps: m, bars })
    }
}

/// `Σ coords_k · generator_k` in the ambient chain space of `h`.
fn summands_to_chain<T: Coefficient>(h: &AbelianGroup<T>, coords: &[T]) -> SparseVec<T> {
    let mut out = SparseVec::new();
    for (x, g) in coords.iter().zip(&h.generators) {
        if !x.is_zero() {
            out = out.axpy(x, g);
        }
    }
    out
}

pub fn homology_at<T: Coefficient>(c: &Arc<FilteredComplex<T>>, i: usize, n: usize) -> Result<AbelianGroup<T>, PersistError> {
    Ok((*Persistence::new(c.clone()).homology_at(i, n)?).clone())
}

pub fn induced_map<T: Coefficient>(c: &Arc<FilteredComplex<T>>, i: usize, j: usize, n: usize) -> Result<InducedMap<T>, PersistError> {
    Ok((*Persistence::new(c.clone()).induced_map(i, j, n)?).clone())
}

pub fn persistent_group<T: Coefficient>(c: &Arc<FilteredComplex<T>>, i: usize, j: usize, n: usize) -> Result<AbelianGroup<T>, PersistError> {
    Persistence::new(c.clone()).persistent_group(i, j, n)
}

pub fn triple_group<T: Coefficient>(
    c: &Arc<FilteredComplex<T>>,
    i: usize,
    j: usize,
    k: usize,
    n: usize,
) -> Result<AbelianGroup<T>, PersistError> {
    Persistence::new(c.clone()).triple_group(i, j, k, n)
}

pub fn bd_group<T: Coefficient>(c: &Arc<FilteredComplex<T>>, i: usize, k: Death, n: usize) -> Result<AbelianGroup<T>, PersistError> {
    Persistence::new(c.clone()).bd_group(i, k, n)
}

pub fn barcode<T: Coefficient>(c: &Arc<FilteredComplex<T>>) -> Result<Barcode<T>, PersistError> {
    Persistence::new(c.clone()).barcode(false)
}
