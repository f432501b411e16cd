use std::sync::Arc;

use super::complex::FilteredComplex;
use super::error::ChainError;
use crate::intlinalg::SparseMatrix;
use crate::scalar::Coefficient;

/// A reduction `src ⇒ dst`: `f: src -> dst`, `g: dst -> src` and a homotopy
/// `h` on `src` raising degree by one.
///
/// Per degree `n`: `f[n]` is `|dst_n| x |src_n|`, `g[n]` is `|src_n| x |dst_n|`,
/// `h[n]` is `|src_{n+1}| x |src_n|` (zero rows in the top degree).
#[derive(Clone, Debug)]
pub struct Reduction<T> {
    pub src: Arc<FilteredComplex<T>>,
    pub dst: Arc<FilteredComplex<T>>,
    pub f: Vec<SparseMatrix<T>>,
    pub g: Vec<SparseMatrix<T>>,
    pub h: Vec<SparseMatrix<T>>,
    /// Declared bound `s` with `h(C^i) ⊆ C^{i+s}`.
    pub homotopy_order: usize,
}

impl<T: Coefficient> Reduction<T> {
    /// Shape-checked constructor.
    pub fn new(
        src: Arc<FilteredComplex<T>>,
        dst: Arc<FilteredComplex<T>>,
        f: Vec<SparseMatrix<T>>,
        g: Vec<SparseMatrix<T>>,
        h: Vec<SparseMatrix<T>>,
        homotopy_order: usize,
    ) -> Result<Self, ChainError> {
        let degrees = src.num_degrees();
        if dst.num_degrees() != degrees || f.len() != degrees || g.len() != degrees || h.len() != degrees {
            return Err(ChainError::ComplexMismatch(format!(
                "degree counts src={} dst={} f={} g={} h={}",
                degrees,
                dst.num_degrees(),
                f.len(),
                g.len(),
                h.len()
            )));
        }
        for n in 0..degrees {
            let checks = [
                (&f[n], (dst.dim(n), src.dim(n))),
                (&g[n], (src.dim(n), dst.dim(n))),
                (&h[n], (src.dim(n + 1), src.dim(n))),
            ];
            for (m, expected) in checks {
                if m.shape() != expected {
                    return Err(ChainError::ShapeMismatch { degree: n, expected, found: m.shape() });
                }
            }
        }
        Ok(Self { src, dst, f, g, h, homotopy_order })
    }

    /// `f = g = id`, `h = 0`.
    pub fn identity(c: Arc<FilteredComplex<T>>) -> Self {
        let degrees = c.num_degrees();
        let f: Vec<_> = (0..degrees).map(|n| SparseMatrix::identity(c.dim(n))).collect();
        let h = (0..degrees).map(|n| SparseMatrix::zeros(c.dim(n + 1), c.dim(n))).collect();
        Self { src: c.clone(), dst: c, g: f.clone(), f, h, homotopy_order: 0 }
    }

    /// Largest `filt(target) - filt(source)` over nonzero entries of `h`,
    /// clamped at 0.
    pub fn measured_homotopy_order(&self) -> usize {
        let mut order = 0;
        for (n, h) in self.h.iter().enumerate() {
            let (from, to) = (self.src.basis(n), self.src.basis(n + 1));
            for (r, c, _) in h.entries() {
                order = order.max(to[r].filt.saturating_sub(from[c].filt));
            }
        }
        order
    }
}

/// Which identity a [`ReductionViolation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `f g = id`
    FG,
    /// `g f + d h + h d = id`
    Homotopy,
    /// `f h = 0`
    FH,
    /// `h g = 0`
    HG,
    /// `h h = 0`
    HH,
    /// `d' f = f d`
    FChainMap,
    /// `d g = g d'`
    GChainMap,
    /// `f` or `g` moves a cell to a later filtration step.
    Filtered,
    /// measured order exceeds the declared one
    Order,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionViolation<T> {
    pub relation: Relation,
    pub degree: usize,
    /// Entry of largest deviation `(row, col)` in the relevant matrix.
    pub location: (usize, usize),
    pub deviation: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport<T> {
    pub violations: Vec<ReductionViolation<T>>,
    pub measured_order: usize,
    pub declared_order: usize,
}

impl<T: Coefficient> ReductionReport<T> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, relation: Relation) -> bool {
        self.violations.iter().any(|v| v.relation == relation)
    }
}

/// Largest-magnitude entry of `m`, if any.
fn worst<T: Coefficient>(m: &SparseMatrix<T>) -> Option<((usize, usize), T)> {
    m.entries().max_by(|a, b| a.2.abs().cmp(&b.2.abs()).then(b.0.cmp(&a.0)).then(b.1.cmp(&a.1))).map(|(r, c, v)| ((r, c), v.clone()))
}

/// Checks the five reduction identities, the chain-map property of `f` and
/// `g`, filtration compatibility of `f` and `g`, and the homotopy order.
pub fn validate_reduction<T: Coefficient>(rho: &Reduction<T>) -> ReductionReport<T> {
    let (src, dst) = (&*rho.src, &*rho.dst);
    let degrees = src.num_degrees();
    let mut violations = Vec::new();
    let mut push = |relation, degree, m: SparseMatrix<T>| {
        if let Some((location, deviation)) = worst(&m) {
            violations.push(ReductionViolation { relation, degree, location, deviation });
        }
    };
    for n in 0..degrees {
        let (f, g, h) = (&rho.f[n], &rho.g[n], &rho.h[n]);
        push(Relation::FG, n, f.mul(g).sub(&SparseMatrix::identity(dst.dim(n))));

        let mut lhs = g.mul(f);
        if n + 1 < degrees {
            lhs = lhs.add(&src.boundary(n + 1).mul(h));
        }
        if n >= 1 {
            lhs = lhs.add(&rho.h[n - 1].mul(src.boundary(n)));
        }
        push(Relation::Homotopy, n, lhs.sub(&SparseMatrix::identity(src.dim(n))));

        if n + 1 < degrees {
            push(Relation::FH, n, rho.f[n + 1].mul(h));
            push(Relation::HH, n, rho.h[n + 1].mul(h));
        }
        push(Relation::HG, n, h.mul(g));

        if n >= 1 {
            push(Relation::FChainMap, n, dst.boundary(n).mul(f).sub(&rho.f[n - 1].mul(src.boundary(n))));
            push(Relation::GChainMap, n, src.boundary(n).mul(g).sub(&rho.g[n - 1].mul(dst.boundary(n))));
        }

        let (sb, db) = (src.basis(n), dst.basis(n));
        let late = |m: &SparseMatrix<T>, rows: &[super::Cell], cols: &[super::Cell]| {
            SparseMatrix::from_triplets(
                m.rows(),
                m.cols(),
                m.entries().filter(|(r, c, _)| rows[*r].filt > cols[*c].filt).map(|(r, c, v)| (r, c, v.clone())),
            )
        };
        push(Relation::Filtered, n, late(f, db, sb));
        push(Relation::Filtered, n, late(g, sb, db));
    }
    let measured_order = rho.measured_homotopy_order();
    if measured_order > rho.homotopy_order {
        violations.push(ReductionViolation {
            relation: Relation::Order,
            degree: 0,
            location: (0, 0),
            deviation: T::from(measured_order as i32),
        });
    }
    ReductionReport { violations, measured_order, declared_order: rho.homotopy_order }
}

/// `ρ2 ∘ ρ1`: `f = f2 f1`, `g = g1 g2`, `h = h1 + g1 h2 f1`.
pub fn compose_reductions<T: Coefficient>(rho1: &Reduction<T>, rho2: &Reduction<T>) -> Result<Reduction<T>, ChainError> {
    if !Arc::ptr_eq(&rho1.dst, &rho2.src) && *rho1.dst != *rho2.src {
        return Err(ChainError::ComplexMismatch("first target differs from second source".into()));
    }
    let degrees = rho1.src.num_degrees();
    let f = (0..degrees).map(|n| product(&rho2.f[n], &rho1.f[n])).collect();
    let g = (0..degrees).map(|n| product(&rho1.g[n], &rho2.g[n])).collect();
    let h = (0..degrees)
        .map(|n| {
            if n + 1 < degrees && !rho2.h[n].is_zero() {
                let lifted = product(&rho1.g[n + 1], &product(&rho2.h[n], &rho1.f[n]));
                if rho1.h[n].is_zero() {
                    lifted
                } else {
                    rho1.h[n].add(&lifted)
                }
            } else {
                rho1.h[n].clone()
            }
        })
        .collect();
    Reduction::new(
        rho1.src.clone(),
        rho2.dst.clone(),
        f,
        g,
        h,
        rho1.homotopy_order.max(rho2.homotopy_order),
    )
}

/// `a b`, skipping the work when either factor is an identity.
fn product<T: Coefficient>(a: &SparseMatrix<T>, b: &SparseMatrix<T>) -> SparseMatrix<T> {
    if a.is_identity() {
        return b.clone();
    }
    if b.is_identity() {
        return a.clone();
    }
    a.mul(b)
}

/// Two reductions out of a common complex `mid`.
#[derive(Clone, Debug)]
pub struct Equivalence<T> {
    pub mid: Arc<FilteredComplex<T>>,
    pub left: Reduction<T>,
    pub right: Reduction<T>,
}

impl<T: Coefficient> Equivalence<T> {
    pub fn new(left: Reduction<T>, right: Reduction<T>) -> Result<Self, ChainError> {
        if !Arc::ptr_eq(&left.src, &right.src) && *left.src != *right.src {
            return Err(ChainError::ComplexMismatch("reductions have different sources".into()));
        }
        Ok(Self { mid: left.src.clone(), left, right })
    }

    /// The equivalence `C <= C => D` given by a single reduction.
    pub fn from_reduction(rho: Reduction<T>) -> Self {
        let left = Reduction::identity(rho.src.clone());
        Self { mid: rho.src.clone(), left, right: rho }
    }
}
