//! Reference computations for tests: persistence read directly off chain
//! level lattices of the unreduced complex, and seeded random complexes.
//!
//! With `Z_i = ker d_n|K^i` and `B_j = im d_{n+1}|K^j`, all inside `Z^{β_n}`:
//! `H^{i,j} = (Z_i + B_j) / B_j`,
//! `BD^{i,k} = (Z_i ∩ (Z_{i-1} + B_k)) / (Z_i ∩ (Z_{i-1} + B_{k-1}))`,
//! `BD^{i,∞} = (Z_i + B_m) / (Z_{i-1} + B_m)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chain::{CellLabel, ChainError, ComplexBuilder, FilteredComplex};
use crate::intlinalg::{integer_kernel, lattice_intersection, quotient_presentation, AbelianGroup, Lattice, LinalgError, SparseMatrix};
use crate::scalar::Coefficient;

/// Largest complex the oracle accepts.
pub const ORACLE_MAX_CELLS: usize = 200;

/// Seed used by randomized tests unless `MORSEWARD_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("complex has {cells} cells, oracle limit is {limit}")]
    TooLarge { cells: usize, limit: usize },
    #[error("degree {0} out of range")]
    Degree(usize),
    #[error("step {0} out of range")]
    Step(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `MORSEWARD_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("MORSEWARD_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// A bar as `(degree, birth, death, label)`.
pub type OracleBar = (usize, usize, Option<usize>, String);

struct Direct<'a, T> {
    c: &'a FilteredComplex<T>,
    n: usize,
}

impl<T: Coefficient> Direct<'_, T> {
    fn cycles(&self, i: usize) -> Lattice<T> {
        let dim = self.c.dim(self.n);
        if i == 0 {
            return Lattice::zero(dim);
        }
        let cols = self.c.positions_up_to(self.n, i);
        let d = self.c.boundary_or_zero(self.n).select_columns(&cols);
        let kernel = integer_kernel(&d);
        let gens = kernel.basis().columns().iter().map(|k| k.remap(|p| Some(cols[p]))).collect();
        Lattice::from_generators(&SparseMatrix::from_columns(dim, gens))
    }

    fn boundaries(&self, j: usize) -> Lattice<T> {
        if self.n + 1 >= self.c.num_degrees() {
            return Lattice::zero(self.c.dim(self.n));
        }
        Lattice::from_generators(&self.c.boundary(self.n + 1).select_columns(&self.c.positions_up_to(self.n + 1, j)))
    }
}

fn guard<T: Coefficient>(c: &FilteredComplex<T>, n: usize, steps: &[usize]) -> Result<(), OracleError> {
    guard_with(c, n, steps, ORACLE_MAX_CELLS)
}

fn guard_with<T: Coefficient>(c: &FilteredComplex<T>, n: usize, steps: &[usize], limit: usize) -> Result<(), OracleError> {
    if c.num_cells() > limit {
        return Err(OracleError::TooLarge { cells: c.num_cells(), limit });
    }
    if n >= c.num_degrees() {
        return Err(OracleError::Degree(n));
    }
    if let Some(&s) = steps.iter().find(|&&s| s > c.steps()) {
        return Err(OracleError::Step(s));
    }
    Ok(())
}

/// `H^{i,j}_n = (Z_i + B_j) / B_j`.
pub fn direct_persistent_group<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    j: usize,
    n: usize,
) -> Result<AbelianGroup<T>, OracleError> {
    direct_persistent_group_limited(c, i, j, n, ORACLE_MAX_CELLS)
}

/// [`direct_persistent_group`] with a caller-chosen size limit, for one-off
/// checks on mid-sized complexes.
pub fn direct_persistent_group_limited<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    j: usize,
    n: usize,
    max_cells: usize,
) -> Result<AbelianGroup<T>, OracleError> {
    guard_with(c, n, &[i, j], max_cells)?;
    let d = Direct { c, n };
    let b = d.boundaries(j);
    Ok(quotient_presentation(&d.cycles(i).sum(&b)?, &b)?)
}

/// `H^{i,j,k}_n = ((Z_i + B_j) ∩ (Z_{i-1} + B_k)) / B_j`.
pub fn direct_triple_group<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    j: usize,
    k: usize,
    n: usize,
) -> Result<AbelianGroup<T>, OracleError> {
    guard(c, n, &[i, j, k])?;
    let d = Direct { c, n };
    let bj = d.boundaries(j);
    let left = d.cycles(i).sum(&bj)?;
    let right = d.cycles(i.saturating_sub(1)).sum(&d.boundaries(k))?;
    Ok(quotient_presentation(&lattice_intersection(&left, &right)?, &bj)?)
}

/// `(H^{i,j}_n, H^{i,j,k}_n, BD^{i,k}_n)`.
pub type GroupTriple<T> = (AbelianGroup<T>, AbelianGroup<T>, AbelianGroup<T>);

/// [`GroupTriple`] in one call; `i >= 1`, `i <= j <= k`.
pub fn direct_groups<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    j: usize,
    k: usize,
    n: usize,
) -> Result<GroupTriple<T>, OracleError> {
    let bd = if k > i { direct_bd_group(c, i, Some(k), n)? } else { AbelianGroup::trivial(0) };
    Ok((direct_persistent_group(c, i, j, n)?, direct_triple_group(c, i, j, k, n)?, bd))
}

/// `BD^{i,k}_n`, `k = None` meaning `∞`.
pub fn direct_bd_group<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    k: Option<usize>,
    n: usize,
) -> Result<AbelianGroup<T>, OracleError> {
    guard(c, n, &[i, k.unwrap_or(0)])?;
    let d = Direct { c, n };
    let (zi, zp) = (d.cycles(i), d.cycles(i.saturating_sub(1)));
    match k {
        Some(k) => {
            let num = lattice_intersection(&zi, &zp.sum(&d.boundaries(k))?)?;
            let den = lattice_intersection(&zi, &zp.sum(&d.boundaries(k - 1))?)?;
            Ok(quotient_presentation(&num, &den)?)
        }
        None => {
            let bm = d.boundaries(c.steps());
            Ok(quotient_presentation(&zi.sum(&bm)?, &zp.sum(&bm)?)?)
        }
    }
}

/// The full barcode as a sorted list of bars (death `None` last within a birth).
pub fn direct_persistence<T: Coefficient>(c: &FilteredComplex<T>) -> Result<Vec<OracleBar>, OracleError> {
    guard(c, 0, &[])?;
    let m = c.steps();
    let mut bars = Vec::new();
    for n in 0..c.num_degrees() {
        for i in 1..=m {
            for k in (i + 1..=m).map(Some).chain(std::iter::once(None)) {
                for label in direct_bd_group(c, i, k, n)?.labels() {
                    bars.push((n, i, k, label));
                }
            }
        }
    }
    bars.sort_by(|a, b| (a.0, a.1, a.2.unwrap_or(usize::MAX), &a.3).cmp(&(b.0, b.1, b.2.unwrap_or(usize::MAX), &b.3)));
    Ok(bars)
}

/// Shape of [`random_filtered_complex`].
#[derive(Clone, Debug)]
pub struct RandomComplexParams {
    pub vertices: usize,
    pub steps: usize,
    pub edge_prob: f64,
    pub triangle_prob: f64,
    pub tetra_prob: f64,
    /// Extra 2-cells attached along `k` times a triangle boundary, `k` in 2..=3.
    pub torsion_cells: usize,
}

impl Default for RandomComplexParams {
    fn default() -> Self {
        Self { vertices: 7, steps: 4, edge_prob: 0.5, triangle_prob: 0.5, tetra_prob: 0.3, torsion_cells: 0 }
    }
}

/// A random filtered simplicial complex with optional torsion cells, fully
/// determined by `seed`. Always has 4 degrees (0..=3).
pub fn random_filtered_complex(seed: u64, p: &RandomComplexParams) -> Result<FilteredComplex<BigInt>, ChainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = p.steps.max(1);
    let mut b = ComplexBuilder::<BigInt>::new(steps).with_degrees(4);
    let mut filt = std::collections::HashMap::<Vec<usize>, (usize, usize)>::new();
    let add = |b: &mut ComplexBuilder<BigInt>, rng: &mut ChaCha8Rng, s: Vec<usize>, filt: &mut std::collections::HashMap<Vec<usize>, (usize, usize)>| {
        let faces: Vec<Vec<usize>> = if s.len() == 1 {
            Vec::new()
        } else {
            (0..s.len()).map(|drop| s.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &v)| v).collect()).collect()
        };
        let floor = faces.iter().map(|f| filt[f].1).max().unwrap_or(1);
        let f = rng.gen_range(floor..=steps);
        let id = b.add_cell(s.len() - 1, f, Some(CellLabel::Simplex(s.clone())));
        for (drop, face) in faces.iter().enumerate() {
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            b.add_face(id, filt[face].0, BigInt::from(sign));
        }
        filt.insert(s, (id, f));
    };
    let nv = p.vertices;
    for v in 0..nv {
        add(&mut b, &mut rng, vec![v], &mut filt);
    }
    let mut edges = BTreeSet::new();
    for u in 0..nv {
        for v in u + 1..nv {
            if rng.gen_bool(p.edge_prob) {
                add(&mut b, &mut rng, vec![u, v], &mut filt);
                edges.insert((u, v));
            }
        }
    }
    let mut triangles = Vec::new();
    for &(u, v) in &edges {
        for w in v + 1..nv {
            if edges.contains(&(u, w)) && edges.contains(&(v, w)) && rng.gen_bool(p.triangle_prob) {
                add(&mut b, &mut rng, vec![u, v, w], &mut filt);
                triangles.push([u, v, w]);
            }
        }
    }
    let tri_set: BTreeSet<[usize; 3]> = triangles.iter().copied().collect();
    for &[u, v, w] in &triangles {
        for x in w + 1..nv {
            let all = [[u, v, x], [u, w, x], [v, w, x]].iter().all(|t| tri_set.contains(t));
            if all && rng.gen_bool(p.tetra_prob) {
                add(&mut b, &mut rng, vec![u, v, w, x], &mut filt);
            }
        }
    }
    // torsion: d(t) = k (uv - uw + vw) along a 3-cycle of edges
    let e = &edges;
    let cycles: Vec<[usize; 3]> = e
        .iter()
        .flat_map(|&(u, v)| (v + 1..nv).filter(move |&w| e.contains(&(u, w)) && e.contains(&(v, w))).map(move |w| [u, v, w]))
        .collect();
    if !cycles.is_empty() {
        for _ in 0..p.torsion_cells {
            let [u, v, w] = cycles[rng.gen_range(0..cycles.len())];
            let k = rng.gen_range(2..=3);
            let sides = [(vec![v, w], 1), (vec![u, w], -1), (vec![u, v], 1)];
            let floor = sides.iter().map(|(e, _)| filt[e].1).max().unwrap_or(1);
            let id = b.add_cell(2, rng.gen_range(floor..=steps), None);
            for (e, sign) in sides {
                b.add_face(id, filt[&e].0, BigInt::from(sign * k));
            }
        }
    }
    b.build()
}

/// `count` complexes with at most `max_cells` cells and at most `max_steps`
/// steps, shapes drawn from a stream seeded by `seed`; oversize draws are
/// redrawn. Every other complex carries torsion cells.
pub fn random_complex_batch(seed: u64, count: usize, max_cells: usize, max_steps: usize) -> Vec<FilteredComplex<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = RandomComplexParams {
            vertices: rng.gen_range(1..=7),
            steps: rng.gen_range(1..=max_steps.max(1)),
            edge_prob: rng.gen_range(0.3..0.9),
            triangle_prob: rng.gen_range(0.2..0.9),
            tetra_prob: rng.gen_range(0.0..0.6),
            torsion_cells: if out.len() % 2 == 1 { rng.gen_range(1..=2) } else { 0 },
        };
        let c = random_filtered_complex(rng.gen(), &p).expect("generator builds valid complexes");
        if c.num_cells() <= max_cells {
            out.push(c);
        }
    }
    out
}
