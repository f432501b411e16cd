//! Moving persistent groups and generators across reductions.

use std::sync::Arc;

use crate::chain::{ChainVector, Equivalence, Reduction};
use crate::intlinalg::{AbelianGroup, Lattice, SparseMatrix, SparseVec};
use crate::scalar::Coefficient;

use super::{Death, PersistError, Persistence};

/// Evidence that `H^{i,j}_n` agrees on both ends of an equivalence
/// `A <= C => B`.
#[derive(Clone, Debug)]
pub struct TransferWitness<T> {
    /// `s`, the larger measured homotopy order of the two reductions.
    pub order: usize,
    pub left_group: AbelianGroup<T>,
    pub right_group: AbelianGroup<T>,
    /// `f_right g_left : A_n -> B_n`.
    pub forward: SparseMatrix<T>,
    /// `f_left g_right : B_n -> A_n`.
    pub backward: SparseMatrix<T>,
    pub isomorphic: bool,
    /// With `s = 0`: whether `forward` maps the generators of `H^{i,j}(A)`
    /// onto `H^{i,j}(B)`. `None` when `s > 0`, where the image only lands in
    /// `H^{i+s,j}(B)`.
    pub forward_onto: Option<bool>,
}

/// Compares `H^{i,j}_n` across the equivalence. Refused when `j - i` is below
/// the measured homotopy order.
pub fn transfer_persistent_group<T: Coefficient>(
    eq: &Equivalence<T>,
    i: usize,
    j: usize,
    n: usize,
) -> Result<TransferWitness<T>, PersistError> {
    let s = eq.left.measured_homotopy_order().max(eq.right.measured_homotopy_order());
    if j < i {
        return Err(PersistError::IndexOrder(format!("need i <= j, got i={i}, j={j}")));
    }
    if j - i < s {
        return Err(PersistError::OrderBound { measured: s, gap: j - i });
    }
    let a = Persistence::new(eq.left.dst.clone());
    let b = Persistence::new(eq.right.dst.clone());
    let left_group = a.persistent_group(i, j, n)?;
    let right_group = b.persistent_group(i, j, n)?;
    let forward = eq.right.f[n].mul(&eq.left.g[n]);
    let backward = eq.left.f[n].mul(&eq.right.g[n]);
    let isomorphic = left_group.same_type(&right_group);
    let forward_onto = if s == 0 && i > 0 { Some(maps_onto(&a, &b, &forward, i, j, n, &left_group)?) } else { None };
    Ok(TransferWitness { order: s, left_group, right_group, forward, backward, isomorphic, forward_onto })
}

fn maps_onto<T: Coefficient>(
    a: &Persistence<T>,
    b: &Persistence<T>,
    map: &SparseMatrix<T>,
    i: usize,
    j: usize,
    n: usize,
    group: &AbelianGroup<T>,
) -> Result<bool, PersistError> {
    let hj = b.homology_at(j, n)?;
    let target = b.persistent_lattice(i, j, n)?;
    let mut images = hj.relation_lattice().basis().columns().to_vec();
    for chain in a.pull_back_generators(i, j, n, group)? {
        let image = map.mul_vec(&chain.to_coords(a.complex())?);
        let Some(coords) = hj.coordinates_of(&image) else { return Ok(false) };
        images.push(SparseVec::from_dense(&coords));
    }
    let spanned = Lattice::from_generators(&SparseMatrix::from_columns(hj.num_summands(), images));
    Ok(spanned.contains_lattice(&target) && target.contains_lattice(&spanned))
}

/// Chains of `ρ.src` supported on `K^i` whose classes generate `H^{i,j}_n`
/// of the source, computed on the (small) target and carried back by `g`.
/// Requires a homotopy of order 0.
pub fn persistent_generators<T: Coefficient>(
    rho: &Reduction<T>,
    i: usize,
    j: usize,
    n: usize,
) -> Result<Vec<ChainVector<T>>, PersistError> {
    let s = rho.measured_homotopy_order();
    if s > 0 {
        return Err(PersistError::NotFiltered(s));
    }
    let p = Persistence::new(Arc::clone(&rho.dst));
    let group = p.persistent_group(i, j, n)?;
    let chains = p.pull_back_generators(i, j, n, &group)?;
    chains
        .into_iter()
        .map(|c| {
            let lifted = rho.g[n].mul_vec(&c.to_coords(&rho.dst)?);
            Ok(ChainVector::from_coords(&rho.src, n, &lifted))
        })
        .collect()
}

/// `BD^{i,k}_n` on both ends of the equivalence; refused unless `k - i > s`
/// (for `k = ∞`, unless `m - i >= s`).
pub fn transfer_bd_group<T: Coefficient>(
    eq: &Equivalence<T>,
    i: usize,
    k: Death,
    n: usize,
) -> Result<(AbelianGroup<T>, AbelianGroup<T>), PersistError> {
    let s = eq.left.measured_homotopy_order().max(eq.right.measured_homotopy_order());
    let m = eq.mid.steps();
    let allowed = match k {
        Some(k) => k > i && k - i > s,
        None => m >= i && m - i >= s,
    };
    if !allowed {
        let gap = k.unwrap_or(m).saturating_sub(i);
        return Err(PersistError::OrderBound { measured: s, gap });
    }
    let left = Persistence::new(eq.left.dst.clone()).bd_group(i, k, n)?;
    let right = Persistence::new(eq.right.dst.clone()).bd_group(i, k, n)?;
    Ok((left, right))
}
