//! Finitely generated abelian groups presented as lattice quotients.

use std::fmt;


use super::error::LinalgError;
use super::lattice::Lattice;
use super::matrix::{SparseMatrix, SparseVec};
use super::snf::smith_normal_form;
use crate::scalar::Coefficient;

/// `Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with `d1 | d2 | ...`, each `di >= 2`.
///
/// Summands are ordered torsion first, then free. Each summand carries a
/// generator, given both in the ambient space and in coordinates of the
/// numerator basis it was computed from. The group also remembers enough of
/// that presentation to express any numerator element in summand
/// coordinates (see [`AbelianGroup::coordinates_of`]).
#[derive(Clone, Debug)]
pub struct AbelianGroup<T> {
    pub rank: usize,
    pub torsion: Vec<T>,
    /// Ambient vectors, one per summand.
    pub generators: Vec<SparseVec<T>>,
    /// Numerator-basis coordinates, one per summand.
    pub generator_coords: Vec<Vec<T>>,
    numerator: Lattice<T>,
    /// Rows of the left Smith transform belonging to nontrivial summands.
    coord_rows: Vec<SparseVec<T>>,
}

impl<T: Coefficient> PartialEq for AbelianGroup<T> {
    /// Isomorphism type only.
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }
}

impl<T: Coefficient> AbelianGroup<T> {
    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            rank: 0,
            torsion: Vec::new(),
            generators: Vec::new(),
            generator_coords: Vec::new(),
            numerator: Lattice::zero(ambient_dim),
            coord_rows: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands.
    pub fn num_summands(&self) -> usize {
        self.torsion.len() + self.rank
    }

    /// Order of the summand `k`: `Some(d)` for torsion, `None` for `Z`.
    pub fn summand_order(&self, k: usize) -> Option<&T> {
        self.torsion.get(k)
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<T> {
        (self.rank == 0).then(|| self.torsion.iter().fold(T::one(), |acc, d| acc * d.clone()))
    }

    pub fn same_type(&self, other: &Self) -> bool {
        self == other
    }

    /// Labels `Z_d` for torsion summands and `Z` for free ones.
    pub fn labels(&self) -> Vec<String> {
        self.torsion.iter().map(|d| format!("Z_{d}")).chain(std::iter::repeat_n("Z".to_string(), self.rank)).collect()
    }

    pub fn numerator(&self) -> &Lattice<T> {
        &self.numerator
    }

    /// Summand coordinates of the class of `v`; torsion coordinates are
    /// reduced into `[0, d)`. `None` when `v` is not in the numerator.
    pub fn coordinates_of(&self, v: &SparseVec<T>) -> Option<Vec<T>> {
        let x = SparseVec::from_dense(&self.numerator.coordinates(v)?);
        Some(
            self.coord_rows
                .iter()
                .enumerate()
                .map(|(k, row)| {
                    let y = row.dot(&x);
                    match self.torsion.get(k) {
                        Some(d) => y.mod_floor(d),
                        None => y,
                    }
                })
                .collect(),
        )
    }

    /// Relation lattice of the summand presentation: `d_k e_k` for torsion
    /// summands inside `Z^num_summands`.
    pub fn relation_lattice(&self) -> Lattice<T> {
        let n = self.num_summands();
        let cols = self.torsion.iter().enumerate().map(|(k, d)| SparseVec::from_pairs([(k, d.clone())])).collect();
        Lattice::from_generators(&SparseMatrix::from_columns(n, cols))
    }
}

impl<T: Coefficient> fmt::Display for AbelianGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .torsion
            .iter()
            .map(|d| format!("Z/{d}"))
            .chain((self.rank > 0).then(|| if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) }))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Presentation of `numerator / denominator`.
pub fn quotient_presentation<T: Coefficient>(
    numerator: &Lattice<T>,
    denominator: &Lattice<T>,
) -> Result<AbelianGroup<T>, LinalgError> {
    if numerator.ambient_dim() != denominator.ambient_dim() {
        return Err(LinalgError::AmbientMismatch { left: numerator.ambient_dim(), right: denominator.ambient_dim() });
    }
    let r = numerator.rank();
    let mut rel_cols = Vec::with_capacity(denominator.rank());
    for (j, col) in denominator.basis().columns().iter().enumerate() {
        let c = numerator.coordinates(col).ok_or(LinalgError::NotContained { column: j })?;
        rel_cols.push(SparseVec::from_dense(&c));
    }
    let rel = SparseMatrix::from_columns(r, rel_cols);
    let snf = smith_normal_form(&rel);
    let diag = snf.invariant_factors();
    let u_rows = snf.u.row_lists();

    let mut torsion = Vec::new();
    let mut summands = Vec::new();
    for (k, d) in diag.iter().enumerate() {
        if !d.is_one() {
            torsion.push(d.clone());
            summands.push(k);
        }
    }
    summands.extend(diag.len()..r);

    let mut generators = Vec::new();
    let mut generator_coords = Vec::new();
    let mut coord_rows = Vec::new();
    for &k in &summands {
        let coords = snf.u_inv.column(k).clone();
        generators.push(numerator.basis().mul_vec(&coords));
        generator_coords.push(coords.to_dense(r));
        coord_rows.push(SparseVec::from_pairs(u_rows[k].iter().cloned()));
    }
    Ok(AbelianGroup {
        rank: r - diag.len(),
        torsion,
        generators,
        generator_coords,
        numerator: numerator.clone(),
        coord_rows,
    })
}

impl<T: Coefficient> Default for AbelianGroup<T> {
    fn default() -> Self {
        Self::trivial(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::lattice::hermite_basis;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    type M = SparseMatrix<BigInt>;

    fn lat(dim: usize, cs: &[&[i32]]) -> Lattice<BigInt> {
        hermite_basis(&M::from_columns(
            dim,
            cs.iter().map(|c| SparseVec::from_dense(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())).collect(),
        ))
    }

    #[test]
    fn z_mod_2z() {
        let g = quotient_presentation(&Lattice::full(1), &lat(1, &[&[2]])).unwrap();
        assert_eq!((g.rank, g.torsion.clone()), (0, vec![BigInt::from(2)]));
    }

    #[test]
    fn z2_mod_zero() {
        let g = quotient_presentation(&Lattice::<BigInt>::full(2), &Lattice::zero(2)).unwrap();
        assert_eq!((g.rank, g.torsion.len()), (2, 0));
    }

    #[test]
    fn z2_mod_2_4() {
        let num = Lattice::full(2);
        let den = lat(2, &[&[2, 0], &[0, 4]]);
        let g = quotient_presentation(&num, &den).unwrap();
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(g.rank, 0);
        // enumeration oracle: distinct cosets of the 8-element group
        let mut classes = std::collections::BTreeSet::new();
        for x in 0..4 {
            for y in 0..8 {
                let v = SparseVec::from_dense(&[BigInt::from(x), BigInt::from(y)]);
                classes.insert(g.coordinates_of(&v).unwrap());
            }
        }
        assert_eq!(classes.len(), 8);
        assert_eq!(g.order(), Some(BigInt::from(8)));
    }

    #[test]
    fn containment_violation() {
        let num = lat(2, &[&[2, 0], &[0, 1]]);
        let den = lat(2, &[&[1, 0]]);
        assert!(matches!(quotient_presentation(&num, &den), Err(LinalgError::NotContained { .. })));
    }

    #[test]
    fn generators_have_stated_orders() {
        let num = Lattice::full(3);
        let den = lat(3, &[&[2, 2, 0], &[0, 6, 0]]);
        let g = quotient_presentation(&num, &den).unwrap();
        for (k, gen) in g.generators.iter().enumerate() {
            let c = g.coordinates_of(gen).unwrap();
            let mut e = vec![BigInt::zero(); g.num_summands()];
            e[k] = BigInt::one();
            assert_eq!(c, e);
            if let Some(d) = g.summand_order(k) {
                assert!(den.contains(&gen.scale(d)));
            }
        }
    }

    proptest! {
        #[test]
        fn finite_order_matches_covolume_ratio(xs in proptest::collection::vec(-6i32..=6, 4), ys in proptest::collection::vec(-3i32..=3, 4)) {
            // numerator spanned by a random full-rank 2x2 basis, denominator by basis * random matrix
            let b = M::from_i32_rows(&[&[xs[0], xs[1]], &[xs[2], xs[3]]]);
            let c = M::from_i32_rows(&[&[ys[0], ys[1]], &[ys[2], ys[3]]]);
            let num = hermite_basis(&b);
            prop_assume!(num.rank() == 2);
            let den = hermite_basis(&b.mul(&c));
            let g = quotient_presentation(&num, &den).unwrap();
            if den.rank() == 2 {
                let ratio = den.covolume().unwrap() / num.covolume().unwrap();
                prop_assert_eq!(g.order(), Some(ratio));
            } else {
                prop_assert!(g.rank > 0);
            }
        }
    }
}
