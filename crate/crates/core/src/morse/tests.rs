use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::chain::{validate_reduction, ComplexBuilder};
use crate::intlinalg::smith_normal_form;

type M = SparseMatrix<BigInt>;

fn worked_m() -> M {
    M::from_i32_rows(&[
        &[0, 0, -1, -1, 0],
        &[0, -1, 0, 0, 1],
        &[0, 0, 0, 1, 1],
        &[0, -1, 1, 0, -1],
        &[-1, 1, -1, 0, 0],
    ])
}

/// Two-degree complex `Z^rows <- Z^cols` with `d_1 = m`, one step.
fn two_degree(m: &M) -> Arc<FilteredComplex<BigInt>> {
    let mut cb = ComplexBuilder::new(1).with_degrees(2);
    let lo: Vec<_> = (0..m.rows()).map(|_| cb.add_cell(0, 1, None)).collect();
    let hi: Vec<_> = (0..m.cols()).map(|_| cb.add_cell(1, 1, None)).collect();
    for (r, c, x) in m.entries() {
        cb.add_face(hi[c], lo[r], x.clone());
    }
    Arc::new(cb.build().unwrap())
}

/// `(rank H_0, rank H_1, torsion of H_0)` for a two-degree complex.
fn homology_signature(m: &M) -> (usize, usize, Vec<BigInt>) {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let torsion = snf.invariant_factors().into_iter().filter(|d| *d != BigInt::from(1)).collect();
    (m.rows() - r, m.cols() - r, torsion)
}

#[test]
fn worked_reduction_matrix() {
    let c = two_degree(&worked_m());
    let v = VectorField::from_one_based(&[(5, 1), (3, 4), (4, 5)]);
    let rho = reduce_one_degree(&c, 1, &v).unwrap();
    assert_eq!(rho.dst.boundary(1), &M::from_i32_rows(&[&[-1, 0], &[-2, 1]]));
    assert!(validate_reduction(&rho).is_valid());
    assert_eq!(rho.homotopy_order, 0);
}

#[test]
fn worked_inverse_is_two_sided() {
    let m = worked_m();
    let v = VectorField::from_one_based(&[(1, 3), (2, 2), (3, 4), (5, 1)]);
    let inv = invert_d21(&m, &v).unwrap();
    let d = d21(&m, &v);
    assert!(d.mul(&inv).is_identity());
    assert!(inv.mul(&d).is_identity());
}

#[test]
fn single_vector_inverses() {
    let v = VectorField::new(vec![(0, 0)]);
    assert_eq!(invert_d21(&M::from_i32_rows(&[&[1]]), &v).unwrap(), M::from_i32_rows(&[&[1]]));
    assert_eq!(invert_d21(&M::from_i32_rows(&[&[-1]]), &v).unwrap(), M::from_i32_rows(&[&[-1]]));
}

#[test]
fn inadmissible_field_is_rejected_with_loop() {
    let v = VectorField::from_one_based(&[(1, 3), (2, 2), (3, 4), (4, 5)]);
    match invert_d21(&worked_m(), &v) {
        Err(MorseError::Inadmissible(cycle)) => {
            assert_eq!(cycle.first(), cycle.last());
            assert!(cycle.len() >= 3);
        }
        other => panic!("expected a loop, got {other:?}"),
    }
}

#[test]
fn malformed_field_is_rejected() {
    let v = VectorField::new(vec![(0, 0)]);
    assert!(matches!(invert_d21(&worked_m(), &v), Err(MorseError::Malformed(_))));
}

#[test]
fn empty_field_gives_identity() {
    let c = two_degree(&worked_m());
    let rho = reduce_one_degree(&c, 1, &VectorField::default()).unwrap();
    assert_eq!(*rho.dst, *c);
    assert!(rho.f.iter().chain(&rho.g).all(|m| m.is_identity()));
    assert!(rho.h.iter().all(|m| m.is_zero()));
}

#[test]
fn degree_out_of_range() {
    let c = two_degree(&worked_m());
    assert!(matches!(reduce_one_degree(&c, 0, &VectorField::default()), Err(MorseError::Degree { .. })));
    assert!(matches!(reduce_one_degree(&c, 2, &VectorField::default()), Err(MorseError::Degree { .. })));
}

#[test]
fn zero_boundaries_give_identity_reduction() {
    let c = two_degree(&M::zeros(3, 2));
    let out = reduce_complex(c.clone()).unwrap();
    assert_eq!(*out.reduction.dst, *c);
    assert_eq!(out.stats.vectors, vec![0, 0]);
}

#[test]
fn worked_matrix_full_pass() {
    let c = two_degree(&worked_m());
    let out = reduce_complex(c).unwrap();
    assert_eq!(out.stats.vectors[1], 4);
    assert_eq!(out.stats.critical, vec![1, 1]);
    assert!(validate_reduction(&out.reduction).is_valid());
    assert_eq!(homology_signature(out.reduction.dst.boundary(1)), homology_signature(&worked_m()));
}

fn arb_matrix() -> impl Strategy<Value = M> {
    (1usize..=10, 1usize..=10).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![5 => Just(0), 2 => Just(1), 2 => Just(-1), 1 => Just(2), 1 => Just(-3)], r * c)
            .prop_map(move |v| {
                let rows: Vec<Vec<BigInt>> = v.chunks(c).map(|ch| ch.iter().map(|&x| BigInt::from(x)).collect()).collect();
                M::from_dense_rows(&rows, c)
            })
    })
}

proptest! {
    #[test]
    fn inverse_is_exact(m in arb_matrix()) {
        let v = max_admissible_dvf(&m);
        let inv = invert_d21(&m, &v).unwrap();
        prop_assert!(d21(&m, &v).mul(&inv).is_identity());
        prop_assert!(inv.mul(&d21(&m, &v)).is_identity());
    }

    #[test]
    fn sub_fields_reduce_validly(m in arb_matrix(), mask in any::<u32>()) {
        let full = max_admissible_dvf(&m);
        let v = VectorField::new(full.vectors.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, p)| *p).collect());
        let c = two_degree(&m);
        let rho = reduce_one_degree(&c, 1, &v).unwrap();
        let report = validate_reduction(&rho);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        prop_assert_eq!(homology_signature(rho.dst.boundary(1)), homology_signature(&m));
        prop_assert_eq!(rho.dst.num_cells(), c.num_cells() - 2 * v.len());
    }
}
