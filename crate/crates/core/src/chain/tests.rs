use std::sync::Arc;

use num_bigint::BigInt;

use super::*;
use crate::intlinalg::SparseMatrix;

type Cx = FilteredComplex<BigInt>;

fn b(x: i32) -> BigInt {
    BigInt::from(x)
}

/// Filled triangle on vertices 0,1,2; the 2-cell arrives at step 2.
fn triangle() -> Cx {
    let mut cb = ComplexBuilder::new(2);
    let v: Vec<_> = (0..3).map(|i| cb.add_cell(0, 1, Some(CellLabel::Simplex(vec![i])))).collect();
    let edge = |cb: &mut ComplexBuilder<BigInt>, x: usize, y: usize| {
        let e = cb.add_cell(1, 1, Some(CellLabel::Simplex(vec![x, y])));
        cb.add_face(e, v[y], b(1));
        cb.add_face(e, v[x], b(-1));
        e
    };
    let e01 = edge(&mut cb, 0, 1);
    let e02 = edge(&mut cb, 0, 2);
    let e12 = edge(&mut cb, 1, 2);
    let t = cb.add_cell(2, 2, Some(CellLabel::Simplex(vec![0, 1, 2])));
    cb.add_face(t, e12, b(1));
    cb.add_face(t, e02, b(-1));
    cb.add_face(t, e01, b(1));
    cb.build().unwrap()
}

/// `a --e--> b`, everything at step 1.
fn segment() -> Cx {
    let mut cb = ComplexBuilder::new(1);
    let a = cb.add_cell(0, 1, None);
    let bb = cb.add_cell(0, 1, None);
    let e = cb.add_cell(1, 1, None);
    cb.add_face(e, bb, b(1));
    cb.add_face(e, a, b(-1));
    cb.build().unwrap()
}

/// Hand-built collapse of `segment` onto its endpoint `b`.
fn segment_collapse() -> Reduction<BigInt> {
    let src = Arc::new(segment());
    let dst = Arc::new(restrict(&src, &[vec![1], vec![]]));
    let f = vec![SparseMatrix::from_i32_rows(&[&[1, 1]]), SparseMatrix::zeros(0, 1)];
    let g = vec![SparseMatrix::from_i32_rows(&[&[0], &[1]]), SparseMatrix::zeros(1, 0)];
    let h = vec![SparseMatrix::from_i32_rows(&[&[-1, 0]]), SparseMatrix::zeros(0, 1)];
    Reduction::new(src, dst, f, g, h, 0).unwrap()
}

#[test]
fn triangle_is_valid() {
    assert!(validate_complex(&triangle()).is_valid());
}

#[test]
fn single_vertex_is_valid() {
    let mut cb = ComplexBuilder::<BigInt>::new(1);
    cb.add_cell(0, 1, None);
    assert!(validate_complex(&cb.build().unwrap()).is_valid());
}

#[test]
fn nonzero_square_is_reported() {
    let mut cb = ComplexBuilder::new(1);
    let v: Vec<_> = (0..2).map(|_| cb.add_cell(0, 1, None)).collect();
    let e = cb.add_cell(1, 1, None);
    cb.add_face(e, v[1], b(1));
    cb.add_face(e, v[0], b(-1));
    let t = cb.add_cell(2, 1, None);
    cb.add_face(t, e, b(1));
    let report = validate_complex(&cb.build().unwrap());
    assert_eq!(report.violations, vec![ComplexViolation::SquareNonzero { degree: 1, column: t }]);
}

#[test]
fn late_face_is_reported() {
    let mut cb = ComplexBuilder::new(2);
    let v = cb.add_cell(0, 2, None);
    let e = cb.add_cell(1, 1, None);
    cb.add_face(e, v, b(0));
    let v2 = cb.add_cell(0, 1, None);
    cb.add_face(e, v2, b(1));
    cb.add_face(e, v, b(-1));
    let report = validate_complex(&cb.build().unwrap());
    assert!(matches!(report.violations[..], [ComplexViolation::FiltrationInversion { cell, face, .. }] if cell == e && face == v));
}

#[test]
fn triangle_boundary_signs() {
    let c = triangle();
    let t = ChainVector::from_terms(2, [(6, b(1))]);
    let dt = apply_boundary(&c, &t).unwrap();
    assert_eq!(dt, ChainVector::from_terms(1, [(5, b(1)), (4, b(-1)), (3, b(1))]));
    assert!(apply_boundary(&c, &dt).unwrap().is_zero());
}

#[test]
fn boundary_of_degree_zero_is_empty() {
    let c = triangle();
    let x = ChainVector::from_terms(0, [(0, b(3))]);
    assert!(apply_boundary(&c, &x).unwrap().is_zero());
    let wrong = ChainVector::from_terms(1, [(0, b(1))]);
    assert!(matches!(apply_boundary(&c, &wrong), Err(ChainError::ChainDegree { .. })));
}

#[test]
fn identity_reduction_validates() {
    let rho = Reduction::identity(Arc::new(triangle()));
    let report = validate_reduction(&rho);
    assert!(report.is_valid(), "{report:?}");
    assert_eq!(report.measured_order, 0);
}

#[test]
fn hand_collapse_validates() {
    let report = validate_reduction(&segment_collapse());
    assert!(report.is_valid(), "{report:?}");
}

#[test]
fn dropping_the_homotopy_breaks_relation_two() {
    let mut rho = segment_collapse();
    rho.h[0] = SparseMatrix::zeros(1, 2);
    let report = validate_reduction(&rho);
    assert!(report.fails(Relation::Homotopy));
    assert!(!report.fails(Relation::FG));
}

#[test]
fn composing_with_identity_is_neutral() {
    let rho = segment_collapse();
    let id = Reduction::identity(rho.dst.clone());
    let c = compose_reductions(&rho, &id).unwrap();
    assert_eq!((c.f.clone(), c.g.clone(), c.h.clone()), (rho.f.clone(), rho.g.clone(), rho.h.clone()));
    let c = compose_reductions(&Reduction::identity(rho.src.clone()), &rho).unwrap();
    assert_eq!((c.f, c.g, c.h), (rho.f, rho.g, rho.h));
}

#[test]
fn composing_mismatched_reductions_fails() {
    let rho = segment_collapse();
    let other = Reduction::identity(Arc::new(triangle()));
    assert!(matches!(compose_reductions(&rho, &other), Err(ChainError::ComplexMismatch(_))));
}

#[test]
fn order_is_measured_from_h() {
    let mut rho = segment_collapse();
    let mut cells = rho.src.bases().to_vec();
    cells[1][0].filt = 2;
    let src = FilteredComplex::new(2, cells, rho.src.boundaries().to_vec()).unwrap();
    rho.src = Arc::new(src);
    assert_eq!(rho.measured_homotopy_order(), 1);
    assert!(validate_reduction(&rho).fails(Relation::Order));
}

#[test]
fn subcomplex_extremes() {
    let c = triangle();
    assert_eq!(subcomplex_at(&c, 2).unwrap(), c);
    assert_eq!(subcomplex_at(&c, 0).unwrap().num_cells(), 0);
    assert_eq!(subcomplex_at(&c, 1).unwrap().counts(), vec![3, 3, 0]);
    assert!(matches!(subcomplex_at(&c, 3), Err(ChainError::StepOutOfRange { .. })));
}

#[test]
fn sorted_complex_has_identity_permutation() {
    let (s, p) = sort_by_filtration(&triangle());
    assert!(p.is_identity());
    assert_eq!(s, triangle());
}

#[test]
fn reversed_filtration_is_reversed() {
    let mut cb = ComplexBuilder::new(3);
    let v: Vec<_> = (0..3).map(|i| cb.add_cell(0, 3 - i, None)).collect();
    let e = cb.add_cell(1, 3, None);
    cb.add_face(e, v[0], b(1));
    cb.add_face(e, v[2], b(-1));
    let c = cb.build().unwrap();
    let (s, p) = sort_by_filtration(&c);
    assert_eq!(p.new_to_old[0], vec![2, 1, 0]);
    assert_eq!(s.boundary(1), &SparseMatrix::from_i32_rows(&[&[-1], &[0], &[1]]));
    assert!(validate_complex(&s).is_valid());
}

#[test]
fn text_round_trip() {
    let c = triangle();
    let text = write_complex(&c);
    assert!(text.contains("cell 6 2 2 simplex:0,1,2"));
    assert_eq!(parse_complex::<BigInt>(&text).unwrap(), c);
    let empty = FilteredComplex::<BigInt>::empty(3, 2);
    assert_eq!(parse_complex::<BigInt>(&write_complex(&empty)).unwrap(), empty);
}

#[test]
fn text_errors_carry_line_numbers() {
    let err = parse_complex::<BigInt>("steps 1\ncell 0 0 1 -\nbd 0 x 1\n").unwrap_err();
    assert!(matches!(err, ChainError::Parse { line: 3, .. }));
    assert!(matches!(parse_complex::<BigInt>("cell 0 0 1 -"), Err(ChainError::Parse { line: 1, .. })));
    assert!(matches!(parse_complex::<BigInt>("steps 1\ncell 0 0 2 -\n"), Err(ChainError::FiltrationOutOfRange { .. })));
}

#[test]
fn builder_rejects_bad_faces() {
    let mut cb = ComplexBuilder::<BigInt>::new(1);
    let v = cb.add_cell(0, 1, None);
    let w = cb.add_cell(0, 1, None);
    cb.add_face(w, v, b(1));
    assert!(matches!(cb.build(), Err(ChainError::BadFace { .. })));
}

#[test]
fn chain_filtration_support() {
    let c = triangle();
    let x = ChainVector::from_terms(2, [(6, b(1))]);
    assert_eq!(x.max_filtration(&c), Some(2));
    assert_eq!(ChainVector::<BigInt>::zero(1).max_filtration(&c), Some(0));
}
