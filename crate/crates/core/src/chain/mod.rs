//! Filtered chain complexes, chains, reductions and equivalences.

mod complex;
mod error;
mod reduction;
mod text;

pub use complex::{
    apply_boundary, sort_by_filtration, subcomplex_at, validate_complex, Cell, CellId, CellLabel, ChainVector,
    ComplexBuilder, ComplexReport, ComplexViolation, FilteredComplex, Permutation,
};
pub(crate) use complex::restrict;
pub use error::ChainError;
pub use reduction::{
    compose_reductions, validate_reduction, Equivalence, Reduction, ReductionReport, ReductionViolation, Relation,
};
pub use text::{parse_complex, write_complex};

#[cfg(test)]
mod tests;
