//! Exact integer matrices and lattices.
//!
//! Everything here is a pure function of immutable inputs. Empty matrices
//! (zero rows or zero columns) are valid inputs for every operation.

mod error;
mod field;
mod group;
mod lattice;
mod matrix;
mod snf;

pub use error::LinalgError;
pub use field::field_rank;
pub use group::{quotient_presentation, AbelianGroup};
pub use lattice::{hermite_basis, integer_kernel, lattice_intersection, preimage, solve_integer, IntegerSolver, Lattice};
pub use matrix::{SparseMatrix, SparseVec};
pub(crate) use matrix::Accumulator;

pub use snf::{bareiss_det, determinant, smith_normal_form, SnfResult};
