//! Integer persistent homology of filtered digital images.
//!
//! The pipeline: build a filtered cell complex from an image ([`image`]),
//! shrink it with admissible discrete vector fields ([`dvf`], [`morse`]),
//! then compute persistent groups and torsion-labelled barcodes exactly over
//! the integers on the small critical complex ([`persist`]). Generators are
//! carried back to the original complex through the reduction maps.

pub mod chain;
pub mod dvf;
pub mod image;
pub mod intlinalg;
pub mod morse;
pub mod oracle;
pub mod persist;
pub mod scalar;

use num_bigint::BigInt;

pub type IntMatrix = intlinalg::SparseMatrix<BigInt>;
pub type IntVector = intlinalg::SparseVec<BigInt>;
pub type IntLattice = intlinalg::Lattice<BigInt>;
pub type IntGroup = intlinalg::AbelianGroup<BigInt>;
pub type IntComplex = chain::FilteredComplex<BigInt>;
pub type IntChain = chain::ChainVector<BigInt>;
pub type IntReduction = chain::Reduction<BigInt>;
pub type IntBarcode = persist::Barcode<BigInt>;
