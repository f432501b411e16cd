use thiserror::Error;

use super::CellId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("boundary d_{degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { degree: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("cell {id} listed in degree {expected} but has dim {found}")]
    WrongDegree { id: CellId, expected: usize, found: usize },
    #[error("duplicate cell id {0}")]
    DuplicateId(CellId),
    #[error("cell {id} has filtration index {filt}, outside [1, {steps}]")]
    FiltrationOutOfRange { id: CellId, filt: usize, steps: usize },
    #[error("unknown cell id {0}")]
    UnknownCell(CellId),
    #[error("cell {face} is not a codimension-one face candidate of cell {cell}")]
    BadFace { cell: CellId, face: CellId },
    #[error("step {step} outside [0, {steps}]")]
    StepOutOfRange { step: usize, steps: usize },
    #[error("chain has cells of degree {found}, expected {expected}")]
    ChainDegree { expected: usize, found: usize },
    #[error("complexes do not match: {0}")]
    ComplexMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
