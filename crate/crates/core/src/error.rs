use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("{what}: expected size {expected}, got {got}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("entry ({row}, {col}) violates the vertex/degree constraint: {reason}")]
    EntryConstraint { row: usize, col: usize, reason: String },
    #[error("differential does not square to zero")]
    NotSquareZero,
    #[error("map is not closed")]
    NotClosed,
    #[error("map has degree {got}, expected {expected}")]
    WrongDegree { expected: i64, got: i64 },
    #[error("shift {shift} leaves the window [-{window}, {window}]")]
    ShiftWindow { shift: i64, window: i64 },
    #[error("homology class index {index} out of range (dimension {dim})")]
    NoSuchClass { index: usize, dim: usize },
    #[error("{0} is not spherical")]
    NotSpherical(String),
    #[error("d = {0}: the membership criterion needs d >= 2 (d = dim X >= 2)")]
    DimensionTooSmall(i64),
    #[error("collection is not strongly spherical: ({first}, {second}) has Hom in shift {shift}")]
    NotStronglySpherical { first: usize, second: usize, shift: i64 },
    #[error("{0}")]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
}
