//! Spherical objects and spherical twists over finite-dimensional graded
//! algebra models, computed with exact arithmetic.

pub mod algebra;
pub mod analysis;
pub mod complex;
pub mod config;
pub mod decompose;
pub mod error;
pub mod field;
pub mod generate;
pub mod hom;
pub mod ktheory;
pub mod ledger;
pub mod linalg;
pub mod minimal;
pub mod twist;
