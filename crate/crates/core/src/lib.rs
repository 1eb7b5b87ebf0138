#![no_std]
extern crate alloc;

pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;

pub use error::{Error, Result};
pub use field::{Field, Op, Scalar};
pub use matrix::{Matrix, Rref, Vector};
pub use poly::Poly;
pub mod bitmatrix;
pub mod predicates;
pub mod space;
pub mod recovery;
pub mod census;

pub use bitmatrix::BitMatrix;
pub use predicates::{SearchConfig, Status, Verdict, Witness};
pub use space::{MatSpace, RowSpace, StandardKind, TransformMode};
