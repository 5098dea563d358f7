//! Exact-arithmetic tools for verifying torsion/completion duality phenomena
//! at small scale: dense linear algebra over Q and F_p, graded monomial
//! quotient rings, chain complexes, pro-object towers with finite-window
//! certification, Koszul/telescope machinery, and a finite-dimensional
//! coalgebra calculus (cotensor, contratensor, Cohom).

pub mod linalg;
pub mod ring;
pub mod module;
pub mod complex;
pub mod tower;
pub mod duality;
pub mod coalg;
pub mod cli;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MgmError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, MgmError>;
