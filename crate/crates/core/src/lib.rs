//! Computational laboratory for Mazur-Tate elements of p-non-ordinary
//! eigen-cuspforms: modular symbols over exact fields, finite-level Iwasawa
//! algebra arithmetic, mu/lambda invariants, the logarithmic-matrix
//! decomposition into sharp/flat data, and the asymptotic/congruence
//! bookkeeping needed to regenerate the tables.

pub mod analysis;
pub mod error;
pub mod iwasawa;
pub mod linalg;
pub mod logmatrix;
pub mod mazurtate;
pub mod modsym;
pub mod nf;
pub mod padic;
pub mod zp;

pub use error::Error;

/// Convenient alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
