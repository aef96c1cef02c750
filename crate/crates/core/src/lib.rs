//! Exact-arithmetic spectral sequences of strictly filtered chain complexes.
//!
//! The engine computes every page of the spectral sequence of a bounded,
//! strictly filtered chain complex over the integers, the rationals, or a
//! prime field by several independent constructions, together with Deligne
//! décalage, indexing-convention transforms, multiplicative structure on
//! pages, and the Atiyah–Hirzebruch spectral sequence for finite CW
//! complexes with chain-complex coefficients. All arithmetic is exact.

pub mod ahss;
pub mod complexes;
pub mod decalage;
pub mod error;
pub mod exact_linalg;
pub mod filtered;
pub mod fixtures;
pub mod indexing;
pub mod multiplicative;
pub mod pages;
pub mod sample;

pub use complexes::ChainComplex;
pub use error::Error;
pub use exact_linalg::{ExactMatrix, FgModule, Ring, Scalar};
pub use filtered::{FilteredComplex, TailHigh};
pub use indexing::Convention;
pub use pages::{Page, PageIndex, PageTerm};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
