//! Exact linear algebra over the p-adic numbers.
//!
//! The crate computes with elements of `Q_p` at a fixed absolute precision,
//! reduces integral matrices to the residue field `F_p`, decides
//! diagonalizability there, and builds verified spectral decompositions
//! (norm-one orthogonal idempotents) for operators whose eigenvalues are
//! certified to lie in `Q_p`.

pub mod doc;
pub mod gallery;
pub mod linalg;
pub mod padic;
pub mod residue;
pub mod spectral;

pub use padic::{AbsValue, PadicError, PadicNumber, PrecisionContext};
pub use residue::{ResidueElement, ResidueError, ResidueMatrix, ResiduePoly};
