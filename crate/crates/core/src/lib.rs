//! Approximation of L^2 invariants of periodic cell complexes.
//!
//! The input is a finite cell complex carrying a free Z^d deck action,
//! described by its quotient with shift-decorated boundary lists.  From it
//! the crate builds group-ring Laplacians, exhausts the cover by box-shaped
//! Folner pieces, and computes the finite spectral data whose normalized
//! limits are the L^2 Betti numbers, the integrated spectral density and the
//! Fuglede-Kadison determinant.  An independent torus-quadrature oracle
//! provides the target values the finite approximations are checked against.
//!
//! Exact integer arithmetic decides every kernel dimension; floating point
//! is confined to eigenvalue locations and quadrature.

pub mod analysis;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod folner;
pub mod laurent;
pub mod oracle;
pub mod spectra;

pub use complex::{DegreeData, FaceRef, LaplacianFamily, PeriodicComplex};
pub use error::{Error, Result};
pub use folner::{build_piece, FinitePiece, FolnerBox, LiftedCell};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use spectra::{
    assemble, finite_betti, BoundaryCondition, FiniteLaplacian, IntMatrix, SpectraConfig,
    SpectrumSummary,
};
