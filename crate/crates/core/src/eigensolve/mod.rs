//! Eigenvalue machinery.
//!
//! The gap path is Sturm bisection on the odd-sector symmetric tridiagonal
//! block, `O(J)` in memory and time per bisection step. Jacobi rotations on
//! dense matrices serve as the independent reference at desk scale, and the
//! characteristic-polynomial routines check the determinant factorization of
//! the non-Hermitian form.

mod bounds;
mod charpoly;
mod jacobi;
mod sturm;

pub use bounds::{
    diagonal_lower_bound, gap_bound, spectral_gap, symmetrize_tridiag, tridiag_gap_working_set,
    GapMethod, GapResult, DENSE_GAP_LIMIT,
};
pub use charpoly::{charpoly_dense, charpoly_tridiag, CharPoly, DENSE_LIMIT, TRIDIAG_LIMIT};
pub use jacobi::{eig_dense_symmetric, eig_dense_symmetric_vectors};
pub use sturm::{eig_squared_tridiag, eig_symtridiag, sturm_count, EigRequest, Which};
