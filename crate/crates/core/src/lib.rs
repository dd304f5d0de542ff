//! Spectral analysis of the antiferromagnetic Lipkin–Meshkov–Glick (LMG) model.
//!
//! The crate builds the collective-spin Hamiltonians of the model in the `J_z`
//! eigenbasis, checks the supersymmetric structure at the point `λ = 1`, and
//! computes the spectral gap. Everything is real arithmetic: the imaginary
//! unit is absorbed into `K_y := i J_y`, which has a real antisymmetric matrix.
//!
//! Modules, bottom-up:
//!
//! - [`spin`]: spin operators, parity sectors, matrix exponential
//! - [`models`]: every Hamiltonian form plus its tridiagonal blocks
//! - [`eigensolve`]: Sturm bisection, dense Jacobi oracle, characteristic
//!   polynomials, the tridiagonal symmetrizer and the gap bound
//! - [`susy`]: supercharges, superalgebra residuals, spectrum classification
//! - [`groundstate`]: the exact zero-energy ground state and its Legendre norm

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigensolve;
pub mod groundstate;
pub mod models;
pub mod spin;
pub mod susy;

mod error;

pub use error::{LmgError, Result};

pub use eigensolve::{
    charpoly_dense, charpoly_tridiag, diagonal_lower_bound, eig_dense_symmetric,
    eig_dense_symmetric_vectors, eig_squared_tridiag, eig_symtridiag, gap_bound, spectral_gap,
    sturm_count, symmetrize_tridiag, tridiag_gap_working_set, CharPoly, EigRequest, GapMethod,
    GapResult, Which,
};
pub use groundstate::{
    ground_state, ground_state_in, legendre_p, legendre_p_log_scaled, Frame, GroundState,
};
pub use models::{
    build_factorized, build_factorized_exp, build_lmg_general, build_nonhermitian,
    build_susy_rotated, extract_hn_blocks, h_minus_elements, params_from_chi,
    parity_blocks_squared, parity_blocks_susy, GeneralTridiag, HnBlocks, ModelParams,
    SquaredTridiag, SymTridiag,
};
pub use spin::{
    build_spin_operators, mat_exp_scaled, parity_sort, ParityIndex, RealMatrix, SpinJ,
    SpinOperators,
};
pub use susy::{
    build_supercharges, classify_spectrum, determinant_factorization, sorted_hamiltonian,
    susy_spectrum, verify_superalgebra, Doublet, FactorizationCheck, SpectrumReport,
    SuperalgebraResiduals, Supercharges, Verdict, ZeroMode, DEFAULT_PAIRING_TOL,
    DENSE_SPECTRUM_LIMIT,
};
