//! Supercharges at the supersymmetric point and classification of spectra.
//!
//! In the parity-sorted basis (even sector first, see [`parity_sort`]) the
//! rotated Hamiltonian is `H = Q₁² = Q₂²` with
//!
//! ```text
//! Q₁ = [ 0   B ]      Q₂ = i·R₂,   R₂ = [ 0  −B ]
//!      [ Bᵀ  0 ]                         [ Bᵀ  0 ]
//! ```
//!
//! where `B` is the even-to-odd block of `M₁ = J_x coshγ − K_y sinhγ`, taken
//! with the even sector reflected `m → −m`.

use serde::{Deserialize, Serialize};

use crate::eigensolve::{
    charpoly_dense, charpoly_tridiag, eig_dense_symmetric, eig_squared_tridiag, CharPoly,
    EigRequest, Which,
};
use crate::models::{
    build_nonhermitian, build_susy_rotated, extract_hn_blocks, parity_blocks_squared,
};
use crate::spin::{build_spin_operators, parity_sort, ParityIndex, RealMatrix, SpinJ};
use crate::{LmgError, Result};

/// Default pairing tolerance for [`classify_spectrum`].
pub const DEFAULT_PAIRING_TOL: f64 = 1e-8;

/// Relative tolerance of [`SuperalgebraResiduals::passes`].
pub const SUPERALGEBRA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Supercharges {
    pub j: SpinJ,
    pub gamma: f64,
    /// Real symmetric `Q₁`.
    pub q1: RealMatrix,
    /// Real antisymmetric `R₂ = −i·Q₂`.
    pub r2: RealMatrix,
    /// Size of the even sector; the off-diagonal blocks start here.
    pub even_len: usize,
}

pub fn build_supercharges(j: SpinJ, gamma: f64) -> Result<Supercharges> {
    let jj = j.integer_j()? as usize;
    let ops = build_spin_operators(j);
    let m1 = ops
        .jx
        .scale(gamma.cosh())
        .add_scaled(&ops.ky, -gamma.sinh());
    let parity = parity_sort(j);
    let (ne, no) = (parity.even_len(), parity.odd_len());
    let n = j.dim();
    let mut q1 = RealMatrix::zeros(n);
    let mut r2 = RealMatrix::zeros(n);
    for (a, &row) in parity.even.iter().enumerate() {
        let reflected = 2 * jj - row;
        for (k, &col) in parity.odd.iter().enumerate() {
            let b = m1[(reflected, col)];
            q1[(a, ne + k)] = b;
            q1[(ne + k, a)] = b;
            r2[(a, ne + k)] = -b;
            r2[(ne + k, a)] = b;
        }
    }
    debug_assert_eq!(ne + no, n);
    Ok(Supercharges {
        j,
        gamma,
        q1,
        r2,
        even_len: ne,
    })
}

/// Max-norm residuals of the superalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperalgebraResiduals {
    /// `‖Q₁² − H‖`
    pub q1_square: f64,
    /// `‖R₂ᵀR₂ − H‖`, i.e. `‖Q₂² − H‖`
    pub q2_square: f64,
    /// `‖Q₁R₂ + R₂Q₁‖`, the anticommutator `{Q₁, Q₂}`
    pub anticommutator: f64,
    /// `max(‖[Q₁, H]‖, ‖[R₂, H]‖)`
    pub commutator: f64,
    /// `‖H‖`
    pub h_norm: f64,
}

impl SuperalgebraResiduals {
    pub fn max(&self) -> f64 {
        self.q1_square
            .max(self.q2_square)
            .max(self.anticommutator)
            .max(self.commutator)
    }

    pub fn threshold(&self) -> f64 {
        SUPERALGEBRA_TOL * self.h_norm.max(1.0)
    }

    pub fn passes(&self) -> bool {
        self.max() <= self.threshold()
    }
}

/// Checks `{Qᵢ, Qⱼ} = 2δᵢⱼH` and `[Qᵢ, H] = 0` against a parity-sorted `H`.
pub fn verify_superalgebra(
    s: &Supercharges,
    h_sorted: &RealMatrix,
) -> Result<SuperalgebraResiduals> {
    let n = s.q1.dim();
    if h_sorted.dim() != n || s.r2.dim() != n {
        return Err(LmgError::DimensionMismatch {
            expected: n,
            got: h_sorted.dim(),
        });
    }
    let q1q1 = s.q1.matmul(&s.q1);
    let r2t = s.r2.transpose();
    let q1r2 = s.q1.matmul(&s.r2);
    let r2q1 = s.r2.matmul(&s.q1);
    let comm = |q: &RealMatrix| q.matmul(h_sorted).sub(&h_sorted.matmul(q)).max_abs();
    Ok(SuperalgebraResiduals {
        q1_square: q1q1.sub(h_sorted).max_abs(),
        q2_square: r2t.matmul(&s.r2).sub(h_sorted).max_abs(),
        anticommutator: q1r2.add_scaled(&r2q1, 1.0).max_abs(),
        commutator: comm(&s.q1).max(comm(&s.r2)),
        h_norm: h_sorted.max_abs(),
    })
}

/// Largest dimension [`susy_spectrum`] hands to the dense solver.
pub const DENSE_SPECTRUM_LIMIT: usize = 401;

/// All levels of the rotated Hamiltonian, ascending.
///
/// Integer `J ≥ 1` goes through bisection on the two parity blocks, with no
/// size limit. Half-integer `J` and `J = 0` use the dense solver up to
/// dimension [`DENSE_SPECTRUM_LIMIT`].
pub fn susy_spectrum(j: SpinJ, gamma: f64) -> Result<Vec<f64>> {
    if !gamma.is_finite() {
        return Err(LmgError::InvalidParameter(format!(
            "gamma must be finite, got {gamma}"
        )));
    }
    if j.is_integer() && j.two_j() > 0 {
        let (even, odd) = parity_blocks_squared(j, gamma)?;
        let all = EigRequest::new(Which::All);
        let mut levels = eig_squared_tridiag(&even, &all)?;
        levels.extend(eig_squared_tridiag(&odd, &all)?);
        levels.sort_by(f64::total_cmp);
        return Ok(levels);
    }
    if j.dim() > DENSE_SPECTRUM_LIMIT {
        return Err(LmgError::DimensionTooLarge {
            dim: j.dim(),
            limit: DENSE_SPECTRUM_LIMIT,
        });
    }
    eig_dense_symmetric(&build_susy_rotated(j, gamma))
}

/// The parity-sorted rotated Hamiltonian, for use with [`verify_superalgebra`].
pub fn sorted_hamiltonian(j: SpinJ, gamma: f64) -> (RealMatrix, ParityIndex) {
    let parity = parity_sort(j);
    (
        parity.to_sorted(&crate::models::build_susy_rotated(j, gamma)),
        parity,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    SusyPattern,
    SusyBroken,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroMode {
    pub value: f64,
    /// `|value| / scale`, the distance from zero in units of the spectrum scale.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Doublet {
    pub lo: f64,
    pub hi: f64,
    pub split: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub zero_mode: Option<ZeroMode>,
    pub doublets: Vec<Doublet>,
    pub unpaired: Vec<f64>,
    /// Every level outside the zero mode sits in a doublet. Can hold without a
    /// zero mode (half-integer `J` at `γ = 0`), in which case the verdict is
    /// still broken.
    pub all_paired: bool,
    pub verdict: Verdict,
}

impl SpectrumReport {
    /// Zero-based doublet index of each sorted eigenvalue; `None` for the zero
    /// mode and unpaired levels.
    pub fn pair_ids(&self) -> Vec<Option<usize>> {
        let mut ids = vec![None; self.eigenvalues.len()];
        let mut next = 0;
        let mut d = 0;
        while next < self.eigenvalues.len() {
            let e = self.eigenvalues[next];
            if let Some(pair) = self.doublets.get(d) {
                if pair.lo == e
                    && next + 1 < self.eigenvalues.len()
                    && self.eigenvalues[next + 1] == pair.hi
                {
                    ids[next] = Some(d);
                    ids[next + 1] = Some(d);
                    next += 2;
                    d += 1;
                    continue;
                }
            }
            next += 1;
        }
        ids
    }

    /// Index of the zero mode in the sorted eigenvalues.
    pub fn zero_mode_index(&self) -> Option<usize> {
        let z = self.zero_mode?;
        self.eigenvalues.iter().position(|&e| e == z.value)
    }
}

/// Splits a spectrum into a zero mode, near-degenerate doublets and
/// leftovers.
///
/// Levels with `|e| ≤ tol·max(1, max|e|)` are zero candidates; the zero mode
/// is reported only when there is exactly one. The rest are paired greedily
/// from the bottom with `|e_lo − e_hi| ≤ tol·max(1, |e_hi|)`.
pub fn classify_spectrum(eigs: &[f64], j: SpinJ, tol: f64) -> Result<SpectrumReport> {
    if eigs.is_empty() {
        return Err(LmgError::EmptySpectrum);
    }
    if !(tol > 0.0) {
        return Err(LmgError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if eigs.iter().any(|e| !e.is_finite()) {
        return Err(LmgError::InvalidParameter("non-finite eigenvalue".into()));
    }
    let mut eigenvalues = eigs.to_vec();
    eigenvalues.sort_by(f64::total_cmp);
    let scale = eigenvalues.iter().fold(1.0_f64, |acc, e| acc.max(e.abs()));
    let zero_limit = tol * scale;

    let candidates: Vec<usize> = (0..eigenvalues.len())
        .filter(|&i| eigenvalues[i].abs() <= zero_limit)
        .collect();
    let zero_mode = match candidates.as_slice() {
        [i] => Some(ZeroMode {
            value: eigenvalues[*i],
            residual: eigenvalues[*i].abs() / scale,
        }),
        _ => None,
    };
    let zero_index = zero_mode.map(|_| candidates[0]);

    let rest: Vec<f64> = eigenvalues
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != zero_index)
        .map(|(_, &e)| e)
        .collect();
    let mut doublets = Vec::new();
    let mut unpaired = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        if i + 1 < rest.len() {
            let (lo, hi) = (rest[i], rest[i + 1]);
            let split = hi - lo;
            if split <= tol * hi.abs().max(1.0) {
                doublets.push(Doublet { lo, hi, split });
                i += 2;
                continue;
            }
        }
        unpaired.push(rest[i]);
        i += 1;
    }

    let all_paired = unpaired.is_empty();
    let verdict = if j.is_integer() && zero_mode.is_some() && all_paired {
        Verdict::SusyPattern
    } else {
        Verdict::SusyBroken
    };
    Ok(SpectrumReport {
        eigenvalues,
        zero_mode,
        doublets,
        unpaired,
        all_paired,
        verdict,
    })
}

/// Outcome of comparing `det(λ − H_n)` with `λ·det(λ − H₊)·det(λ − H₋)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCheck {
    pub lhs: CharPoly,
    pub rhs: CharPoly,
    /// Largest relative coefficient mismatch. The constant term vanishes on
    /// the right, so it enters as `|c₀| / (‖H_n‖₁·|c₁|)`.
    pub coefficient_residual: f64,
    /// `H₊` is `H₋` under the reversal `m → −m` of its basis, bit for bit.
    pub mirror_exact: bool,
    /// The two tridiagonal polynomials agree coefficient by coefficient.
    pub blocks_equal: bool,
}

impl FactorizationCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.coefficient_residual <= tol && self.mirror_exact
    }
}

pub fn determinant_factorization(j: SpinJ, gamma: f64) -> Result<FactorizationCheck> {
    let hn = build_nonhermitian(j, gamma);
    let blocks = extract_hn_blocks(&hn, j)?;
    let lhs = charpoly_dense(&hn)?;
    let p_plus = charpoly_tridiag(&blocks.h_plus)?;
    let p_minus = charpoly_tridiag(&blocks.h_minus)?;
    let rhs = CharPoly::lambda().mul(&p_plus).mul(&p_minus);

    let rho = hn.norm1();
    let constant = if lhs.coeffs[1] == 0.0 {
        if lhs.coeffs[0] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (lhs.coeffs[0] - rhs.coeffs[0]).abs() / (rho * lhs.coeffs[1].abs())
    };
    let higher = CharPoly {
        coeffs: lhs.coeffs[1..].to_vec(),
    }
    .max_relative_diff(&CharPoly {
        coeffs: rhs.coeffs[1..].to_vec(),
    });
    let mirror_exact = blocks.h_plus.reversed() == blocks.h_minus;
    let blocks_equal = p_plus.max_relative_diff(&p_minus) <= 1e-12;
    Ok(FactorizationCheck {
        lhs,
        rhs,
        coefficient_residual: constant.max(higher),
        mirror_exact,
        blocks_equal,
    })
}
