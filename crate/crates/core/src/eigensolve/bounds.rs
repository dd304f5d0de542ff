//! Diagonal similarity symmetrizer, the diagonal lower bound, and the
//! spectral gap with its `cosh 2γ` bound.

use serde::{Deserialize, Serialize};

use super::jacobi::eig_dense_symmetric;
use super::sturm::{eig_squared_tridiag, EigRequest, Which};
use crate::models::{build_susy_rotated, odd_block_susy, GeneralTridiag};
use crate::spin::SpinJ;
use crate::{LmgError, Result};

/// Largest `J` accepted by [`GapMethod::DenseOracle`].
pub const DENSE_GAP_LIMIT: u32 = 200;

/// Rescales a tridiagonal matrix by a diagonal similarity `A' = T A T⁻¹` so
/// that its off-diagonal pair `(−β_k, γ_k)` becomes `(∓√(β_kγ_k), ±√(β_kγ_k))`.
/// The symmetric part of the result is exactly its diagonal.
///
/// `t₁ = 1`, `t_{k+1} = t_k·√(β_k/γ_k)`. Each pair must satisfy
/// `β_kγ_k > 0` (sub- and superdiagonal of opposite sign); a pair with both
/// entries zero is already decoupled and keeps ratio 1.
pub fn symmetrize_tridiag(a: &GeneralTridiag) -> Result<(GeneralTridiag, Vec<f64>)> {
    let n = a.dim();
    let mut t = Vec::with_capacity(n);
    t.push(1.0);
    let mut beta = Vec::with_capacity(n.saturating_sub(1));
    let mut gamma_sub = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n - 1 {
        let (b, g) = (a.beta[k], a.gamma_sub[k]);
        if b == 0.0 && g == 0.0 {
            t.push(t[k]);
            beta.push(0.0);
            gamma_sub.push(0.0);
            continue;
        }
        if !(b * g > 0.0) {
            return Err(LmgError::SignViolation {
                index: k,
                beta: b,
                gamma: g,
            });
        }
        let magnitude = (b * g).sqrt();
        t.push(t[k] * (b / g).sqrt());
        beta.push(b.signum() * magnitude);
        gamma_sub.push(g.signum() * magnitude);
    }
    Ok((
        GeneralTridiag {
            alpha: a.alpha.clone(),
            beta,
            gamma_sub,
        },
        t,
    ))
}

/// `min_k α_k`. For a matrix whose symmetric part is diagonal this bounds
/// every real eigenvalue from below: for a real eigenpair `(λ, φ)`,
/// `λ = φᵀA'φ = Σ α_k φ_k² ≥ min α`.
pub fn diagonal_lower_bound(aprime: &GeneralTridiag) -> f64 {
    aprime.alpha.iter().copied().fold(f64::INFINITY, f64::min)
}

/// The analytic gap bound `Ω₀² cosh 2γ`.
pub fn gap_bound(gamma: f64, omega0: f64) -> f64 {
    omega0 * omega0 * (2.0 * gamma).cosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapMethod {
    /// Sturm bisection on the odd-sector block; `O(J)` memory.
    TridiagOdd,
    /// Jacobi on the full rotated Hamiltonian; `J ≤ 200`.
    DenseOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub gap: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// Heap bytes held by [`GapMethod::TridiagOdd`] at integer spin `jj`: the odd
/// block's diagonal (`J` entries) and squared couplings (`J − 1`).
pub fn tridiag_gap_working_set(jj: u32) -> usize {
    (2 * jj as usize).saturating_sub(1) * std::mem::size_of::<f64>()
}

/// Energy of the first excited doublet above the zero mode (`Ω₀ = 1`).
pub fn spectral_gap(j: SpinJ, gamma: f64, method: GapMethod) -> Result<GapResult> {
    let jj = j.integer_j()?;
    if jj == 0 {
        return Err(LmgError::InvalidParameter(
            "J = 0 has no excited states".into(),
        ));
    }
    if !gamma.is_finite() {
        return Err(LmgError::InvalidParameter(format!(
            "gamma must be finite, got {gamma}"
        )));
    }
    let gap = match method {
        GapMethod::TridiagOdd => {
            let odd = odd_block_susy(jj as u64, gamma);
            eig_squared_tridiag(&odd, &EigRequest::new(Which::Smallest))?[0]
        }
        GapMethod::DenseOracle => {
            if jj > DENSE_GAP_LIMIT {
                return Err(LmgError::MethodUnavailable(format!(
                    "dense oracle limited to J <= {DENSE_GAP_LIMIT}, got J = {jj}"
                )));
            }
            eig_dense_symmetric(&build_susy_rotated(j, gamma))?[1]
        }
    };
    let bound = gap_bound(gamma, 1.0);
    let satisfied = gap >= bound - 1e-9 * bound.max(1.0);
    Ok(GapResult {
        gap,
        bound,
        satisfied,
    })
}
