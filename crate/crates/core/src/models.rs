//! Hamiltonian builders.
//!
//! All forms live in the `J_z` basis (ascending `m`). At the supersymmetric
//! point the rotated form, the factorized form and the non-Hermitian form are
//! related by similarity transformations and share one spectrum.

use serde::{Deserialize, Serialize};

use crate::spin::{build_spin_operators, mat_exp_scaled, RealMatrix, SpinJ};
use crate::{LmgError, Result};

/// Couplings of the general model `ξ(χ₁²J_z² + χ₂²J_y² + λχ₁χ₂J_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub xi: f64,
    pub chi1: f64,
    pub chi2: f64,
    pub lambda: f64,
}

impl ModelParams {
    /// Requires `χ₁ > 0`, `χ₁ ≥ χ₂ ≥ 0` and `λ ≥ 0`.
    pub fn new(xi: f64, chi1: f64, chi2: f64, lambda: f64) -> Result<Self> {
        let all_finite = [xi, chi1, chi2, lambda].iter().all(|x| x.is_finite());
        if !all_finite {
            return Err(LmgError::InvalidParameter(
                "model parameters must be finite".into(),
            ));
        }
        if chi1 <= 0.0 || chi2 < 0.0 || chi2 > chi1 {
            return Err(LmgError::InvalidParameter(format!(
                "need chi1 > 0 and chi1 >= chi2 >= 0, got chi1 = {chi1}, chi2 = {chi2}"
            )));
        }
        if lambda < 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "need lambda >= 0, got {lambda}"
            )));
        }
        Ok(Self {
            xi,
            chi1,
            chi2,
            lambda,
        })
    }

    /// `χ₁ = Ω₀ cosh γ`, `χ₂ = Ω₀ sinh γ`.
    pub fn from_omega_gamma(xi: f64, omega0: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if omega0 <= 0.0 || gamma < 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "need omega0 > 0 and gamma >= 0, got omega0 = {omega0}, gamma = {gamma}"
            )));
        }
        Self::new(xi, omega0 * gamma.cosh(), omega0 * gamma.sinh(), lambda)
    }

    /// `(Ω₀, γ)`; fails when `χ₂ = χ₁`.
    pub fn omega_gamma(&self) -> Result<(f64, f64)> {
        params_from_chi(self.chi1, self.chi2)
    }

    pub fn is_susy_point(&self) -> bool {
        self.lambda == 1.0
    }
}

/// `Ω₀ = √(χ₁² − χ₂²)`, `γ = atanh(χ₂/χ₁)`.
pub fn params_from_chi(chi1: f64, chi2: f64) -> Result<(f64, f64)> {
    if !(chi1 > 0.0) || !(chi2 >= 0.0) || !chi1.is_finite() || !chi2.is_finite() {
        return Err(LmgError::InvalidParameter(format!(
            "need chi1 > 0 and chi2 >= 0, got chi1 = {chi1}, chi2 = {chi2}"
        )));
    }
    if chi2 >= chi1 {
        return Err(LmgError::DegenerateAnisotropy { chi1, chi2 });
    }
    let omega0 = ((chi1 - chi2) * (chi1 + chi2)).sqrt();
    Ok((omega0, (chi2 / chi1).atanh()))
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(LmgError::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                got: off.len(),
            });
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(LmgError::InvalidParameter(
                "tridiagonal entries must be finite".into(),
            ));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.off)
            .fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn to_dense(&self) -> RealMatrix {
        let mut m = RealMatrix::from_diag(&self.diag);
        for (i, &e) in self.off.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        m
    }
}

/// General real tridiagonal matrix in the layout
///
/// ```text
/// [ α₁  −β₁            ]
/// [ γ₁   α₂  −β₂       ]
/// [      γ₂   ⋱    ⋱   ]
/// ```
///
/// i.e. the superdiagonal is stored negated and the subdiagonal as is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralTridiag {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma_sub: Vec<f64>,
}

impl GeneralTridiag {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, gamma_sub: Vec<f64>) -> Result<Self> {
        let n = alpha.len();
        if n == 0 || beta.len() + 1 != n || gamma_sub.len() + 1 != n {
            return Err(LmgError::DimensionMismatch {
                expected: n.saturating_sub(1),
                got: beta.len().max(gamma_sub.len()),
            });
        }
        Ok(Self {
            alpha,
            beta,
            gamma_sub,
        })
    }

    /// Reads the tridiagonal band of a dense matrix, ignoring everything else.
    pub fn from_dense_band(m: &RealMatrix) -> Self {
        let n = m.dim();
        Self {
            alpha: m.diag(),
            beta: (0..n.saturating_sub(1)).map(|k| -m[(k, k + 1)]).collect(),
            gamma_sub: (0..n.saturating_sub(1)).map(|k| m[(k + 1, k)]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn superdiag(&self) -> Vec<f64> {
        self.beta.iter().map(|b| -b).collect()
    }

    /// `β_k γ_k`: the only off-diagonal data the spectrum depends on.
    pub fn products(&self) -> Vec<f64> {
        self.beta
            .iter()
            .zip(&self.gamma_sub)
            .map(|(b, g)| b * g)
            .collect()
    }

    /// Conjugation by the index-reversal permutation.
    pub fn reversed(&self) -> Self {
        // Reversal swaps super- and subdiagonal: super'_k = sub_{n-2-k}.
        Self {
            alpha: self.alpha.iter().rev().copied().collect(),
            beta: self.gamma_sub.iter().rev().map(|g| -g).collect(),
            gamma_sub: self.beta.iter().rev().map(|b| -b).collect(),
        }
    }

    pub fn to_dense(&self) -> RealMatrix {
        let mut m = RealMatrix::from_diag(&self.alpha);
        for k in 0..self.beta.len() {
            m[(k, k + 1)] = -self.beta[k];
            m[(k + 1, k)] = self.gamma_sub[k];
        }
        m
    }
}

/// General LMG Hamiltonian `ξ(χ₁²J_z² + χ₂²J_y² + λχ₁χ₂J_x)`.
pub fn build_lmg_general(j: SpinJ, p: &ModelParams) -> RealMatrix {
    let ops = build_spin_operators(j);
    let jz2 = ops.jz.matmul(&ops.jz);
    let jy2 = ops.jy_squared();
    jz2.scale(p.chi1 * p.chi1)
        .add_scaled(&jy2, p.chi2 * p.chi2)
        .add_scaled(&ops.jx, p.lambda * p.chi1 * p.chi2)
        .scale(p.xi)
}

/// Rotated supersymmetric form `J_x²cosh²γ + J_y²sinh²γ + J_z coshγ sinhγ`
/// with `Ω₀ = 1`.
pub fn build_susy_rotated(j: SpinJ, gamma: f64) -> RealMatrix {
    let ops = build_spin_operators(j);
    let (c, s) = (gamma.cosh(), gamma.sinh());
    let jx2 = ops.jx.matmul(&ops.jx);
    let ky2 = ops.ky.matmul(&ops.ky);
    jx2.scale(c * c)
        .add_scaled(&ky2, -s * s)
        .add_scaled(&ops.jz, c * s)
}

/// Factorized form `A·Aᵀ` with `A = exp(−γJ_x) J_z exp(γJ_x) = J_z coshγ + K_y sinhγ`.
///
/// The hyperbolic rotation of `J_z` is taken in closed form; the literal
/// product of exponentials ([`build_factorized_exp`]) loses all accuracy once
/// `e^{2|γ|J}·ε` is no longer small.
pub fn build_factorized(j: SpinJ, gamma: f64) -> RealMatrix {
    let ops = build_spin_operators(j);
    let a = ops.jz.scale(gamma.cosh()).add_scaled(&ops.ky, gamma.sinh());
    a.matmul(&a.transpose())
}

/// `exp(−γJ_x)·J_z·exp(2γJ_x)·J_z·exp(−γJ_x)` evaluated literally.
///
/// Cancellation error grows like `ε·J²·e^{4|γ|J}`; use only for small `|γ|J`.
pub fn build_factorized_exp(j: SpinJ, gamma: f64) -> Result<RealMatrix> {
    let ops = build_spin_operators(j);
    let back = mat_exp_scaled(&ops.jx, -gamma)?;
    let forward2 = mat_exp_scaled(&ops.jx, 2.0 * gamma)?;
    Ok(back
        .matmul(&ops.jz)
        .matmul(&forward2)
        .matmul(&ops.jz)
        .matmul(&back))
}

/// Non-Hermitian similar form `J_z²cosh2γ + K_y J_z sinh2γ`.
pub fn build_nonhermitian(j: SpinJ, gamma: f64) -> RealMatrix {
    let ops = build_spin_operators(j);
    let jz2 = ops.jz.matmul(&ops.jz);
    let kyjz = ops.ky.matmul(&ops.jz);
    jz2.scale((2.0 * gamma).cosh())
        .add_scaled(&kyjz, (2.0 * gamma).sinh())
}

/// Blocks of the non-Hermitian Hamiltonian around the null state `|m = 0⟩`:
///
/// ```text
/// [ H₋   0   0  ]
/// [ ⟨a|  0  ⟨a| ]
/// [ 0    0   H₊ ]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HnBlocks {
    pub h_minus: GeneralTridiag,
    pub h_plus: GeneralTridiag,
    /// Row `m = 0` ordered by `|m|` ascending: entry `k` couples to
    /// `m = ±(k + 1)`. The negative-`m` half of the row is its reversal.
    pub a_vec: Vec<f64>,
}

impl HnBlocks {
    /// Row `m = 0` restricted to the columns `m = −J..−1`.
    pub fn a_row_negative(&self) -> Vec<f64> {
        self.a_vec.iter().rev().copied().collect()
    }

    /// Row `m = 0` restricted to the columns `m = 1..J`.
    pub fn a_row_positive(&self) -> Vec<f64> {
        self.a_vec.clone()
    }

    /// Reassembles the full `(2J+1)×(2J+1)` matrix.
    pub fn to_dense(&self) -> RealMatrix {
        let jj = self.h_minus.dim();
        let mut m = RealMatrix::zeros(2 * jj + 1);
        let minus = self.h_minus.to_dense();
        let plus = self.h_plus.to_dense();
        for r in 0..jj {
            for c in 0..jj {
                m[(r, c)] = minus[(r, c)];
                m[(jj + 1 + r, jj + 1 + c)] = plus[(r, c)];
            }
        }
        for (k, &a) in self.a_vec.iter().enumerate() {
            m[(jj, jj + 1 + k)] = a;
            m[(jj, jj - 1 - k)] = a;
        }
        m
    }
}

/// Splits a [`build_nonhermitian`] matrix into `H₋`, `H₊` and `⟨a|`.
pub fn extract_hn_blocks(hn: &RealMatrix, j: SpinJ) -> Result<HnBlocks> {
    let jj = j.integer_j()? as usize;
    if hn.dim() != j.dim() {
        return Err(LmgError::DimensionMismatch {
            expected: j.dim(),
            got: hn.dim(),
        });
    }
    if jj == 0 {
        return Err(LmgError::InvalidParameter("J = 0 has no H± blocks".into()));
    }
    let h_minus = GeneralTridiag::from_dense_band(&hn.principal(0, jj));
    let h_plus = GeneralTridiag::from_dense_band(&hn.principal(jj + 1, jj));
    let a_vec = (0..jj).map(|k| hn[(jj, jj + 1 + k)]).collect();
    Ok(HnBlocks {
        h_minus,
        h_plus,
        a_vec,
    })
}

/// `H₋` assembled directly from its matrix elements over `m, m' = −J..−1`:
/// `m²δ_{mm'}cosh2γ + (m'/2)sinh2γ[δ_{m,m'+1}√((J−m')(J+m'+1)) − δ_{m,m'−1}√((J+m')(J−m'+1))]`.
pub fn h_minus_elements(j: SpinJ, gamma: f64) -> Result<GeneralTridiag> {
    let jj = j.integer_j()? as i64;
    if jj == 0 {
        return Err(LmgError::InvalidParameter("J = 0 has no H± blocks".into()));
    }
    let (c2, s2) = ((2.0 * gamma).cosh(), (2.0 * gamma).sinh());
    let m_of = |k: i64| k - jj;
    let alpha = (0..jj).map(|k| (m_of(k) * m_of(k)) as f64 * c2).collect();
    // Superdiagonal (k, k+1): column m' = m_{k+1}; the stored β is its negation.
    let beta = (0..jj - 1)
        .map(|k| {
            let mp = m_of(k + 1);
            let root = (((jj + mp) * (jj - mp + 1)) as f64).sqrt();
            (mp as f64 / 2.0) * root * s2
        })
        .collect();
    let gamma_sub = (0..jj - 1)
        .map(|k| {
            let mp = m_of(k);
            let root = (((jj - mp) * (jj + mp + 1)) as f64).sqrt();
            (mp as f64 / 2.0) * root * s2
        })
        .collect();
    GeneralTridiag::new(alpha, beta, gamma_sub)
}

/// Even- and odd-sector blocks of [`build_susy_rotated`] from closed-form
/// elements. Sectors follow [`crate::spin::parity_sort`]; within a sector the
/// basis is ascending in `m` and neighbours differ by `Δm = 2`.
///
/// Diagonal `½(J(J+1) − m²)cosh2γ + ½m sinh2γ`, coupling between `m` and
/// `m + 2`: `¼√((J−m)(J+m+1)(J−m−1)(J+m+2))`.
pub fn parity_blocks_susy(j: SpinJ, gamma: f64) -> Result<(SymTridiag, SymTridiag)> {
    let jj = j.integer_j()? as i64;
    if jj == 0 {
        return Err(LmgError::InvalidParameter(
            "J = 0 has a single state, no odd sector".into(),
        ));
    }
    let (c2, s2) = ((2.0 * gamma).cosh(), (2.0 * gamma).sinh());
    let block = |first_m: i64| {
        let ms: Vec<i64> = (first_m..=jj).step_by(2).collect();
        let diag = ms
            .iter()
            .map(|&m| 0.5 * (jj * (jj + 1) - m * m) as f64 * c2 + 0.5 * m as f64 * s2)
            .collect();
        let off = ms[..ms.len() - 1]
            .iter()
            .map(|&m| {
                0.25 * (((jj - m) * (jj + m + 1) * (jj - m - 1) * (jj + m + 2)) as f64).sqrt()
            })
            .collect();
        SymTridiag { diag, off }
    };
    Ok((block(-jj), block(-jj + 1)))
}

/// Symmetric tridiagonal matrix carried as its diagonal and the squares of
/// its off-diagonal, which is all a Sturm count needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquaredTridiag {
    pub diag: Vec<f64>,
    pub off_sq: Vec<f64>,
}

impl SquaredTridiag {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn max_abs(&self) -> f64 {
        let d = self.diag.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let e = self.off_sq.iter().fold(0.0_f64, |a, x| a.max(*x));
        d.max(e.sqrt())
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.off_sq[i - 1].sqrt()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.off_sq[i].sqrt()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Bytes held by the two arrays.
    pub fn heap_bytes(&self) -> usize {
        (self.diag.capacity() + self.off_sq.capacity()) * std::mem::size_of::<f64>()
    }
}

impl From<&SymTridiag> for SquaredTridiag {
    fn from(t: &SymTridiag) -> Self {
        Self {
            diag: t.diag.clone(),
            off_sq: t.off.iter().map(|e| e * e).collect(),
        }
    }
}

/// Odd-sector block of [`build_susy_rotated`] in squared form, generated
/// without materialising the even sector. Memory is two arrays of length `J`.
pub(crate) fn odd_block_susy(jj: u64, gamma: f64) -> SquaredTridiag {
    sector_block_squared(jj, gamma, 1)
}

/// Both parity blocks of [`build_susy_rotated`] in squared form, even sector
/// (`J + 1` states) first. Integer `J ≥ 1` only.
pub fn parity_blocks_squared(j: SpinJ, gamma: f64) -> Result<(SquaredTridiag, SquaredTridiag)> {
    let jj = j.integer_j()? as u64;
    if jj == 0 {
        return Err(LmgError::InvalidParameter(
            "J = 0 has a single state, no odd sector".into(),
        ));
    }
    Ok((
        sector_block_squared(jj, gamma, 0),
        sector_block_squared(jj, gamma, 1),
    ))
}

/// Block on `m = −J + offset, −J + offset + 2, …, ≤ J`.
///
/// The integer parts of every entry are formed exactly before a single
/// rounding, so at `γ = 0` the diagonal is exact and each squared coupling
/// carries one rounding at most.
fn sector_block_squared(jj: u64, gamma: f64, offset: u64) -> SquaredTridiag {
    let (c2, s2) = ((2.0 * gamma).cosh(), (2.0 * gamma).sinh());
    let j = jj as i128;
    let n = (jj + 1 - offset) as usize;
    let mut diag = Vec::with_capacity(n);
    let mut off_sq = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let m = -j + offset as i128 + 2 * k as i128;
        let twice = (j * (j + 1) - m * m) as f64;
        diag.push(0.5 * twice * c2 + 0.5 * m as f64 * s2);
        if k + 1 < n {
            let product = (j - m) * (j + m + 1) * (j - m - 1) * (j + m + 2);
            off_sq.push(product as f64 / 16.0);
        }
    }
    SquaredTridiag { diag, off_sq }
}
