//! The exact zero-energy ground state `exp(γJ_x)|m=0⟩ / √P_J(cosh 2γ)`.

use serde::{Deserialize, Serialize};

use crate::models::{build_factorized, build_susy_rotated};
use crate::spin::{build_spin_operators, mat_exp_log_scaled, parity_sort, SpinJ};
use crate::{LmgError, Result};

/// `P_n(x)` by the Bonnet recurrence `(k+1)P_{k+1} = (2k+1)xP_k − kP_{k−1}`.
pub fn legendre_p(n: u32, x: f64) -> f64 {
    let (value, log_scale) = legendre_p_log_scaled(n, x);
    if log_scale == 0.0 {
        value
    } else {
        value * log_scale.exp()
    }
}

/// `P_n(x) = value·e^{log_scale}`, rescaling as the recurrence grows so that
/// large `n·arccosh(x)` does not overflow.
pub fn legendre_p_log_scaled(n: u32, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    let mut log_scale = 0.0;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e100 {
            let s = cur.abs();
            cur /= s;
            prev /= s;
            log_scale += s.ln();
        }
    }
    (cur, log_scale)
}

/// Which Hamiltonian the zero mode belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Frame {
    /// `A·Aᵀ`, `A = J_z coshγ + K_y sinhγ`: the state `exp(γJ_x)|0⟩` itself.
    #[default]
    Factorized,
    /// The rotated form `J_x²cosh²γ + J_y²sinh²γ + J_z coshγ sinhγ`, whose zero
    /// mode is the kernel vector of its even parity block.
    Rotated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub j: SpinJ,
    pub gamma: f64,
    pub frame: Frame,
    /// Unit-norm coefficients over `|m⟩`, ascending `m`.
    pub amplitudes: Vec<f64>,
    /// `⟨0|exp(2γJ_x)|0⟩` from the matrix exponential.
    pub norm_direct: f64,
    /// `P_J(cosh 2γ)` from the Legendre recurrence.
    pub norm_legendre: f64,
    /// `ln(norm_direct / norm_legendre)`, formed in log space.
    pub log_norm_ratio: f64,
    /// `‖Hψ‖∞` for the frame's Hamiltonian.
    pub energy_residual: f64,
    /// `max|H_ij|` for the same Hamiltonian.
    pub h_norm: f64,
}

impl GroundState {
    pub fn norm_ratio(&self) -> f64 {
        self.log_norm_ratio.exp()
    }

    pub fn m_values(&self) -> Vec<f64> {
        (0..self.amplitudes.len()).map(|i| self.j.m(i)).collect()
    }
}

pub fn ground_state(j: SpinJ, gamma: f64) -> Result<GroundState> {
    ground_state_in(j, gamma, Frame::Factorized)
}

pub fn ground_state_in(j: SpinJ, gamma: f64, frame: Frame) -> Result<GroundState> {
    let jj = j.integer_j()?;
    if !gamma.is_finite() {
        return Err(LmgError::InvalidParameter(format!(
            "gamma must be finite, got {gamma}"
        )));
    }
    let n = j.dim();
    let centre = jj as usize;
    let ops = build_spin_operators(j);
    // Each squaring doubles the running log-scale; the guard only stops
    // runaway inputs, since the column is renormalised as it grows.
    let norm = gamma.abs() * ops.jx.norm1();
    if norm > 1e6 {
        return Err(LmgError::OverflowRisk { norm, limit: 1e6 });
    }
    let (e, log_scale) = mat_exp_log_scaled(&ops.jx, gamma);
    let column: Vec<f64> = (0..n).map(|i| e[(i, centre)]).collect();
    let sq: f64 = column.iter().map(|x| x * x).sum();
    let ln_direct = 2.0 * log_scale + sq.ln();
    let (p, p_scale) = legendre_p_log_scaled(jj, (2.0 * gamma).cosh());
    let ln_legendre = p.ln() + p_scale;

    let (amplitudes, h) = match frame {
        Frame::Factorized => {
            let inv = (-0.5 * sq.ln()).exp();
            (
                column.iter().map(|x| x * inv).collect::<Vec<_>>(),
                build_factorized(j, gamma),
            )
        }
        Frame::Rotated => (rotated_zero_mode(jj, gamma), build_susy_rotated(j, gamma)),
    };
    let energy_residual = h
        .matvec(&amplitudes)
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    Ok(GroundState {
        j,
        gamma,
        frame,
        amplitudes,
        norm_direct: if log_scale == 0.0 {
            sq
        } else {
            ln_direct.exp()
        },
        norm_legendre: if p_scale == 0.0 { p } else { ln_legendre.exp() },
        log_norm_ratio: ln_direct - ln_legendre,
        energy_residual,
        h_norm: h.max_abs(),
    })
}

/// Kernel of the even block of the rotated form. The block is `B·Bᵀ` with
/// `B` the supercharge block, two nonzeros per column, so the kernel of `Bᵀ`
/// follows from a two-term recurrence:
/// `x_{a−1} = −e^{2γ}·ℓ(2k)/ℓ(2k+1)·x_a`, `a = J − k`, `ℓ` the ladder element.
fn rotated_zero_mode(jj: u32, gamma: f64) -> Vec<f64> {
    let j = SpinJ::integer(jj);
    let n = jj as usize;
    let ratio = (2.0 * gamma).exp();
    // x over the sorted even sector, index a ↔ m = −J + 2a.
    let mut x = vec![0.0; n + 1];
    x[n] = 1.0;
    let mut peak = 1.0_f64;
    for k in 0..n {
        let a = n - k;
        x[a - 1] = -ratio * j.ladder(2 * k) / j.ladder(2 * k + 1) * x[a];
        if x[a - 1].abs() > peak {
            peak = x[a - 1].abs();
            if peak > 1e100 {
                for v in &mut x[a - 1..] {
                    *v /= peak;
                }
                peak = 1.0;
            }
        }
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let parity = parity_sort(j);
    let mut out = vec![0.0; j.dim()];
    for (a, v) in x.iter().enumerate() {
        out[parity.even[a]] = v / norm;
    }
    // Fix the overall sign: largest component positive.
    let big = out
        .iter()
        .copied()
        .fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    if big < 0.0 {
        for v in &mut out {
            *v = -*v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::mat_exp_scaled;

    /// `P_n(x) = 2^{−n} Σ_k C(n,k)² (x−1)^{n−k} (x+1)^k`.
    fn legendre_sum(n: u32, x: f64) -> f64 {
        let mut binom = 1.0;
        let mut total = 0.0;
        for k in 0..=n {
            total += binom * binom * (x - 1.0).powi((n - k) as i32) * (x + 1.0).powi(k as i32);
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        total / 2.0_f64.powi(n as i32)
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_p(0, 3.7), 1.0);
        assert_eq!(legendre_p(1, 3.7), 3.7);
        assert_eq!(legendre_p(2, 1.5), 2.875);
        let x = 2.0_f64.cosh();
        assert!((legendre_p(5, x) / legendre_sum(5, x) - 1.0).abs() < 1e-12);
        for n in 0..40 {
            assert!((legendre_p(n, 1.0) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn legendre_log_scaled_does_not_overflow() {
        let x = 10.0_f64.cosh();
        let (v, s) = legendre_p_log_scaled(400, x);
        assert!(v.is_finite() && s > 0.0);
        let (v2, s2) = legendre_p_log_scaled(40, x);
        let direct = legendre_p(40, x);
        assert!(((v2.ln() + s2) - direct.ln()).abs() < 1e-12 * direct.ln());
        // P_n(cosh η) ~ e^{(n+½)η} / √(2πn·sinh η) for large n.
        let eta = 10.0_f64;
        let ln_est = 400.5 * eta - 0.5 * (2.0 * std::f64::consts::PI * 400.0 * eta.sinh()).ln();
        assert!(((v.ln() + s) - ln_est).abs() < 1e-2);
    }

    #[test]
    fn gamma_zero_is_indicator() {
        for jj in [1, 2, 5] {
            let gs = ground_state(SpinJ::integer(jj), 0.0).unwrap();
            let mut want = vec![0.0; 2 * jj as usize + 1];
            want[jj as usize] = 1.0;
            assert_eq!(gs.amplitudes, want);
            assert_eq!(gs.energy_residual, 0.0);
            assert_eq!(gs.norm_legendre, 1.0);
        }
    }

    #[test]
    fn j1_norm_is_cosh() {
        for g in [0.3, -1.1, 2.0_f64] {
            let gs = ground_state(SpinJ::integer(1), g).unwrap();
            let c = (2.0 * g).cosh();
            assert!((gs.norm_direct / c - 1.0).abs() < 1e-13);
            assert_eq!(gs.norm_legendre, c);
        }
    }

    #[test]
    fn j10_norm_identity_and_residual() {
        let gs = ground_state(SpinJ::integer(10), 1.0).unwrap();
        assert!(gs.log_norm_ratio.abs() < 1e-10);
        assert!(gs.energy_residual <= 1e-9 * gs.h_norm);
        assert_eq!(gs.amplitudes.len(), 21);
        let total: f64 = gs.amplitudes.iter().map(|a| a * a).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn amplitudes_are_reflection_symmetric() {
        let gs = ground_state(SpinJ::integer(12), -0.8).unwrap();
        let n = gs.amplitudes.len();
        for i in 0..n {
            assert!((gs.amplitudes[i] - gs.amplitudes[n - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn direct_norm_matches_plain_exponential() {
        let j = SpinJ::integer(4);
        let e2 = mat_exp_scaled(&build_spin_operators(j).jx, 1.2).unwrap();
        let gs = ground_state(j, 0.6).unwrap();
        assert!((gs.norm_direct / e2[(4, 4)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotated_frame_zero_mode() {
        for jj in 1..=20 {
            for g in [-1.5, 0.0, 0.4, 2.0] {
                let gs = ground_state_in(SpinJ::integer(jj), g, Frame::Rotated).unwrap();
                assert!(gs.energy_residual <= 1e-9 * gs.h_norm, "J={jj} γ={g}");
                let total: f64 = gs.amplitudes.iter().map(|a| a * a).sum();
                assert!((total - 1.0).abs() < 1e-13);
                // Support on the even sector only.
                for (i, a) in gs.amplitudes.iter().enumerate() {
                    if i % 2 == 1 {
                        assert_eq!(*a, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn large_gamma_j_stays_finite() {
        let gs = ground_state(SpinJ::integer(60), 6.0).unwrap();
        assert!(gs.amplitudes.iter().all(|a| a.is_finite()));
        assert!(gs.log_norm_ratio.abs() < 1e-8);
        let gs = ground_state_in(SpinJ::integer(200), 3.0, Frame::Rotated).unwrap();
        assert!(gs.amplitudes.iter().all(|a| a.is_finite()));
    }

    #[test]
    fn half_integer_rejected() {
        assert!(matches!(
            ground_state(SpinJ::from_two_j(3), 0.2),
            Err(LmgError::NotIntegerSpin { .. })
        ));
    }
}
