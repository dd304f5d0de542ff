//! Collective spin operators in the `J_z` eigenbasis.
//!
//! Basis index `i` corresponds to `m = i - J`, ascending from `-J` to `+J`.
//! `J_y` is never stored; `K_y = i J_y` is real antisymmetric and every
//! identity involving `J_y` is carried through `K_y` (note `J_y² = -K_y²`).

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{LmgError, Result};

/// Largest `|t|·‖M‖₁` accepted by [`mat_exp_scaled`].
pub const EXP_GUARD: f64 = 700.0;

/// Total spin `J = two_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinJ {
    two_j: u32,
}

impl SpinJ {
    pub const fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    pub const fn integer(j: u32) -> Self {
        Self { two_j: 2 * j }
    }

    /// Accepts any finite non-negative multiple of ½.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !j.is_finite() || j < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(LmgError::InvalidParameter(format!(
                "spin must be a non-negative multiple of 1/2, got {j}"
            )));
        }
        Ok(Self {
            two_j: twice as u32,
        })
    }

    pub const fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Hilbert-space dimension `2J + 1`.
    pub const fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub const fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    /// `J` as an integer, or `NotIntegerSpin`.
    pub fn integer_j(self) -> Result<u32> {
        if self.is_integer() {
            Ok(self.two_j / 2)
        } else {
            Err(LmgError::NotIntegerSpin { two_j: self.two_j })
        }
    }

    /// `2m` for basis index `i`.
    pub fn two_m(self, i: usize) -> i64 {
        2 * i as i64 - self.two_j as i64
    }

    /// Magnetic quantum number of basis index `i`.
    pub fn m(self, i: usize) -> f64 {
        self.two_m(i) as f64 / 2.0
    }

    /// `½√(J(J+1) − m(m+1))` for `m` at basis index `i`: the `|m⟩ → |m+1⟩`
    /// ladder element. The radicand is evaluated in integers.
    pub fn ladder(self, i: usize) -> f64 {
        let tj = self.two_j as i64;
        let tm = self.two_m(i);
        let radicand = tj * (tj + 2) - tm * (tm + 2);
        0.25 * (radicand as f64).sqrt()
    }
}

impl fmt::Display for SpinJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

impl FromStr for SpinJ {
    type Err = LmgError;

    /// Parses `"2"`, `"1.5"` or `"3/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || LmgError::InvalidParameter(format!("cannot parse spin from {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(Self::integer(num)),
                "2" => Ok(Self::from_two_j(num)),
                _ => Err(bad()),
            }
        } else {
            let value: f64 = s.parse().map_err(|_| bad())?;
            Self::from_f64(value)
        }
    }
}

/// Dense real square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds from nested rows; all rows must have the outer length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(LmgError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.dim.max(1))
            .take(self.dim)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.dim, v.len(), "matvec dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + s * b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, -1.0)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `max |M − Mᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Conjugation by a permutation: `out[perm[a]][perm[b]] = self[a][b]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim, "permutation length mismatch");
        let mut out = Self::zeros(self.dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                out[(perm[a], perm[b])] = self[(a, b)];
            }
        }
        out
    }

    /// Principal submatrix on consecutive indices `start..start + len`.
    pub fn principal(&self, start: usize, len: usize) -> Self {
        let mut out = Self::zeros(len);
        for i in 0..len {
            for j in 0..len {
                out[(i, j)] = self[(start + i, start + j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `J_x`, `K_y = i J_y` and `J_z` for one value of the total spin.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub j: SpinJ,
    pub jx: RealMatrix,
    pub ky: RealMatrix,
    pub jz: RealMatrix,
}

impl SpinOperators {
    /// `J(J+1)`.
    pub fn casimir(&self) -> f64 {
        let j = self.j.j();
        j * (j + 1.0)
    }

    /// `J_y² = −K_y²`.
    pub fn jy_squared(&self) -> RealMatrix {
        self.ky.matmul(&self.ky).scale(-1.0)
    }
}

/// Condon–Shortley matrices of the collective spin components.
pub fn build_spin_operators(j: SpinJ) -> SpinOperators {
    let n = j.dim();
    let mut jx = RealMatrix::zeros(n);
    let mut ky = RealMatrix::zeros(n);
    let mut jz = RealMatrix::zeros(n);
    for i in 0..n {
        jz[(i, i)] = j.m(i);
        if i + 1 < n {
            let up = j.ladder(i);
            jx[(i + 1, i)] = up;
            jx[(i, i + 1)] = up;
            ky[(i + 1, i)] = up;
            ky[(i, i + 1)] = -up;
        }
    }
    SpinOperators { j, jx, ky, jz }
}

/// `exp(t·M)` by scaling and squaring a truncated Taylor series.
///
/// Fails with `OverflowRisk` when `|t|·‖M‖₁ > 700`.
pub fn mat_exp_scaled(m: &RealMatrix, t: f64) -> Result<RealMatrix> {
    if !m.is_finite() || !t.is_finite() {
        return Err(LmgError::InvalidParameter(
            "non-finite matrix exponential input".into(),
        ));
    }
    let norm = t.abs() * m.norm1();
    if norm > EXP_GUARD {
        return Err(LmgError::OverflowRisk {
            norm,
            limit: EXP_GUARD,
        });
    }
    let (e, log_scale) = mat_exp_log_scaled(m, t);
    Ok(if log_scale == 0.0 {
        e
    } else {
        e.scale(log_scale.exp())
    })
}

/// `exp(t·M) = e^{log_scale} · E` with `max|E| = 1` whenever rescaling was
/// needed. Never overflows; used where the exponential itself would.
pub(crate) fn mat_exp_log_scaled(m: &RealMatrix, t: f64) -> (RealMatrix, f64) {
    let n = m.dim();
    let a = m.scale(t);
    let norm = a.norm1();
    let squarings = if norm > 1.0 {
        norm.log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5_f64.powi(squarings));

    let mut sum = RealMatrix::identity(n);
    let mut term = RealMatrix::identity(n);
    for k in 1..=60 {
        term = term.matmul(&a).scale(1.0 / k as f64);
        sum = sum.add_scaled(&term, 1.0);
        if term.norm1() < 1e-18 {
            break;
        }
    }

    let mut log_scale = 0.0;
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
        log_scale *= 2.0;
        let peak = sum.max_abs();
        if peak > 1e100 {
            sum = sum.scale(1.0 / peak);
            log_scale += peak.ln();
        }
    }
    (sum, log_scale)
}

/// Boson-number parity sectors of the `J_z` basis.
///
/// A basis state `|m⟩` carries `J + m` quanta of one Schwinger boson; the
/// even sector (`F = 0`) holds even `J + m`, i.e. even basis index. For
/// integer `J` the sizes are `(J + 1, J)` and the zero mode lives in the even
/// sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityIndex {
    pub j: SpinJ,
    /// Original basis indices of the even sector, ascending in `m`.
    pub even: Vec<usize>,
    /// Original basis indices of the odd sector, ascending in `m`.
    pub odd: Vec<usize>,
    /// `perm[original] = sorted position`, even sector first.
    pub perm: Vec<usize>,
}

impl ParityIndex {
    pub fn even_len(&self) -> usize {
        self.even.len()
    }

    pub fn odd_len(&self) -> usize {
        self.odd.len()
    }

    pub fn even_m(&self) -> Vec<f64> {
        self.even.iter().map(|&i| self.j.m(i)).collect()
    }

    pub fn odd_m(&self) -> Vec<f64> {
        self.odd.iter().map(|&i| self.j.m(i)).collect()
    }

    /// Conjugates an operator into the parity-sorted basis.
    pub fn to_sorted(&self, m: &RealMatrix) -> RealMatrix {
        m.permuted(&self.perm)
    }

    /// Inverse of [`ParityIndex::to_sorted`].
    pub fn from_sorted(&self, m: &RealMatrix) -> RealMatrix {
        let mut inverse = vec![0; self.perm.len()];
        for (orig, &sorted) in self.perm.iter().enumerate() {
            inverse[sorted] = orig;
        }
        m.permuted(&inverse)
    }

    /// Reorders a basis vector into parity-sorted order.
    pub fn sort_vector(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (orig, &x) in v.iter().enumerate() {
            out[self.perm[orig]] = x;
        }
        out
    }
}

pub fn parity_sort(j: SpinJ) -> ParityIndex {
    let n = j.dim();
    let even: Vec<usize> = (0..n).step_by(2).collect();
    let odd: Vec<usize> = (1..n).step_by(2).collect();
    let mut perm = vec![0; n];
    for (pos, &orig) in even.iter().chain(&odd).enumerate() {
        perm[orig] = pos;
    }
    ParityIndex { j, even, odd, perm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_close(a: &RealMatrix, b: &RealMatrix, tol: f64) {
        let diff = a.sub(b).max_abs();
        assert!(diff <= tol, "max diff {diff:e} > {tol:e}");
    }

    #[test]
    fn spin_half_is_the_defining_representation() {
        let ops = build_spin_operators(SpinJ::from_two_j(1));
        assert_eq!(ops.jx.to_rows(), vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        assert_eq!(ops.ky.to_rows(), vec![vec![0.0, -0.5], vec![0.5, 0.0]]);
        assert_eq!(ops.jz.diag(), vec![-0.5, 0.5]);
    }

    #[test]
    fn spin_one_ladder_element() {
        let ops = build_spin_operators(SpinJ::integer(1));
        assert_eq!(ops.jz.diag(), vec![-1.0, 0.0, 1.0]);
        assert_abs_diff_eq!(ops.jx[(1, 0)], 2.0_f64.sqrt() / 2.0, epsilon = 1e-16);
    }

    #[test]
    fn spin_two_edge_elements() {
        let ops = build_spin_operators(SpinJ::integer(2));
        assert_eq!(ops.jx[(0, 1)], 1.0);
        assert_eq!(ops.ky[(0, 1)], -1.0);
        let g: f64 = 0.37;
        let rotated = ops.jx[(0, 1)] * g.cosh() - ops.ky[(0, 1)] * g.sinh();
        assert_abs_diff_eq!(rotated, g.exp(), epsilon = 1e-15);
    }

    #[test]
    fn commutators_in_real_form() {
        for two_j in 1..=12 {
            let ops = build_spin_operators(SpinJ::from_two_j(two_j));
            let xk = ops.jx.matmul(&ops.ky).sub(&ops.ky.matmul(&ops.jx));
            assert_close(&xk, &ops.jz.scale(-1.0), 1e-13);
            let zx = ops.jz.matmul(&ops.jx).sub(&ops.jx.matmul(&ops.jz));
            assert_close(&zx, &ops.ky, 1e-13);
            assert_eq!(ops.ky.transpose(), ops.ky.scale(-1.0));
        }
    }

    #[test]
    fn casimir_identity() {
        for two_j in 0..=200 {
            let ops = build_spin_operators(SpinJ::from_two_j(two_j));
            let c = ops
                .jx
                .matmul(&ops.jx)
                .sub(&ops.ky.matmul(&ops.ky))
                .add_scaled(&ops.jz.matmul(&ops.jz), 1.0);
            let expected = RealMatrix::identity(ops.j.dim()).scale(ops.casimir());
            assert_close(&c, &expected, 1e-12 * ops.casimir().max(1.0));
        }
    }

    #[test]
    fn exp_at_zero_is_identity() {
        let ops = build_spin_operators(SpinJ::integer(3));
        assert_eq!(
            mat_exp_scaled(&ops.jx, 0.0).unwrap(),
            RealMatrix::identity(7)
        );
    }

    #[test]
    fn exp_of_diagonal() {
        let ops = build_spin_operators(SpinJ::integer(4));
        let g = 0.8;
        let e = mat_exp_scaled(&ops.jz, g).unwrap();
        for i in 0..9 {
            let expected = (ops.j.m(i) * g).exp();
            assert!((e[(i, i)] - expected).abs() <= 1e-13 * expected);
        }
        assert!(e.sub(&RealMatrix::from_diag(&e.diag())).max_abs() == 0.0);
    }

    #[test]
    fn exp_of_spin_half_jx_closed_form() {
        let ops = build_spin_operators(SpinJ::from_two_j(1));
        for g in [-2.5, -0.3, 0.7, 1.9, 6.0] {
            let e = mat_exp_scaled(&ops.jx, g).unwrap();
            let (c, s) = ((g / 2.0).cosh(), (g / 2.0).sinh());
            let expected = RealMatrix::from_rows(&[vec![c, s], vec![s, c]]).unwrap();
            assert_close(&e, &expected, 1e-12 * c);
        }
    }

    #[test]
    fn exp_of_spin_one_jx_closed_form() {
        // Spin one: Jx³ = Jx, so exp(tJx) = I + sinh t·Jx + (cosh t − 1)·Jx².
        let ops = build_spin_operators(SpinJ::integer(1));
        let jx2 = ops.jx.matmul(&ops.jx);
        for t in [-3.0, -1.0, 0.25, 2.0, 3.0, 40.0] {
            let e = mat_exp_scaled(&ops.jx, t).unwrap();
            let expected = RealMatrix::identity(3)
                .add_scaled(&ops.jx, f64::sinh(t))
                .add_scaled(&jx2, f64::cosh(t) - 1.0);
            assert_close(&e, &expected, 1e-12 * expected.max_abs());
        }
    }

    #[test]
    fn exp_guard_rejects_overflow() {
        let ops = build_spin_operators(SpinJ::integer(10));
        assert!(matches!(
            mat_exp_scaled(&ops.jx, 100.0),
            Err(LmgError::OverflowRisk { .. })
        ));
    }

    #[test]
    fn log_scaled_exp_matches_plain_exp() {
        let ops = build_spin_operators(SpinJ::integer(6));
        let plain = mat_exp_scaled(&ops.jx, 5.0).unwrap();
        let (e, log_scale) = mat_exp_log_scaled(&ops.jx, 5.0);
        assert_close(&e.scale(log_scale.exp()), &plain, 1e-13 * plain.max_abs());
    }

    #[test]
    fn parity_sectors() {
        let p = parity_sort(SpinJ::integer(2));
        assert_eq!(p.even_m(), vec![-2.0, 0.0, 2.0]);
        assert_eq!(p.odd_m(), vec![-1.0, 1.0]);

        let p = parity_sort(SpinJ::integer(1));
        assert_eq!(p.even_m(), vec![-1.0, 1.0]);
        assert_eq!(p.odd_m(), vec![0.0]);

        let p = parity_sort(SpinJ::integer(3));
        assert_eq!(p.even_m(), vec![-3.0, -1.0, 1.0, 3.0]);
        assert_eq!(p.odd_m(), vec![-2.0, 0.0, 2.0]);
    }

    #[test]
    fn parity_sizes_and_bijection() {
        for j in 0..40 {
            let p = parity_sort(SpinJ::integer(j));
            assert_eq!((p.even_len(), p.odd_len()), (j as usize + 1, j as usize));
            let mut seen = p.perm.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..p.perm.len()).collect::<Vec<_>>());
            let m = build_spin_operators(SpinJ::integer(j)).jx;
            assert_eq!(p.from_sorted(&p.to_sorted(&m)), m);
        }
    }

    #[test]
    fn spin_parsing() {
        assert_eq!("3/2".parse::<SpinJ>().unwrap(), SpinJ::from_two_j(3));
        assert_eq!("1.5".parse::<SpinJ>().unwrap(), SpinJ::from_two_j(3));
        assert_eq!("4".parse::<SpinJ>().unwrap(), SpinJ::integer(4));
        assert!("0.3".parse::<SpinJ>().is_err());
        assert!("-1".parse::<SpinJ>().is_err());
        assert_eq!(SpinJ::from_two_j(5).to_string(), "5/2");
        assert_eq!(SpinJ::integer(5).to_string(), "5");
    }
}
