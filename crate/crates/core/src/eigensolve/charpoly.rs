//! Characteristic polynomials: the tridiagonal three-term recurrence and the
//! dense trace recursion (Faddeev–LeVerrier).

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::models::GeneralTridiag;
use crate::spin::RealMatrix;
use crate::{LmgError, Result};

pub const TRIDIAG_LIMIT: usize = 60;
pub const DENSE_LIMIT: usize = 25;

/// Monic characteristic polynomial `det(λ·1 − A)`, coefficients stored in
/// ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coeffs: Vec<f64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The polynomial `λ`.
    pub fn lambda() -> Self {
        Self {
            coeffs: vec![0.0, 1.0],
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Largest per-coefficient relative difference `|a−b| / max(|a|,|b|)`,
    /// skipping coefficients that are zero on both sides. Infinite when the
    /// degrees differ.
    pub fn max_relative_diff(&self, other: &Self) -> f64 {
        if self.coeffs.len() != other.coeffs.len() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let scale = a.abs().max(b.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `det(λ·1 − A)` via `p_k = (λ − α_k)p_{k−1} + β_{k−1}γ_{k−1}p_{k−2}`.
pub fn charpoly_tridiag(a: &GeneralTridiag) -> Result<CharPoly> {
    let n = a.dim();
    if n > TRIDIAG_LIMIT {
        return Err(LmgError::DimensionTooLarge {
            dim: n,
            limit: TRIDIAG_LIMIT,
        });
    }
    let products = a.products();
    let mut prev = vec![1.0];
    let mut cur = vec![-a.alpha[0], 1.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= a.alpha[k] * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] += products[k - 1] * c;
        }
        prev = cur;
        cur = next;
    }
    Ok(CharPoly { coeffs: cur })
}

/// `det(λ·1 − A)` for a dense matrix by the trace recursion
/// `M_k = A M_{k−1} + c_{n−k+1}·1`, `c_{n−k} = −tr(A M_k)/k`.
///
/// The recursion cancels heavily for large non-normal matrices, so it runs
/// in double-double arithmetic and rounds the coefficients once at the end.
pub fn charpoly_dense(m: &RealMatrix) -> Result<CharPoly> {
    let n = m.dim();
    if n > DENSE_LIMIT {
        return Err(LmgError::DimensionTooLarge {
            dim: n,
            limit: DENSE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(CharPoly { coeffs: vec![1.0] });
    }
    let a: Vec<Dd> = m.as_slice().iter().map(|&x| Dd::from(x)).collect();
    let mut coeffs = vec![Dd::ZERO; n + 1];
    coeffs[n] = Dd::ONE;
    let mut mk = vec![Dd::ZERO; n * n];
    for k in 1..=n {
        let mut next = dd_matmul(&a, &mk, n);
        for i in 0..n {
            next[i * n + i] = next[i * n + i] + coeffs[n - k + 1];
        }
        let am = dd_matmul(&a, &next, n);
        let trace = (0..n).fold(Dd::ZERO, |acc, i| acc + am[i * n + i]);
        coeffs[n - k] = -(trace.div_f64(k as f64));
        mk = next;
    }
    Ok(CharPoly {
        coeffs: coeffs.iter().map(|c| c.hi + c.lo).collect(),
    })
}

fn dd_matmul(a: &[Dd], b: &[Dd], n: usize) -> Vec<Dd> {
    let mut out = vec![Dd::ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.hi == 0.0 {
                continue;
            }
            for j in 0..n {
                let bkj = b[k * n + j];
                if bkj.hi == 0.0 {
                    continue;
                }
                out[i * n + j] = out[i * n + j] + aik * bkj;
            }
        }
    }
    out
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self {
            hi: s,
            lo: b - (s - a),
        }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let r = self - Self::two_prod(q1, d);
        let q2 = r.hi / d;
        Self::quick_two_sum(q1, q2)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let u = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(u.hi, u.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let p = Self::two_prod(self.hi, o.hi);
        let cross = self.hi * o.lo + self.lo * o.hi;
        Self::quick_two_sum(p.hi, p.lo + cross)
    }
}
