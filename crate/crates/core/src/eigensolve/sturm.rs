//! Sturm-sequence bisection for real symmetric tridiagonal matrices.

use serde::{Deserialize, Serialize};

use crate::models::{SquaredTridiag, SymTridiag};
use crate::{LmgError, Result};

/// Which eigenvalues [`eig_symtridiag`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Which {
    All,
    Smallest,
    /// Zero-based.
    KthSmallest(usize),
    /// All eigenvalues in the half-open interval `[lo, hi)`.
    Interval {
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigRequest {
    pub which: Which,
    /// Target bracket width. At `0` bisection runs until the bracket
    /// cannot be split further.
    pub abs_tol: f64,
}

impl EigRequest {
    pub const DEFAULT_TOL: f64 = 0.0;

    pub fn new(which: Which) -> Self {
        Self {
            which,
            abs_tol: Self::DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Number of eigenvalues strictly below `x`.
///
/// Runs the shifted LDLᵀ pivot recurrence and counts negative pivots. An
/// exactly zero pivot is replaced by `+ε‖T‖`, which is the count at `x − 0`.
pub fn sturm_count(t: &SymTridiag, x: f64) -> usize {
    let guard = f64::EPSILON * t.max_abs().max(f64::MIN_POSITIVE);
    let off_sq: Vec<f64> = t.off.iter().map(|e| e * e).collect();
    sturm_count_guarded(&t.diag, &off_sq, x, guard)
}

#[inline]
fn sturm_count_guarded(diag: &[f64], off_sq: &[f64], x: f64, guard: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d == 0.0 {
        d = guard;
    }
    if d < 0.0 {
        count += 1;
    }
    for (a, e2) in diag[1..].iter().zip(off_sq) {
        d = (a - x) - e2 / d;
        if d == 0.0 {
            d = guard;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

struct Bisector<'a> {
    t: &'a SquaredTridiag,
    guard: f64,
    abs_tol: f64,
}

impl Bisector<'_> {
    fn count(&self, x: f64) -> usize {
        sturm_count_guarded(&self.t.diag, &self.t.off_sq, x, self.guard)
    }

    /// With `abs_tol == 0` only an unsplittable bracket counts as converged.
    fn converged(&self, lo: f64, hi: f64) -> bool {
        self.abs_tol > 0.0 && hi - lo <= self.abs_tol
    }

    /// `k`-th smallest eigenvalue inside a bracket with
    /// `count(lo) <= k < count(hi)`.
    fn kth(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        while !self.converged(lo, hi) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by bisection inside the
/// Gershgorin enclosure, sorted ascending.
pub fn eig_symtridiag(t: &SymTridiag, req: &EigRequest) -> Result<Vec<f64>> {
    eig_squared_tridiag(&SquaredTridiag::from(t), req)
}

/// [`eig_symtridiag`] on a matrix given by its diagonal and squared
/// off-diagonal.
pub fn eig_squared_tridiag(t: &SquaredTridiag, req: &EigRequest) -> Result<Vec<f64>> {
    let n = t.dim();
    if !(req.abs_tol >= 0.0 && req.abs_tol.is_finite()) {
        return Err(LmgError::InvalidParameter(format!(
            "abs_tol must be finite and non-negative, got {}",
            req.abs_tol
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (glo, ghi) = t.gershgorin();
    let pad = f64::EPSILON * glo.abs().max(ghi.abs()).max(1.0);
    let (lo, hi) = (glo - pad, ghi + pad);
    let b = Bisector {
        t,
        guard: f64::EPSILON * t.max_abs().max(f64::MIN_POSITIVE),
        abs_tol: req.abs_tol,
    };

    let (first, last) = match req.which {
        Which::All => (0, n),
        Which::Smallest => (0, 1),
        Which::KthSmallest(k) => {
            if k >= n {
                return Err(LmgError::InvalidParameter(format!(
                    "k = {k} out of range for dimension {n}"
                )));
            }
            (k, k + 1)
        }
        Which::Interval { lo: a, hi: z } => {
            if !(a <= z) {
                return Err(LmgError::InvalidParameter(format!(
                    "empty interval [{a}, {z})"
                )));
            }
            (b.count(a), b.count(z))
        }
    };

    let mut out = Vec::with_capacity(last - first);
    let mut floor = lo;
    for k in first..last {
        let value = b.kth(k, floor, hi);
        // Later eigenvalues cannot sit below this bracket's lower end.
        floor = (value - req.abs_tol).max(lo).min(value);
        if b.count(floor) > k {
            floor = lo;
        }
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::eig_dense_symmetric;
    use crate::models::parity_blocks_susy;
    use crate::spin::SpinJ;
    use proptest::prelude::*;

    fn tri(diag: &[f64], off: &[f64]) -> SymTridiag {
        SymTridiag::new(diag.to_vec(), off.to_vec()).unwrap()
    }

    #[test]
    fn counts_on_small_matrices() {
        assert_eq!(sturm_count(&tri(&[1.0, 4.0], &[0.0]), 2.0), 1);
        let t = tri(&[2.5, 2.5], &[1.5]);
        assert_eq!(sturm_count(&t, 0.999), 0);
        assert_eq!(sturm_count(&t, 1.001), 1);
        assert_eq!(sturm_count(&t, 4.001), 2);
    }

    #[test]
    fn count_is_strict_at_an_exact_eigenvalue() {
        let t = tri(&[1.0, 4.0], &[0.0]);
        assert_eq!(sturm_count(&t, 1.0), 0);
        assert_eq!(sturm_count(&t, 4.0), 1);
    }

    #[test]
    fn j30_odd_block_has_nothing_below_the_bound() {
        let (_, odd) = parity_blocks_susy(SpinJ::integer(30), 1.0).unwrap();
        assert_eq!(sturm_count(&odd, 2.0_f64.cosh()), 0);
        let dense = eig_dense_symmetric(&odd.to_dense()).unwrap();
        assert!(dense[0] > 2.0_f64.cosh());
    }

    #[test]
    fn j2_odd_block_eigenvalues() {
        let (_, odd) = parity_blocks_susy(SpinJ::integer(2), 0.0).unwrap();
        let e = eig_symtridiag(&odd, &EigRequest::new(Which::All)).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 4.0).abs() < 1e-12);

        for g in [-1.0, 0.3, 1.0_f64] {
            let (_, odd) = parity_blocks_susy(SpinJ::integer(2), g).unwrap();
            let small = eig_symtridiag(&odd, &EigRequest::new(Which::Smallest)).unwrap()[0];
            let (c2, s2) = ((2.0 * g).cosh(), (2.0 * g).sinh());
            let closed = 0.5 * (5.0 * c2 - (s2 * s2 + 9.0).sqrt());
            assert!((small - closed).abs() < 1e-12 * closed.max(1.0));
        }
        let (_, odd) = parity_blocks_susy(SpinJ::integer(2), 1.0).unwrap();
        let small = eig_symtridiag(&odd, &EigRequest::new(Which::Smallest)).unwrap()[0];
        assert!((small - 7.0521).abs() < 1e-4);
    }

    #[test]
    fn interval_and_kth_requests() {
        let t = tri(&[1.0, 2.0, 3.0, 4.0], &[0.0, 0.0, 0.0]);
        let e = eig_symtridiag(&t, &EigRequest::new(Which::Interval { lo: 1.5, hi: 3.5 })).unwrap();
        assert_eq!(e.len(), 2);
        assert!((e[0] - 2.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
        let k = eig_symtridiag(&t, &EigRequest::new(Which::KthSmallest(3))).unwrap();
        assert!((k[0] - 4.0).abs() < 1e-12);
        assert!(eig_symtridiag(&t, &EigRequest::new(Which::KthSmallest(4))).is_err());
        assert!(eig_symtridiag(&t, &EigRequest::new(Which::All).with_tol(-1.0)).is_err());
        assert!(eig_symtridiag(&t, &EigRequest::new(Which::All).with_tol(f64::NAN)).is_err());
    }

    #[test]
    fn single_element() {
        let e = eig_symtridiag(&tri(&[-3.0], &[]), &EigRequest::new(Which::All)).unwrap();
        assert!((e[0] + 3.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn count_is_monotone_and_total(
            diag in prop::collection::vec(-10.0..10.0f64, 1..25),
            offs in prop::collection::vec(-5.0..5.0f64, 24),
            xs in prop::collection::vec(-40.0..40.0f64, 2..20),
        ) {
            let n = diag.len();
            let t = tri(&diag, &offs[..n - 1]);
            let mut xs = xs;
            xs.sort_by(f64::total_cmp);
            let counts: Vec<usize> = xs.iter().map(|&x| sturm_count(&t, x)).collect();
            prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
            let (lo, hi) = t.gershgorin();
            prop_assert_eq!(sturm_count(&t, hi + 1.0), n);
            prop_assert_eq!(sturm_count(&t, lo - 1.0), 0);
        }

        #[test]
        fn bisection_agrees_with_jacobi(
            diag in prop::collection::vec(-10.0..10.0f64, 1..20),
            offs in prop::collection::vec(-5.0..5.0f64, 19),
        ) {
            let n = diag.len();
            let t = tri(&diag, &offs[..n - 1]);
            let bis = eig_symtridiag(&t, &EigRequest::new(Which::All)).unwrap();
            let dense = eig_dense_symmetric(&t.to_dense()).unwrap();
            for (a, b) in bis.iter().zip(&dense) {
                prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
            }
        }
    }
}
