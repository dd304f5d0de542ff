//! Cyclic Jacobi rotations: the dense symmetric reference solver.

use crate::spin::RealMatrix;
use crate::{LmgError, Result};

const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a real symmetric matrix, sorted ascending.
///
/// Intended for dimensions up to a few hundred.
pub fn eig_dense_symmetric(m: &RealMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(m, false)?.0)
}

/// Eigenvalues with the matching orthonormal eigenvectors as columns.
pub fn eig_dense_symmetric_vectors(m: &RealMatrix) -> Result<(Vec<f64>, RealMatrix)> {
    let (vals, vecs) = jacobi(m, true)?;
    Ok((vals, vecs.expect("vectors requested")))
}

fn jacobi(m: &RealMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<RealMatrix>)> {
    let n = m.dim();
    let scale = m.max_abs();
    let asymmetry = m.asymmetry();
    if !m.is_finite() || asymmetry > 1e-12 * scale {
        return Err(LmgError::NotSymmetric { asymmetry });
    }
    let mut a = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = want_vectors.then(|| RealMatrix::identity(n));
    let target = f64::EPSILON * a.frobenius();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // Negligible against both diagonal entries: drop it.
                let g = 100.0 * apq.abs();
                if app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp - s * (vrq + tau * vrp);
                        v[(r, q)] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]));
    let vals = order.iter().map(|&i| a[(i, i)]).collect();
    let vecs = v.map(|v| {
        let mut sorted = RealMatrix::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, col)] = v[(r, src)];
            }
        }
        sorted
    });
    Ok((vals, vecs))
}
