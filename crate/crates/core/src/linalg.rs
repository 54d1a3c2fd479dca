//! Symmetric eigenvalue solvers, self-contained and deterministic.
//!
//! Two shapes are needed: dense symmetric matrices of modest size (Gram
//! matrices over balls, a few hundred rows at most) and large symmetric
//! tridiagonal matrices (truncated transition matrices, thousands of rows).
//! Cyclic Jacobi rotations handle the first; Sturm-sequence bisection
//! handles the second. Both return eigenvalues sorted ascending.

use crate::error::{Error, Result};

const MAX_JACOBI_SWEEPS: usize = 64;

/// Eigenvalues of a dense symmetric matrix, ascending. The matrix is given
/// row-major and is destroyed in place. Asymmetry beyond rounding is a
/// domain error rather than something to silently average away.
pub fn symmetric_eigenvalues(matrix: &mut [f64], n: usize) -> Result<Vec<f64>> {
    if matrix.len() != n * n {
        return Err(Error::domain(format!(
            "matrix buffer holds {} entries, expected {}",
            matrix.len(),
            n * n
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("matrix entries must be finite"));
    }
    let scale = matrix.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (matrix[i * n + j] - matrix[j * n + i]).abs() > 1e-12 * scale {
                return Err(Error::domain("matrix is not symmetric"));
            }
        }
    }

    let off_norm = |m: &[f64]| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                sum += m[i * n + j] * m[i * n + j];
            }
        }
        sum.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_norm(matrix) <= 1e-14 * n as f64 * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = matrix[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = matrix[p * n + p];
                let aqq = matrix[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // Smaller-angle root of the rotation quadratic; keeps the
                // iteration stable.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = matrix[k * n + p];
                    let akq = matrix[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    matrix[k * n + p] = new_kp;
                    matrix[p * n + k] = new_kp;
                    matrix[k * n + q] = new_kq;
                    matrix[q * n + k] = new_kq;
                }
                matrix[p * n + p] = app - t * apq;
                matrix[q * n + q] = aqq + t * apq;
                matrix[p * n + q] = 0.0;
                matrix[q * n + p] = 0.0;
            }
        }
    }
    if !converged && off_norm(matrix) > 1e-12 * n as f64 * scale {
        return Err(Error::numeric("Jacobi iteration did not converge"));
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| matrix[i * n + i]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(eigenvalues)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`,
/// counted as the negative pivots of the shifted `L D L^T` factorization.
fn sturm_count(diagonal: &[f64], offdiagonal: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0usize;
    let mut pivot = diagonal[0] - x;
    if pivot.abs() < pivmin {
        pivot = -pivmin;
    }
    if pivot < 0.0 {
        count += 1;
    }
    for i in 1..diagonal.len() {
        pivot = (diagonal[i] - x) - offdiagonal[i - 1] * offdiagonal[i - 1] / pivot;
        if pivot.abs() < pivmin {
            pivot = -pivmin;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending, by bisection
/// on the Sturm count. `offdiagonal` holds the `n - 1` entries next to the
/// diagonal.
pub fn tridiagonal_eigenvalues(diagonal: &[f64], offdiagonal: &[f64]) -> Result<Vec<f64>> {
    let n = diagonal.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if offdiagonal.len() + 1 != n {
        return Err(Error::domain(format!(
            "tridiagonal shape mismatch: {} diagonal vs {} off-diagonal entries",
            n,
            offdiagonal.len()
        )));
    }
    if diagonal.iter().chain(offdiagonal).any(|v| !v.is_finite()) {
        return Err(Error::numeric("matrix entries must be finite"));
    }
    if n == 1 {
        return Ok(diagonal.to_vec());
    }

    // Gershgorin enclosure, padded a few ulps outward.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { offdiagonal[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { offdiagonal[i].abs() } else { 0.0 };
        lo = lo.min(diagonal[i] - left - right);
        hi = hi.max(diagonal[i] + left + right);
    }
    let pad = 1e-12 * (1.0f64).max(lo.abs()).max(hi.abs());
    lo -= pad;
    hi += pad;

    let max_off_sq = offdiagonal
        .iter()
        .fold(0.0f64, |m, &e| m.max(e * e));
    let pivmin = f64::MIN_POSITIVE * (1.0 + max_off_sq);

    let mut eigenvalues = Vec::with_capacity(n);
    for k in 0..n {
        // Eigenvalues come out ascending, so the lower bisection endpoint
        // can start from the previous eigenvalue.
        let mut a = eigenvalues.last().copied().unwrap_or(lo);
        let mut b = hi;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diagonal, offdiagonal, mid, pivmin) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        eigenvalues.push(0.5 * (a + b));
    }
    Ok(eigenvalues)
}
