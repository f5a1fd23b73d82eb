//! Small dense linear algebra: cyclic-Jacobi symmetric eigensolver, a
//! Cholesky solve for Newton steps, and straight-line least squares.
//!
//! Everything here runs on matrices of at most a few dozen rows (ion chains,
//! Krylov tridiagonals), so simplicity and determinism win over asymptotics.

use crate::math;
use alloc::vec;
use alloc::vec::Vec;

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// `a` is row-major `n×n` and is only read. Returns eigenvalues in ascending
/// order and eigenvectors as columns of a row-major matrix (`v[i*n + m]` is
/// component `i` of mode `m`), orthonormal to machine precision. The sign of
/// each column is fixed so its first component of magnitude above `1e-12` is
/// positive, which keeps results reproducible across sweep orderings.
pub fn jacobi_eigh(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>();
    let tol = 1e-30 * scale.max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::hypot(1.0, tau))
                } else {
                    -1.0 / (-tau + math::hypot(1.0, tau))
                };
                let c = 1.0 / math::hypot(1.0, t);
                let s = t * c;
                // Rotate rows/columns p and q of m.
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                // Accumulate the rotation into v.
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .partial_cmp(&m[j * n + j])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut vals = Vec::with_capacity(n);
    let mut vecs = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        vals.push(m[src * n + src]);
        let mut sign = 1.0;
        for i in 0..n {
            let x = v[i * n + src];
            if math::abs(x) > 1e-12 {
                sign = if x >= 0.0 { 1.0 } else { -1.0 };
                break;
            }
        }
        for i in 0..n {
            vecs[i * n + dst] = sign * v[i * n + src];
        }
    }
    (vals, vecs)
}

/// Solve `a x = b` for symmetric positive-definite `a` via Cholesky.
///
/// Returns `None` when a pivot is not positive (matrix not PD).
pub fn solve_spd(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = math::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[i * n + k] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = l[k * n + i] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    Some(y)
}

/// Ordinary least squares for `y ≈ c0 + c1·x`.
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Root-mean-square residual of the fit.
    pub rms: f64,
    pub sigma_intercept: f64,
    pub sigma_slope: f64,
}

/// Fit a straight line through `(x, y)` pairs; needs `x` non-degenerate.
///
/// One-sigma parameter uncertainties use the usual unbiased residual
/// variance `SSR/(n−2)`; with exactly two points they are zero.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let xm = x.iter().sum::<f64>() / nf;
    let ym = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for k in 0..n {
        sxx += (x[k] - xm) * (x[k] - xm);
        sxy += (x[k] - xm) * (y[k] - ym);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let mut ssr = 0.0;
    for k in 0..n {
        let r = y[k] - intercept - slope * x[k];
        ssr += r * r;
    }
    let rms = math::sqrt(ssr / nf);
    let var = if n > 2 { ssr / (nf - 2.0) } else { 0.0 };
    Some(LineFit {
        intercept,
        slope,
        rms,
        sigma_intercept: math::sqrt(var * (1.0 / nf + xm * xm / sxx)),
        sigma_slope: math::sqrt(var / sxx),
    })
}
