//! Short-time Krylov propagator: one grid step of `exp(−iHt)` applied to a
//! state, built from a small Lanczos subspace with full reorthogonalization.
//!
//! The truncation error of a step is estimated by comparing the subspace
//! exponential against the one two dimensions smaller; a step whose estimate
//! exceeds the tolerance is retried at half the length. Because the subspace
//! coefficients come from a unitary exponential of the (exactly symmetric)
//! tridiagonal projection, the state norm is preserved to machine precision
//! independent of the truncation error.

use crate::error::CoreError;
use crate::evolve::HamiltonianOperator;
use crate::linalg::jacobi_eigh;
use crate::math;
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;

/// Largest Lanczos subspace dimension per substep.
const M_MAX: usize = 12;

/// Per-substep truncation tolerance (2-norm of the coefficient difference).
const TOL: f64 = 1e-11;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        s += x.conj() * y;
    }
    s
}

fn nrm2(a: &[C64]) -> f64 {
    math::sqrt(a.iter().map(|z| z.norm_sqr()).sum())
}

fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn scale(y: &mut [C64], a: f64) {
    for yi in y.iter_mut() {
        *yi *= a;
    }
}

/// `exp(−i T dt) e_1` for the symmetric tridiagonal `T` given by `alpha`
/// (diagonal) and `beta` (off-diagonal).
fn exp_tridiag_e1(alpha: &[f64], beta: &[f64], dt: f64) -> Vec<C64> {
    let m = alpha.len();
    if m == 1 {
        let ph = alpha[0] * dt;
        return vec![C64::new(math::cos(ph), -math::sin(ph))];
    }
    let mut a = vec![0.0; m * m];
    for (i, &d) in alpha.iter().enumerate() {
        a[i * m + i] = d;
    }
    for (i, &b) in beta.iter().enumerate() {
        a[i * m + i + 1] = b;
        a[(i + 1) * m + i] = b;
    }
    let (vals, vecs) = jacobi_eigh(&a, m);
    let mut y = vec![C64::new(0.0, 0.0); m];
    for (k, &lam) in vals.iter().enumerate() {
        let ph = lam * dt;
        let phase = C64::new(math::cos(ph), -math::sin(ph));
        let w = phase * vecs[k]; // vecs[0*m+k]: e_1 component of mode k
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += vecs[i * m + k] * w;
        }
    }
    y
}

/// Reusable buffers for one chain size: `M_MAX` basis vectors plus the
/// residual, each `2^n` long.
pub(crate) struct Workspace {
    v: Vec<Vec<C64>>,
    w: Vec<C64>,
}

enum Step {
    Accepted,
    Rejected { estimate: f64 },
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Workspace {
            v: (0..M_MAX).map(|_| vec![C64::new(0.0, 0.0); dim]).collect(),
            w: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Advance `psi` by `dt` (either sign), substepping as needed. `step`
    /// labels the grid interval in error reports.
    pub fn propagate(
        &mut self,
        h: &HamiltonianOperator,
        psi: &mut [C64],
        dt: f64,
        step: usize,
    ) -> Result<(), CoreError> {
        let total = math::abs(dt);
        if total == 0.0 {
            return Ok(());
        }
        let sign = if dt < 0.0 { -1.0 } else { 1.0 };
        let min_sub = total / (1u64 << 30) as f64;
        let mut remaining = total;
        let mut sub = total;
        while remaining > total * 1e-12 {
            let s = if sub > remaining { remaining } else { sub };
            match self.try_step(h, psi, sign * s) {
                Step::Accepted => {
                    remaining -= s;
                    if sub < total {
                        sub *= 2.0;
                    }
                }
                Step::Rejected { estimate } => {
                    sub = s / 2.0;
                    if sub < min_sub {
                        return Err(CoreError::AccuracyFailure { step, estimate });
                    }
                }
            }
        }
        Ok(())
    }

    /// One Lanczos substep of length `s`; leaves `psi` untouched on
    /// rejection.
    fn try_step(&mut self, h: &HamiltonianOperator, psi: &mut [C64], s: f64) -> Step {
        let pnorm = nrm2(psi);
        let mut alpha = [0.0; M_MAX];
        let mut beta = [0.0; M_MAX];
        self.v[0].copy_from_slice(psi);
        scale(&mut self.v[0], 1.0 / pnorm);
        h.apply(&self.v[0], &mut self.w);
        alpha[0] = dot(&self.v[0], &self.w).re;
        let a0 = C64::new(-alpha[0], 0.0);
        axpy(&mut self.w, a0, &self.v[0]);

        let mut m_eff = M_MAX;
        let mut happy = false;
        let mut scale_ref: f64 = alpha[0].abs().max(1.0);
        for k in 1..M_MAX {
            let b = nrm2(&self.w);
            if b <= 1e-13 * scale_ref {
                m_eff = k;
                happy = true;
                break;
            }
            beta[k - 1] = b;
            scale_ref = scale_ref.max(b);
            let (head, tail) = self.v.split_at_mut(k);
            tail[0].copy_from_slice(&self.w);
            scale(&mut tail[0], 1.0 / b);
            // Full reorthogonalization keeps the basis clean over many steps.
            for vj in head.iter() {
                let c = dot(vj, &tail[0]);
                axpy(&mut tail[0], -c, vj);
            }
            let rn = nrm2(&tail[0]);
            scale(&mut tail[0], 1.0 / rn);
            h.apply(&self.v[k], &mut self.w);
            let bk = C64::new(-beta[k - 1], 0.0);
            axpy(&mut self.w, bk, &self.v[k - 1]);
            alpha[k] = dot(&self.v[k], &self.w).re;
            scale_ref = scale_ref.max(alpha[k].abs());
            let ak = C64::new(-alpha[k], 0.0);
            axpy(&mut self.w, ak, &self.v[k]);
            for vj in self.v[..=k].iter() {
                let c = dot(vj, &self.w);
                for (wi, vi) in self.w.iter_mut().zip(vj) {
                    *wi -= c * vi;
                }
            }
        }

        let y = exp_tridiag_e1(&alpha[..m_eff], &beta[..m_eff - 1], s);
        if !happy {
            let estimate = if m_eff >= 3 {
                let y2 = exp_tridiag_e1(&alpha[..m_eff - 2], &beta[..m_eff - 3], s);
                let mut d = 0.0;
                for i in 0..m_eff {
                    let small = if i < y2.len() { y2[i] } else { C64::new(0.0, 0.0) };
                    d += (y[i] - small).norm_sqr();
                }
                math::sqrt(d)
            } else {
                f64::INFINITY
            };
            if estimate > TOL {
                return Step::Rejected { estimate };
            }
        }

        for p in psi.iter_mut() {
            *p = C64::new(0.0, 0.0);
        }
        for (j, yj) in y.iter().enumerate() {
            axpy(psi, yj * pnorm, &self.v[j]);
        }
        Step::Accepted
    }
}
