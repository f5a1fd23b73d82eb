//! Projective σ^z measurement shots and shot-noise correlation estimates.
//!
//! The draw is fully pinned so identical inputs reproduce identical shots on
//! any platform: the generator is ChaCha20 keyed with `seed_from_u64(seed)`,
//! the stream index is the snapshot index (so snapshots are independent and
//! reordering the grid never shifts draws), each `u64` maps to `[0,1)` as
//! `(x >> 11)·2⁻⁵³`, and outcomes come from inverse-CDF search over the
//! cumulative Born weights in basis order.

use crate::error::CoreError;
use crate::evolve::StateTrajectory;
use crate::field::CorrelationField;
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Projective measurement outcomes: one bitstring per shot per snapshot,
/// bit `i` = spin `i`, 1 = up.
#[derive(Debug, Clone)]
pub struct ShotRecord {
    pub n: usize,
    pub n_shots: usize,
    pub seed: u64,
    pub times: Vec<f64>,
    /// `outcomes[k][s]` is shot `s` at snapshot `k`.
    pub outcomes: Vec<Vec<u32>>,
}

fn unit_from_u64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn cumulative(psi: &[C64]) -> Vec<f64> {
    let mut cum = Vec::with_capacity(psi.len());
    let mut acc = 0.0;
    for a in psi {
        acc += a.norm_sqr();
        cum.push(acc);
    }
    let total = acc;
    for c in cum.iter_mut() {
        *c /= total;
    }
    // Rounding must never leave the last bin unreachable.
    if let Some(last) = cum.last_mut() {
        *last = 1.0;
    }
    cum
}

/// Draw `n_shots` σ^z basis outcomes from every snapshot of `traj`.
pub fn sample_measurements(
    traj: &StateTrajectory,
    n_shots: usize,
    seed: u64,
) -> Result<ShotRecord, CoreError> {
    if n_shots == 0 {
        return Err(CoreError::InvalidArgument("n_shots must be positive".into()));
    }
    let n = traj.n();
    let mut outcomes = Vec::with_capacity(traj.states.len());
    for (k, psi) in traj.states.iter().enumerate() {
        let cum = cumulative(psi);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut shots = Vec::with_capacity(n_shots);
        for _ in 0..n_shots {
            let u = unit_from_u64(rng.next_u64());
            let idx = cum.partition_point(|&c| c <= u);
            shots.push(idx as u32);
        }
        outcomes.push(shots);
    }
    Ok(ShotRecord { n, n_shots, seed, times: traj.times.clone(), outcomes })
}

/// Connected correlations estimated from shots, with delete-1 jackknife
/// standard errors. Needs at least two shots.
pub fn correlations_from_shots(rec: &ShotRecord) -> Result<CorrelationField, CoreError> {
    if rec.n_shots < 2 {
        return Err(CoreError::InsufficientShots { needed: 2, got: rec.n_shots });
    }
    let n = rec.n;
    let ns = rec.n_shots as f64;
    let mut blocks = Vec::with_capacity(rec.outcomes.len());
    let mut errs = Vec::with_capacity(rec.outcomes.len());
    let mut z = vec![0.0f64; n * rec.n_shots];
    for shots in &rec.outcomes {
        for (s, &bits) in shots.iter().enumerate() {
            for i in 0..n {
                z[s * n + i] = if bits & (1u32 << i) != 0 { 1.0 } else { -1.0 };
            }
        }
        let mut sums = vec![0.0f64; n];
        for s in 0..rec.n_shots {
            for i in 0..n {
                sums[i] += z[s * n + i];
            }
        }
        let mut c = vec![0.0; n * n];
        let mut se = vec![0.0; n * n];
        for i in 0..n {
            for jj in (i + 1)..n {
                let mut sxy = 0.0;
                for s in 0..rec.n_shots {
                    sxy += z[s * n + i] * z[s * n + jj];
                }
                let full = sxy / ns - (sums[i] / ns) * (sums[jj] / ns);
                // Delete-1 estimates share the same sums, so the jackknife
                // runs in O(shots) per pair.
                let mut jsum = 0.0;
                let mut jsq = 0.0;
                let nm1 = ns - 1.0;
                for s in 0..rec.n_shots {
                    let xi = z[s * n + i];
                    let yj = z[s * n + jj];
                    let cj = (sxy - xi * yj) / nm1
                        - (sums[i] - xi) * (sums[jj] - yj) / (nm1 * nm1);
                    jsum += cj;
                    jsq += cj * cj;
                }
                let jmean = jsum / ns;
                let var = (nm1 / ns) * (jsq - ns * jmean * jmean).max(0.0);
                c[i * n + jj] = full;
                c[jj * n + i] = full;
                let s = crate::math::sqrt(var);
                se[i * n + jj] = s;
                se[jj * n + i] = s;
            }
        }
        blocks.push(c);
        errs.push(se);
    }
    let mut flat_c = Vec::with_capacity(blocks.len() * n * n);
    let mut flat_e = Vec::with_capacity(errs.len() * n * n);
    for b in &blocks {
        flat_c.extend_from_slice(b);
    }
    for e in &errs {
        flat_e.extend_from_slice(e);
    }
    CorrelationField::new(n, rec.times.clone(), flat_c)?.with_stderr(flat_e)
}
