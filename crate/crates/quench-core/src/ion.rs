//! Trapped-ion coupling matrices from trap and laser parameters.
//!
//! A linear chain of ions in a harmonic trap: equilibrium positions minimize
//!
//! ```text
//! V(u) = Σ_i u_i²/2 + Σ_{i<j} 1/|u_i − u_j|
//! ```
//!
//! with lengths in units of `l = (e²/4πε₀ M ω_z²)^{1/3}` and frequencies in
//! units of the axial frequency `ω_z`. Transverse normal modes come from the
//! eigendecomposition of
//!
//! ```text
//! A_ii = (ω_x/ω_z)² − Σ_{k≠i} 1/|u_i − u_k|³,   A_ik = 1/|u_i − u_k|³,
//! ```
//!
//! with mode frequencies `ω_m = ω_z √λ_m`; the highest is the
//! center-of-mass mode at exactly `ω_x` with a uniform eigenvector. A
//! bichromatic beat note detuned by `μ` from the carrier then produces
//!
//! ```text
//! J_ij = Ω² ω_R Σ_m b_im b_jm / (μ² − ω_m²).
//! ```
//!
//! All frequencies entering [`IonTrapParams`] must share one unit system
//! (angular, per the crate conventions); only their ratios matter here.

use crate::coupling::CouplingMatrix;
use crate::error::CoreError;
use crate::linalg;
use crate::math;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Trap and laser parameters, all angular frequencies in one common unit.
#[derive(Debug, Clone, PartialEq)]
pub struct IonTrapParams {
    pub n_ions: usize,
    /// Axial (weak-axis) trap frequency ω_z.
    pub axial_freq: f64,
    /// Transverse trap frequency ω_x; must exceed ω_z for a linear chain.
    pub transverse_freq: f64,
    /// Carrier Rabi frequency Ω.
    pub rabi_freq: f64,
    /// Recoil frequency ω_R = ħΔk²/2M.
    pub recoil_freq: f64,
    /// Beat-note detuning μ.
    pub detuning: f64,
    /// Minimum allowed |μ − ω_m| before the resonance error fires.
    pub guard_band: f64,
}

/// Dimensionless equilibrium positions, ascending, center of mass at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPositions {
    pub u: Vec<f64>,
}

/// Transverse normal modes: frequencies ascending (units of ω_z) with the
/// orthonormal mode matrix `b` (row-major; `b[i*n + m]` is ion `i` in mode
/// `m`, column signs fixed by the first-nonzero-positive convention).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    pub n: usize,
    pub freqs: Vec<f64>,
    pub b: Vec<f64>,
}

impl NormalModes {
    #[inline]
    pub fn vector_component(&self, ion: usize, mode: usize) -> f64 {
        self.b[ion * self.n + mode]
    }
}

const DEFAULT_NEWTON_CAP: usize = 200;

fn potential(u: &[f64]) -> f64 {
    let mut v = 0.0;
    for (i, ui) in u.iter().enumerate() {
        v += 0.5 * ui * ui;
        for uj in &u[i + 1..] {
            v += 1.0 / math::abs(ui - uj);
        }
    }
    v
}

fn gradient_hessian(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let mut g = u.to_vec();
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = u[i] - u[j];
            let s = if d >= 0.0 { 1.0 } else { -1.0 };
            g[i] -= s / (d * d);
            let inv3 = 2.0 / math::abs(d * d * d);
            h[i * n + i] += inv3;
            h[i * n + j] -= inv3;
        }
    }
    (g, h)
}

fn ordered(u: &[f64]) -> bool {
    u.windows(2).all(|w| w[1] > w[0])
}

fn grad_norm(g: &[f64]) -> f64 {
    math::sqrt(g.iter().map(|x| x * x).sum())
}

fn newton_from_seed(mut u: Vec<f64>, cap: usize) -> Result<Vec<f64>, CoreError> {
    for _ in 0..cap {
        let (g, h) = gradient_hessian(&u);
        let gn = grad_norm(&g);
        if gn < 1e-13 {
            return Ok(u);
        }
        let step = solve_newton(&h, &g, u.len())?;
        // Damped update: keep the ion ordering and avoid climbing the
        // potential. The comparison gets a rounding allowance so the final
        // full Newton steps near the minimum are not rejected on noise.
        let v0 = potential(&u);
        let tol = 1e-12 * (1.0 + math::abs(v0));
        let mut lam = 1.0;
        let mut accepted = None;
        while lam >= 1e-8 {
            let trial: Vec<f64> =
                u.iter().zip(&step).map(|(ui, si)| ui - lam * si).collect();
            if ordered(&trial) && potential(&trial) <= v0 + tol {
                accepted = Some(trial);
                break;
            }
            lam *= 0.5;
        }
        match accepted {
            Some(t) => u = t,
            None => break, // no productive damped step; settle at final check
        }
    }
    let (g, _) = gradient_hessian(&u);
    if grad_norm(&g) < 1e-12 {
        Ok(u)
    } else {
        Err(CoreError::NonConvergence { what: "equilibrium Newton iteration", iterations: cap })
    }
}

fn uniform_seed(n: usize) -> Vec<f64> {
    // Empirical spacing scale; the damped iteration is forgiving of it.
    let spacing = 2.018 / math::powf(n as f64, 0.559);
    (0..n).map(|i| (i as f64 - (n as f64 - 1.0) / 2.0) * spacing).collect()
}

fn solve_newton(h: &[f64], g: &[f64], n: usize) -> Result<Vec<f64>, CoreError> {
    linalg::solve_spd(h, g, n).ok_or(CoreError::NonConvergence {
        what: "equilibrium Hessian factorization",
        iterations: 0,
    })
}

fn recenter(u: &mut [f64]) {
    let mean = u.iter().sum::<f64>() / u.len() as f64;
    for x in u.iter_mut() {
        *x -= mean;
    }
}

/// Equilibrium positions of `n` ions, by damped Newton iteration from a
/// uniform-spacing seed; falls back to continuation from the `n−1` chain.
///
/// The returned gradient norm is below `1e−12` and the axial Hessian is
/// positive definite (the Cholesky inside every Newton step proves it).
pub fn equilibrium_positions(n: usize) -> Result<EquilibriumPositions, CoreError> {
    equilibrium_positions_capped(n, DEFAULT_NEWTON_CAP)
}

/// Same as [`equilibrium_positions`] with an explicit iteration cap.
pub fn equilibrium_positions_capped(
    n: usize,
    cap: usize,
) -> Result<EquilibriumPositions, CoreError> {
    if n < 2 {
        return Err(CoreError::InvalidArgument(format!("n = {n}, need at least 2 ions")));
    }
    let mut u = match newton_from_seed(uniform_seed(n), cap) {
        Ok(u) => u,
        Err(_) => {
            // Continuation: solve the n−1 chain, append an outer ion one
            // end-gap further out, recenter, and retry.
            let prev = equilibrium_positions_capped(n - 1, cap)?.u;
            let gap = if n >= 3 {
                prev[n - 2] - prev[n - 3]
            } else {
                1.0
            };
            let mut seed = prev;
            seed.push(seed[n - 2] + gap);
            recenter(&mut seed);
            newton_from_seed(seed, cap)?
        }
    };
    recenter(&mut u);
    Ok(EquilibriumPositions { u })
}

/// Transverse normal modes of a chain at `pos` for `anisotropy = ω_x/ω_z`.
///
/// Frequencies are in units of ω_z, ascending; the top one is the
/// center-of-mass mode at exactly the anisotropy with a uniform eigenvector.
pub fn transverse_modes(
    pos: &EquilibriumPositions,
    anisotropy: f64,
) -> Result<NormalModes, CoreError> {
    let n = pos.u.len();
    if !(anisotropy > 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "anisotropy ω_x/ω_z = {anisotropy} must exceed 1 for a linear chain"
        )));
    }
    let u = &pos.u;
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        let mut s = 0.0;
        for k in 0..n {
            if k != i {
                let d = math::abs(u[i] - u[k]);
                let inv3 = 1.0 / (d * d * d);
                s += inv3;
                a[i * n + k] = inv3;
            }
        }
        a[i * n + i] = anisotropy * anisotropy - s;
    }
    let (lam, b) = linalg::jacobi_eigh(&a, n);
    if lam[0] <= 0.0 {
        // Zigzag instability: the linear chain is not a transverse minimum.
        return Err(CoreError::InvalidArgument(format!(
            "transverse mode λ_min = {:.4e} ≤ 0: chain unstable at this anisotropy",
            lam[0]
        )));
    }
    let freqs = lam.iter().map(|l| math::sqrt(*l)).collect();
    Ok(NormalModes { n, freqs, b })
}

/// Spin-spin couplings from the mode decomposition and laser parameters.
///
/// `J_ij = Ω² ω_R Σ_m b_im b_jm / (μ² − ω_m²)`, in the same frequency unit
/// the parameters use. Fails when μ sits within the guard band of a mode.
pub fn ion_couplings(
    modes: &NormalModes,
    p: &IonTrapParams,
) -> Result<CouplingMatrix, CoreError> {
    let n = modes.n;
    if p.n_ions != n {
        return Err(CoreError::ShapeMismatch(format!(
            "parameters say {} ions, modes are for {}",
            p.n_ions, n
        )));
    }
    let wz = p.axial_freq;
    if !(wz > 0.0) {
        return Err(CoreError::InvalidArgument("axial frequency must be positive".into()));
    }
    let mu = p.detuning / wz;
    let guard = p.guard_band / wz;
    for (m, w) in modes.freqs.iter().enumerate() {
        let dist = math::abs(mu - w);
        if dist < guard {
            return Err(CoreError::ModeResonance { mode: m, distance: dist * wz, guard: p.guard_band });
        }
    }
    let rabi = p.rabi_freq / wz;
    let recoil = p.recoil_freq / wz;
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let mut s = 0.0;
            for m in 0..n {
                let w = modes.freqs[m];
                s += modes.vector_component(i, m) * modes.vector_component(j, m)
                    / (mu * mu - w * w);
            }
            let jij = rabi * rabi * recoil * s * wz; // back to the caller's unit
            data[i * n + j] = jij;
            data[j * n + i] = jij;
        }
    }
    Ok(CouplingMatrix::from_rows(n, data)?)
}

/// Convenience: equilibrium → modes → couplings in one call.
pub fn trap_couplings(p: &IonTrapParams) -> Result<CouplingMatrix, CoreError> {
    let pos = equilibrium_positions(p.n_ions)?;
    let modes = transverse_modes(&pos, p.transverse_freq / p.axial_freq)?;
    ion_couplings(&modes, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_ions_sit_at_quarter_cube_root() {
        let pos = equilibrium_positions(2).unwrap();
        let x = math::powf(0.25, 1.0 / 3.0);
        assert!((pos.u[0] + x).abs() < 1e-10);
        assert!((pos.u[1] - x).abs() < 1e-10);
    }

    #[test]
    fn three_ions_outer_at_five_quarters_cube_root() {
        let pos = equilibrium_positions(3).unwrap();
        let x = math::powf(1.25, 1.0 / 3.0);
        assert!((pos.u[0] + x).abs() < 1e-10);
        assert!(pos.u[1].abs() < 1e-12);
        assert!((pos.u[2] - x).abs() < 1e-10);
    }

    #[test]
    fn eleven_ions_symmetric_about_zero() {
        let pos = equilibrium_positions(11).unwrap();
        let u = &pos.u;
        assert!(u.iter().sum::<f64>().abs() < 1e-10);
        for i in 0..11 {
            assert!((u[i] + u[10 - i]).abs() < 1e-9, "asymmetric at {i}");
        }
        let (g, _) = gradient_hessian(u);
        assert!(grad_norm(&g) < 1e-12);
    }

    #[test]
    fn com_mode_tops_spectrum() {
        let pos = equilibrium_positions(11).unwrap();
        let modes = transverse_modes(&pos, 8.0).unwrap();
        assert_eq!(modes.freqs.len(), 11);
        assert!((modes.freqs[10] - 8.0).abs() < 1e-10);
        let c = 1.0 / math::sqrt(11.0);
        for i in 0..11 {
            assert!((math::abs(modes.vector_component(i, 10)) - c).abs() < 1e-10);
        }
        // Ascending and distinct.
        for m in 1..11 {
            assert!(modes.freqs[m] > modes.freqs[m - 1] + 1e-9);
        }
    }

    #[test]
    fn mode_matrix_orthonormal() {
        let pos = equilibrium_positions(7).unwrap();
        let modes = transverse_modes(&pos, 6.0).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let dot: f64 =
                    (0..7).map(|i| modes.vector_component(i, a) * modes.vector_component(i, b)).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn two_ion_coupling_positive_above_both_modes() {
        let p = IonTrapParams {
            n_ions: 2,
            axial_freq: 1.0,
            transverse_freq: 5.0,
            rabi_freq: 1.0,
            recoil_freq: 1.0,
            detuning: 5.5,
            guard_band: 1e-4,
        };
        let j = trap_couplings(&p).unwrap();
        assert!(j.get(0, 1) > 0.0);
    }

    #[test]
    fn couplings_vanish_at_large_detuning() {
        let base = IonTrapParams {
            n_ions: 3,
            axial_freq: 1.0,
            transverse_freq: 6.0,
            rabi_freq: 1.0,
            recoil_freq: 1.0,
            detuning: 7.0,
            guard_band: 1e-4,
        };
        let j1 = trap_couplings(&base).unwrap();
        let far = IonTrapParams { detuning: 700.0, ..base };
        let j2 = trap_couplings(&far).unwrap();
        // At least the 1/μ² falloff (mode completeness makes i≠j entries
        // cancel even faster).
        assert!(j2.j_max() < j1.j_max() * (7.0f64 / 700.0).powi(2));
    }

    #[test]
    fn resonance_guard_fires() {
        let pos = equilibrium_positions(3).unwrap();
        let modes = transverse_modes(&pos, 6.0).unwrap();
        let p = IonTrapParams {
            n_ions: 3,
            axial_freq: 1.0,
            transverse_freq: 6.0,
            rabi_freq: 1.0,
            recoil_freq: 1.0,
            detuning: modes.freqs[2] + 1e-6,
            guard_band: 1e-4,
        };
        assert!(matches!(ion_couplings(&modes, &p), Err(CoreError::ModeResonance { .. })));
    }

    #[test]
    fn uniform_sign_above_all_modes() {
        let p = IonTrapParams {
            n_ions: 6,
            axial_freq: 1.0,
            transverse_freq: 7.0,
            rabi_freq: 1.0,
            recoil_freq: 1.0,
            detuning: 7.05,
            guard_band: 1e-4,
        };
        let j = trap_couplings(&p).unwrap();
        for (_, _, v) in j.pairs() {
            assert!(v > 0.0);
        }
    }
}
