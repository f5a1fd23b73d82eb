//! Spin-spin coupling matrices and the power-law shape fit.

use crate::error::CoreError;
use crate::ion::IonTrapParams;
use crate::linalg;
use crate::math;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Symmetric, zero-diagonal matrix of pair couplings `J_ij`.
///
/// Stored dense row-major; chains here never exceed a few dozen sites.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CouplingMatrix {
    /// Ideal power law `J_ij = J0 / |i−j|^alpha`.
    pub fn power_law(n: usize, j0: f64, alpha: f64) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::InvalidArgument(format!("n = {n}, need at least 2 spins")));
        }
        if !(j0 > 0.0) {
            return Err(CoreError::InvalidArgument(format!("J0 = {j0}, need J0 > 0")));
        }
        if !(alpha >= 0.0) {
            return Err(CoreError::InvalidArgument(format!("alpha = {alpha}, need alpha >= 0")));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let r = (i as f64 - j as f64).abs();
                    data[i * n + j] = j0 / math::powf(r, alpha);
                }
            }
        }
        Ok(Self { n, data })
    }

    /// `J_ij = J δ_{|i−j|,1}` — the α → ∞ limit.
    pub fn nearest_neighbor(n: usize, j: f64) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::InvalidArgument(format!("n = {n}, need at least 2 spins")));
        }
        if !(j > 0.0) {
            return Err(CoreError::InvalidArgument(format!("J = {j}, need J > 0")));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n - 1 {
            data[i * n + i + 1] = j;
            data[(i + 1) * n + i] = j;
        }
        Ok(Self { n, data })
    }

    /// Wrap an explicit row-major matrix, checking symmetry (within `1e-12`
    /// relative), zero diagonal, and finiteness.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::InvalidArgument(format!("n = {n}, need at least 2 spins")));
        }
        if data.len() != n * n {
            return Err(CoreError::ShapeMismatch(format!(
                "expected {}x{} = {} entries, got {}",
                n,
                n,
                n * n,
                data.len()
            )));
        }
        let scale = data.iter().fold(0.0f64, |m, x| m.max(math::abs(*x)));
        for i in 0..n {
            if !data[i * n + i].is_finite() || math::abs(data[i * n + i]) > 1e-12 * scale.max(1.0) {
                return Err(CoreError::InvalidArgument(format!(
                    "diagonal entry ({i},{i}) = {} must be zero",
                    data[i * n + i]
                )));
            }
            for j in 0..n {
                let x = data[i * n + j];
                if !x.is_finite() {
                    return Err(CoreError::InvalidArgument(format!("entry ({i},{j}) is not finite")));
                }
                if math::abs(x - data[j * n + i]) > 1e-12 * scale.max(1.0) {
                    return Err(CoreError::InvalidArgument(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        // Exact symmetrization so downstream code can rely on bit equality.
        let mut m = Self { n, data };
        for i in 0..n {
            m.data[i * n + i] = 0.0;
            for j in i + 1..n {
                let s = 0.5 * (m.data[i * n + j] + m.data[j * n + i]);
                m.data[i * n + j] = s;
                m.data[j * n + i] = s;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Largest |J_ij| — the natural frequency scale for normalizing times.
    pub fn j_max(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(math::abs(*x)))
    }

    pub fn rows(&self) -> &[f64] {
        &self.data
    }

    /// Mean coupling over all pairs at separation `r` (ion chains are not
    /// translation invariant, so a single α only makes sense as a bin mean).
    pub fn separation_mean(&self, r: usize) -> f64 {
        let n = self.n;
        debug_assert!(r >= 1 && r < n);
        let mut s = 0.0;
        for i in 0..n - r {
            s += self.get(i, i + r);
        }
        s / (n - r) as f64
    }

    /// Iterate over upper-triangle pairs `(i, j, J_ij)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j, self.get(i, j))))
    }
}

/// Result of the separation-binned power-law shape fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub j0_hat: f64,
    pub alpha_hat: f64,
    /// RMS of the log-log fit residuals.
    pub rms_log_residual: f64,
}

/// Fit `J̄(r) ≈ J0 / r^α` by least squares of `log J̄(r)` against `log r`,
/// where `J̄(r)` is the mean coupling over pairs at separation `r`.
///
/// Fails with [`CoreError::NonPowerLaw`] when any off-diagonal coupling is
/// nonpositive (a nearest-neighbor matrix, say, has no log at r ≥ 2).
pub fn fit_power_law(j: &CouplingMatrix) -> Result<PowerLawFit, CoreError> {
    let n = j.n();
    for (_, _, v) in j.pairs() {
        if v <= 0.0 {
            return Err(CoreError::NonPowerLaw);
        }
    }
    let mut lx = Vec::with_capacity(n - 1);
    let mut ly = Vec::with_capacity(n - 1);
    for r in 1..n {
        lx.push(math::ln(r as f64));
        ly.push(math::ln(j.separation_mean(r)));
    }
    let fit = linalg::fit_line(&lx, &ly)
        .ok_or_else(|| CoreError::DegenerateFit("separation grid is degenerate".into()))?;
    Ok(PowerLawFit {
        j0_hat: math::exp(fit.intercept),
        alpha_hat: -fit.slope,
        rms_log_residual: fit.rms,
    })
}

/// Where a chain's couplings come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingSource {
    PowerLaw { j0: f64, alpha: f64 },
    NearestNeighbor { j: f64 },
    IonTrap(IonTrapParams),
    Explicit(CouplingMatrix),
}

/// A chain size plus the recipe for its coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub n_spins: usize,
    pub source: CouplingSource,
}

impl ChainSpec {
    /// Materialize the coupling matrix.
    pub fn build(&self) -> Result<CouplingMatrix, CoreError> {
        match &self.source {
            CouplingSource::PowerLaw { j0, alpha } => {
                CouplingMatrix::power_law(self.n_spins, *j0, *alpha)
            }
            CouplingSource::NearestNeighbor { j } => {
                CouplingMatrix::nearest_neighbor(self.n_spins, *j)
            }
            CouplingSource::IonTrap(p) => {
                if p.n_ions != self.n_spins {
                    return Err(CoreError::ShapeMismatch(format!(
                        "chain has {} spins but trap parameters say {} ions",
                        self.n_spins, p.n_ions
                    )));
                }
                crate::ion::trap_couplings(p)
            }
            CouplingSource::Explicit(m) => {
                if m.n() != self.n_spins {
                    return Err(CoreError::ShapeMismatch(format!(
                        "chain has {} spins but explicit matrix is {}x{}",
                        self.n_spins,
                        m.n(),
                        m.n()
                    )));
                }
                Ok(m.clone())
            }
        }
    }
}
