//! Matrix-free state-vector evolution of Ising, XY, and
//! Ising-plus-transverse-field chains.
//!
//! States are flat `2^n` arrays of [`C64`]; bit `i` of a basis index is spin
//! `i` (0 = down, σ^z = −1). The all-down initial state is index 0. The
//! Hamiltonian acts without ever materializing a matrix: `σ^x σ^x` terms
//! couple an index to its double bit flip, `σ^z σ^z` terms are a precomputed
//! diagonal, and a `σ^y` field couples single bit flips with ±i amplitudes.

use crate::coupling::CouplingMatrix;
use crate::error::CoreError;
use crate::field::CorrelationField;
use crate::krylov;
use crate::parallel;
use crate::{C64, MAX_SPINS};
use alloc::vec;
use alloc::vec::Vec;

/// Which chain Hamiltonian to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `Σ_{i<j} J_ij σ_i^x σ_j^x`
    Ising,
    /// `½ Σ_{i<j} J_ij (σ_i^x σ_j^x + σ_i^z σ_j^z)`
    Xy,
    /// Ising plus `B Σ_i σ_i^y`
    IsingField,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Ising => "ising",
            Model::Xy => "xy",
            Model::IsingField => "ising_field",
        }
    }
}

/// Chunk length for parallel sweeps over basis states.
const CHUNK: usize = 1 << 13;

/// Matrix-free Hamiltonian action on a `2^n` state vector.
#[derive(Debug, Clone)]
pub struct HamiltonianOperator {
    model: Model,
    n: usize,
    dim: usize,
    b: f64,
    /// Double-bit-flip terms: (XOR mask, coefficient). The coefficient is
    /// `J_ij` for Ising and `J_ij/2` for XY; zero couplings are dropped.
    flips: Vec<(usize, f64)>,
    /// `σ^z σ^z` diagonal (XY only).
    diag: Vec<f64>,
    j: CouplingMatrix,
}

impl HamiltonianOperator {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn couplings(&self) -> &CouplingMatrix {
        &self.j
    }

    pub fn field(&self) -> f64 {
        self.b
    }

    /// `out ← H·input`.
    pub fn apply(&self, input: &[C64], out: &mut [C64]) {
        debug_assert_eq!(input.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        let flips = &self.flips;
        let diag = &self.diag;
        let b = self.b;
        let n = self.n;
        let has_field = self.model == Model::IsingField && b != 0.0;
        let has_diag = !diag.is_empty();
        parallel::for_each_chunk(out, CHUNK, |base, chunk| {
            for c in chunk.iter_mut() {
                *c = C64::new(0.0, 0.0);
            }
            if has_diag {
                for (k, c) in chunk.iter_mut().enumerate() {
                    *c += diag[base + k] * input[base + k];
                }
            }
            for &(mask, coeff) in flips {
                for (k, c) in chunk.iter_mut().enumerate() {
                    *c += coeff * input[(base + k) ^ mask];
                }
            }
            if has_field {
                for i in 0..n {
                    let m = 1usize << i;
                    for (k, c) in chunk.iter_mut().enumerate() {
                        let idx = base + k;
                        let src = input[idx ^ m];
                        // ⟨up|σ^y|down⟩ = −i, ⟨down|σ^y|up⟩ = +i.
                        let amp = if idx & m != 0 {
                            C64::new(src.im, -src.re) // −i·src
                        } else {
                            C64::new(-src.im, src.re) // +i·src
                        };
                        *c += b * amp;
                    }
                }
            }
        });
    }
}

/// Assemble the matrix-free operator; `b` must be zero except for
/// [`Model::IsingField`].
pub fn build_hamiltonian(
    j: &CouplingMatrix,
    model: Model,
    b: f64,
) -> Result<HamiltonianOperator, CoreError> {
    let n = j.n();
    if n > MAX_SPINS {
        return Err(CoreError::MemoryCap { n, max: MAX_SPINS });
    }
    if model != Model::IsingField && b != 0.0 {
        return Err(CoreError::InvalidArgument(
            "transverse field requires the ising_field model".into(),
        ));
    }
    let dim = 1usize << n;
    let scale = if model == Model::Xy { 0.5 } else { 1.0 };
    let mut flips = Vec::new();
    for (i, jj, v) in j.pairs() {
        if v != 0.0 {
            flips.push(((1usize << i) | (1usize << jj), scale * v));
        }
    }
    let diag = if model == Model::Xy { zz_diagonal(j, dim) } else { Vec::new() };
    Ok(HamiltonianOperator { model, n, dim, b, flips, diag, j: j.clone() })
}

/// `½ Σ_{i<j} J_ij z_i z_j` for every basis state, built incrementally: a
/// state with top bit `t` differs from its bit-cleared parent only in the
/// terms touching `t`, which flip by `J_it z_i`.
fn zz_diagonal(j: &CouplingMatrix, dim: usize) -> Vec<f64> {
    let n = j.n();
    let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut total = 0.0;
    for (a, b, v) in j.pairs() {
        if v != 0.0 {
            neighbors[a].push((b, v));
            neighbors[b].push((a, v));
            total += v;
        }
    }
    let mut diag = vec![0.0; dim];
    diag[0] = 0.5 * total; // all spins down: every z_i z_j = +1
    for s in 1..dim {
        let t = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let parent = s & !(1usize << t);
        let mut delta = 0.0;
        for &(i, v) in &neighbors[t] {
            let zi = if parent & (1usize << i) != 0 { 1.0 } else { -1.0 };
            // Flipping t from down to up changes ½·J·z_i·z_t by J·z_i.
            delta += v * zi;
        }
        diag[s] = diag[parent] + delta;
    }
    diag
}

/// Snapshots of a state vector along a time grid.
#[derive(Debug, Clone)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub norms: Vec<f64>,
}

impl StateTrajectory {
    pub fn n(&self) -> usize {
        self.states[0].len().trailing_zeros() as usize
    }
}

fn check_times(times: &[f64]) -> Result<(), CoreError> {
    if times.is_empty() || times[0] != 0.0 {
        return Err(CoreError::InvalidArgument("time grid must start at 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CoreError::InvalidArgument("time grid must be strictly increasing".into()));
    }
    Ok(())
}

fn norm(v: &[C64]) -> f64 {
    crate::math::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Drive `|↓…↓⟩` through the grid, handing each snapshot to `sink` without
/// retaining it. This is the memory-lean workhorse behind [`evolve`] and
/// [`correlation_field_evolved`].
pub fn evolve_with(
    h: &HamiltonianOperator,
    times: &[f64],
    mut sink: impl FnMut(usize, &[C64]),
) -> Result<(), CoreError> {
    check_times(times)?;
    let dim = h.dim();
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[0] = C64::new(1.0, 0.0);
    sink(0, &psi);
    let mut ws = krylov::Workspace::new(dim);
    for k in 1..times.len() {
        let dt = times[k] - times[k - 1];
        ws.propagate(h, &mut psi, dt, k)?;
        let nm = norm(&psi);
        if (nm - 1.0).abs() > 1e-9 {
            return Err(CoreError::AccuracyFailure { step: k, estimate: (nm - 1.0).abs() });
        }
        sink(k, &psi);
    }
    Ok(())
}

/// Evolve and keep every snapshot. Memory is `16·2^n·n_times` bytes; for
/// chains past ~20 spins prefer [`evolve_with`] or
/// [`correlation_field_evolved`].
pub fn evolve(h: &HamiltonianOperator, times: &[f64]) -> Result<StateTrajectory, CoreError> {
    let mut states = Vec::with_capacity(times.len());
    let mut norms = Vec::with_capacity(times.len());
    evolve_with(h, times, |_, psi| {
        states.push(psi.to_vec());
        norms.push(norm(psi));
    })?;
    Ok(StateTrajectory { times: times.to_vec(), states, norms })
}

/// Per-site `⟨σ_i^z⟩` and pair `⟨σ_i^z σ_j^z⟩` folded into the connected
/// correlation block for one state.
pub fn correlation_block(psi: &[C64], n: usize) -> Vec<f64> {
    let mut mz = [0.0f64; MAX_SPINS];
    let mut q = vec![0.0; n * n];
    let mut z = [0.0f64; MAX_SPINS];
    for (b, amp) in psi.iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (i, zi) in z.iter_mut().enumerate().take(n) {
            *zi = if b & (1usize << i) != 0 { 1.0 } else { -1.0 };
        }
        for i in 0..n {
            mz[i] += p * z[i];
            let pz = p * z[i];
            for jj in (i + 1)..n {
                q[i * n + jj] += pz * z[jj];
            }
        }
    }
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for jj in (i + 1)..n {
            let v = q[i * n + jj] - mz[i] * mz[jj];
            c[i * n + jj] = v;
            c[jj * n + i] = v;
        }
    }
    c
}

/// Connected `σ^z` correlations for every snapshot of a stored trajectory.
pub fn connected_correlations(traj: &StateTrajectory) -> Result<CorrelationField, CoreError> {
    let n = traj.n();
    let blocks =
        parallel::map_indexed(traj.states.len(), |k| correlation_block(&traj.states[k], n));
    Ok(CorrelationField::from_blocks(n, traj.times.clone(), blocks))
}

/// Evolve and accumulate the correlation field directly, never holding more
/// than the propagator's working set.
pub fn correlation_field_evolved(
    h: &HamiltonianOperator,
    times: &[f64],
) -> Result<CorrelationField, CoreError> {
    let n = h.n();
    let mut blocks: Vec<Vec<f64>> = Vec::with_capacity(times.len());
    evolve_with(h, times, |_, psi| blocks.push(correlation_block(psi, n)))?;
    Ok(CorrelationField::from_blocks(n, times.to_vec(), blocks))
}

/// `⟨ψ|H|ψ⟩` (one matrix-vector product).
pub fn energy(h: &HamiltonianOperator, psi: &[C64]) -> f64 {
    let mut hpsi = vec![C64::new(0.0, 0.0); psi.len()];
    h.apply(psi, &mut hpsi);
    psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum()
}

/// `⟨ψ|Σ_i σ_i^y|ψ⟩` — conserved under the XY Hamiltonian.
pub fn total_sy(psi: &[C64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        let m = 1usize << i;
        for (b, amp) in psi.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let src = psi[b ^ m];
            let me = if b & m != 0 {
                C64::new(src.im, -src.re)
            } else {
                C64::new(-src.im, src.re)
            };
            acc += (amp.conj() * me).re;
        }
    }
    acc
}
