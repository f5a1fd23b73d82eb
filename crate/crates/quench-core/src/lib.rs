//! Quench dynamics of long-range interacting spin chains.
//!
//! The crate covers the full pipeline for a global quench from the all-down
//! product state `|↓…↓⟩_z`:
//!
//! * coupling matrices — ideal power law `J_ij = J0/|i−j|^α`, nearest
//!   neighbor, or the physical trapped-ion matrix derived from transverse
//!   phonon modes ([`ion`]);
//! * closed-form Ising correlations, revival detection, and the two analytic
//!   spreading bounds ([`ising`]);
//! * matrix-free state-vector evolution for Ising, XY, and
//!   Ising-plus-transverse-field chains with a Krylov short-time propagator
//!   ([`evolve`]), plus projective-measurement sampling ([`sample`]);
//! * light-cone boundary extraction, boundary-shape and spatial-decay fits,
//!   and propagation velocities ([`analysis`]).
//!
//! # Conventions
//!
//! ħ = 1 and the propagator is `U(t) = exp(−iHt)`; couplings and times are
//! expressed so that `J·t` is the dimensionless phase entering
//! `cos[2(J_ik + J_jk)t]`. Any conversion from cyclic units (Hz) belongs at
//! the I/O boundary, never in these kernels.
//!
//! Spins are indexed `0..n` internally. Basis states of the `2^n` state
//! vector are indexed so that **bit i of the index is spin i, with 0 = down
//! and 1 = up** (`σ^z = +1` for up); the initial all-down state is index 0.
//!
//! The crate is `no_std`-compatible (with `alloc`) when built without the
//! `std` feature; scalar math then comes from `libm`. The `parallel` feature
//! (default, implies `std`) parallelizes grid sweeps and Hamiltonian
//! application with rayon.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod coupling;
mod error;
pub mod evolve;
pub mod field;
pub mod ion;
pub mod ising;
pub(crate) mod krylov;
pub(crate) mod linalg;
pub(crate) mod math;
pub mod sample;

pub use analysis::{BoundaryPoint, FitForm, FitResult, LightConeBoundary, VelocityCurve};
pub use coupling::{ChainSpec, CouplingMatrix, CouplingSource, PowerLawFit};
pub use error::CoreError;
pub use evolve::{HamiltonianOperator, Model, StateTrajectory};
pub use field::{CorrelationField, Reduce};
pub use ion::IonTrapParams;

/// Complex amplitude type used for state vectors.
pub type C64 = num_complex::Complex<f64>;

/// Largest chain the state-vector backend accepts (memory cap).
pub const MAX_SPINS: usize = 24;

pub(crate) mod parallel {
    //! Tiny indirection so grid sweeps can run on rayon without sprinkling
    //! feature gates through every call site.
    use alloc::vec::Vec;

    #[cfg(feature = "parallel")]
    pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn map_indexed<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }

    /// Visit mutable chunks of `out` with their base offsets.
    #[cfg(feature = "parallel")]
    pub fn for_each_chunk<T: Send, F: Fn(usize, &mut [T]) + Sync>(
        out: &mut [T],
        chunk: usize,
        f: F,
    ) {
        use rayon::prelude::*;
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(c, s)| f(c * chunk, s));
    }

    #[cfg(not(feature = "parallel"))]
    pub fn for_each_chunk<T, F: Fn(usize, &mut [T])>(out: &mut [T], chunk: usize, f: F) {
        for (c, s) in out.chunks_mut(chunk).enumerate() {
            f(c * chunk, s);
        }
    }
}
