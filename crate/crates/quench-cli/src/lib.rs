//! Library half of the `quench` binary: config parsing, artifact writers,
//! and the run pipeline, exposed so integration tests can drive them
//! without going through a subprocess.

pub mod artifacts;
pub mod config;
pub mod error;
pub mod figures;
pub mod pipeline;
