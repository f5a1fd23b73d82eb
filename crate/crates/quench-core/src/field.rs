//! Connected-correlation fields `C_ij(t_k)` on a time grid.

use crate::error::CoreError;
use crate::math;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// How to collapse the pairs at a fixed separation into one series.
///
/// An open chain is inhomogeneous, so the choice matters and is recorded in
/// every artifact that depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduce {
    /// Largest value over pairs (default).
    Max,
    /// Mean over pairs.
    Mean,
}

impl Reduce {
    pub fn name(self) -> &'static str {
        match self {
            Reduce::Max => "max",
            Reduce::Mean => "mean",
        }
    }
}

/// `C_ij(t_k)` for all pairs on a time grid, with optional per-entry
/// standard errors (shot sampling only).
///
/// Storage is time-major: entry `(k, i, j)` lives at `k*n*n + i*n + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationField {
    n: usize,
    times: Vec<f64>,
    c: Vec<f64>,
    stderr: Option<Vec<f64>>,
}

impl CorrelationField {
    pub fn new(n: usize, times: Vec<f64>, c: Vec<f64>) -> Result<Self, CoreError> {
        if c.len() != times.len() * n * n {
            return Err(CoreError::ShapeMismatch(format!(
                "{} values for {} times × {}×{} sites",
                c.len(),
                times.len(),
                n,
                n
            )));
        }
        Ok(Self { n, times, c, stderr: None })
    }

    pub fn with_stderr(mut self, stderr: Vec<f64>) -> Result<Self, CoreError> {
        if stderr.len() != self.c.len() {
            return Err(CoreError::ShapeMismatch(format!(
                "stderr has {} entries, field has {}",
                stderr.len(),
                self.c.len()
            )));
        }
        self.stderr = Some(stderr);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[k * self.n * self.n + i * self.n + j]
    }

    pub fn stderr(&self, k: usize, i: usize, j: usize) -> Option<f64> {
        self.stderr.as_ref().map(|s| s[k * self.n * self.n + i * self.n + j])
    }

    pub fn has_stderr(&self) -> bool {
        self.stderr.is_some()
    }

    /// Reduce the pairs at separation `r` into a time series; `abs` takes
    /// |C| before reducing (used for revival detection).
    pub fn separation_series(&self, r: usize, reduce: Reduce, abs: bool) -> Vec<f64> {
        debug_assert!(r >= 1 && r < self.n);
        let n = self.n;
        let mut out = Vec::with_capacity(self.times.len());
        for k in 0..self.times.len() {
            let mut acc = if reduce == Reduce::Max { f64::NEG_INFINITY } else { 0.0 };
            for i in 0..n - r {
                let mut v = self.get(k, i, i + r);
                if abs {
                    v = math::abs(v);
                }
                match reduce {
                    Reduce::Max => acc = acc.max(v),
                    Reduce::Mean => acc += v,
                }
            }
            if reduce == Reduce::Mean {
                acc /= (n - r) as f64;
            }
            out.push(acc);
        }
        out
    }

    /// The pair realizing the reduced value at `(r, k)`; for `Mean` the
    /// maximizing pair is still reported as the representative.
    pub fn separation_argmax(&self, r: usize, k: usize, abs: bool) -> (usize, usize) {
        let n = self.n;
        let mut best = (0, r);
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..n - r {
            let mut v = self.get(k, i, i + r);
            if abs {
                v = math::abs(v);
            }
            if v > best_v {
                best_v = v;
                best = (i, i + r);
            }
        }
        best
    }

    /// Build from a per-time closure producing the full `n×n` block.
    pub(crate) fn from_blocks(n: usize, times: Vec<f64>, blocks: Vec<Vec<f64>>) -> Self {
        let mut c = Vec::with_capacity(times.len() * n * n);
        for b in blocks {
            debug_assert_eq!(b.len(), n * n);
            c.extend_from_slice(&b);
        }
        Self { n, times, c, stderr: None }
    }

    #[allow(dead_code)]
    pub(crate) fn zeros(n: usize, times: Vec<f64>) -> Self {
        let c = vec![0.0; times.len() * n * n];
        Self { n, times, c, stderr: None }
    }
}
