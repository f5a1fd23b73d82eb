//! File emission: tables, JSON summaries, binary trajectories, manifest.
//!
//! Conventions shared by every artifact:
//! - site indices are 1-based and pairs satisfy i < j;
//! - floats print as `{:.16e}` (17 significant digits, "." decimal), so
//!   reruns of the same config are byte-identical;
//! - tables are CSV by default, or arrays of JSON records with identical
//!   keys under `--format json`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use quench_core::{
    CorrelationField, CouplingMatrix, FitResult, LightConeBoundary, VelocityCurve, C64,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

/// One table cell; `Empty` prints as "" in CSV and `null` in JSON.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Str(String),
    Empty,
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a table under `dir/<base>.<ext>` and return its path.
pub fn write_table(
    dir: &Path,
    base: &str,
    columns: &[&str],
    rows: &[Vec<Cell>],
    format: TableFormat,
) -> Result<PathBuf> {
    let path = dir.join(format!("{base}.{}", format.extension()));
    let file = File::create(&path)?;
    let mut w = BufWriter::new(file);
    match format {
        TableFormat::Csv => {
            writeln!(w, "{}", columns.join(","))?;
            for row in rows {
                debug_assert_eq!(row.len(), columns.len());
                let line: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Int(v) => v.to_string(),
                        Cell::Float(v) => fmt_float(*v),
                        Cell::Str(s) => s.clone(),
                        Cell::Empty => String::new(),
                    })
                    .collect();
                writeln!(w, "{}", line.join(","))?;
            }
        }
        TableFormat::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (name, cell) in columns.iter().zip(row) {
                        let v = match cell {
                            Cell::Int(v) => json!(v),
                            Cell::Float(v) => json!(v),
                            Cell::Str(s) => json!(s),
                            Cell::Empty => Value::Null,
                        };
                        obj.insert((*name).into(), v);
                    }
                    Value::Object(obj)
                })
                .collect();
            serde_json::to_writer_pretty(&mut w, &Value::Array(records))
                .map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(path)
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    let path = dir.join(name);
    let file = File::create(&path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(path)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

// ---- concrete tables ----

/// Upper-triangle coupling matrix: i, j, J.
pub fn write_couplings(dir: &Path, j: &CouplingMatrix, format: TableFormat) -> Result<PathBuf> {
    let rows: Vec<Vec<Cell>> = j
        .pairs()
        .map(|(a, b, v)| vec![Cell::Int(a as i64 + 1), Cell::Int(b as i64 + 1), Cell::Float(v)])
        .collect();
    write_table(dir, "couplings", &["i", "j", "J"], &rows, format)
}

/// Full correlation field: t, i, j, C, stderr (blank without sampling).
pub fn write_correlations(
    dir: &Path,
    base: &str,
    field: &CorrelationField,
    format: TableFormat,
) -> Result<PathBuf> {
    let n = field.n();
    let mut rows = Vec::with_capacity(field.n_times() * n * (n - 1) / 2);
    for (k, &t) in field.times().iter().enumerate() {
        for i in 0..n {
            for j in (i + 1)..n {
                let se = match field.stderr(k, i, j) {
                    Some(s) => Cell::Float(s),
                    None => Cell::Empty,
                };
                rows.push(vec![
                    Cell::Float(t),
                    Cell::Int(i as i64 + 1),
                    Cell::Int(j as i64 + 1),
                    Cell::Float(field.get(k, i, j)),
                    se,
                ]);
            }
        }
    }
    write_table(dir, base, &["t", "i", "j", "C", "stderr"], &rows, format)
}

/// Contour arrivals: r, t_star, i, j (the pair that realized the crossing).
pub fn write_boundary(
    dir: &Path,
    base: &str,
    b: &LightConeBoundary,
    format: TableFormat,
) -> Result<PathBuf> {
    let rows: Vec<Vec<Cell>> = b
        .points
        .iter()
        .map(|p| {
            vec![
                Cell::Int(p.r as i64),
                Cell::Float(p.t_star),
                Cell::Int(p.pair.0 as i64 + 1),
                Cell::Int(p.pair.1 as i64 + 1),
            ]
        })
        .collect();
    write_table(dir, base, &["r", "t_star", "i", "j"], &rows, format)
}

/// Velocity along the fitted boundary: r, v.
pub fn write_velocity(
    dir: &Path,
    base: &str,
    v: &VelocityCurve,
    format: TableFormat,
) -> Result<PathBuf> {
    let rows: Vec<Vec<Cell>> = v
        .r
        .iter()
        .zip(&v.v)
        .map(|(&r, &vi)| vec![Cell::Float(r), Cell::Float(vi)])
        .collect();
    write_table(dir, base, &["r", "v"], &rows, format)
}

/// The fixed-key fit summary: threshold, reduce, form, params, sigmas,
/// residual, v_lr (null when no velocity scale applies).
pub fn fit_summary(
    threshold: f64,
    reduce: &str,
    fit: &FitResult,
    v_lr: Option<f64>,
) -> Value {
    json!({
        "threshold": threshold,
        "reduce": reduce,
        "form": fit.form.name(),
        "params": fit.params,
        "sigmas": fit.sigmas,
        "residual": fit.rms_residual,
        "v_lr": v_lr,
    })
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let k = reader.read(&mut buf)?;
        if k == 0 {
            break;
        }
        hasher.update(&buf[..k]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

// ---- binary trajectory ----

pub const TRAJECTORY_MAGIC: &[u8; 8] = b"QNCHTRAJ";
pub const TRAJECTORY_VERSION: u32 = 1;

/// Streaming writer for state trajectories.
///
/// Layout (little-endian): magic "QNCHTRAJ", u32 version, u32 N, u32
/// n_times, then n_times f64 times, then per snapshot 2^N (re, im) f64
/// pairs in basis order (bit i of the index is spin i, 0 = down).
pub struct TrajectoryWriter {
    w: BufWriter<File>,
    dim: usize,
    remaining: usize,
    path: PathBuf,
}

impl TrajectoryWriter {
    pub fn create(path: PathBuf, n: usize, times: &[f64]) -> Result<Self> {
        let file = File::create(&path)?;
        let mut w = BufWriter::new(file);
        w.write_all(TRAJECTORY_MAGIC)?;
        w.write_all(&TRAJECTORY_VERSION.to_le_bytes())?;
        w.write_all(&(n as u32).to_le_bytes())?;
        w.write_all(&(times.len() as u32).to_le_bytes())?;
        for &t in times {
            w.write_all(&t.to_le_bytes())?;
        }
        Ok(Self { w, dim: 1usize << n, remaining: times.len(), path })
    }

    pub fn push(&mut self, psi: &[C64]) -> Result<()> {
        debug_assert_eq!(psi.len(), self.dim);
        debug_assert!(self.remaining > 0);
        for a in psi {
            self.w.write_all(&a.re.to_le_bytes())?;
            self.w.write_all(&a.im.to_le_bytes())?;
        }
        self.remaining -= 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        if self.remaining != 0 {
            return Err(CliError::Io(format!(
                "trajectory file {} is short {} snapshots",
                self.path.display(),
                self.remaining
            )));
        }
        self.w.flush()?;
        Ok(self.path)
    }
}

/// Read a trajectory file back into memory (snapshots in time order).
pub fn read_trajectory(path: &Path) -> Result<(usize, Vec<f64>, Vec<Vec<C64>>)> {
    let file = File::open(path)?;
    let mut r = BufReader::new(file);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != TRAJECTORY_MAGIC {
        return Err(CliError::Io(format!("{} is not a trajectory file", path.display())));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != TRAJECTORY_VERSION {
        return Err(CliError::Io(format!("unsupported trajectory version {version}")));
    }
    r.read_exact(&mut u32buf)?;
    let n = u32::from_le_bytes(u32buf) as usize;
    r.read_exact(&mut u32buf)?;
    let n_times = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    let mut times = Vec::with_capacity(n_times);
    for _ in 0..n_times {
        r.read_exact(&mut f64buf)?;
        times.push(f64::from_le_bytes(f64buf));
    }
    let dim = 1usize << n;
    let mut states = Vec::with_capacity(n_times);
    for _ in 0..n_times {
        let mut psi = Vec::with_capacity(dim);
        for _ in 0..dim {
            r.read_exact(&mut f64buf)?;
            let re = f64::from_le_bytes(f64buf);
            r.read_exact(&mut f64buf)?;
            let im = f64::from_le_bytes(f64buf);
            psi.push(C64::new(re, im));
        }
        states.push(psi);
    }
    Ok((n, times, states))
}

// ---- manifest ----

/// A file the run produced, relative to the output root.
#[derive(Debug, Clone)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

pub fn file_entry(root: &Path, path: &Path) -> Result<FileEntry> {
    let rel = path
        .strip_prefix(root)
        .unwrap_or(path)
        .to_string_lossy()
        .replace(std::path::MAIN_SEPARATOR, "/");
    Ok(FileEntry { path: rel, sha256: sha256_file(path)? })
}

/// Write `run_manifest.json` listing every emitted file with its checksum.
/// The manifest never lists itself.
pub fn write_manifest(
    root: &Path,
    config_sha256: &str,
    wall_clock_seconds: f64,
    mut files: Vec<FileEntry>,
) -> Result<PathBuf> {
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let value = json!({
        "config_sha256": config_sha256,
        "software_version": env!("CARGO_PKG_VERSION"),
        "wall_clock_seconds": wall_clock_seconds,
        "files": files
            .iter()
            .map(|f| json!({"path": f.path, "sha256": f.sha256}))
            .collect::<Vec<_>>(),
    });
    write_json(root, "run_manifest.json", &value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_carry_full_precision() {
        let dir = std::env::temp_dir().join("quench-artifact-test");
        std::fs::create_dir_all(&dir).unwrap();
        let rows = vec![vec![Cell::Int(1), Cell::Float(1.0 / 3.0), Cell::Empty]];
        let path = write_table(&dir, "t", &["i", "x", "e"], &rows, TableFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "i,x,e");
        let cell = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().to_string();
        assert_eq!(cell.parse::<f64>().unwrap(), 1.0 / 3.0);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn trajectory_round_trips_through_disk() {
        let dir = std::env::temp_dir().join("quench-artifact-test");
        std::fs::create_dir_all(&dir).unwrap();
        let times = [0.0, 0.5, 1.0];
        let states: Vec<Vec<C64>> = (0..3)
            .map(|k| {
                (0..4).map(|i| C64::new(k as f64 + i as f64 * 0.25, -(i as f64))).collect()
            })
            .collect();
        let path = dir.join("traj.bin");
        let mut w = TrajectoryWriter::create(path.clone(), 2, &times).unwrap();
        for s in &states {
            w.push(s).unwrap();
        }
        w.finish().unwrap();
        let (n, t2, s2) = read_trajectory(&path).unwrap();
        assert_eq!(n, 2);
        assert_eq!(t2, times);
        assert_eq!(s2, states);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn short_trajectory_write_is_an_error() {
        let dir = std::env::temp_dir().join("quench-artifact-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("short.bin");
        let w = TrajectoryWriter::create(path.clone(), 1, &[0.0, 1.0]).unwrap();
        assert!(w.finish().is_err());
        std::fs::remove_file(path).unwrap();
    }
}
