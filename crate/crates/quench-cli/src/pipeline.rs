//! Wiring: config → couplings → evolution → analyses → artifacts.
//!
//! A run owns one output root. Sweeps expand into sub-runs that each own a
//! subdirectory; everything lands in one manifest at the root. Sub-runs are
//! independent and may execute on worker threads (`--jobs`), which cannot
//! change any artifact byte — only the wall clock.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use quench_core::{
    analysis, coupling, evolve, ising, sample, CorrelationField, CouplingMatrix, Model, Reduce,
};
use serde_json::json;

use crate::artifacts::{self, Cell, TableFormat};
use crate::config::{slug, Analysis, RunConfig, SubRun};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Coupling matrix (and ion geometry) only.
    Couplings,
    /// Couplings plus correlation dynamics, shots, trajectory.
    Evolve,
    /// Everything the config asks for.
    Analyze,
    /// Couplings plus the analytic bound tables.
    Bounds,
}

pub struct RunOutcome {
    pub manifest: PathBuf,
    pub n_files: usize,
}

pub fn run(cmd: Command, cfg: &RunConfig, jobs: usize) -> Result<RunOutcome> {
    let start = Instant::now();
    let root = PathBuf::from(cfg.out_dir());
    std::fs::create_dir_all(&root)?;

    let effective = cfg.to_toml();
    let config_path = artifacts::write_text(&root, "effective_config.toml", &effective)?;
    let config_sha = artifacts::sha256_bytes(effective.as_bytes());

    let subs = cfg.sub_runs();
    let mut dirs = Vec::with_capacity(subs.len());
    for sub in &subs {
        let dir = match &sub.label {
            Some(label) => root.join(label),
            None => root.clone(),
        };
        std::fs::create_dir_all(&dir)?;
        dirs.push(dir);
    }

    let results = run_all(cmd, cfg, &subs, &dirs, jobs)?;

    let mut entries = vec![artifacts::file_entry(&root, &config_path)?];
    for files in results {
        for path in files {
            entries.push(artifacts::file_entry(&root, &path)?);
        }
    }
    let n_files = entries.len();
    let manifest =
        artifacts::write_manifest(&root, &config_sha, start.elapsed().as_secs_f64(), entries)?;
    Ok(RunOutcome { manifest, n_files })
}

/// Execute every sub-run, preserving config order in the results.
fn run_all(
    cmd: Command,
    cfg: &RunConfig,
    subs: &[SubRun],
    dirs: &[PathBuf],
    jobs: usize,
) -> Result<Vec<Vec<PathBuf>>> {
    let jobs = jobs.max(1).min(subs.len().max(1));
    if jobs == 1 || subs.len() == 1 {
        let mut out = Vec::with_capacity(subs.len());
        for (sub, dir) in subs.iter().zip(dirs) {
            out.push(run_one(cmd, cfg, sub, dir)?);
        }
        return Ok(out);
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Vec<PathBuf>>>>> =
        Mutex::new((0..subs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= subs.len() {
                    break;
                }
                let res = run_one(cmd, cfg, &subs[k], &dirs[k]);
                slots.lock().unwrap()[k] = Some(res);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("worker filled slot")).collect()
}

fn run_one(cmd: Command, cfg: &RunConfig, sub: &SubRun, dir: &Path) -> Result<Vec<PathBuf>> {
    let fmt = cfg.format();
    let mut files = Vec::new();

    // 1. Coupling matrix, with intermediate geometry for the physical trap.
    let j = if cfg.chain.coupling == "ion_trap" {
        let p = cfg.ion_params();
        let pos = quench_core::ion::equilibrium_positions(p.n_ions)?;
        let modes =
            quench_core::ion::transverse_modes(&pos, p.transverse_freq / p.axial_freq)?;
        files.push(write_positions(dir, &pos, fmt)?);
        files.push(write_modes(dir, &modes, fmt)?);
        quench_core::ion::ion_couplings(&modes, &p)?
    } else {
        cfg.chain_spec(sub.alpha).build()?
    };
    files.push(artifacts::write_couplings(dir, &j, fmt)?);
    if let Ok(fit) = coupling::fit_power_law(&j) {
        let doc = json!({
            "j0_hat": fit.j0_hat,
            "alpha_hat": fit.alpha_hat,
            "rms_log_residual": fit.rms_log_residual,
        });
        files.push(artifacts::write_json(dir, "couplings_fit.json", &doc)?);
    }

    let jm = j.j_max();
    let times = cfg.times(jm);
    files.push(write_run_info(dir, cfg, sub, &j, &times)?);

    if cmd == Command::Couplings {
        return Ok(files);
    }
    if cmd == Command::Bounds {
        files.push(write_bounds(dir, cfg, &j, &times, fmt)?);
        return Ok(files);
    }

    // 2. Dynamics. The pure Ising model has a closed form; state vectors are
    // only built when sampling or trajectory output demands them.
    let model = cfg.model();
    let b = cfg.field_b(jm);
    let want_traj = cfg.save_trajectory();
    let need_states = cfg.shots.is_some();
    let mut kept: Option<evolve::StateTrajectory> = None;

    let field = if model == Model::Ising && !want_traj && !need_states {
        ising::ising_correlation_field(&j, &times)?
    } else {
        let h = evolve::build_hamiltonian(&j, model, b)?;
        if need_states {
            let traj = evolve::evolve(&h, &times)?;
            if want_traj {
                let mut tw =
                    artifacts::TrajectoryWriter::create(dir.join("trajectory.bin"), h.n(), &times)?;
                for psi in &traj.states {
                    tw.push(psi)?;
                }
                files.push(tw.finish()?);
            }
            let field = evolve::connected_correlations(&traj)?;
            kept = Some(traj);
            field
        } else if want_traj {
            // Stream snapshots straight to disk; never hold more than one.
            let n = h.n();
            let mut tw =
                artifacts::TrajectoryWriter::create(dir.join("trajectory.bin"), n, &times)?;
            let mut flat: Vec<f64> = Vec::with_capacity(times.len() * n * n);
            let mut sink_err: Option<CliError> = None;
            evolve::evolve_with(&h, &times, |_, psi| {
                if sink_err.is_none() {
                    if let Err(e) = tw.push(psi) {
                        sink_err = Some(e);
                    }
                    flat.extend_from_slice(&evolve::correlation_block(psi, n));
                }
            })?;
            if let Some(e) = sink_err {
                return Err(e);
            }
            files.push(tw.finish()?);
            CorrelationField::new(n, times.clone(), flat)?
        } else {
            evolve::correlation_field_evolved(&h, &times)?
        }
    };
    files.push(artifacts::write_correlations(dir, "correlations", &field, fmt)?);

    // 3. Projective shots and the jackknife estimator.
    if let Some(s) = &cfg.shots {
        let traj = kept.as_ref().expect("states kept when shots requested");
        let rec = sample::sample_measurements(traj, s.n_shots, s.seed)?;
        let sampled = sample::correlations_from_shots(&rec)?;
        files.push(artifacts::write_correlations(dir, "shot_correlations", &sampled, fmt)?);
    }

    if cmd == Command::Evolve {
        return Ok(files);
    }

    // 4. Analyses.
    let reduce = cfg.reduce();
    if cfg.flag(Analysis::Cone) {
        for &thr in cfg.thresholds() {
            files.extend(run_cone(dir, cfg, &field, thr, reduce, jm, fmt)?);
        }
    }
    if cfg.flag(Analysis::DecayFit) {
        files.extend(run_decay(dir, cfg, &field, reduce, jm, fmt)?);
    }
    if cfg.flag(Analysis::Bounds) {
        files.push(write_bounds(dir, cfg, &j, &times, fmt)?);
    }
    if cfg.flag(Analysis::Perturbative) {
        files.push(write_perturbative(dir, &j, &field, fmt)?);
    }
    if cfg.flag(Analysis::Revivals) {
        files.push(run_revivals(dir, cfg, &field, jm, fmt)?);
    }
    if cfg.plot_script() && fmt == TableFormat::Csv {
        files.push(write_plot_script(dir, cfg)?);
    }
    Ok(files)
}

fn run_cone(
    dir: &Path,
    cfg: &RunConfig,
    field: &CorrelationField,
    thr: f64,
    reduce: Reduce,
    jm: f64,
    fmt: TableFormat,
) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let boundary = analysis::extract_light_cone(field, thr, reduce)?;
    if boundary.is_empty() {
        eprintln!("quench: warning: no correlation reaches the {thr} contour; boundary is empty");
    }
    let tag = slug(thr);
    files.push(artifacts::write_boundary(dir, &format!("boundary_{tag}"), &boundary, fmt)?);
    if !cfg.flag(Analysis::BoundaryFit) {
        return Ok(files);
    }
    let fit = analysis::fit_boundary_power_law(&boundary, cfg.fit_window())?;
    let v_lr = ising::lr_velocity(jm);
    let doc = artifacts::fit_summary(thr, reduce.name(), &fit, Some(v_lr));
    files.push(artifacts::write_json(dir, &format!("summary_{tag}.json"), &doc)?);
    if cfg.flag(Analysis::Velocity) {
        let vc = analysis::propagation_velocity(&fit, &boundary, jm)?;
        files.push(artifacts::write_velocity(dir, &format!("velocity_{tag}"), &vc, fmt)?);
    }
    Ok(files)
}

/// Spatial-decay fits outside the masked cone at each probe time. Probe
/// times that fall entirely inside the cone are recorded as skipped, not
/// failed: at late times that is the physics, not an error.
fn run_decay(
    dir: &Path,
    cfg: &RunConfig,
    field: &CorrelationField,
    reduce: Reduce,
    jm: f64,
    fmt: TableFormat,
) -> Result<Vec<PathBuf>> {
    let mask = cfg.analysis.decay_mask_threshold.unwrap_or(0.15);
    let boundary = analysis::extract_light_cone(field, mask, reduce)?;
    let times = field.times();
    let n = field.n();
    let probe: Vec<f64> = cfg
        .analysis
        .decay_times_over_jmax
        .clone()
        .unwrap_or_else(|| vec![0.25, 0.5])
        .iter()
        .map(|x| x / jm)
        .collect();

    let mut profile: Vec<Vec<Cell>> = Vec::new();
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    for &t in &probe {
        // Snap to the grid exactly as the fitter does.
        let k = times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().partial_cmp(&(b.1 - t).abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let t_grid = times[k];
        for r in 1..n {
            let outside = match boundary.arrival(r) {
                Some(ts) => t_grid < ts,
                None => true,
            };
            if outside {
                let c = field.separation_series(r, reduce, true)[k];
                profile.push(vec![Cell::Float(t_grid), Cell::Int(r as i64), Cell::Float(c)]);
            }
        }
        for form in [quench_core::FitForm::Exponential, quench_core::FitForm::PowerLaw] {
            match analysis::fit_spatial_decay(field, t_grid, &boundary, form) {
                Ok(fit) => {
                    let mut doc = artifacts::fit_summary(mask, reduce.name(), &fit, None);
                    doc.as_object_mut()
                        .unwrap()
                        .insert("time".into(), json!(t_grid));
                    fits.push(doc);
                }
                Err(e) => {
                    skipped.push(json!({
                        "time": t_grid,
                        "form": form.name(),
                        "reason": e.to_string(),
                    }));
                }
            }
        }
    }
    let mut files = Vec::new();
    files.push(artifacts::write_table(dir, "decay_profile", &["t", "r", "C"], &profile, fmt)?);
    files.push(artifacts::write_json(
        dir,
        "decay_summary.json",
        &json!({"fits": fits, "skipped": skipped}),
    )?);
    Ok(files)
}

/// Bound tables: the exact commuting-model correlation against the
/// per-pair commuting bound, plus the nearest-neighbor Lieb-Robinson bound
/// where a single coupling strength exists.
fn write_bounds(
    dir: &Path,
    cfg: &RunConfig,
    j: &CouplingMatrix,
    times: &[f64],
    fmt: TableFormat,
) -> Result<PathBuf> {
    let n = j.n();
    let nn_j = if cfg.chain.coupling == "nearest_neighbor" { cfg.chain.j } else { None };
    let mut rows = Vec::with_capacity(times.len() * n * (n - 1) / 2);
    for &t in times {
        for a in 0..n {
            for bsite in (a + 1)..n {
                let c = ising::ising_correlation(j, a, bsite, t)?;
                let cb = ising::commuting_bound(j, a, bsite, t)?;
                let lr = match nn_j {
                    Some(jv) => Cell::Float(ising::lr_correlation_bound(
                        (bsite - a) as f64,
                        t,
                        jv,
                    )?),
                    None => Cell::Empty,
                };
                rows.push(vec![
                    Cell::Float(t),
                    Cell::Int(a as i64 + 1),
                    Cell::Int(bsite as i64 + 1),
                    Cell::Float(c),
                    Cell::Float(cb),
                    lr,
                ]);
            }
        }
    }
    artifacts::write_table(
        dir,
        "bounds",
        &["t", "i", "j", "C", "commuting_bound", "lr_bound"],
        &rows,
        fmt,
    )
}

fn write_perturbative(
    dir: &Path,
    j: &CouplingMatrix,
    field: &CorrelationField,
    fmt: TableFormat,
) -> Result<PathBuf> {
    let mut rows = Vec::new();
    for (k, &t) in field.times().iter().enumerate() {
        for (a, bsite, v) in j.pairs() {
            if v == 0.0 {
                continue;
            }
            let p = analysis::perturbative_xy(j, a, bsite, t)?;
            rows.push(vec![
                Cell::Float(t),
                Cell::Int(a as i64 + 1),
                Cell::Int(bsite as i64 + 1),
                Cell::Float(field.get(k, a, bsite)),
                Cell::Float(p),
            ]);
        }
    }
    artifacts::write_table(dir, "perturbative", &["t", "i", "j", "C", "perturbative"], &rows, fmt)
}

fn run_revivals(
    dir: &Path,
    cfg: &RunConfig,
    field: &CorrelationField,
    jm: f64,
    fmt: TableFormat,
) -> Result<PathBuf> {
    let [w0, w1] = cfg.analysis.revival_window_over_jmax.unwrap_or([2.0, 3.0]);
    let window = (w0 / jm, w1 / jm);
    let times = field.times();
    let t_end = *times.last().unwrap();
    if window.0 >= t_end {
        return Err(CliError::Config(format!(
            "analysis.revival_window_over_jmax starts at {w0}/J_max but the grid ends at \
             {:.3}/J_max; raise time.t_max_over_jmax",
            t_end * jm
        )));
    }
    let series = field.separation_series(1, Reduce::Mean, true);
    let peaks = ising::find_revivals(
        times,
        &series,
        window,
        cfg.analysis.revival_prominence.unwrap_or(0.02),
    )?;
    if peaks.is_empty() {
        eprintln!("quench: warning: no revival found in the search window");
    }
    let rows: Vec<Vec<Cell>> =
        peaks.iter().map(|&(t, a)| vec![Cell::Float(t), Cell::Float(a)]).collect();
    artifacts::write_table(dir, "revivals", &["t", "amplitude"], &rows, fmt)
}

fn write_positions(
    dir: &Path,
    pos: &quench_core::ion::EquilibriumPositions,
    fmt: TableFormat,
) -> Result<PathBuf> {
    let rows: Vec<Vec<Cell>> = pos
        .u
        .iter()
        .enumerate()
        .map(|(i, &u)| vec![Cell::Int(i as i64 + 1), Cell::Float(u)])
        .collect();
    artifacts::write_table(dir, "positions", &["i", "u"], &rows, fmt)
}

fn write_modes(
    dir: &Path,
    modes: &quench_core::ion::NormalModes,
    fmt: TableFormat,
) -> Result<PathBuf> {
    let mut rows = Vec::with_capacity(modes.n * modes.n);
    for m in 0..modes.n {
        for i in 0..modes.n {
            rows.push(vec![
                Cell::Int(m as i64 + 1),
                Cell::Float(modes.freqs[m]),
                Cell::Int(i as i64 + 1),
                Cell::Float(modes.vector_component(i, m)),
            ]);
        }
    }
    artifacts::write_table(dir, "modes", &["mode", "freq_over_axial", "ion", "component"], &rows, fmt)
}

fn write_run_info(
    dir: &Path,
    cfg: &RunConfig,
    sub: &SubRun,
    j: &CouplingMatrix,
    times: &[f64],
) -> Result<PathBuf> {
    let jm = j.j_max();
    let doc = json!({
        "n": cfg.n(),
        "coupling": cfg.chain.coupling,
        "model": cfg.model.kind,
        "alpha": sub.alpha,
        "j_max": jm,
        "t_max": times.last().copied().unwrap_or(0.0),
        "n_points": times.len(),
        "v_lr": ising::lr_velocity(jm),
    });
    artifacts::write_json(dir, "run_info.json", &doc)
}

fn write_plot_script(dir: &Path, cfg: &RunConfig) -> Result<PathBuf> {
    let mut s = String::from(
        "# gnuplot script for the boundary and velocity artifacts\n\
         set datafile separator \",\"\n\
         set key autotitle columnhead\n\
         set logscale xy\n\
         set xlabel \"separation r\"\n\
         set ylabel \"arrival time t*\"\n",
    );
    let mut plots = Vec::new();
    for &thr in cfg.thresholds() {
        plots.push(format!("\"boundary_{}.csv\" using 1:2 with linespoints", slug(thr)));
    }
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    if cfg.flag(Analysis::Velocity) {
        s.push_str("pause -1\nunset logscale\nset ylabel \"velocity v(r)\"\n");
        let mut vplots = Vec::new();
        for &thr in cfg.thresholds() {
            vplots.push(format!("\"velocity_{}.csv\" using 1:2 with linespoints", slug(thr)));
        }
        s.push_str(&format!("plot {}\n", vplots.join(", \\\n     ")));
    }
    artifacts::write_text(dir, "plot.gp", &s)
}
