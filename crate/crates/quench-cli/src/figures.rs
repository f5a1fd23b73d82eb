//! Canned configurations behind `reproduce <id>`.
//!
//! Each recipe is an ordinary config file written next to its artifacts, so
//! a reproduction doubles as an editable starting point:
//!
//! - `fig2`  — Ising light cones at four interaction ranges (analytic),
//!             with the commuting/Lieb-Robinson bound tables;
//! - `fig3`  — the same four ranges under XY dynamics (state vector);
//! - `fig4`  — XY spatial decay outside the 0.15 contour with the
//!             perturbative comparison;
//! - `figs1` — the 22-spin XY run at α = 1.19 (slow: state vectors are
//!             4M amplitudes; expect minutes to hours, ~1 GB of memory).

pub const FIG2: &str = r#"# Ising light cones at four interaction ranges.
[chain]
n = 11
coupling = "power_law"
j0 = 1.0
alpha_sweep = [0.63, 0.83, 1.00, 1.19]

[model]
kind = "ising"

[time]
t_max_over_jmax = 1.5
n_points = 60

[analysis]
cone = true
boundary_fit = true
velocity = true
bounds = true
thresholds = [0.04]

[output]
directory = "fig2"
"#;

pub const FIG3: &str = r#"# XY light cones at the same four interaction ranges.
[chain]
n = 11
coupling = "power_law"
j0 = 1.0
alpha_sweep = [0.63, 0.83, 1.00, 1.19]

[model]
kind = "xy"

[time]
t_max_over_jmax = 1.5
n_points = 60

[analysis]
cone = true
boundary_fit = true
velocity = true
thresholds = [0.04]

[output]
directory = "fig3"
"#;

pub const FIG4: &str = r#"# Spatial decay of XY correlations outside the light cone.
[chain]
n = 11
coupling = "power_law"
j0 = 1.0
alpha_sweep = [0.63, 0.83, 1.00, 1.19]

[model]
kind = "xy"

[time]
t_max_over_jmax = 1.5
n_points = 60

[analysis]
cone = false
boundary_fit = false
velocity = false
decay_fit = true
perturbative = true
decay_times_over_jmax = [0.25, 0.5, 0.75, 1.0]
decay_mask_threshold = 0.15

[output]
directory = "fig4"
"#;

pub const FIGS1: &str = r#"# 22-spin XY chain at alpha = 1.19: does the faster-than-linear
# cone persist at larger size? Slow by design.
[chain]
n = 22
coupling = "power_law"
j0 = 1.0
alpha = 1.19

[model]
kind = "xy"

[time]
t_max_over_jmax = 1.5
n_points = 40

[analysis]
cone = true
boundary_fit = true
velocity = true
thresholds = [0.04]

[output]
directory = "figs1"
"#;

/// The canned config for a figure id, if one exists.
pub fn lookup(id: &str) -> Option<&'static str> {
    match id {
        "fig2" => Some(FIG2),
        "fig3" => Some(FIG3),
        "fig4" => Some(FIG4),
        "figs1" => Some(FIGS1),
        _ => None,
    }
}

pub const IDS: &[&str] = &["fig2", "fig3", "fig4", "figs1"];
