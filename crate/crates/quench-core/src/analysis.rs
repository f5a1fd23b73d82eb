//! Light-cone boundary extraction and the fits layered on top of it:
//! boundary shape (power law or linear), propagation velocities, and spatial
//! decay outside the cone.
//!
//! The boundary of the correlation "cone" is defined by a fixed contour: for
//! each separation `r`, the arrival time `t*(r)` is the first time the
//! pair-reduced correlation reaches a threshold, located by linear
//! interpolation between grid samples. Separations whose series never reach
//! the threshold are simply absent from the boundary — an empty boundary is
//! data, not an error.

use crate::coupling::CouplingMatrix;
use crate::error::CoreError;
use crate::field::{CorrelationField, Reduce};
use crate::ising;
use crate::linalg::fit_line;
use crate::math;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Functional form of a fitted curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitForm {
    /// `a·r^β` (boundary) or `A·r^−p` (decay)
    PowerLaw,
    /// `A·e^{−r/ξ}`
    Exponential,
    /// `c0 + c1·r`
    Linear,
}

impl FitForm {
    pub fn name(self) -> &'static str {
        match self {
            FitForm::PowerLaw => "power_law",
            FitForm::Exponential => "exponential",
            FitForm::Linear => "linear",
        }
    }
}

/// A fitted curve with one-sigma parameter uncertainties, the rms residual
/// of the fit (log space for log–log fits), and the separation window
/// actually used.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub form: FitForm,
    /// `[a, β]` for power-law boundaries, `[A, ξ]` / `[A, p]` for decay,
    /// `[c0, c1]` for linear.
    pub params: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub rms_residual: f64,
    pub window: (f64, f64),
}

/// Arrival of the correlation front at one separation.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub r: usize,
    pub t_star: f64,
    /// The pair realizing the largest correlation at the crossing sample.
    pub pair: (usize, usize),
}

/// Fixed-contour light-cone boundary, sorted by separation.
#[derive(Debug, Clone)]
pub struct LightConeBoundary {
    pub threshold: f64,
    pub reduce: Reduce,
    pub points: Vec<BoundaryPoint>,
}

impl LightConeBoundary {
    /// Arrival time at separation `r`, if the front ever got there.
    pub fn arrival(&self, r: usize) -> Option<f64> {
        self.points.iter().find(|p| p.r == r).map(|p| p.t_star)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Trace the fixed contour `C̄(r, t) = threshold` through the field. The
/// series for each separation is reduced over pairs (signed — the contour is
/// a level of the correlation itself, not its magnitude), scanned for the
/// first sample at or above threshold, and the crossing time interpolated
/// linearly from the previous sample; exact hits land on the sample time.
pub fn extract_light_cone(
    field: &CorrelationField,
    threshold: f64,
    reduce: Reduce,
) -> Result<LightConeBoundary, CoreError> {
    if !(threshold > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "contour threshold must be positive, got {threshold}"
        )));
    }
    let times = field.times();
    let mut points = Vec::new();
    for r in 1..field.n() {
        let series = field.separation_series(r, reduce, false);
        let Some(k) = series.iter().position(|&s| s >= threshold) else {
            continue; // never crossed: not part of the boundary
        };
        let t_star = if k == 0 {
            times[0]
        } else {
            let (s0, s1) = (series[k - 1], series[k]);
            times[k - 1] + (threshold - s0) / (s1 - s0) * (times[k] - times[k - 1])
        };
        points.push(BoundaryPoint { r, t_star, pair: field.separation_argmax(r, k, false) });
    }
    Ok(LightConeBoundary { threshold, reduce, points })
}

fn windowed(
    b: &LightConeBoundary,
    window: Option<(usize, usize)>,
) -> Result<Vec<(f64, f64)>, CoreError> {
    let pts: Vec<(f64, f64)> = b
        .points
        .iter()
        .filter(|p| window.map_or(true, |(lo, hi)| p.r >= lo && p.r <= hi))
        .map(|p| (p.r as f64, p.t_star))
        .collect();
    if pts.len() < 3 {
        return Err(CoreError::InsufficientPoints { needed: 3, got: pts.len() });
    }
    Ok(pts)
}

fn used_window(pts: &[(f64, f64)]) -> (f64, f64) {
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Fit `t*(r) = a·r^β` over the boundary (optionally restricted to a
/// separation window) by least squares in log–log space.
pub fn fit_boundary_power_law(
    b: &LightConeBoundary,
    window: Option<(usize, usize)>,
) -> Result<FitResult, CoreError> {
    let pts = windowed(b, window)?;
    if pts.iter().any(|&(_, t)| t <= 0.0) {
        return Err(CoreError::DegenerateFit(String::from(
            "boundary contains a zero arrival time; power-law form undefined",
        )));
    }
    let x: Vec<f64> = pts.iter().map(|p| math::ln(p.0)).collect();
    let y: Vec<f64> = pts.iter().map(|p| math::ln(p.1)).collect();
    let f = fit_line(&x, &y)
        .ok_or_else(|| CoreError::DegenerateFit(String::from("boundary separations coincide")))?;
    let a = math::exp(f.intercept);
    Ok(FitResult {
        form: FitForm::PowerLaw,
        params: alloc::vec![a, f.slope],
        sigmas: alloc::vec![a * f.sigma_intercept, f.sigma_slope],
        rms_residual: f.rms,
        window: used_window(&pts),
    })
}

/// Fit `t*(r) = c0 + c1·r` over the boundary.
pub fn fit_boundary_linear(
    b: &LightConeBoundary,
    window: Option<(usize, usize)>,
) -> Result<FitResult, CoreError> {
    let pts = windowed(b, window)?;
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let f = fit_line(&x, &y)
        .ok_or_else(|| CoreError::DegenerateFit(String::from("boundary separations coincide")))?;
    Ok(FitResult {
        form: FitForm::Linear,
        params: alloc::vec![f.intercept, f.slope],
        sigmas: alloc::vec![f.sigma_intercept, f.sigma_slope],
        rms_residual: f.rms,
        window: used_window(&pts),
    })
}

/// Instantaneous front velocity along a power-law boundary, with the
/// Lieb-Robinson velocity for the same coupling scale attached for
/// comparison.
#[derive(Debug, Clone)]
pub struct VelocityCurve {
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    pub v_lr: f64,
}

/// Differentiate the fitted boundary: `t = a·r^β` gives
/// `v(r) = dr/dt = r^{1−β}/(aβ)`, evaluated at every boundary separation.
pub fn propagation_velocity(
    fit: &FitResult,
    b: &LightConeBoundary,
    j_max: f64,
) -> Result<VelocityCurve, CoreError> {
    if fit.form != FitForm::PowerLaw {
        return Err(CoreError::InvalidArgument(String::from(
            "velocity curve requires a power-law boundary fit",
        )));
    }
    let (a, beta) = (fit.params[0], fit.params[1]);
    if !(beta.abs() > 1e-9) || !(a > 0.0) {
        return Err(CoreError::DegenerateFit(format!(
            "cannot differentiate boundary with a = {a}, beta = {beta}"
        )));
    }
    let r: Vec<f64> = b.points.iter().map(|p| p.r as f64).collect();
    let v: Vec<f64> = r.iter().map(|&ri| math::powf(ri, 1.0 - beta) / (a * beta)).collect();
    Ok(VelocityCurve { r, v, v_lr: ising::lr_velocity(j_max) })
}

/// Fit the spatial profile of the reduced correlation magnitude at one time,
/// restricted to separations still outside the cone (arrival later than `t`,
/// or never). `form` selects `A·e^{−r/ξ}` or `A·r^{−p}`; compare the rms
/// residuals of the two to judge which shape the tail actually has.
pub fn fit_spatial_decay(
    field: &CorrelationField,
    t: f64,
    b: &LightConeBoundary,
    form: FitForm,
) -> Result<FitResult, CoreError> {
    let times = field.times();
    let k = times
        .iter()
        .enumerate()
        .min_by(|a, bb| (a.1 - t).abs().partial_cmp(&(bb.1 - t).abs()).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| CoreError::InvalidArgument(String::from("field has no time samples")))?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for r in 1..field.n() {
        let outside = match b.arrival(r) {
            Some(ts) => t < ts,
            None => true,
        };
        if !outside {
            continue;
        }
        let val = field.separation_series(r, b.reduce, true)[k];
        if val > 0.0 {
            pts.push((r as f64, val));
        }
    }
    if pts.len() < 3 {
        return Err(CoreError::InsufficientOutsideRegion { got: pts.len() });
    }
    let y: Vec<f64> = pts.iter().map(|p| math::ln(p.1)).collect();
    match form {
        FitForm::Exponential => {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let f = fit_line(&x, &y).ok_or_else(|| {
                CoreError::DegenerateFit(String::from("decay separations coincide"))
            })?;
            if !(f.slope < 0.0) {
                return Err(CoreError::DegenerateFit(format!(
                    "outside-cone correlations not decaying (slope {})",
                    f.slope
                )));
            }
            let a = math::exp(f.intercept);
            let xi = -1.0 / f.slope;
            Ok(FitResult {
                form: FitForm::Exponential,
                params: alloc::vec![a, xi],
                sigmas: alloc::vec![a * f.sigma_intercept, f.sigma_slope / (f.slope * f.slope)],
                rms_residual: f.rms,
                window: used_window(&pts),
            })
        }
        FitForm::PowerLaw => {
            let x: Vec<f64> = pts.iter().map(|p| math::ln(p.0)).collect();
            let f = fit_line(&x, &y).ok_or_else(|| {
                CoreError::DegenerateFit(String::from("decay separations coincide"))
            })?;
            if !(f.slope < 0.0) {
                return Err(CoreError::DegenerateFit(format!(
                    "outside-cone correlations not decaying (slope {})",
                    f.slope
                )));
            }
            Ok(FitResult {
                form: FitForm::PowerLaw,
                params: alloc::vec![math::exp(f.intercept), -f.slope],
                sigmas: alloc::vec![math::exp(f.intercept) * f.sigma_intercept, f.sigma_slope],
                rms_residual: f.rms,
                window: used_window(&pts),
            })
        }
        FitForm::Linear => Err(CoreError::InvalidArgument(String::from(
            "spatial decay fits are exponential or power-law",
        ))),
    }
}

/// Leading short-time XY correlation between two sites: `(J_ij·t)²`.
pub fn perturbative_xy(
    j: &CouplingMatrix,
    i: usize,
    jj: usize,
    t: f64,
) -> Result<f64, CoreError> {
    let n = j.n();
    if i >= n {
        return Err(CoreError::IndexOutOfRange { index: i, n });
    }
    if jj >= n {
        return Err(CoreError::IndexOutOfRange { index: jj, n });
    }
    if i == jj {
        return Err(CoreError::InvalidArgument(String::from(
            "perturbative correlation needs two distinct sites",
        )));
    }
    let x = j.get(i, jj) * t;
    Ok(x * x)
}
