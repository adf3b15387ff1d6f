//! Target → desired window → synthesized plan → state comparison.

use rsp_core::fieldstate::{
    desired_amplitude, desired_time_window, fidelity, generated_amplitude_from, success_probability,
    ModeAmplitude, ProbabilityReport, Profile, SpectralTail, TargetState,
};
use rsp_core::numerics::{Grid1D, SampledFunction};
use rsp_core::superosc::{max_band_edge, synthesize_window_with, Mollifier, SynthesisOptions, WindowPlan};
use rsp_core::{Error, Result};

/// Window-side settings of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSettings {
    pub t0: f64,
    /// Half-width T of the sampled desired window; `None` picks L + 7 w.
    pub half_span: Option<f64>,
    pub m_index: u32,
    /// Band edge; `None` takes the largest edge the plan's pairs allow.
    pub omega_c: Option<f64>,
    pub mollifier: Option<Mollifier>,
    /// Sampling step of the desired window in t′.
    pub time_step: f64,
    pub coupling: f64,
    pub k_points: usize,
}

impl Default for WindowSettings {
    fn default() -> Self {
        Self {
            t0: 1.0,
            half_span: None,
            m_index: 8,
            omega_c: None,
            mollifier: Some(Mollifier { order: 8, tau: 0.05 }),
            time_step: 0.02,
            coupling: 0.01,
            k_points: 800,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub plan: WindowPlan,
    pub desired_window: SampledFunction,
    pub k_grid: Grid1D,
    pub desired: ModeAmplitude,
    pub generated: ModeAmplitude,
    pub fidelity: f64,
    /// Weight of the desired state above the band edge.
    pub eta: f64,
    pub probability: Option<ProbabilityReport>,
}

/// Default T: outer edge of the profile plus seven widths.
pub fn default_half_span(profile: &Profile) -> f64 {
    match *profile {
        Profile::GaussianShell { radius, width } => radius + 7.0 * width,
        other => 7.0 * other.width(),
    }
}

/// ε_des(t′) sampled on [-T, T] with step `dt`.
pub fn sample_desired_window(target: &TargetState, half_span: f64, dt: f64) -> Result<SampledFunction> {
    if !(dt > 0.0) || !(half_span > 0.0) {
        return Err(Error::InvalidArgument("time step and half span must be positive".into()));
    }
    let n = (half_span / dt).round() as usize;
    let tg = Grid1D::new(-(n as f64) * dt, dt, 2 * n + 1)?;
    // the spectrum is resolved to 1e-16 of the weight and sampled finely
    // enough to carry e^{iω′T} across the whole window
    let tail = SpectralTail::new(target)?;
    let k_top = tail.wavenumber_for_fraction(1e-16)?;
    let w_top = target.model.shift_at_wavenumber(k_top)?;
    let step = std::f64::consts::PI / (8.0 * half_span);
    let count = ((w_top / step).ceil() as usize + 1).max(64);
    let fg = Grid1D::new(0.0, w_top / (count - 1) as f64, count)?;
    desired_time_window(target, &fg, &tg)
}

/// k grid holding all but 1e-8 of the desired state's weight.
pub fn state_k_grid(target: &TargetState, points: usize) -> Result<Grid1D> {
    let tail = SpectralTail::new(target)?;
    let k_hi = tail.wavenumber_for_fraction(1e-8)?;
    Grid1D::midpoints(0.0, k_hi, points)
}

/// Synthesizes the window for `target` and compares the generated state
/// with the desired one. The success probability needs a mollifier and is
/// skipped otherwise or when `with_probability` is false.
pub fn run_pipeline(target: &TargetState, win: &WindowSettings, with_probability: bool) -> Result<PipelineResult> {
    let half_span = win.half_span.unwrap_or_else(|| default_half_span(&target.profile));
    let eps_des = sample_desired_window(target, half_span, win.time_step)?;
    let opts = SynthesisOptions { mollifier: win.mollifier, ..SynthesisOptions::default() };
    let plan = match win.omega_c {
        Some(wc) => synthesize_window_with(&eps_des, win.t0, wc, win.m_index, &opts)?,
        None => {
            // provisional edge, replaced by the widest one the pairs allow
            let mut p = synthesize_window_with(&eps_des, win.t0, f64::MIN_POSITIVE, win.m_index, &opts)?;
            p.omega_c = max_band_edge(p.core_support(), win.m_index, p.max_cosh());
            p
        }
    };
    let k_grid = state_k_grid(target, win.k_points)?;
    let desired = desired_amplitude(target, &k_grid)?;
    let generated = generated_amplitude_from(&plan, target, &k_grid)?;
    let fid = fidelity(&generated, &desired)?;
    let eta = SpectralTail::new(target)?.fraction_above_shift(plan.omega_c)?;
    let probability = if with_probability && plan.mollifier.is_some() {
        Some(success_probability(&plan, target, win.coupling, &k_grid)?)
    } else {
        None
    };
    Ok(PipelineResult { plan, desired_window: eps_des, k_grid, desired, generated, fidelity: fid, eta, probability })
}
