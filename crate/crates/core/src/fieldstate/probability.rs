use crate::error::{invalid, Result};
use crate::numerics::grid::Grid1D;
use crate::numerics::scaled::log_sum_exp;
use crate::superosc::{log_norm_sq, NormOptions, WindowPlan};

use super::amplitude::measure_prefactor;
use super::target::TargetState;

/// λ²N₁ above this is reported as outside first-order validity.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityReport {
    /// λ² N₁ for the window scaled to unit L² norm; may underflow to 0.
    pub value: f64,
    pub ln_value: f64,
    /// ln of Σ μ_i h_i² |ε̃_i|² for the unscaled window.
    pub ln_band_weight: f64,
    /// ln ‖ε‖² of the unscaled window.
    pub ln_norm_sq: f64,
    /// Set when λ²N₁ exceeds `PERTURBATIVE_LIMIT`.
    pub beyond_perturbative: bool,
}

/// Post-selection probability of the detector excitation. The window must
/// carry a mollifier, otherwise its L² norm is infinite.
pub fn success_probability(
    plan: &WindowPlan,
    target: &TargetState,
    coupling: f64,
    k_grid: &Grid1D,
) -> Result<ProbabilityReport> {
    success_probability_with(plan, target, coupling, k_grid, &NormOptions::default())
}

pub fn success_probability_with(
    plan: &WindowPlan,
    target: &TargetState,
    coupling: f64,
    k_grid: &Grid1D,
    norm: &NormOptions,
) -> Result<ProbabilityReport> {
    if !coupling.is_finite() {
        return Err(invalid("coupling must be finite"));
    }
    if k_grid.start() < 0.0 {
        return Err(invalid("k grid must start at k >= 0"));
    }
    let m = &target.model;
    let d = target.dimension;
    let ks = k_grid.points();
    let mut shifts = Vec::with_capacity(ks.len());
    let mut lw = Vec::with_capacity(ks.len());
    for &k in &ks {
        shifts.push(m.shift_at_wavenumber(k)?);
        let h = m.mode_weight(m.omega(k)?)?;
        lw.push((measure_prefactor(d) * k.powi(d as i32 - 1) * k_grid.step() * h * h).ln());
    }
    let spec = plan.spectrum_values(&shifts)?;
    let logs: Vec<f64> = spec.iter().zip(&lw).map(|(s, w)| w + s.norm_sqr().ln()).collect();
    let ln_band_weight = log_sum_exp(logs);
    let ln_norm_sq = log_norm_sq(plan, norm)?;
    let ln_value = 2.0 * coupling.abs().ln() + ln_band_weight - ln_norm_sq;
    let value = ln_value.exp();
    Ok(ProbabilityReport {
        value,
        ln_value,
        ln_band_weight,
        ln_norm_sq,
        beyond_perturbative: value > PERTURBATIVE_LIMIT,
    })
}
