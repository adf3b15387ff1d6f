use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{DispersionKind, DispersionModel, WeightRule};
use crate::error::{invalid, Result};
use crate::numerics::fourier::cosine_transform;
use crate::numerics::grid::{DomainKind, Grid1D, SampledFunction};
use crate::superosc::WindowPlan;

use super::amplitude::Spectrum;
use super::profile::Profile;

/// A spherically symmetric single excitation around one detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetState {
    pub dimension: u32,
    pub profile: Profile,
    /// Detector gap Ω. Only fixes the physical carrier; every spectrum here is
    /// indexed by ω′ = ω(k) - ω(0).
    pub gap: f64,
    pub model: DispersionModel,
}

impl TargetState {
    pub fn new(dimension: u32, profile: Profile, gap: f64, model: DispersionModel) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(invalid(format!("dimension must be 1, 2 or 3, got {dimension}")));
        }
        if !(gap >= 0.0) || !gap.is_finite() {
            return Err(invalid(format!("detector gap must be finite and >= 0, got {gap}")));
        }
        profile.validate()?;
        Ok(Self { dimension, profile, gap, model })
    }

    /// F̃(k).
    pub fn transform_at(&self, k: f64) -> f64 {
        self.profile.transform_best(self.dimension, k)
    }

    /// Desired spectrum at shifted frequency ω′.
    pub fn desired_spectrum_at(&self, shift: f64) -> Result<f64> {
        Ok(self.transform_at(self.model.wavenumber_at_shift(shift)?))
    }

    /// True when h(ω_k)²k^{d-1} is not integrable at k = 0, so the desired
    /// state has no finite norm.
    pub fn infrared_divergent(&self) -> bool {
        if self.model.weight_rule() != WeightRule::InverseSqrtTwoOmega || self.model.omega_floor() > 0.0 {
            return false;
        }
        let power = match self.model.kind() {
            DispersionKind::RelativisticMassless => 1,
            _ => 2,
        };
        self.dimension <= power && self.transform_at(0.0) != 0.0
    }
}

/// ε̃_des(ω′) = F̃(k(ω′)) sampled on a shifted-frequency grid.
pub fn radial_target_transform(target: &TargetState, freq_grid: &Grid1D) -> Result<SampledFunction> {
    let ks = freq_grid
        .points()
        .into_iter()
        .map(|w| target.model.wavenumber_at_shift(w))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Complex64> = ks.par_iter().map(|&k| Complex64::new(target.transform_at(k), 0.0)).collect();
    SampledFunction::new(*freq_grid, values, DomainKind::AngularFrequency)
}

/// ε_des(t′), the even window whose ω′ ≥ 0 spectrum is ε̃_des. The
/// frequency grid must start at 0 and reach far enough for ε̃_des to decay.
/// For the massless line the answer is F(|t′|) and is returned exactly.
pub fn desired_time_window(
    target: &TargetState,
    freq_grid: &Grid1D,
    time_grid: &Grid1D,
) -> Result<SampledFunction> {
    if target.dimension == 1 && target.model.kind() == DispersionKind::RelativisticMassless {
        return SampledFunction::from_fn(*time_grid, DomainKind::Time, |t| {
            Complex64::new(target.profile.value(t.abs()), 0.0)
        });
    }
    let spec = radial_target_transform(target, freq_grid)?;
    cosine_transform(&spec, time_grid)
}

/// The desired spectrum viewed as a function of ω′.
#[derive(Debug, Clone, Copy)]
pub struct TargetSpectrum<'a>(pub &'a TargetState);

impl Spectrum for TargetSpectrum<'_> {
    fn spectrum_at(&self, shift: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.0.desired_spectrum_at(shift)?, 0.0))
    }
}

impl Spectrum for SampledFunction {
    fn spectrum_at(&self, shift: f64) -> Result<Complex64> {
        let g = self.grid();
        let slack = 1e-9 * g.step();
        if shift < g.start() - slack || shift > g.end() + slack {
            return Err(invalid(format!(
                "spectrum sampled on [{}, {}] does not cover omega' = {shift}",
                g.start(),
                g.end()
            )));
        }
        Ok(self.interpolate(shift.clamp(g.start(), g.end())))
    }
}

impl Spectrum for WindowPlan {
    fn spectrum_at(&self, shift: f64) -> Result<Complex64> {
        WindowPlan::spectrum_at(self, shift)
    }

    fn spectrum_values(&self, shifts: &[f64]) -> Result<Vec<Complex64>> {
        WindowPlan::spectrum_values(self, shifts)
    }
}
