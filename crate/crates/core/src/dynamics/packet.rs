use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::DispersionModel;
use crate::error::{invalid, Error, Result};
use crate::fieldstate::ModeAmplitude;
use crate::numerics::fit::linear_fit;
use crate::numerics::grid::Grid1D;

use super::angular_average;

/// State generated on the line by the window ε(t) = δ(t + t0): amplitude
/// h(ω_k) e^{-iω_k t0}, the same on the left- and right-moving branch.
pub fn delta_window_state(model: &DispersionModel, t0: f64, k_grid: &Grid1D) -> Result<ModeAmplitude> {
    packet(model, t0, k_grid, |_| 1.0)
}

/// A delta-window state seen through a Gaussian spectral filter of width
/// `k_width` around `k_center`, so it propagates as a narrowband packet.
pub fn narrowband_state(
    model: &DispersionModel,
    t0: f64,
    k_center: f64,
    k_width: f64,
    k_grid: &Grid1D,
) -> Result<ModeAmplitude> {
    if !(k_width > 0.0) || !(k_center >= 0.0) {
        return Err(invalid("narrowband packet needs k_center >= 0 and k_width > 0"));
    }
    packet(model, t0, k_grid, |k| (-0.5 * ((k - k_center) / k_width).powi(2)).exp())
}

fn packet(model: &DispersionModel, t0: f64, k_grid: &Grid1D, envelope: impl Fn(f64) -> f64) -> Result<ModeAmplitude> {
    if !t0.is_finite() {
        return Err(invalid("t0 must be finite"));
    }
    let vals = k_grid
        .points()
        .into_iter()
        .map(|k| {
            let w = model.omega(k)?;
            Ok(Complex64::from_polar(model.mode_weight(w)? * envelope(k), -w * t0))
        })
        .collect::<Result<Vec<_>>>()?;
    ModeAmplitude::new(*k_grid, vals, 1, *model)
}

/// ⟨0|φ(x, t)|state⟩ = ∫ dᵈk/(2π)ᵈ h(ω_k) ψ(k) e^{ik·x - iω_k t}, summed on
/// the state's grid. `x` enters through |x| only. Fails when the phase
/// advances by more than π per grid cell, where the sum would alias.
pub fn probe_amplitude(state: &ModeAmplitude, x: f64, t: f64) -> Result<Complex64> {
    let g = state.k_grid();
    let model = state.model();
    let d = state.dimension();
    let r = x.abs();
    let v_top = model.group_velocity(g.end())?.max(model.group_velocity(g.start())?);
    let advance = g.step() * (r + v_top * t.abs());
    if advance > PI {
        return Err(Error::Precision(format!(
            "probe at x = {x}, t = {t} is unresolved on the k grid (phase step {advance:.3} rad per cell)"
        )));
    }
    let pref = g.step() / (2.0 * PI).powi(d as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, a) in state.values().iter().enumerate() {
        let k = g.x(i);
        let w = model.omega(k)?;
        let h = model.mode_weight(w)?;
        let ang = angular_average(d, k * r) * k.powi(d as i32 - 1);
        acc += a * Complex64::from_polar(h * ang, -w * t);
    }
    Ok(acc * pref)
}

/// Peak positions of |probe| over time and the fitted velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrack {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocity: f64,
    pub r_squared: f64,
}

/// Follows the maximum of |probe(x, t)| over `x_grid` at each time, refining
/// each maximum by a parabola through the largest sample and its neighbours.
pub fn track_peak(state: &ModeAmplitude, x_grid: &Grid1D, times: &[f64]) -> Result<PeakTrack> {
    if times.len() < 2 {
        return Err(invalid("peak tracking needs at least two times"));
    }
    let xs = x_grid.points();
    let mut positions = Vec::with_capacity(times.len());
    for &t in times {
        let mags = xs
            .par_iter()
            .map(|&x| probe_amplitude(state, x, t).map(|v| v.norm()))
            .collect::<Result<Vec<f64>>>()?;
        let (i, _) = mags
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        if i == 0 || i + 1 == mags.len() {
            return Err(invalid(format!("peak at t = {t} sits on the edge of the x window")));
        }
        let (a, b, c) = (mags[i - 1], mags[i], mags[i + 1]);
        let denom = a - 2.0 * b + c;
        let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
        positions.push(xs[i] + shift * x_grid.step());
    }
    let fit = linear_fit(times, &positions)?;
    Ok(PeakTrack { times: times.to_vec(), positions, velocity: fit.slope, r_squared: fit.r_squared })
}
