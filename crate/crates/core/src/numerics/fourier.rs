//! Direct-summation Fourier transforms between arbitrary uniform grids.
//! Convention: f̃(ω) = ∫ f(t) e^{iωt} dt.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::numerics::grid::{DomainKind, Grid1D, SampledFunction};

fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if i == 0 || i == n - 1 {
        0.5 * h
    } else {
        h
    }
}

fn direct(f: &SampledFunction, out: &Grid1D, sign: f64, scale: f64) -> Vec<Complex64> {
    let g = f.grid();
    let n = g.count();
    let xs = g.points();
    let vals = f.values();
    out.points()
        .par_iter()
        .map(|&w| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let v = vals[i];
                if v.re == 0.0 && v.im == 0.0 {
                    continue;
                }
                let ph = Complex64::from_polar(1.0, sign * w * xs[i]);
                acc += v * ph * trapezoid_weight(i, n, g.step());
            }
            acc * scale
        })
        .collect()
}

/// ∫ f(t) e^{iωt} dt on `freq_grid`, trapezoid weights on the time grid.
pub fn dft_time_to_freq(f: &SampledFunction, freq_grid: &Grid1D) -> Result<SampledFunction> {
    if f.kind() != DomainKind::Time {
        return Err(invalid("dft_time_to_freq expects a time-domain function"));
    }
    SampledFunction::new(*freq_grid, direct(f, freq_grid, 1.0, 1.0), DomainKind::AngularFrequency)
}

/// (1/2π) ∫ f̃(ω) e^{-iωt} dω on `time_grid`.
pub fn dft_freq_to_time(f: &SampledFunction, time_grid: &Grid1D) -> Result<SampledFunction> {
    if f.kind() != DomainKind::AngularFrequency {
        return Err(invalid("dft_freq_to_time expects a frequency-domain function"));
    }
    SampledFunction::new(*time_grid, direct(f, time_grid, -1.0, 0.5 / PI), DomainKind::Time)
}

/// (1/π) ∫₀^∞ f̃(ω) cos(ωt) dω: the even time function whose transform is f̃
/// on ω ≥ 0. The input grid must start at 0.
pub fn cosine_transform(f: &SampledFunction, time_grid: &Grid1D) -> Result<SampledFunction> {
    if f.kind() != DomainKind::AngularFrequency {
        return Err(invalid("cosine_transform expects a frequency-domain function"));
    }
    if f.grid().start().abs() > 1e-12 * f.grid().step() {
        return Err(invalid("cosine_transform needs a frequency grid starting at 0"));
    }
    let g = *f.grid();
    let n = g.count();
    let ws = g.points();
    let vals = f.values().to_vec();
    let out: Vec<Complex64> = time_grid
        .points()
        .par_iter()
        .map(|&t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += vals[i] * ((ws[i] * t).cos() * trapezoid_weight(i, n, g.step()));
            }
            acc / PI
        })
        .collect();
    SampledFunction::new(*time_grid, out, DomainKind::Time)
}
