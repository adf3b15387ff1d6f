use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::numerics::fit::linear_fit;
use crate::superosc::pair::PairBasis;

/// Operational band edge of a pair and the phase slope fitted below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdge {
    pub omega_c: f64,
    pub fitted_frequency: f64,
}

/// d(phase)/dω by central differences of the pair spectrum.
pub fn instantaneous_frequency(pair: &PairBasis, omega: f64, step: f64) -> f64 {
    let lo = (omega - step).max(0.0);
    let hi = omega + step;
    (pair.eval(hi) / pair.eval(lo)).arg() / (hi - lo)
}

/// Largest ω (on a scan with `samples` points up to `omega_max`) below which
/// the modulus stays within `tol` of the amplitude and the local frequency
/// within `tol` (relative) of t′.
pub fn operational_band_edge(pair: &PairBasis, tol: f64, omega_max: f64, samples: usize) -> Result<BandEdge> {
    if !(omega_max > 0.0) || samples < 8 {
        return Err(invalid("band scan needs omega_max > 0 and >= 8 samples"));
    }
    let amp = pair.plus().amplitude;
    let tp = pair.t_prime();
    let dw = omega_max / samples as f64;
    let mut edge = 0.0;
    for i in 1..=samples {
        let w = dw * i as f64;
        let flat = (pair.eval(w).norm() / amp - 1.0).abs() <= tol;
        let f = instantaneous_frequency(pair, w, 0.5 * dw);
        let linear = if tp == 0.0 { f.abs() <= tol } else { (f / tp - 1.0).abs() <= tol };
        if !(flat && linear) {
            break;
        }
        edge = w;
    }
    if edge == 0.0 {
        return Err(invalid("pair is not flat even at the first scan point"));
    }
    Ok(BandEdge { omega_c: edge, fitted_frequency: phase_slope(pair, edge, 64)? })
}

/// Slope of the unwrapped phase over [0, omega_c] by least squares.
pub fn phase_slope(pair: &PairBasis, omega_c: f64, samples: usize) -> Result<f64> {
    let mut xs = Vec::with_capacity(samples + 1);
    let mut ys = Vec::with_capacity(samples + 1);
    let mut prev: Option<Complex64> = None;
    let mut phase = 0.0;
    for i in 0..=samples {
        let w = omega_c * i as f64 / samples as f64;
        let z = pair.eval(w);
        phase += prev.map_or(z.arg(), |p| (z / p).arg());
        prev = Some(z);
        xs.push(w);
        ys.push(phase);
    }
    Ok(linear_fit(&xs, &ys)?.slope)
}
