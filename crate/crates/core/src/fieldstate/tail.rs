use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::numerics::roots::brent;

use super::amplitude::measure_prefactor;
use super::profile::gl16;
use super::target::TargetState;

/// Smallest excluded fraction `tail_to_cutoff` will resolve.
const FRACTION_FLOOR: f64 = 1e-20;

/// Cumulative distribution of the desired state's weight over k, built once
/// and queried many times. Tails are summed from the top so small fractions
/// keep full relative precision.
#[derive(Debug, Clone)]
pub struct SpectralTail {
    target: TargetState,
    knots: Vec<f64>,
    /// weight strictly below knot j
    lower: Vec<f64>,
    /// weight above knot j
    upper: Vec<f64>,
    total: f64,
}

impl SpectralTail {
    pub fn new(target: &TargetState) -> Result<Self> {
        if target.infrared_divergent() {
            return Err(invalid("desired state is not normalizable (infrared divergence at k = 0)"));
        }
        let w = target.profile.width();
        let extent = target.profile.spectral_extent();
        let step = 0.25 / w;
        let linear_end = 16.0 / w;
        let mut knots = vec![0.0];
        let mut pieces: Vec<f64> = Vec::new();
        let next = |k: f64| if k < linear_end - 1e-12 * linear_end { k + step } else { k * 1.15 };
        let mut cum = 0.0;
        'outer: loop {
            let mut batch = Vec::with_capacity(64);
            let mut k = *knots.last().unwrap();
            for _ in 0..64 {
                let k1 = next(k).min(extent);
                batch.push((k, k1));
                k = k1;
                if k1 >= extent {
                    break;
                }
            }
            let vals: Vec<f64> =
                batch.par_iter().map(|&(a, b)| gl16().integrate(|k| density(target, k), a, b)).collect();
            for (&(_, b), v) in batch.iter().zip(vals) {
                if !v.is_finite() {
                    return Err(Error::NonConvergence("non-finite spectral weight".into()));
                }
                knots.push(b);
                pieces.push(v);
                cum += v;
                if b >= extent || (b >= 4.0 / w && v <= 1e-24 * cum) {
                    break 'outer;
                }
                if b > 1e12 / w {
                    return Err(Error::NonConvergence(
                        "spectral weight does not decay fast enough to be truncated".into(),
                    ));
                }
            }
        }
        if !(cum > 0.0) {
            return Err(invalid("desired state has zero norm"));
        }
        let n = knots.len();
        let mut lower = vec![0.0; n];
        for i in 1..n {
            lower[i] = lower[i - 1] + pieces[i - 1];
        }
        let mut upper = vec![0.0; n];
        for i in (0..n - 1).rev() {
            upper[i] = upper[i + 1] + pieces[i];
        }
        let total = upper[0];
        Ok(Self { target: *target, knots, lower, upper, total })
    }

    /// Unnormalized total weight ∫ μ(k) h² |F̃|².
    pub fn total(&self) -> f64 {
        self.total
    }

    fn interval(&self, k: f64) -> usize {
        self.knots.partition_point(|&x| x <= k).saturating_sub(1).min(self.knots.len() - 2)
    }

    /// Fraction of weight at wavenumbers above k.
    pub fn fraction_above(&self, k: f64) -> f64 {
        if k <= 0.0 {
            return 1.0;
        }
        if k >= *self.knots.last().unwrap() {
            return 0.0;
        }
        let j = self.interval(k);
        let part = gl16().integrate(|q| density(&self.target, q), k, self.knots[j + 1]);
        ((self.upper[j + 1] + part) / self.total).clamp(0.0, 1.0)
    }

    /// Fraction of weight at wavenumbers below k.
    pub fn fraction_below(&self, k: f64) -> f64 {
        if k <= 0.0 {
            return 0.0;
        }
        if k >= *self.knots.last().unwrap() {
            return 1.0;
        }
        let j = self.interval(k);
        let part = gl16().integrate(|q| density(&self.target, q), self.knots[j], k);
        ((self.lower[j] + part) / self.total).clamp(0.0, 1.0)
    }

    /// Weight outside [lo, hi].
    pub fn fraction_outside(&self, lo: f64, hi: f64) -> f64 {
        self.fraction_below(lo) + self.fraction_above(hi)
    }

    /// Fraction of weight in modes with ω′ above `omega_c`.
    pub fn fraction_above_shift(&self, omega_c: f64) -> Result<f64> {
        if !(omega_c > 0.0) {
            return Ok(1.0);
        }
        let m = &self.target.model;
        if omega_c >= m.omega_sup() - m.omega_floor() {
            return Ok(0.0);
        }
        Ok(self.fraction_above(m.wavenumber_at_shift(omega_c)?))
    }

    /// Wavenumber above which exactly `eta` of the weight sits.
    pub fn wavenumber_for_fraction(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(invalid(format!("excluded fraction must lie in (0, 1), got {eta}")));
        }
        if eta < FRACTION_FLOOR {
            return Err(invalid(format!("excluded fraction {eta:e} is below the numerical floor {FRACTION_FLOOR:e}")));
        }
        let j = self.upper.partition_point(|&u| u / self.total >= eta);
        // upper[j-1]/total >= eta > upper[j]/total
        let (a, b) = (self.knots[j - 1], self.knots[j]);
        brent(|k| self.fraction_above(k) / eta - 1.0, a, b, 1e-15 * b)
    }
}

/// μ(k) h(ω_k)² F̃(k)².
fn density(target: &TargetState, k: f64) -> f64 {
    let d = target.dimension;
    let m = &target.model;
    let h = m.omega(k).and_then(|w| m.mode_weight(w)).unwrap_or(0.0);
    let f = target.transform_at(k);
    measure_prefactor(d) * k.powi(d as i32 - 1) * h * h * f * f
}

/// η(ω_c): share of the desired state's weight carried by modes with
/// ω′ = ω_k - ω(0) above `omega_c`.
pub fn infidelity_tail(target: &TargetState, omega_c: f64) -> Result<f64> {
    SpectralTail::new(target)?.fraction_above_shift(omega_c)
}

/// The ω_c at which `infidelity_tail` equals `eta`.
pub fn tail_to_cutoff(target: &TargetState, eta: f64) -> Result<f64> {
    let k = SpectralTail::new(target)?.wavenumber_for_fraction(eta)?;
    target.model.shift_at_wavenumber(k)
}
