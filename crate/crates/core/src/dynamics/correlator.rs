use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{DispersionKind, DispersionModel, WeightRule};
use crate::error::{invalid, Result};
use crate::fieldstate::profile_gl16;
use crate::numerics::extrapolation::neville_to_zero;

use super::angular_average;

/// Vacuum two-point function ⟨0|φ(x, t) φ(x′, t′)|0⟩ at scalar separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorQuery {
    pub model: DispersionModel,
    pub dimension: u32,
    /// |x - x′|
    pub separation: f64,
    /// t - t′
    pub dt: f64,
}

impl CorrelatorQuery {
    pub fn new(model: DispersionModel, dimension: u32, separation: f64, dt: f64) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(invalid(format!("dimension must be 1, 2 or 3, got {dimension}")));
        }
        if !(separation >= 0.0) || !separation.is_finite() {
            return Err(invalid(format!("separation must be finite and >= 0, got {separation}")));
        }
        if !dt.is_finite() {
            return Err(invalid(format!("time difference must be finite, got {dt}")));
        }
        Ok(Self { model, dimension, separation, dt })
    }

    fn infrared_divergent(&self) -> bool {
        if self.model.weight_rule() != WeightRule::InverseSqrtTwoOmega || self.model.omega_floor() > 0.0 {
            return false;
        }
        let power = if self.model.kind() == DispersionKind::RelativisticMassless { 1 } else { 2 };
        self.dimension <= power
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorValue {
    pub value: Complex64,
    /// Spread of the two highest extrapolation orders.
    pub error: f64,
    /// Set when the regulated values do not settle as the regulator is
    /// removed: the correlator is a distribution at this point.
    pub distributional: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorOptions {
    /// Relative agreement required between the last two extrapolation orders.
    pub tol: f64,
    /// The regulated integrand is cut where e^{-εk} drops below e^{-cutoff}.
    pub cutoff: f64,
}

impl Default for CorrelatorOptions {
    fn default() -> Self {
        Self { tol: 1e-8, cutoff: 40.0 }
    }
}

pub fn correlator(q: &CorrelatorQuery) -> Result<CorrelatorValue> {
    correlator_with(q, &CorrelatorOptions::default())
}

/// ∫ dᵈk/(2π)ᵈ h(ω_k)² e^{ik·Δx - iω_k dt}, regulated by e^{-εk} and
/// extrapolated to ε = 0 with a Neville table.
///
/// Schrödinger kinematics at dt ≠ 0 give an entire function of ε, so an
/// evenly spaced ladder on the Gaussian scale sqrt(|dt|/2m) is used. Every
/// other case is analytic within |ε| < distance to the nearest light-cone or
/// coincidence singularity, and a geometric ladder starting at half that
/// distance is used.
pub fn correlator_with(q: &CorrelatorQuery, opts: &CorrelatorOptions) -> Result<CorrelatorValue> {
    if q.infrared_divergent() {
        return Err(invalid(format!(
            "{} correlator with 1/sqrt(2 omega) weight diverges at k = 0 in d = {}",
            q.model.kind().name(),
            q.dimension
        )));
    }
    let r = q.separation;
    let ladder: Vec<f64> = if q.model.kind() == DispersionKind::Schroedinger && q.dt != 0.0 {
        let top = (q.dt.abs() / (2.0 * q.model.mass())).sqrt();
        (1..=16).rev().map(|j| top * j as f64 / 16.0).collect()
    } else {
        let gap = match q.model.kind() {
            DispersionKind::RelativisticMassive | DispersionKind::RelativisticMassless => (r - q.dt.abs()).abs(),
            _ => r,
        };
        let top = if gap > 0.0 { 0.5 * gap } else { 0.5 };
        (0..9).map(|j| top / 2f64.powi(j)).collect()
    };
    let samples: Vec<Complex64> = ladder.par_iter().map(|&eps| regulated(q, eps, opts.cutoff)).collect::<Result<_>>()?;
    let est = neville_to_zero(&ladder, &samples)?;
    let value = est[est.len() - 1];
    let error = (value - est[est.len() - 2]).norm();
    // a limit that vanishes (the equal-time delta away from coincidence) is
    // judged against the size of the regulated samples instead; a genuine
    // distribution makes the orders disagree at the scale of the samples
    let scale = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let converged = error <= opts.tol * value.norm() || error <= 1e-6 * scale;
    Ok(CorrelatorValue { value, error, distributional: !converged })
}

/// The e^{-εk}-regulated radial integral, by Gauss-Legendre panels sized to
/// the local phase rate r + |dt| v_g(k).
fn regulated(q: &CorrelatorQuery, eps: f64, cutoff: f64) -> Result<Complex64> {
    let m = &q.model;
    let d = q.dimension;
    let r = q.separation;
    let adt = q.dt.abs();
    let k_max = cutoff / eps;
    let k_feature = match m.kind() {
        DispersionKind::RelativisticMassive | DispersionKind::Schroedinger => m.mass(),
        _ => 1.0,
    };
    let gl = profile_gl16();
    let integrand = |k: f64| -> Complex64 {
        let w = m.omega(k).unwrap_or(0.0);
        let h = m.mode_weight(w).unwrap_or(0.0);
        let amp = h * h * k.powi(d as i32 - 1) * angular_average(d, k * r) * (-eps * k).exp();
        Complex64::from_polar(amp, -w * q.dt)
    };
    // compensated sum: the panels alternate in sign and far outweigh the result
    let mut acc = Complex64::new(0.0, 0.0);
    let mut carry = Complex64::new(0.0, 0.0);
    let mut a = 0.0;
    while a < k_max {
        let rate = r + adt * m.group_velocity(a)?;
        let mut width = (0.5 / eps).min(0.5 * a.max(k_feature));
        if rate > 0.0 {
            width = width.min(PI / rate);
        }
        // later panels only get faster for convex ω; re-check at the far end
        let b = (a + width).min(k_max);
        let rate_b = r + adt * m.group_velocity(b)?;
        let b = if rate_b > 0.0 { (a + width.min(PI / rate_b)).min(k_max) } else { b };
        let part = gl.integrate(integrand, a, b);
        let next = acc + part;
        carry += Complex64::new(neumaier(acc.re, part.re, next.re), neumaier(acc.im, part.im, next.im));
        acc = next;
        a = b;
    }
    Ok((acc + carry) / (2.0 * PI).powi(d as i32))
}

fn neumaier(sum: f64, x: f64, next: f64) -> f64 {
    if sum.abs() >= x.abs() {
        (sum - next) + x
    } else {
        (x - next) + sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fit::least_squares;

    /// m K₁(m r) / (4π² r) via the integral K₁(x) = ∫₀^∞ e^{-x cosh u} cosh u du.
    fn massive_oracle(m: f64, r: f64) -> f64 {
        let gl = profile_gl16();
        let x = m * r;
        let k1 = gl.integrate_panels(|u: f64| (-x * u.cosh()).exp() * u.cosh(), 0.0, 8.0, 400);
        m * k1 / (4.0 * PI * PI * r)
    }

    fn schroedinger_oracle(m: f64, d: u32, r: f64, dt: f64) -> Complex64 {
        let scale = (m / (2.0 * PI * dt.abs())).powf(0.5 * d as f64);
        let phase = -dt.signum() * d as f64 * PI / 4.0 + m * r * r / (2.0 * dt);
        Complex64::from_polar(scale, phase)
    }

    #[test]
    fn massive_equal_time_matches_bessel_k() {
        let m = DispersionModel::relativistic_massive(1.0, WeightRule::InverseSqrtTwoOmega).unwrap();
        for &r in &[0.5, 2.0, 5.0, 10.0] {
            let c = correlator(&CorrelatorQuery::new(m, 3, r, 0.0).unwrap()).unwrap();
            let o = massive_oracle(1.0, r);
            assert!(!c.distributional);
            assert!((c.value.re - o).abs() < 1e-6 * o && c.value.im.abs() < 1e-6 * o, "r = {r}: {} vs {o}", c.value);
        }
    }

    #[test]
    fn massive_decay_rate() {
        let mass = 1.3;
        let m = DispersionModel::relativistic_massive(mass, WeightRule::InverseSqrtTwoOmega).unwrap();
        let (mut rows, mut ys) = (vec![], vec![]);
        for i in 0..11 {
            let r = (5.0 + i as f64) / mass;
            let c = correlator(&CorrelatorQuery::new(m, 3, r, 0.0).unwrap()).unwrap();
            assert!(c.value.norm() > 0.0);
            rows.push(vec![1.0, r, r.ln()]);
            ys.push(c.value.norm().ln());
        }
        let beta = least_squares(&rows, &ys).unwrap();
        assert!((-beta[1] / mass - 1.0).abs() < 0.05, "{beta:?}");
    }

    #[test]
    fn schroedinger_matches_free_propagator() {
        let mass = 0.7;
        let m = DispersionModel::schroedinger(mass, WeightRule::Unit).unwrap();
        for d in 1..=3 {
            for &(r, dt) in &[(0.0, 0.5), (0.8, 1.0), (2.0, -0.6), (3.0, 2.5)] {
                let c = correlator(&CorrelatorQuery::new(m, d, r, dt).unwrap()).unwrap();
                let o = schroedinger_oracle(mass, d, r, dt);
                assert!(!c.distributional);
                assert!((c.value - o).norm() < 1e-6 * o.norm(), "d = {d} r = {r} dt = {dt}: {} vs {o}", c.value);
            }
        }
    }

    #[test]
    fn hermiticity() {
        let m = DispersionModel::relativistic_massive(1.0, WeightRule::InverseSqrtTwoOmega).unwrap();
        let a = correlator(&CorrelatorQuery::new(m, 3, 2.0, 0.7).unwrap()).unwrap();
        let b = correlator(&CorrelatorQuery::new(m, 3, 2.0, -0.7).unwrap()).unwrap();
        assert!((a.value - b.value.conj()).norm() < 1e-14 * a.value.norm());
    }

    #[test]
    fn unit_weight_equal_time_is_a_delta() {
        let m = DispersionModel::schroedinger(1.0, WeightRule::Unit).unwrap();
        for d in 1..=3 {
            let off = correlator(&CorrelatorQuery::new(m, d, 1.0, 0.0).unwrap()).unwrap();
            assert!(!off.distributional && off.value.norm() < 1e-8, "d = {d}: {off:?}");
            let on = correlator(&CorrelatorQuery::new(m, d, 0.0, 0.0).unwrap()).unwrap();
            assert!(on.distributional, "d = {d}: {on:?}");
        }
    }

    #[test]
    fn infrared_divergence_rejected() {
        let m = DispersionModel::relativistic_massless(WeightRule::InverseSqrtTwoOmega).unwrap();
        assert!(correlator(&CorrelatorQuery::new(m, 1, 1.0, 0.0).unwrap()).is_err());
        assert!(CorrelatorQuery::new(m, 4, 1.0, 0.0).is_err());
        assert!(CorrelatorQuery::new(m, 3, -1.0, 0.0).is_err());
    }
}
