use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::numerics::grid::{DomainKind, SampledFunction};

/// Polynomial bump (1 - (2t/τ + 1)²)^n on [-τ, 0], unit integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    pub order: u32,
    pub tau: f64,
}

impl Mollifier {
    pub fn new(order: u32, tau: f64) -> Result<Self> {
        if order < 4 {
            return Err(invalid(format!("mollifier order must be >= 4, got {order}")));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(invalid(format!("mollifier width must be positive, got {tau}")));
        }
        Ok(Self { order, tau })
    }

    /// Width check against the window support.
    pub fn validate_for(&self, t0: f64) -> Result<()> {
        if !(self.tau < t0 / 10.0) {
            return Err(invalid(format!("mollifier width {} must be below t0/10 = {}", self.tau, t0 / 10.0)));
        }
        Ok(())
    }

    /// Bump density at time t.
    pub fn density(&self, t: f64) -> f64 {
        let s = 2.0 * t / self.tau + 1.0;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        (1.0 - s * s).powi(self.order as i32) * (2.0 / self.tau) / self.norm_const()
    }

    /// ∫_{-1}^{1} (1 - s²)^n ds = 2^{2n+1} (n!)² / (2n+1)!.
    fn norm_const(&self) -> f64 {
        let mut v = 2.0;
        for k in 1..=self.order {
            v *= (2 * k) as f64 / (2 * k + 1) as f64;
        }
        v
    }

    /// Fourier multiplier e^{-iωτ/2} φ_n(ωτ/2).
    pub fn multiplier(&self, omega: f64) -> Complex64 {
        let x = 0.5 * omega * self.tau;
        Complex64::from_polar(shape(self.order, x), -x)
    }

    /// |x| beyond which |φ_n(x)|² integrates to below `rel` of a unit band.
    pub(crate) fn tail_cutoff(&self, rel: f64) -> f64 {
        let n = self.order as f64;
        // |φ_n| ≤ (2n+1)!! / |x|^{n+1}
        let mut ln_df = 0.0;
        for k in 0..=self.order {
            ln_df += ((2 * k + 1) as f64).ln();
        }
        let p = 2.0 * n + 1.0;
        ((2.0 * ln_df - rel.ln() - p.ln()) / p).exp().max(2.0 * n)
    }
}

/// φ_n(x) = (2n+1)!! j_n(x) / xⁿ, the normalised transform of (1 - s²)ⁿ.
pub(crate) fn shape(n: u32, x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    if x <= n.max(1) as f64 {
        // Σ_k (-x²/2)^k / (k! Π_{j=1..k} (2n+2j+1))
        let q = -0.5 * x * x;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..400 {
            term *= q / (k as f64 * (2 * n + 2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        // upward recurrence is stable once x > n
        let (s, c) = x.sin_cos();
        let mut jm = s / x;
        if n == 0 {
            return jm;
        }
        let mut j = s / (x * x) - c / x;
        let mut fac = 3.0 / x;
        for k in 1..n {
            let next = (2 * k + 1) as f64 / x * j - jm;
            jm = j;
            j = next;
            fac *= (2 * k + 3) as f64 / x;
        }
        j * fac
    }
}

/// Multiply a spectrum by the bump's Fourier transform.
pub fn mollify(spectrum: &SampledFunction, order_n: u32, tau: f64, t0: f64) -> Result<SampledFunction> {
    if spectrum.kind() != DomainKind::AngularFrequency {
        return Err(invalid("mollify expects a frequency-domain function"));
    }
    let m = Mollifier::new(order_n, tau)?;
    m.validate_for(t0)?;
    let g = *spectrum.grid();
    let vals = spectrum.values().iter().enumerate().map(|(i, v)| v * m.multiplier(g.x(i))).collect();
    SampledFunction::new(g, vals, DomainKind::AngularFrequency)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grid1D;
    use crate::numerics::quadrature::GaussLegendre;

    fn shape_by_quadrature(n: u32, x: f64) -> f64 {
        let gl = GaussLegendre::new(32);
        let f = |s: f64| (1.0 - s * s).powi(n as i32);
        gl.integrate_panels(|s| f(s) * (x * s).cos(), -1.0, 1.0, 64) / gl.integrate_panels(f, -1.0, 1.0, 64)
    }

    #[test]
    fn shape_matches_quadrature() {
        for n in [4, 8, 12, 20] {
            for &x in &[0.0, 0.3, 2.5, 7.9, 8.1, 15.0, 40.0, 120.0] {
                let a = shape(n, x);
                let b = shape_by_quadrature(n, x);
                assert!((a - b).abs() < 1e-12, "n = {n}, x = {x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn unit_at_origin_and_narrow_limit() {
        let m = Mollifier::new(8, 0.05).unwrap();
        assert_eq!(m.multiplier(0.0), Complex64::new(1.0, 0.0));
        // large n at fixed small ωτ: modulus tends to one
        let w = 2.0;
        let mut prev = 0.0;
        for n in [4, 16, 64, 256] {
            let v = Mollifier::new(n, 0.5).unwrap().multiplier(w).norm();
            assert!(v > prev);
            prev = v;
        }
        assert!(1.0 - prev < 1e-3);
    }

    #[test]
    fn tail_ratio_at_hundred_over_t0() {
        // n = 8, τ = t₀/20 at ω = 100/t₀: x = 2.5, a mild suppression
        let t0 = 1.0;
        let m = Mollifier::new(8, t0 / 20.0).unwrap();
        let r = m.multiplier(100.0 / t0).norm();
        assert!((r - shape_by_quadrature(8, 2.5)).abs() < 1e-13);
        assert!(r > 0.8 && r < 0.9);
        // the tail does fall like ω^{-(n+1)} far out
        let far = m.multiplier(2e4).norm();
        assert!(far < 1e-9);
    }

    #[test]
    fn density_has_unit_mass_on_support() {
        let m = Mollifier::new(6, 0.1).unwrap();
        let gl = GaussLegendre::new(32);
        let mass = gl.integrate_panels(|t| m.density(t), -0.1, 0.0, 8);
        assert!((mass - 1.0).abs() < 1e-13);
        assert_eq!(m.density(0.01), 0.0);
        assert_eq!(m.density(-0.11), 0.0);
    }

    #[test]
    fn mollify_validation() {
        let g = Grid1D::linspace(0.0, 10.0, 11).unwrap();
        let s = SampledFunction::from_fn(g, DomainKind::AngularFrequency, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(mollify(&s, 8, 0.2, 1.0).is_err());
        assert!(mollify(&s, 3, 0.05, 1.0).is_err());
        let out = mollify(&s, 8, 0.05, 1.0).unwrap();
        assert_eq!(out.values()[0], Complex64::new(1.0, 0.0));
    }
}
