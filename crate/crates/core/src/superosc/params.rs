use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numerics::bessel::{i0_scaled, j0};
use crate::numerics::quadrature::periodic_quadrature;
use crate::numerics::scaled::ScaledComplex;

/// Largest sinh(A)/δ² accepted by the α-quadrature. The integrand swings
/// over e^{±sinh A/δ²}, so beyond this the cancellation eats double precision.
pub const QUADRATURE_RANGE_CAP: f64 = 27.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Phase law t′ = t₀(cosh A - 1)/2 ≥ 0.
    Plus,
    /// Phase law t′ = -t₀(cosh A + 1)/2 ≤ -t₀.
    Minus,
}

/// Which member of a quantised pair: δ⁻² = 2πm + π/4 or 2πm - π/4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantizedPhase {
    Plus,
    Minus,
}

impl QuantizedPhase {
    pub fn inv_scale_sq(self, m_index: u32) -> f64 {
        let base = 2.0 * PI * m_index as f64;
        match self {
            Self::Plus => base + FRAC_PI_4,
            Self::Minus => base - FRAC_PI_4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperoscParams {
    pub amplitude: f64,
    /// δ.
    pub scale: f64,
    /// A ≥ 0.
    pub stretch: f64,
    /// t₀, the length of the time support [-t₀, 0].
    pub support: f64,
    /// Offset ω₀ between physical and shifted frequency.
    pub omega_floor: f64,
    pub branch: Branch,
    pub m_index: u32,
}

impl SuperoscParams {
    pub fn new(
        amplitude: f64,
        scale: f64,
        stretch: f64,
        support: f64,
        omega_floor: f64,
        branch: Branch,
        m_index: u32,
    ) -> Result<Self> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !pos(amplitude) || !pos(scale) || !pos(support) {
            return Err(invalid("amplitude, scale and support must be positive and finite"));
        }
        if !(stretch >= 0.0) || !stretch.is_finite() {
            return Err(invalid(format!("stretch must be finite and >= 0, got {stretch}")));
        }
        if m_index < 1 {
            return Err(invalid("m_index must be >= 1"));
        }
        if !omega_floor.is_finite() {
            return Err(invalid("omega_floor must be finite"));
        }
        Ok(Self { amplitude, scale, stretch, support, omega_floor, branch, m_index })
    }

    /// Parameters with δ⁻² = 2πm ± π/4.
    pub fn quantized(
        m_index: u32,
        phase: QuantizedPhase,
        stretch: f64,
        support: f64,
        amplitude: f64,
        branch: Branch,
    ) -> Result<Self> {
        if m_index < 1 {
            return Err(invalid("m_index must be >= 1"));
        }
        let scale = phase.inv_scale_sq(m_index).sqrt().recip();
        Self::new(amplitude, scale, stretch, support, 0.0, branch, m_index)
    }

    pub fn inv_scale_sq(&self) -> f64 {
        1.0 / (self.scale * self.scale)
    }

    pub fn cosh_stretch(&self) -> f64 {
        self.stretch.cosh()
    }

    /// sinh(A)/δ², the log of the time-domain peak over the band amplitude.
    pub fn dynamic_range(&self) -> f64 {
        self.stretch.sinh() * self.inv_scale_sq()
    }

    /// Shift t′ this basis function oscillates at on the band, per branch.
    pub fn phase_law(&self) -> f64 {
        let c = self.cosh_stretch();
        match self.branch {
            Branch::Plus => 0.5 * self.support * (c - 1.0),
            Branch::Minus => -0.5 * self.support * (c + 1.0),
        }
    }

    fn prefactor(&self) -> f64 {
        self.amplitude * (PI / 2.0).sqrt() / self.scale
    }

    /// 1 + u cosh A + u²/4 with u = δ² t₀ ω.
    fn radicand(&self, omega: f64) -> f64 {
        let u = self.scale * self.scale * self.support * omega;
        1.0 + u * self.cosh_stretch() + 0.25 * u * u
    }
}

/// Closed Bessel form, for ω ≥ 0.
pub fn superosc_closed(p: &SuperoscParams, omega: f64) -> Result<Complex64> {
    if !(omega >= 0.0) {
        return Err(invalid(format!("closed form needs omega >= 0, got {omega}; use growth_probe")));
    }
    Ok(closed_unchecked(p, omega))
}

pub(crate) fn closed_unchecked(p: &SuperoscParams, omega: f64) -> Complex64 {
    let z = p.inv_scale_sq() * p.radicand(omega).sqrt();
    Complex64::from_polar(p.prefactor() * j0(z), -0.5 * omega * p.support)
}

/// Closed form for any real ω, carried in log scale. Between the two real
/// roots of the radicand (only at ω < 0) J₀ of an imaginary argument turns
/// into I₀ and the spectrum grows exponentially.
pub fn superosc_closed_scaled(p: &SuperoscParams, omega: f64) -> ScaledComplex {
    let s = p.radicand(omega);
    let phase = Complex64::from_polar(p.prefactor(), -0.5 * omega * p.support);
    if s >= 0.0 {
        ScaledComplex::from_complex(phase * j0(p.inv_scale_sq() * s.sqrt()))
    } else {
        let y = p.inv_scale_sq() * (-s).sqrt();
        ScaledComplex::new(phase * i0_scaled(y), y)
    }
}

/// The defining α-integral, evaluated by the periodic trapezoid rule.
/// Validation only: refuses parameters with sinh(A)/δ² above the cap.
pub fn superosc_quadrature(p: &SuperoscParams, omega: f64) -> Result<Complex64> {
    let range = p.dynamic_range();
    if range > QUADRATURE_RANGE_CAP {
        return Err(Error::Precision(format!(
            "sinh(A)/delta^2 = {range} exceeds {QUADRATURE_RANGE_CAP}; use superosc_closed"
        )));
    }
    let inv = p.inv_scale_sq();
    let (c, s) = (p.stretch.cosh(), p.stretch.sinh());
    let half = 0.5 * omega * p.support;
    let f = |a: f64| {
        let (sa, ca) = a.sin_cos();
        // e^{iω t(α)} e^{i cos(α - iA)/δ²} with t(α) = t₀(cos α - 1)/2
        Complex64::new(-sa * s * inv, half * (ca - 1.0) + ca * c * inv).exp()
    };
    let integral = periodic_quadrature(f, 64, 1e-13)?;
    Ok(integral * (p.amplitude / (2.0 * p.scale * (2.0 * PI).sqrt())))
}

/// Large-argument form, valid for δ ≪ 1 and δ²ωt₀ cosh A ≪ 1.
pub fn superosc_asymptotic(p: &SuperoscParams, omega: f64) -> Complex64 {
    let arg = p.inv_scale_sq() + 0.5 * omega * p.support * p.cosh_stretch() - FRAC_PI_4;
    Complex64::from_polar(p.amplitude * arg.cos(), -0.5 * omega * p.support)
}

/// Interval of ω < 0 on which the spectrum grows (radicand negative), as
/// (far edge, near edge). Empty (equal ends) when A = 0.
pub fn growth_band(p: &SuperoscParams) -> (f64, f64) {
    let k = 1.0 / (p.scale * p.scale * p.support);
    (-2.0 * p.stretch.exp() * k, -2.0 * (-p.stretch).exp() * k)
}

/// ln|spectrum| at ω ≤ 0, up to the far edge of the growth band.
pub fn growth_probe(p: &SuperoscParams, omega: f64) -> Result<f64> {
    if !(omega <= 0.0) {
        return Err(invalid(format!("growth probe needs omega <= 0, got {omega}")));
    }
    let (far, _) = growth_band(p);
    if omega < far {
        return Err(invalid(format!("omega = {omega} lies beyond the growth band edge {far}")));
    }
    Ok(superosc_closed_scaled(p, omega).ln_abs())
}
