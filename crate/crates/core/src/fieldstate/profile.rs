use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::numerics::bessel::j0;
use crate::numerics::quadrature::GaussLegendre;

/// Spherically symmetric radial profiles F(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// exp(-(r - L)²/2w²).
    GaussianShell { radius: f64, width: f64 },
    /// exp(-r²/2w²).
    GaussianBall { width: f64 },
    /// sech(r/w); transform decays exponentially.
    SechBall { width: f64 },
    /// exp(-r/w); transform decays as a power law.
    ExponentialBall { width: f64 },
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        let good = match *self {
            Self::GaussianShell { radius, width } => ok(radius) && ok(width),
            Self::GaussianBall { width } | Self::SechBall { width } | Self::ExponentialBall { width } => ok(width),
        };
        if good {
            Ok(())
        } else {
            Err(invalid(format!("profile parameters must be positive and finite: {self:?}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::GaussianShell { .. } => "gaussian_shell",
            Self::GaussianBall { .. } => "gaussian_ball",
            Self::SechBall { .. } => "sech_ball",
            Self::ExponentialBall { .. } => "exponential_ball",
        }
    }

    pub fn width(&self) -> f64 {
        match *self {
            Self::GaussianShell { width, .. }
            | Self::GaussianBall { width }
            | Self::SechBall { width }
            | Self::ExponentialBall { width } => width,
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Self::GaussianShell { radius, width } => (-(r - radius).powi(2) / (2.0 * width * width)).exp(),
            Self::GaussianBall { width } => (-r * r / (2.0 * width * width)).exp(),
            Self::SechBall { width } => 1.0 / (r / width).cosh(),
            Self::ExponentialBall { width } => (-r / width).exp(),
        }
    }

    /// Radial interval outside which F is below ~1e-19 of its peak.
    pub fn radial_support(&self) -> (f64, f64) {
        match *self {
            Self::GaussianShell { radius, width } => ((radius - 9.5 * width).max(0.0), radius + 9.5 * width),
            Self::GaussianBall { width } => (0.0, 9.5 * width),
            Self::SechBall { width } | Self::ExponentialBall { width } => (0.0, 45.0 * width),
        }
    }

    /// Wavenumber beyond which |F̃|² has fallen below ~1e-39 of its scale.
    /// Infinite for power-law transforms.
    pub fn spectral_extent(&self) -> f64 {
        match *self {
            Self::GaussianShell { width, .. } | Self::GaussianBall { width } => 9.5 / width,
            Self::SechBall { width } => 30.0 / width,
            Self::ExponentialBall { .. } => f64::INFINITY,
        }
    }

    /// F̃(k) = ∫₀^∞ dr k F(r) (2πr/k)^{d/2} J_{(d-2)/2}(kr) by Gauss-Legendre
    /// panels fine enough for both the profile and the kernel oscillation.
    pub fn transform(&self, d: u32, k: f64) -> f64 {
        let (lo, hi) = self.radial_support();
        let span = hi - lo;
        let panels = (0.5 * span * k / PI).ceil() as usize + (2.0 * span / self.width()).ceil() as usize + 2;
        let gl = gl16();
        gl.integrate_panels(|r| self.value(r) * kernel(d, k, r), lo, hi, panels)
    }

    /// Closed-form transform where one exists.
    pub fn analytic_transform(&self, d: u32, k: f64) -> Option<f64> {
        match (*self, d) {
            (Self::GaussianBall { width }, _) => {
                Some((2.0 * PI).powf(0.5 * d as f64) * width.powi(d as i32) * (-0.5 * k * k * width * width).exp())
            }
            (Self::SechBall { width }, 1) => Some(PI * width / (0.5 * PI * k * width).cosh()),
            (Self::SechBall { width }, 3) => {
                let x = 0.5 * PI * k * width;
                if k == 0.0 {
                    // limit of π³w² sech x tanh x / k
                    Some(0.5 * PI.powi(4) * width.powi(3))
                } else {
                    Some(PI.powi(3) * width * width * x.tanh() / (x.cosh() * k))
                }
            }
            (Self::ExponentialBall { width }, 1) => Some(2.0 * width / (1.0 + k * k * width * width)),
            (Self::ExponentialBall { width }, 2) => {
                Some(2.0 * PI * width * width / (1.0 + k * k * width * width).powf(1.5))
            }
            (Self::ExponentialBall { width }, 3) => {
                Some(8.0 * PI * width.powi(3) / (1.0 + k * k * width * width).powi(2))
            }
            _ => None,
        }
    }

    /// Analytic transform if available, numeric otherwise.
    pub fn transform_best(&self, d: u32, k: f64) -> f64 {
        self.analytic_transform(d, k).unwrap_or_else(|| self.transform(d, k))
    }
}

/// k (2πr/k)^{d/2} J_{(d-2)/2}(kr) written through its elementary forms.
pub(crate) fn kernel(d: u32, k: f64, r: f64) -> f64 {
    match d {
        1 => 2.0 * (k * r).cos(),
        2 => 2.0 * PI * r * j0(k * r),
        _ => {
            if k * r < 1e-8 {
                4.0 * PI * r * r
            } else {
                4.0 * PI * r * (k * r).sin() / k
            }
        }
    }
}

pub(crate) fn gl16() -> &'static GaussLegendre {
    use std::sync::OnceLock;
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(16))
}
