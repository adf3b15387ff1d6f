//! Complex numbers carried as `mantissa * e^{log_scale}` so that window
//! spectra with amplitudes far beyond the f64 range can still be summed.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

// `add`/`mul` stay inherent so callers never mistake them for plain complex ops
#[allow(clippy::should_implement_trait)]
impl ScaledComplex {
    pub const ZERO: Self = Self { mantissa: Complex64::new(0.0, 0.0), log_scale: f64::NEG_INFINITY };

    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        Self { mantissa, log_scale }.normalized()
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m == 0.0 || !m.is_finite() {
            return if m == 0.0 { Self::ZERO } else { self };
        }
        let l = m.ln();
        Self { mantissa: self.mantissa / m, log_scale: self.log_scale + l }
    }

    pub fn is_zero(&self) -> bool {
        self.log_scale == f64::NEG_INFINITY
    }

    /// ln |z|; -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log_scale + self.mantissa.norm().ln()
        }
    }

    pub fn scale(self, z: Complex64) -> Self {
        Self::new(self.mantissa * z, self.log_scale)
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * other.mantissa, self.log_scale + other.log_scale)
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log_scale >= other.log_scale { (self, other) } else { (other, self) };
        let rel = (small.log_scale - big.log_scale).exp();
        Self::new(big.mantissa + small.mantissa * rel, big.log_scale)
    }

    /// Value as an ordinary complex number; overflows to infinity when the
    /// scale exceeds the f64 range.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.mantissa * self.log_scale.exp()
        }
    }

    /// Value times e^{-shift}.
    pub fn to_complex_shifted(&self, shift: f64) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.mantissa * (self.log_scale - shift).exp()
        }
    }
}

/// ln Σ e^{a_i} without overflow.
pub fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.into_iter().collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|a| (a - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_plain_complex() {
        let a = Complex64::new(1.5, -2.0);
        let b = Complex64::new(-0.25, 0.75);
        let s = ScaledComplex::from_complex(a).add(ScaledComplex::from_complex(b));
        assert!((s.to_complex() - (a + b)).norm() < 1e-14);
        let p = ScaledComplex::from_complex(a).mul(ScaledComplex::from_complex(b));
        assert!((p.to_complex() - a * b).norm() < 1e-14);
        assert!((ScaledComplex::from_complex(a).ln_abs() - a.norm().ln()).abs() < 1e-15);
    }

    #[test]
    fn survives_huge_scales() {
        let x = ScaledComplex::new(Complex64::new(1.0, 0.0), 2000.0);
        let y = ScaledComplex::new(Complex64::new(-1.0, 1e-3), 2000.0);
        let s = x.add(y);
        assert!((s.ln_abs() - (2000.0 + 1e-3f64.ln())).abs() < 1e-9);
        assert!(x.add(ScaledComplex::ZERO) == x);
        assert!((log_sum_exp([1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
