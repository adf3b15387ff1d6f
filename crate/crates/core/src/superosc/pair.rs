use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::numerics::scaled::ScaledComplex;
use crate::superosc::params::{closed_unchecked, superosc_closed_scaled, Branch, QuantizedPhase, SuperoscParams};

/// Two quantised basis functions combined into ≈ amp · e^{iωt′}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairBasis {
    t_prime: f64,
    plus: SuperoscParams,
    minus: SuperoscParams,
}

impl PairBasis {
    /// Pair reproducing the phase e^{iωt′} for t′ outside (-t₀, 0).
    pub fn new(t_prime: f64, t0: f64, m_index: u32, amplitude: f64) -> Result<Self> {
        if !(t0 > 0.0) || !t_prime.is_finite() {
            return Err(invalid("pair needs finite t_prime and positive t0"));
        }
        if t_prime > -t0 && t_prime < 0.0 {
            return Err(invalid(format!(
                "t_prime = {t_prime} lies inside (-{t0}, 0); use an impulse term there"
            )));
        }
        let cosh = (2.0 * t_prime / t0 + 1.0).abs().max(1.0);
        let stretch = cosh.acosh();
        let branch = if t_prime >= 0.0 { Branch::Plus } else { Branch::Minus };
        let plus = SuperoscParams::quantized(m_index, QuantizedPhase::Plus, stretch, t0, amplitude, branch)?;
        let minus = SuperoscParams::quantized(m_index, QuantizedPhase::Minus, stretch, t0, amplitude, branch)?;
        Ok(Self { t_prime, plus, minus })
    }

    pub fn t_prime(&self) -> f64 {
        self.t_prime
    }
    pub fn plus(&self) -> &SuperoscParams {
        &self.plus
    }
    pub fn minus(&self) -> &SuperoscParams {
        &self.minus
    }

    /// Coefficient (±i) of the second member.
    pub fn minus_coefficient(&self) -> Complex64 {
        match self.plus.branch {
            Branch::Plus => Complex64::new(0.0, 1.0),
            Branch::Minus => Complex64::new(0.0, -1.0),
        }
    }

    /// Spectrum at ω ≥ 0.
    pub fn eval(&self, omega: f64) -> Complex64 {
        closed_unchecked(&self.plus, omega) + self.minus_coefficient() * closed_unchecked(&self.minus, omega)
    }

    /// Spectrum at any real ω, in log scale.
    pub fn eval_scaled(&self, omega: f64) -> ScaledComplex {
        superosc_closed_scaled(&self.plus, omega)
            .add(superosc_closed_scaled(&self.minus, omega).scale(self.minus_coefficient()))
    }
}

/// Pair spectrum at a single ω ≥ 0.
pub fn superosc_pair(t_prime: f64, t0: f64, m_index: u32, amplitude: f64, omega: f64) -> Result<Complex64> {
    if !(omega >= 0.0) {
        return Err(invalid(format!("pair spectrum needs omega >= 0, got {omega}")));
    }
    Ok(PairBasis::new(t_prime, t0, m_index, amplitude)?.eval(omega))
}
