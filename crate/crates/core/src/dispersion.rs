//! Isotropic dispersion relations ω(k) with their inverses, group velocities
//! and mode weights h(ω). Natural units, c = ħ = 1.

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DispersionKind {
    RelativisticMassive,
    RelativisticMassless,
    Schroedinger,
    BoundedFrequency,
}

impl DispersionKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::RelativisticMassive => "relativistic_massive",
            Self::RelativisticMassless => "relativistic_massless",
            Self::Schroedinger => "schroedinger",
            Self::BoundedFrequency => "bounded_frequency",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub const ALL: [Self; 4] =
        [Self::RelativisticMassive, Self::RelativisticMassless, Self::Schroedinger, Self::BoundedFrequency];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightRule {
    /// h = 1/sqrt(2ω), the relativistic scalar normalisation.
    InverseSqrtTwoOmega,
    /// h = 1.
    Unit,
}

impl WeightRule {
    pub fn name(self) -> &'static str {
        match self {
            Self::InverseSqrtTwoOmega => "inverse_sqrt_two_omega",
            Self::Unit => "unit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::InverseSqrtTwoOmega, Self::Unit].into_iter().find(|w| w.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionModel {
    kind: DispersionKind,
    mass: f64,
    max_frequency: f64,
    weight: WeightRule,
}

impl DispersionModel {
    /// Validates the parameters the kind uses, then checks that ω is strictly
    /// increasing on 256 log-spaced wavenumbers in [1e-3, 1e3].
    pub fn new(kind: DispersionKind, mass: f64, max_frequency: f64, weight: WeightRule) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        match kind {
            DispersionKind::RelativisticMassive | DispersionKind::Schroedinger if !ok(mass) => {
                return Err(invalid(format!("{} needs a positive finite mass, got {mass}", kind.name())));
            }
            DispersionKind::BoundedFrequency if !ok(max_frequency) => {
                return Err(invalid(format!("bounded_frequency needs a positive max_frequency, got {max_frequency}")));
            }
            _ => {}
        }
        let model = Self { kind, mass, max_frequency, weight };
        let mut prev = model.omega_raw(0.0);
        for i in 0..256 {
            let k = 10f64.powf(-3.0 + 6.0 * i as f64 / 255.0);
            let w = model.omega_raw(k);
            if !(w > prev) || !w.is_finite() {
                return Err(invalid(format!("dispersion not strictly increasing near k = {k}")));
            }
            prev = w;
        }
        Ok(model)
    }

    pub fn relativistic_massive(mass: f64, weight: WeightRule) -> Result<Self> {
        Self::new(DispersionKind::RelativisticMassive, mass, 0.0, weight)
    }
    pub fn relativistic_massless(weight: WeightRule) -> Result<Self> {
        Self::new(DispersionKind::RelativisticMassless, 0.0, 0.0, weight)
    }
    pub fn schroedinger(mass: f64, weight: WeightRule) -> Result<Self> {
        Self::new(DispersionKind::Schroedinger, mass, 0.0, weight)
    }
    pub fn bounded_frequency(max_frequency: f64, weight: WeightRule) -> Result<Self> {
        Self::new(DispersionKind::BoundedFrequency, 0.0, max_frequency, weight)
    }

    pub fn kind(&self) -> DispersionKind {
        self.kind
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn max_frequency(&self) -> f64 {
        self.max_frequency
    }
    pub fn weight_rule(&self) -> WeightRule {
        self.weight
    }

    pub fn with_weight(mut self, weight: WeightRule) -> Self {
        self.weight = weight;
        self
    }

    fn omega_raw(&self, k: f64) -> f64 {
        match self.kind {
            DispersionKind::RelativisticMassive => k.hypot(self.mass),
            DispersionKind::RelativisticMassless => k,
            DispersionKind::Schroedinger => k * k / (2.0 * self.mass),
            // ω_max (1 - 1/(1+k²)) written without the cancellation
            DispersionKind::BoundedFrequency => self.max_frequency * k * k / (1.0 + k * k),
        }
    }

    pub fn omega(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) {
            return Err(invalid(format!("wavenumber must be >= 0, got {k}")));
        }
        Ok(self.omega_raw(k))
    }

    /// dω/dk.
    pub fn group_velocity(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) {
            return Err(invalid(format!("wavenumber must be >= 0, got {k}")));
        }
        Ok(match self.kind {
            DispersionKind::RelativisticMassive => k / k.hypot(self.mass),
            DispersionKind::RelativisticMassless => 1.0,
            DispersionKind::Schroedinger => k / self.mass,
            DispersionKind::BoundedFrequency => {
                let d = 1.0 + k * k;
                2.0 * self.max_frequency * k / (d * d)
            }
        })
    }

    /// ω(0), the bottom of the band.
    pub fn omega_floor(&self) -> f64 {
        self.omega_raw(0.0)
    }

    /// sup_k ω(k); infinite for unbounded models. Not attained.
    pub fn omega_sup(&self) -> f64 {
        match self.kind {
            DispersionKind::BoundedFrequency => self.max_frequency,
            _ => f64::INFINITY,
        }
    }

    /// sup_k v_g(k) and whether some finite k attains it.
    pub fn group_velocity_sup(&self) -> (f64, bool) {
        match self.kind {
            DispersionKind::RelativisticMassive => (1.0, false),
            DispersionKind::RelativisticMassless => (1.0, true),
            DispersionKind::Schroedinger => (f64::INFINITY, false),
            // maximum of 2ω_max k/(1+k²)² sits at k = 1/sqrt(3)
            DispersionKind::BoundedFrequency => (9.0 / (8.0 * 3f64.sqrt()) * self.max_frequency, true),
        }
    }

    /// Unique k with ω(k) = `omega`.
    pub fn invert_omega(&self, omega: f64) -> Result<f64> {
        let lo = self.omega_floor();
        let hi = self.omega_sup();
        if !(omega >= lo && omega < hi) {
            return Err(Error::OutOfBand { omega, lo, hi });
        }
        Ok(match self.kind {
            DispersionKind::RelativisticMassive => {
                // (ω - m)(ω + m) keeps precision near threshold
                ((omega - self.mass) * (omega + self.mass)).sqrt()
            }
            DispersionKind::RelativisticMassless => omega,
            DispersionKind::Schroedinger => (2.0 * self.mass * omega).sqrt(),
            DispersionKind::BoundedFrequency => (omega / (self.max_frequency - omega)).sqrt(),
        })
    }

    /// Wavenumber whose frequency sits `shift` above the band floor.
    pub fn wavenumber_at_shift(&self, shift: f64) -> Result<f64> {
        if self.kind == DispersionKind::RelativisticMassive {
            if !(shift >= 0.0) || !shift.is_finite() {
                return Err(Error::OutOfBand { omega: self.mass + shift, lo: self.mass, hi: f64::INFINITY });
            }
            // ω² - m² = shift (shift + 2m), exact near threshold
            return Ok((shift * (shift + 2.0 * self.mass)).sqrt());
        }
        self.invert_omega(self.omega_floor() + shift)
    }

    /// ω(k) - ω(0), computed without cancellation.
    pub fn shift_at_wavenumber(&self, k: f64) -> Result<f64> {
        if self.kind == DispersionKind::RelativisticMassive {
            if !(k >= 0.0) {
                return Err(invalid(format!("wavenumber must be >= 0, got {k}")));
            }
            return Ok(k * k / (k.hypot(self.mass) + self.mass));
        }
        Ok(self.omega(k)? - self.omega_floor())
    }

    /// h(ω).
    pub fn mode_weight(&self, omega: f64) -> Result<f64> {
        match self.weight {
            WeightRule::Unit => Ok(1.0),
            WeightRule::InverseSqrtTwoOmega => {
                if !(omega > 0.0) {
                    Err(invalid(format!("1/sqrt(2 omega) weight is singular at omega = {omega}")))
                } else {
                    Ok(1.0 / (2.0 * omega).sqrt())
                }
            }
        }
    }
}
