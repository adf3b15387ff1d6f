use crate::dispersion::DispersionModel;
use crate::error::{invalid, Result};

/// Distance a narrowband packet at frequency ω covers in time t0.
pub fn reach_radius(model: &DispersionModel, omega: f64, t0: f64) -> Result<f64> {
    if !(t0 >= 0.0) || !t0.is_finite() {
        return Err(invalid(format!("t0 must be finite and >= 0, got {t0}")));
    }
    let k = model.invert_omega(omega)?;
    Ok(model.group_velocity(k)? * t0)
}

/// True when frequency ω cannot reach distance L within t0 by ordinary
/// propagation.
pub fn superoscillation_needed(model: &DispersionModel, l: f64, t0: f64, omega: f64) -> Result<bool> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(invalid(format!("target distance must be positive and finite, got {l}")));
    }
    Ok(reach_radius(model, omega, t0)? < l)
}

/// True when no frequency at all reaches L within t0, i.e. when
/// sup v_g · t0 falls short of L (or equals it without being attained).
pub fn all_frequencies_need_superoscillation(model: &DispersionModel, l: f64, t0: f64) -> bool {
    let (sup, attained) = model.group_velocity_sup();
    let reach = sup * t0;
    if attained {
        reach < l
    } else {
        reach <= l
    }
}

/// A target with an ingoing part (a converging shell) must be produced
/// before it travels inward, so every frequency of that part arrives too
/// late and superoscillations are needed regardless of the model.
pub fn ingoing_component_needs_superoscillation() -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::WeightRule;

    #[test]
    fn reach_per_model() {
        let w = WeightRule::Unit;
        let ml = DispersionModel::relativistic_massless(w).unwrap();
        for omega in [0.1, 1.0, 10.0] {
            assert_eq!(reach_radius(&ml, omega, 1.7).unwrap(), 1.7);
        }
        let s = DispersionModel::schroedinger(1.0, w).unwrap();
        assert!((reach_radius(&s, 2.0, 1.5).unwrap() - 3.0).abs() < 1e-14);
        let m = DispersionModel::relativistic_massive(2.0, w).unwrap();
        for omega in [2.0001, 3.0, 50.0, 1e6] {
            assert!(reach_radius(&m, omega, 1.0).unwrap() < 1.0);
        }
        assert!(reach_radius(&m, 1.0, 1.0).is_err());
    }

    #[test]
    fn needed_or_not() {
        let w = WeightRule::Unit;
        let ml = DispersionModel::relativistic_massless(w).unwrap();
        for omega in [0.01, 1.0, 100.0] {
            assert!(superoscillation_needed(&ml, 2.0, 1.0, omega).unwrap());
        }
        assert!(all_frequencies_need_superoscillation(&ml, 2.0, 1.0));
        assert!(!all_frequencies_need_superoscillation(&ml, 1.0, 1.0));
        let m = DispersionModel::relativistic_massive(1.0, w).unwrap();
        assert!(all_frequencies_need_superoscillation(&m, 1.0, 1.0));
        // Schrödinger: ω above m L²/(2 t0²) reaches any L
        let s = DispersionModel::schroedinger(1.0, w).unwrap();
        let (l, t0) = (5.0, 1.0);
        let edge = l * l / (2.0 * t0 * t0);
        assert!(superoscillation_needed(&s, l, t0, 0.9 * edge).unwrap());
        assert!(!superoscillation_needed(&s, l, t0, 1.1 * edge).unwrap());
        assert!(!all_frequencies_need_superoscillation(&s, 1e9, t0));
        assert!(ingoing_component_needs_superoscillation());
    }
}
