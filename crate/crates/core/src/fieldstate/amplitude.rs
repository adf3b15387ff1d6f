use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::DispersionModel;
use crate::error::{invalid, Error, Result};
use crate::numerics::grid::{Grid1D, SampledFunction};

use super::tail::SpectralTail;
use super::target::{TargetSpectrum, TargetState};

/// Anything that can be evaluated at a shifted frequency ω′ ≥ 0.
pub trait Spectrum: Sync {
    fn spectrum_at(&self, shift: f64) -> Result<Complex64>;

    fn spectrum_values(&self, shifts: &[f64]) -> Result<Vec<Complex64>> {
        shifts.par_iter().map(|&w| self.spectrum_at(w)).collect()
    }
}

/// S_d / (2π)^d for the radial k-measure.
pub fn measure_prefactor(d: u32) -> f64 {
    match d {
        1 => 2.0 / (2.0 * PI),
        2 => 2.0 * PI / (2.0 * PI).powi(2),
        _ => 4.0 * PI / (2.0 * PI).powi(3),
    }
}

/// Radial mode amplitudes on a uniform k grid, unit-normalized with the
/// d-dimensional measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitude {
    k_grid: Grid1D,
    values: Vec<Complex64>,
    dimension: u32,
    model: DispersionModel,
}

impl ModeAmplitude {
    /// Normalizes `values`; rejects an all-zero input.
    pub fn new(k_grid: Grid1D, values: Vec<Complex64>, dimension: u32, model: DispersionModel) -> Result<Self> {
        check_k_grid(&k_grid)?;
        if values.len() != k_grid.count() {
            return Err(invalid("amplitude length does not match the k grid"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("amplitude has non-finite values"));
        }
        let mut a = Self { k_grid, values, dimension, model };
        let n = a.raw_norm_sq().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(invalid("amplitude has zero norm"));
        }
        a.values.iter_mut().for_each(|v| *v /= n);
        Ok(a)
    }

    pub fn k_grid(&self) -> &Grid1D {
        &self.k_grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn dimension(&self) -> u32 {
        self.dimension
    }
    pub fn model(&self) -> &DispersionModel {
        &self.model
    }

    /// Quadrature weight of mode i.
    pub fn measure(&self, i: usize) -> f64 {
        let k = self.k_grid.x(i);
        measure_prefactor(self.dimension) * k.powi(self.dimension as i32 - 1) * self.k_grid.step()
    }

    fn raw_norm_sq(&self) -> f64 {
        (0..self.values.len()).map(|i| self.values[i].norm_sqr() * self.measure(i)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.raw_norm_sq().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.k_grid != other.k_grid || self.dimension != other.dimension {
            return Err(Error::GridMismatch(format!(
                "k grids or dimensions differ: ({:?}, d = {}) vs ({:?}, d = {})",
                self.k_grid, self.dimension, other.k_grid, other.dimension
            )));
        }
        Ok((0..self.values.len()).map(|i| self.values[i].conj() * other.values[i] * self.measure(i)).sum())
    }
}

fn check_k_grid(g: &Grid1D) -> Result<()> {
    if g.start() < 0.0 {
        return Err(invalid(format!("k grid must start at k >= 0, got {}", g.start())));
    }
    Ok(())
}

fn weighted(
    spectrum: &dyn Spectrum,
    target: &TargetState,
    k_grid: &Grid1D,
) -> Result<Vec<Complex64>> {
    let ks = k_grid.points();
    let mut shifts = Vec::with_capacity(ks.len());
    let mut weights = Vec::with_capacity(ks.len());
    for &k in &ks {
        shifts.push(target.model.shift_at_wavenumber(k)?);
        weights.push(target.model.mode_weight(target.model.omega(k)?)?);
    }
    let vals = spectrum.spectrum_values(&shifts)?;
    Ok(vals.into_iter().zip(weights).map(|(v, h)| v * h).collect())
}

/// ψ(k) ∝ h(ω_k) F̃(k). The grid must hold at least 99.9% of the state's weight.
pub fn desired_amplitude(target: &TargetState, k_grid: &Grid1D) -> Result<ModeAmplitude> {
    check_k_grid(k_grid)?;
    if target.infrared_divergent() {
        return Err(invalid(format!(
            "desired state is not normalizable: h^2 k^(d-1) diverges at k = 0 for {} in d = {}",
            target.model.kind().name(),
            target.dimension
        )));
    }
    let tail = SpectralTail::new(target)?;
    let half = 0.5 * k_grid.step();
    let outside = tail.fraction_outside((k_grid.start() - half).max(0.0), k_grid.end() + half);
    if outside > 1e-3 {
        return Err(invalid(format!(
            "k grid [{}, {}] holds only {:.6} of the state's weight (need >= 0.999)",
            k_grid.start(),
            k_grid.end(),
            1.0 - outside
        )));
    }
    let vals = weighted(&TargetSpectrum(target), target, k_grid)?;
    ModeAmplitude::new(*k_grid, vals, target.dimension, target.model)
}

/// φ(k) ∝ h(ω_k) ε̃(ω_k - ω(0)) from a sampled window spectrum.
pub fn generated_amplitude(
    spectrum: &SampledFunction,
    target: &TargetState,
    k_grid: &Grid1D,
) -> Result<ModeAmplitude> {
    generated_amplitude_from(spectrum, target, k_grid)
}

/// As `generated_amplitude` for any spectrum source (a plan, the target itself).
pub fn generated_amplitude_from(
    spectrum: &dyn Spectrum,
    target: &TargetState,
    k_grid: &Grid1D,
) -> Result<ModeAmplitude> {
    check_k_grid(k_grid)?;
    let vals = weighted(spectrum, target, k_grid)?;
    ModeAmplitude::new(*k_grid, vals, target.dimension, target.model)
}

/// |⟨a|b⟩| for unit-normalized amplitudes, clamped to [0, 1].
pub fn fidelity(a: &ModeAmplitude, b: &ModeAmplitude) -> Result<f64> {
    let ip = a.inner(b)?.norm() / (a.norm() * b.norm());
    Ok(ip.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::WeightRule;
    use crate::fieldstate::profile::Profile;
    use crate::fieldstate::target::radial_target_transform;
    use crate::numerics::grid::DomainKind;
    use proptest::prelude::*;

    fn unit_massless() -> DispersionModel {
        DispersionModel::relativistic_massless(WeightRule::Unit).unwrap()
    }

    fn all_targets() -> Vec<TargetState> {
        let mut out = Vec::new();
        let profiles = [
            Profile::GaussianShell { radius: 2.0, width: 0.5 },
            Profile::GaussianBall { width: 0.8 },
            Profile::SechBall { width: 0.5 },
            Profile::ExponentialBall { width: 0.5 },
        ];
        for w in [WeightRule::Unit, WeightRule::InverseSqrtTwoOmega] {
            let models = [
                DispersionModel::relativistic_massive(1.0, w).unwrap(),
                DispersionModel::relativistic_massless(w).unwrap(),
                DispersionModel::schroedinger(1.0, w).unwrap(),
                DispersionModel::bounded_frequency(50.0, w).unwrap(),
            ];
            for m in models {
                for d in 1..=3 {
                    for p in profiles {
                        let t = TargetState::new(d, p, 0.5, m).unwrap();
                        if !t.infrared_divergent() {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn matching_theorem_everywhere() {
        for t in all_targets() {
            let tail = SpectralTail::new(&t).unwrap();
            let k_hi = tail.wavenumber_for_fraction(1e-4).unwrap();
            let kg = Grid1D::midpoints(0.0, k_hi, 600).unwrap();
            let shifts: Vec<f64> = kg.points().iter().map(|&k| t.model.shift_at_wavenumber(k).unwrap()).collect();
            let top = shifts.iter().cloned().fold(0.0, f64::max);
            let fg = Grid1D::linspace(0.0, top * 1.0001 + 1e-9, 3001).unwrap();
            let spec = radial_target_transform(&t, &fg).unwrap();
            let gen = generated_amplitude(&spec, &t, &kg).unwrap();
            let des = desired_amplitude(&t, &kg).unwrap();
            let f = fidelity(&gen, &des).unwrap();
            assert!(f > 1.0 - 1e-8, "{t:?}: {f}");
        }
    }

    #[test]
    fn normalized_and_proportional() {
        let t = TargetState::new(1, Profile::GaussianBall { width: 1.0 }, 0.0, unit_massless()).unwrap();
        let kg = Grid1D::midpoints(0.0, 12.0, 600).unwrap();
        let a = desired_amplitude(&t, &kg).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-10);
        // unit weight, d = 1: a Gaussian in k centred at 0
        let c = a.values()[0].re / (-0.5 * kg.x(0).powi(2)).exp();
        for (i, v) in a.values().iter().enumerate() {
            let g = c * (-0.5 * kg.x(i).powi(2)).exp();
            assert!((v.re - g).abs() < 1e-12 && v.im == 0.0);
        }
    }

    #[test]
    fn flat_spectrum_gives_flat_amplitude() {
        let t = TargetState::new(1, Profile::GaussianBall { width: 1.0 }, 0.0, unit_massless()).unwrap();
        let fg = Grid1D::linspace(0.0, 10.0, 11).unwrap();
        let s = SampledFunction::from_fn(fg, DomainKind::AngularFrequency, |_| Complex64::new(3.0, 0.0)).unwrap();
        let kg = Grid1D::midpoints(0.0, 10.0, 50).unwrap();
        let a = generated_amplitude(&s, &t, &kg).unwrap();
        let v0 = a.values()[0];
        assert!(a.values().iter().all(|v| (v - v0).norm() < 1e-14));
    }

    #[test]
    fn errors() {
        let t = TargetState::new(1, Profile::GaussianBall { width: 1.0 }, 0.0, unit_massless()).unwrap();
        let fg = Grid1D::linspace(0.0, 10.0, 11).unwrap();
        let zero = SampledFunction::zeros(fg, DomainKind::AngularFrequency);
        let kg = Grid1D::midpoints(0.0, 10.0, 50).unwrap();
        assert!(generated_amplitude(&zero, &t, &kg).is_err());
        // spectrum does not reach the top of the band
        let short = Grid1D::midpoints(0.0, 20.0, 50).unwrap();
        let s = SampledFunction::from_fn(fg, DomainKind::AngularFrequency, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(generated_amplitude(&s, &t, &short).is_err());
        // band too narrow for the desired state
        assert!(desired_amplitude(&t, &Grid1D::midpoints(0.0, 1.0, 50).unwrap()).is_err());
        let a = desired_amplitude(&t, &kg).unwrap();
        let b = desired_amplitude(&t, &short).unwrap();
        assert!(matches!(fidelity(&a, &b), Err(Error::GridMismatch(_))));
        let ir = TargetState::new(
            1,
            Profile::GaussianBall { width: 1.0 },
            0.0,
            DispersionModel::relativistic_massless(WeightRule::InverseSqrtTwoOmega).unwrap(),
        )
        .unwrap();
        assert!(desired_amplitude(&ir, &kg).is_err());
    }

    #[test]
    fn disjoint_support_is_orthogonal() {
        let kg = Grid1D::midpoints(0.0, 10.0, 100).unwrap();
        let m = unit_massless();
        let lo: Vec<_> = (0..100).map(|i| Complex64::new(if i < 50 { 1.0 } else { 0.0 }, 0.0)).collect();
        let hi: Vec<_> = (0..100).map(|i| Complex64::new(if i >= 50 { 1.0 } else { 0.0 }, 0.0)).collect();
        let a = ModeAmplitude::new(kg, lo, 3, m).unwrap();
        let b = ModeAmplitude::new(kg, hi, 3, m).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn fidelity_ignores_phase_and_scale(
            phase in 0.0..std::f64::consts::TAU,
            scale in 1e-3..1e3f64,
            seed in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 40),
            other in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 40),
        ) {
            let kg = Grid1D::midpoints(0.0, 4.0, 40).unwrap();
            let m = unit_massless();
            let va: Vec<_> = seed.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
            let vb: Vec<_> = other.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
            prop_assume!(va.iter().any(|v| v.norm() > 1e-3) && vb.iter().any(|v| v.norm() > 1e-3));
            let rot = Complex64::from_polar(scale, phase);
            let a = ModeAmplitude::new(kg, va.clone(), 2, m).unwrap();
            let a2 = ModeAmplitude::new(kg, va.iter().map(|v| v * rot).collect(), 2, m).unwrap();
            let b = ModeAmplitude::new(kg, vb, 2, m).unwrap();
            let f1 = fidelity(&a, &b).unwrap();
            let f2 = fidelity(&a2, &b).unwrap();
            prop_assert!((f1 - f2).abs() < 1e-12);
            prop_assert!((f1 - fidelity(&b, &a).unwrap()).abs() < 1e-14);
            prop_assert!((0.0..=1.0).contains(&f1));
        }
    }
}
