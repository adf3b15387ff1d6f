//! Desired and generated single-particle states, their overlap, the
//! success probability of a window, and the infidelity tail of a finite band.
//!
//! Spectra are indexed by the shifted frequency ω′ = ω(k) - ω(0), so the
//! detector gap only fixes the physical carrier and never enters the numbers.

mod amplitude;
mod probability;
mod profile;
mod tail;
mod target;

pub use amplitude::{
    desired_amplitude, fidelity, generated_amplitude, generated_amplitude_from, measure_prefactor, ModeAmplitude,
    Spectrum,
};
pub use probability::{success_probability, success_probability_with, ProbabilityReport, PERTURBATIVE_LIMIT};
pub use profile::Profile;
pub(crate) use profile::gl16 as profile_gl16;
pub use tail::{infidelity_tail, tail_to_cutoff, SpectralTail};
pub use target::{desired_time_window, radial_target_transform, TargetSpectrum, TargetState};
