//! Propagation and correlation diagnostics: generated wavepackets, their
//! causal reach, field probes, and vacuum two-point functions.

mod correlator;
mod packet;
mod reach;

pub use correlator::{correlator, correlator_with, CorrelatorOptions, CorrelatorQuery, CorrelatorValue};
pub use packet::{delta_window_state, narrowband_state, probe_amplitude, track_peak, PeakTrack};
pub use reach::{
    all_frequencies_need_superoscillation, ingoing_component_needs_superoscillation, reach_radius,
    superoscillation_needed,
};

use crate::numerics::bessel::j0;

/// ∫ dΩ e^{ik·x} over directions of k, as a function of kr.
pub(crate) fn angular_average(d: u32, kr: f64) -> f64 {
    use std::f64::consts::PI;
    match d {
        1 => 2.0 * kr.cos(),
        2 => 2.0 * PI * j0(kr),
        _ => {
            if kr.abs() < 1e-4 {
                4.0 * PI * (1.0 - kr * kr / 6.0)
            } else {
                4.0 * PI * kr.sin() / kr
            }
        }
    }
}
