//! Superoscillatory window construction.
//!
//! A basis function is parametrised by an amplitude, a small scale δ, a
//! stretch A and a support length t₀. Its spectrum has the closed form
//! `amp √π/(√2 δ) e^{-iωt₀/2} J₀(δ⁻² √(1 + δ²ωt₀ cosh A + δ⁴ω²t₀²/4))`,
//! and two such functions with quantised δ⁻² = 2πm ± π/4 combine into a
//! near pure phase e^{iωt′} with t′ outside the support. Frequencies here
//! are always shifted so that 0 is the bottom of the physical band.

mod band;
mod mollifier;
mod norm;
mod pair;
mod params;
mod plan;
mod reconstruct;

pub use band::{instantaneous_frequency, operational_band_edge, phase_slope, BandEdge};
pub use mollifier::{mollify, Mollifier};
pub use norm::{log_norm_sq, NormOptions};
pub use pair::{superosc_pair, PairBasis};
pub use params::{
    growth_band, growth_probe, superosc_asymptotic, superosc_closed, superosc_closed_scaled,
    superosc_quadrature, Branch, QuantizedPhase, SuperoscParams, QUADRATURE_RANGE_CAP,
};
pub use plan::{
    evaluate_plan, max_band_edge, min_m_index, synthesize_window, synthesize_window_with, Basis,
    PlanTerm, SynthesisOptions, WindowPlan, FLATNESS_BUDGET,
};
pub use reconstruct::{reconstruct_time, reconstruct_time_scaled};
