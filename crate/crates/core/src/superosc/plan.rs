use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::numerics::grid::{DomainKind, Grid1D, SampledFunction};
use crate::superosc::mollifier::Mollifier;
use crate::superosc::pair::PairBasis;
use crate::superosc::params::{QuantizedPhase, SuperoscParams};

/// Ceiling on δ² ω_c t₀ cosh A for every pair in a plan.
pub const FLATNESS_BUDGET: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// e^{iωt′}, a (mollified) spike inside the support.
    Impulse,
    SuperoscPair,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Impulse => "impulse",
            Self::SuperoscPair => "superosc_pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanTerm {
    /// Location of the basis function before mollification.
    pub t_prime: f64,
    pub weight: Complex64,
    pub basis: Basis,
    /// Parameters of the δ⁻² = 2πm + π/4 member, for pairs.
    pub params: Option<SuperoscParams>,
}

/// A synthesised window: weighted basis terms over t′ ∈ [-T, T].
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPlan {
    pub terms: Vec<PlanTerm>,
    pub t0: f64,
    pub half_span: f64,
    pub omega_c: f64,
    pub m_index: u32,
    pub mollifier: Option<Mollifier>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisOptions {
    pub mollifier: Option<Mollifier>,
    /// Terms with |weight| below this fraction of the largest are dropped.
    pub drop_below: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self { mollifier: None, drop_below: 1e-16 }
    }
}

/// Largest band edge allowed for pairs with cosh A up to `max_cosh`.
pub fn max_band_edge(core_support: f64, m_index: u32, max_cosh: f64) -> f64 {
    let delta_sq = 1.0 / QuantizedPhase::Minus.inv_scale_sq(m_index);
    FLATNESS_BUDGET / (delta_sq * core_support * max_cosh)
}

/// Smallest m_index keeping the band flat up to `omega_c`.
pub fn min_m_index(core_support: f64, omega_c: f64, max_cosh: f64) -> u32 {
    let need = omega_c * core_support * max_cosh / FLATNESS_BUDGET;
    let m = ((need + std::f64::consts::FRAC_PI_4) / (2.0 * std::f64::consts::PI)).ceil();
    (m.max(1.0)) as u32
}

impl WindowPlan {
    /// Support left for the pair cores once the mollifier has taken its share.
    pub fn core_support(&self) -> f64 {
        self.t0 - self.mollifier.map_or(0.0, |m| m.tau)
    }

    pub fn max_cosh(&self) -> f64 {
        self.terms
            .iter()
            .filter_map(|t| t.params.map(|p| p.cosh_stretch()))
            .fold(1.0, f64::max)
    }

    /// Largest sinh(A)/δ² among the pair terms.
    pub fn max_dynamic_range(&self) -> f64 {
        self.terms.iter().filter_map(|t| t.params.map(|p| p.dynamic_range())).fold(0.0, f64::max)
    }

    pub(crate) fn pair_of(&self, term: &PlanTerm) -> Result<PairBasis> {
        PairBasis::new(term.t_prime, self.core_support(), self.m_index, 1.0)
    }

    pub(crate) fn evaluators(&self) -> Result<Vec<TermEval>> {
        self.terms
            .iter()
            .map(|t| {
                Ok(match t.basis {
                    Basis::Impulse => TermEval::Impulse { t: t.t_prime, w: t.weight },
                    Basis::SuperoscPair => TermEval::Pair { pair: self.pair_of(t)?, w: t.weight },
                })
            })
            .collect()
    }

    /// Raw spectrum at ω ≥ 0 (no mollifier).
    pub fn raw_at(&self, omega: f64) -> Result<Complex64> {
        let ev = self.evaluators()?;
        Ok(sum_terms(&ev, omega))
    }

    /// Spectrum of the window as realised, mollifier included, at ω ≥ 0.
    pub fn spectrum_at(&self, omega: f64) -> Result<Complex64> {
        let raw = self.raw_at(omega)?;
        Ok(self.mollifier.map_or(raw, |m| raw * m.multiplier(omega)))
    }

    /// Realised spectrum on many frequencies at once.
    pub fn spectrum_values(&self, omegas: &[f64]) -> Result<Vec<Complex64>> {
        let ev = self.evaluators()?;
        if omegas.iter().any(|w| !(*w >= 0.0)) {
            return Err(invalid("plan spectra are evaluated at omega >= 0 only"));
        }
        Ok(omegas
            .par_iter()
            .map(|&w| {
                let raw = sum_terms(&ev, w);
                self.mollifier.map_or(raw, |m| raw * m.multiplier(w))
            })
            .collect())
    }

    /// Realised spectrum on a grid.
    pub fn spectrum(&self, grid: &Grid1D) -> Result<SampledFunction> {
        SampledFunction::new(*grid, self.spectrum_values(&grid.points())?, DomainKind::AngularFrequency)
    }

    /// Plain-text record: header `key = value` lines, then one term per
    /// line as `basis,t_prime,weight_re,weight_im,m_index`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let (order, tau) = self.mollifier.map_or((0, 0.0), |m| (m.order, m.tau));
        writeln!(s, "# window plan").unwrap();
        writeln!(s, "t0 = {:.16e}", self.t0).unwrap();
        writeln!(s, "half_span = {:.16e}", self.half_span).unwrap();
        writeln!(s, "omega_c = {:.16e}", self.omega_c).unwrap();
        writeln!(s, "m_index = {}", self.m_index).unwrap();
        writeln!(s, "mollifier_order = {order}").unwrap();
        writeln!(s, "mollifier_tau = {tau:.16e}").unwrap();
        writeln!(s, "terms = {}", self.terms.len()).unwrap();
        for t in &self.terms {
            writeln!(
                s,
                "{},{:.16e},{:.16e},{:.16e},{}",
                t.basis.name(),
                t.t_prime,
                t.weight.re,
                t.weight.im,
                self.m_index
            )
            .unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("window plan record: {msg}"));
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| bad(format!("bad number {v:?}: {e}")));
        let (mut t0, mut half_span, mut omega_c, mut m_index) = (None, None, None, None);
        let (mut order, mut tau, mut count) = (0u32, 0.0, None);
        let mut raw_terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            if let Some((k, v)) = line.split_once('=') {
                match k.trim() {
                    "t0" => t0 = Some(num(v)?),
                    "half_span" => half_span = Some(num(v)?),
                    "omega_c" => omega_c = Some(num(v)?),
                    "m_index" => m_index = Some(v.trim().parse::<u32>().map_err(|e| bad(e.to_string()))?),
                    "mollifier_order" => order = v.trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                    "mollifier_tau" => tau = num(v)?,
                    "terms" => count = Some(v.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?),
                    other => return Err(bad(format!("unknown key {other:?}"))),
                }
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad(format!("term line needs 5 fields: {line:?}")));
            }
            let basis = match f[0] {
                "impulse" => Basis::Impulse,
                "superosc_pair" => Basis::SuperoscPair,
                b => return Err(bad(format!("unknown basis {b:?}"))),
            };
            let m: u32 = f[4].trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
            raw_terms.push((basis, num(f[1])?, Complex64::new(num(f[2])?, num(f[3])?), m));
        }
        let t0 = t0.ok_or_else(|| bad("missing t0".into()))?;
        let m_index = m_index.ok_or_else(|| bad("missing m_index".into()))?;
        let mollifier = if order == 0 { None } else { Some(Mollifier::new(order, tau)?) };
        if let Some(c) = count {
            if c != raw_terms.len() {
                return Err(bad(format!("expected {c} terms, found {}", raw_terms.len())));
            }
        }
        let mut plan = WindowPlan {
            terms: Vec::with_capacity(raw_terms.len()),
            t0,
            half_span: half_span.ok_or_else(|| bad("missing half_span".into()))?,
            omega_c: omega_c.ok_or_else(|| bad("missing omega_c".into()))?,
            m_index,
            mollifier,
        };
        for (basis, t, w, m) in raw_terms {
            if m != m_index {
                return Err(bad(format!("term m_index {m} differs from plan m_index {m_index}")));
            }
            let params = match basis {
                Basis::Impulse => None,
                Basis::SuperoscPair => Some(*PairBasis::new(t, plan.core_support(), m_index, 1.0)?.plus()),
            };
            plan.terms.push(PlanTerm { t_prime: t, weight: w, basis, params });
        }
        plan.check_invariants()?;
        Ok(plan)
    }

    fn check_invariants(&self) -> Result<()> {
        let tc = self.core_support();
        for t in &self.terms {
            let inside = t.t_prime > -tc && t.t_prime < 0.0;
            match t.basis {
                Basis::Impulse if !inside => {
                    return Err(invalid(format!("impulse term at {} outside the core support", t.t_prime)))
                }
                Basis::SuperoscPair if inside => {
                    return Err(invalid(format!("pair term at {} inside the core support", t.t_prime)))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum TermEval {
    Impulse { t: f64, w: Complex64 },
    Pair { pair: PairBasis, w: Complex64 },
}

pub(crate) fn sum_terms(ev: &[TermEval], omega: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for e in ev {
        acc += match e {
            TermEval::Impulse { t, w } => w * Complex64::from_polar(1.0, omega * t),
            TermEval::Pair { pair, w } => w * pair.eval(omega),
        };
    }
    acc
}

/// Synthesis without mollification.
pub fn synthesize_window(
    eps_des_time: &SampledFunction,
    t0: f64,
    omega_c: f64,
    m_index: u32,
) -> Result<WindowPlan> {
    synthesize_window_with(eps_des_time, t0, omega_c, m_index, &SynthesisOptions::default())
}

/// One term per sample of the desired time window, weight ε_des(t′)Δt′.
/// Samples inside the core support become impulses, the rest pairs. With a
/// mollifier of width τ every basis location moves by +τ/2 to compensate
/// the bump's delay, and pairs are built on the reduced support t₀ - τ.
pub fn synthesize_window_with(
    eps_des_time: &SampledFunction,
    t0: f64,
    omega_c: f64,
    m_index: u32,
    opts: &SynthesisOptions,
) -> Result<WindowPlan> {
    if eps_des_time.kind() != DomainKind::Time {
        return Err(invalid("synthesis expects a time-domain desired window"));
    }
    if !(t0 > 0.0) || !(omega_c > 0.0) || !omega_c.is_finite() {
        return Err(invalid("t0 and omega_c must be positive"));
    }
    if m_index < 1 {
        return Err(invalid("m_index must be >= 1"));
    }
    if let Some(m) = opts.mollifier {
        m.validate_for(t0)?;
    }
    let g = eps_des_time.grid();
    let half_span = g.start().abs().max(g.end().abs());
    let shift = opts.mollifier.map_or(0.0, |m| 0.5 * m.tau);
    let mut plan = WindowPlan { terms: Vec::new(), t0, half_span, omega_c, m_index, mollifier: opts.mollifier };
    let tc = plan.core_support();
    let wmax = eps_des_time.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (i, v) in eps_des_time.values().iter().enumerate() {
        if v.norm() <= opts.drop_below * wmax || v.norm() == 0.0 {
            continue;
        }
        let t = g.x(i) + shift;
        let weight = v * g.step();
        if t > -tc && t < 0.0 {
            plan.terms.push(PlanTerm { t_prime: t, weight, basis: Basis::Impulse, params: None });
        } else {
            let pair = PairBasis::new(t, tc, m_index, 1.0)?;
            plan.terms.push(PlanTerm { t_prime: t, weight, basis: Basis::SuperoscPair, params: Some(*pair.plus()) });
        }
    }
    if plan.terms.iter().any(|t| t.basis == Basis::SuperoscPair) {
        let cosh = plan.max_cosh();
        if omega_c > max_band_edge(tc, m_index, cosh) {
            return Err(Error::MIndexTooSmall { given: m_index, required: min_m_index(tc, omega_c, cosh) });
        }
    }
    Ok(plan)
}

/// Raw plan spectrum (sum of basis terms, no mollifier) on ω ≥ 0.
pub fn evaluate_plan(plan: &WindowPlan, freq_grid: &Grid1D) -> Result<SampledFunction> {
    if freq_grid.start() < 0.0 {
        return Err(invalid("plan spectra are evaluated at omega >= 0 only"));
    }
    let ev = plan.evaluators()?;
    let vals = freq_grid.points().par_iter().map(|&w| sum_terms(&ev, w)).collect();
    SampledFunction::new(*freq_grid, vals, DomainKind::AngularFrequency)
}
