//! Time-domain L² norm of a mollified window, through Parseval:
//! ‖ε‖² = (1/2π) ∫ |M(ω) P(ω)|² dω over all real ω. The pair spectra grow
//! like e^{sinh A/δ²} at ω < 0, so the integral is accumulated in log form.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::numerics::scaled::{log_sum_exp, ScaledComplex};
use crate::superosc::params::growth_band;
use crate::superosc::plan::{TermEval, WindowPlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Relative size of the neglected mollifier tail.
    pub tail: f64,
    /// Samples per shortest spectral oscillation period.
    pub points_per_period: f64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self { tail: 1e-12, points_per_period: 16.0 }
    }
}

/// ln ‖ε‖² of the realised (mollified) window.
pub fn log_norm_sq(plan: &WindowPlan, opts: &NormOptions) -> Result<f64> {
    let moll = plan.mollifier.ok_or_else(|| {
        invalid("an unmollified window has endpoint singularities and infinite L2 norm; add a mollifier")
    })?;
    if plan.terms.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    let ev = plan.evaluators()?;
    let reach = plan.terms.iter().map(|t| t.t_prime.abs()).fold(0.0, f64::max) + plan.t0;
    let step = PI / (opts.points_per_period * reach);
    let wide = 2.0 * moll.tail_cutoff(opts.tail) / moll.tau;
    let mut lo = -wide;
    for e in &ev {
        if let TermEval::Pair { pair, .. } = e {
            lo = lo.min(1.05 * growth_band(pair.plus()).0);
        }
    }
    let ln_density = |w: f64| {
        let mut acc = ScaledComplex::ZERO;
        for e in &ev {
            let term = match e {
                TermEval::Impulse { t, w: c } => ScaledComplex::from_complex(c * Complex64::from_polar(1.0, w * t)),
                TermEval::Pair { pair, w: c } => pair.eval_scaled(w).scale(*c),
            };
            acc = acc.add(term);
        }
        let m = moll.multiplier(w).norm();
        if m == 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * (acc.ln_abs() + m.ln())
        }
    };
    let riemann = |h: f64, n: usize| {
        let logs: Vec<f64> = (0..n).into_par_iter().map(|i| ln_density(lo + (i as f64 + 0.5) * h)).collect();
        log_sum_exp(logs) + h.ln()
    };

    // Midpoint rule, halving from a coarse step. Near the band the terms beat
    // against each other and need the full step; when a growing pair
    // dominates, the integrand is a smooth peak (all pairs share the phase
    // e^{-iωt₀/2} there) and the sum settles long before that.
    let span = wide - lo;
    let mut n = ((span / step).ceil() as usize).clamp(1, 1024);
    let mut total = riemann(span / n as f64, n);
    while span / (n as f64) > step {
        n *= 2;
        let next = riemann(span / n as f64, n);
        let settled = (next - total).abs() < 1e-8;
        total = next;
        if settled {
            break;
        }
    }
    Ok(total - (2.0 * PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fit::linear_fit;
    use crate::numerics::grid::Grid1D;
    use crate::superosc::mollifier::Mollifier;
    use crate::superosc::pair::PairBasis;
    use crate::superosc::plan::{Basis, PlanTerm};
    use crate::superosc::reconstruct::reconstruct_time;

    fn single(t: f64, m: u32, moll: Option<Mollifier>) -> WindowPlan {
        let mut plan = WindowPlan { terms: vec![], t0: 1.0, half_span: t.abs(), omega_c: 0.01, m_index: m, mollifier: moll };
        let tc = plan.core_support();
        let (basis, params) = if t > -tc && t < 0.0 {
            (Basis::Impulse, None)
        } else {
            (Basis::SuperoscPair, Some(*PairBasis::new(t, tc, m, 1.0).unwrap().plus()))
        };
        plan.terms.push(PlanTerm { t_prime: t, weight: Complex64::new(1.0, 0.0), basis, params });
        plan
    }

    #[test]
    fn requires_mollifier() {
        assert!(log_norm_sq(&single(1.0, 2, None), &NormOptions::default()).is_err());
    }

    #[test]
    fn matches_time_domain_energy() {
        let moll = Some(Mollifier::new(8, 0.05).unwrap());
        for (t, m) in [(0.4, 1), (1.0, 2), (-1.6, 2), (-0.5, 2)] {
            let plan = single(t, m, moll);
            let spectral = log_norm_sq(&plan, &NormOptions::default()).unwrap();
            let g = Grid1D::linspace(-1.5, 0.5, 1 << 15).unwrap();
            let f = reconstruct_time(&plan, &g).unwrap();
            let direct = f.energy().ln();
            assert!((spectral - direct).abs() < 2e-3, "t = {t}: {spectral} vs {direct}");
        }
    }

    #[test]
    fn squared_norm_grows_like_twice_the_range() {
        let moll = Some(Mollifier::new(8, 0.05).unwrap());
        let (mut xs, mut ys) = (vec![], vec![]);
        for i in 0..6 {
            let sinh = 0.4 + 0.2 * i as f64;
            let tc = 0.95;
            let t = 0.5 * tc * (sinh.asinh().cosh() - 1.0);
            let plan = single(t, 4, moll);
            let p = plan.pair_of(&plan.terms[0]).unwrap();
            xs.push(p.plus().dynamic_range());
            ys.push(log_norm_sq(&plan, &NormOptions::default()).unwrap());
        }
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.2, "{fit:?}");
    }
}
