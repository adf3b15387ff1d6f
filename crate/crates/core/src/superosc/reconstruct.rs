//! Time-domain window from a plan.
//!
//! A basis function is ε(t) = C Σ g(α)/|dt/dα| over the two roots of
//! t = t₀(cos α - 1)/2, so its mass over a time cell equals C times the
//! integral of the smooth α-integrand over the matching α-intervals. Cell
//! averages computed that way have exact support and no endpoint blow-up.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::grid::{DomainKind, Grid1D, SampledFunction};
use crate::numerics::quadrature::GaussLegendre;
use crate::superosc::pair::PairBasis;
use crate::superosc::plan::{Basis, WindowPlan};

/// Largest log-magnitude that can be returned unscaled.
const MAX_LN: f64 = 700.0;

/// Cell-averaged window on `time_grid`. Fails with a precision error when
/// the peak magnitude would overflow; use [`reconstruct_time_scaled`] then.
pub fn reconstruct_time(plan: &WindowPlan, time_grid: &Grid1D) -> Result<SampledFunction> {
    let (f, ln_scale) = reconstruct_time_scaled(plan, time_grid)?;
    if ln_scale > MAX_LN {
        return Err(Error::Precision(format!(
            "window peak ~ e^{ln_scale:.1} overflows f64; use the scaled reconstruction"
        )));
    }
    let s = ln_scale.exp();
    let vals = f.values().iter().map(|v| v * s).collect();
    SampledFunction::new(*time_grid, vals, DomainKind::Time)
}

/// Cell-averaged window as (values · e^{-L}, L).
pub fn reconstruct_time_scaled(plan: &WindowPlan, time_grid: &Grid1D) -> Result<(SampledFunction, f64)> {
    let h = time_grid.step();
    let n = time_grid.count();
    let tc = plan.core_support();
    let pairs: Vec<(PairBasis, Complex64)> = plan
        .terms
        .iter()
        .filter(|t| t.basis == Basis::SuperoscPair)
        .map(|t| Ok((plan.pair_of(t)?, t.weight)))
        .collect::<Result<_>>()?;

    let mut ln_scale = f64::NEG_INFINITY;
    for (p, w) in &pairs {
        for m in [p.plus(), p.minus()] {
            let c = 1.0 / (2.0 * m.scale * (2.0 * PI).sqrt());
            ln_scale = ln_scale.max(w.norm().ln() + c.ln() + m.dynamic_range());
        }
    }
    for t in plan.terms.iter().filter(|t| t.basis == Basis::Impulse) {
        ln_scale = ln_scale.max((t.weight.norm() / h).ln());
    }
    if !ln_scale.is_finite() {
        return Ok((SampledFunction::zeros(*time_grid, DomainKind::Time), 0.0));
    }

    let gl = GaussLegendre::new(8);
    let cells: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let tj = time_grid.x(j);
            let (ta, tb) = ((tj - 0.5 * h).max(-tc), (tj + 0.5 * h).min(0.0));
            if ta >= tb {
                return Complex64::new(0.0, 0.0);
            }
            let a_hi = (1.0 + 2.0 * ta / tc).clamp(-1.0, 1.0).acos();
            let a_lo = (1.0 + 2.0 * tb / tc).clamp(-1.0, 1.0).acos();
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, w) in &pairs {
                let mass = pair_mass(p, a_lo, a_hi, ln_scale - w.norm().ln(), &gl)
                    + pair_mass(p, 2.0 * PI - a_hi, 2.0 * PI - a_lo, ln_scale - w.norm().ln(), &gl);
                acc += mass * (w / w.norm()) / h;
            }
            acc
        })
        .collect();
    let mut vals = cells;

    for t in plan.terms.iter().filter(|t| t.basis == Basis::Impulse) {
        let u = time_grid.locate(t.t_prime).round();
        if u >= 0.0 && (u as usize) < n {
            vals[u as usize] += t.weight / h * (-ln_scale).exp();
        }
    }

    if let Some(m) = plan.mollifier {
        // ε_m(t_j) = Σ_l b_l ε(t_j + l h), b_l the bump mass of cell -l h
        let reach = (m.tau / h).ceil() as usize + 1;
        let weights: Vec<f64> = (0..=reach)
            .map(|l| {
                let hi = (-(l as f64 - 0.5) * h).min(0.0);
                let lo = (-(l as f64 + 0.5) * h).max(-m.tau);
                if lo >= hi {
                    0.0
                } else {
                    gl.integrate_panels(|s| m.density(s), lo, hi, 4)
                }
            })
            .collect();
        let src = vals.clone();
        for (j, v) in vals.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, b) in weights.iter().enumerate() {
                if *b != 0.0 && j + l < n {
                    acc += src[j + l] * *b;
                }
            }
            *v = acc;
        }
    }
    Ok((SampledFunction::new(*time_grid, vals, DomainKind::Time)?, ln_scale))
}

/// ∫ over [a, b] in α of both pair members' α-integrands, times e^{-shift}.
fn pair_mass(p: &PairBasis, a: f64, b: f64, shift: f64, gl: &GaussLegendre) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let members = [(p.plus(), Complex64::new(1.0, 0.0)), (p.minus(), p.minus_coefficient())];
    let (ch, sh) = (p.plus().stretch.cosh(), p.plus().stretch.sinh());
    let inv_max = p.plus().inv_scale_sq();
    // keep the phase and log-magnitude change per sub-panel below ~1
    let panels = ((b - a) * (ch + sh) * inv_max).ceil().max(1.0) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, coef) in members {
        let inv = m.inv_scale_sq();
        let ln_c = -(2.0 * m.scale * (2.0 * PI).sqrt()).ln() - shift;
        let part = gl.integrate_panels(
            |al: f64| {
                let (s, c) = al.sin_cos();
                Complex64::new(ln_c - s * sh * inv, c * ch * inv).exp()
            },
            a,
            b,
            panels,
        );
        acc += coef * part;
    }
    acc
}
