use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Default relative tolerance of every adaptive routine.
pub const DEFAULT_TOL: f64 = 1e-10;
const PERIODIC_CAP: usize = 1 << 20;

/// Trapezoid rule over one period [0, 2π) with `n` equispaced samples.
pub fn periodic_trapezoid(f: impl Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let h = 2.0 * PI / n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        s += f(h * j as f64);
    }
    s * h
}

/// Periodic trapezoid rule with doubling from `n_samples` until successive
/// estimates agree to `tol` (relative), or to the rounding floor set by the
/// integrand's L1 mass.
pub fn periodic_quadrature(
    f: impl Fn(f64) -> Complex64,
    n_samples: usize,
    tol: f64,
) -> Result<Complex64> {
    if n_samples < 16 || !n_samples.is_power_of_two() {
        return Err(invalid(format!("n_samples must be a power of two >= 16, got {n_samples}")));
    }
    let mut n = n_samples;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for j in 0..n {
        let v = f(2.0 * PI * j as f64 / n as f64);
        sum += v;
        mass += v.norm();
    }
    let mut est = sum * (2.0 * PI / n as f64);
    while n < PERIODIC_CAP {
        // reuse the previous samples, add the odd ones
        let h = 2.0 * PI / (2 * n) as f64;
        for j in 0..n {
            let v = f(h * (2 * j + 1) as f64);
            sum += v;
            mass += v.norm();
        }
        n *= 2;
        let next = sum * (2.0 * PI / n as f64);
        let diff = (next - est).norm();
        let floor = 64.0 * f64::EPSILON * mass * (2.0 * PI / n as f64);
        if diff <= tol * next.norm() || diff <= floor {
            return Ok(next);
        }
        est = next;
    }
    Err(Error::NonConvergence(format!(
        "periodic quadrature did not settle within {PERIODIC_CAP} samples; integrand dynamic range too large"
    )))
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel rule on [a, b].
    pub fn integrate<T>(&self, f: impl Fn(f64) -> T, a: f64, b: f64) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + f(c + h * x) * (w * h);
        }
        s
    }

    /// Composite rule over `panels` equal panels.
    pub fn integrate_panels<T>(&self, f: impl Fn(f64) -> T, a: f64, b: f64, panels: usize) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        let panels = panels.max(1);
        let w = (b - a) / panels as f64;
        let mut s = T::default();
        for p in 0..panels {
            let lo = a + w * p as f64;
            s = s + self.integrate(&f, lo, lo + w);
        }
        s
    }

    /// (abscissa, weight) pairs of the composite rule, for reuse across
    /// many integrands sharing one discretisation.
    pub fn panel_points(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let panels = panels.max(1);
        let w = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.nodes.len());
        for p in 0..panels {
            let c = a + w * (p as f64 + 0.5);
            for (x, wt) in self.nodes.iter().zip(&self.weights) {
                out.push((c + 0.5 * w * x, 0.5 * w * wt));
            }
        }
        out
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite 16-point Gauss-Legendre with panel doubling until two
/// successive estimates agree to `tol` relative.
pub fn integrate_adaptive(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let gl = GaussLegendre::new(16);
    let mut panels = 4;
    let mut prev = gl.integrate_panels(&f, a, b, panels);
    while panels < 1 << 16 {
        panels *= 2;
        let next = gl.integrate_panels(&f, a, b, panels);
        if (next - prev).norm() <= tol * next.norm().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!("adaptive quadrature on [{a}, {b}] did not converge")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel::j0;

    #[test]
    fn fourier_mode_integrates_to_zero() {
        for n in [16, 32, 128] {
            let v = periodic_trapezoid(|a| Complex64::new(0.0, a).exp(), n);
            assert!(v.norm() < 1e-14);
        }
        let v = periodic_quadrature(|a| Complex64::new(0.0, a).exp(), 16, DEFAULT_TOL).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn constant_gives_two_pi() {
        let v = periodic_quadrature(|_| Complex64::new(1.0, 0.0), 16, DEFAULT_TOL).unwrap();
        assert!((v.re - 2.0 * PI).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn bessel_integral_representation() {
        let v = periodic_quadrature(|a| Complex64::new(0.0, a.cos()).exp(), 16, DEFAULT_TOL).unwrap();
        assert!((v.re - 2.0 * PI * j0(1.0)).abs() < 1e-13);
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_sample_counts() {
        assert!(periodic_quadrature(|_| Complex64::new(1.0, 0.0), 8, 1e-10).is_err());
        assert!(periodic_quadrature(|_| Complex64::new(1.0, 0.0), 24, 1e-10).is_err());
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let gl = GaussLegendre::new(16);
        let s: f64 = gl.weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // degree 31 is exact
        let v = gl.integrate(|x: f64| x.powi(30), -1.0, 1.0);
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
        let v = gl.integrate_panels(|x: f64| x.sin(), 0.0, PI, 8);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gaussian() {
        let v = integrate_adaptive(|x| Complex64::new((-x * x).exp(), 0.0), -8.0, 8.0, 1e-12).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-12);
    }
}
