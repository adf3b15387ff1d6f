use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Uniform 1-D grid: `start + i * step` for `i in 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(invalid(format!("grid step must be positive and finite, got {step}")));
        }
        if count < 2 {
            return Err(invalid(format!("grid needs at least 2 points, got {count}")));
        }
        let end = start + step * (count - 1) as f64;
        if !start.is_finite() || !end.is_finite() {
            return Err(invalid("grid positions must be finite"));
        }
        Ok(Self { start, step, count })
    }

    /// `count` points from `start` to `end` inclusive.
    pub fn linspace(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(invalid(format!("grid needs at least 2 points, got {count}")));
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    /// Cell-centred grid of `count` cells covering `[lo, hi]`.
    pub fn midpoints(lo: f64, hi: f64, count: usize) -> Result<Self> {
        let step = (hi - lo) / count as f64;
        Self::new(lo + 0.5 * step, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }
    pub fn step(&self) -> f64 {
        self.step
    }
    pub fn count(&self) -> usize {
        self.count
    }
    pub fn end(&self) -> f64 {
        self.x(self.count - 1)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.x(i)).collect()
    }

    /// Fractional index of position `x`.
    pub fn locate(&self, x: f64) -> f64 {
        (x - self.start) / self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Time,
    AngularFrequency,
    Radius,
    Wavenumber,
}

/// Complex samples on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    kind: DomainKind,
}

impl SampledFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, kind: DomainKind) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(invalid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, values, kind })
    }

    pub fn from_fn(grid: Grid1D, kind: DomainKind, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values, kind)
    }

    pub fn zeros(grid: Grid1D, kind: DomainKind) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.count()], kind }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn kind(&self) -> DomainKind {
        self.kind
    }
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Trapezoid estimate of the integral of |f|².
    pub fn energy(&self) -> f64 {
        let n = self.values.len();
        let mut s = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            s += w * v.norm_sqr();
        }
        s * self.grid.step()
    }

    /// Four-point Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let n = self.grid.count();
        let u = self.grid.locate(x);
        if !(u >= -1e-9 && u <= (n - 1) as f64 + 1e-9) {
            return Complex64::new(0.0, 0.0);
        }
        if n < 4 {
            let i = (u.floor() as usize).min(n - 2);
            let f = u - i as f64;
            return self.values[i] * (1.0 - f) + self.values[i + 1] * f;
        }
        let i0 = (u.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let f = u - i0 as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            let mut l = 1.0;
            for k in 0..4 {
                if k != j {
                    l *= (f - k as f64) / (j as f64 - k as f64);
                }
            }
            acc += self.values[i0 + j] * l;
        }
        acc
    }
}
