//! Foundational kernels: Bessel functions, quadrature, direct Fourier
//! transforms, root finding, extrapolation and least-squares fits.

pub mod bessel;
pub mod extrapolation;
pub mod fit;
pub mod fourier;
pub mod grid;
pub mod quadrature;
pub mod roots;
pub mod scaled;

pub use bessel::{bessel_j, i0_scaled, j0, j1, BesselOrder};
pub use fourier::{cosine_transform, dft_freq_to_time, dft_time_to_freq};
pub use grid::{DomainKind, Grid1D, SampledFunction};
pub use quadrature::{periodic_quadrature, periodic_trapezoid, GaussLegendre, DEFAULT_TOL};
pub use scaled::ScaledComplex;
