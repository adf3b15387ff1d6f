//! Numerics for remote preparation of single-particle field states with
//! superoscillatory detector windows.
//!
//! Modules, bottom up: [`numerics`] (special functions, quadrature, transforms),
//! [`dispersion`] (field models), [`superosc`] (window synthesis),
//! [`fieldstate`] (target and generated states, fidelity, probability) and
//! [`dynamics`] (propagation probes and vacuum correlators).

pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod fieldstate;
pub mod numerics;
pub mod superosc;

pub use error::{Error, Result};
