//! Casimir stress inside planar inhomogeneous dielectrics.
//!
//! The stress `σ_zz(z)` is the renormalized coincidence limit of the
//! imaginary-frequency Green functions of the two polarizations, integrated
//! over the imaginary wavenumber `κ` and the transverse wavenumber `u`.
//! Units are `ħ = c = 1`; lengths are in an implicit unit `L` and stresses in
//! `ħc/L⁴`.

pub mod analytic;
pub mod bessel;
pub mod error;
pub mod green;
pub mod ode;
pub mod output;
pub mod presets;
pub mod profile;
pub mod quadrature;
pub mod renorm;
pub mod stress;
pub mod validate;

pub use error::{Error, Result};
