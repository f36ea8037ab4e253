//! Special functions: modified Bessel functions with derivative jets, and
//! Gamma-function utilities.

pub mod bessel;
pub mod gamma;
pub mod jet;

pub use bessel::{bessel_i, bessel_i_derivative, bessel_k, bessel_k_jet, bessel_k_scaled, BesselOrder};
pub use gamma::{gamma, ln_gamma_abs, log_gamma_complex_abs};
pub use jet::Jet;
