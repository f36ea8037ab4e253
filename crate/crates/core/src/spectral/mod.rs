//! Radial harmonic analysis on `H^n`: spherical functions, the Plancherel
//! density, the spherical transform and spectral multipliers.

mod green;
mod radial;
mod spherical;
mod transform;

pub use green::{green_spectral, green_spectral_scaled};
pub use radial::{radial_grid, RadialFunction, Spacing, DECAY_TOL};
pub use spherical::{plancherel_density, spherical_derivatives, spherical_function, PlancherelDensity};
pub use transform::{
    apply_multiplier, choose_lambda_max, fractional_laplacian_radial, inverse_spherical_transform,
    l2_norm_squared, spectral_l2_norm_squared, spectral_multiplier_radial, spherical_transform, LambdaGrid,
    SpectralDensity, INVERSE_TAIL_TOL, LAMBDA_TAIL_TOL, MAX_LAMBDA,
};
