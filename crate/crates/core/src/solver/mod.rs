//! Integral-equation solver and the pointwise diagnostics built on it.

mod angular;
pub mod hls;
pub mod matrix;
pub mod moving_plane;
pub mod picard;
pub mod pv;

pub use hls::{hls_constant, hls_ratio};
pub use matrix::{green_angular_kernel, green_convolution, radial_green_matrix, RadialOperatorMatrix};
pub use moving_plane::{moving_plane_sweep, LeafReport, MovingPlaneReport, SweepOptions};
pub use picard::{
    decay_check, is_nonincreasing, picard_solve, picard_solve_from, residual, DecayReport, SolveReport,
};
pub use pv::{direct_fractional_laplacian, direct_fractional_laplacian_radial, DELTA_REFINEMENT_TOL};
