//! Fractional Laplacian on hyperbolic space: Green's functions, the singular
//! integral kernel, radial spherical transforms and a solver for
//! `u = ∫ G_s u^p`.

pub mod error;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{BallPoint, Foliation, HPoint, HalfSpacePoint};
pub use kernels::{GreenFunction, KernelConstants, ProblemParams, Regime};
pub use solver::{MovingPlaneReport, RadialOperatorMatrix, SolveReport};
pub use spectral::{LambdaGrid, RadialFunction, Spacing, SpectralDensity};
