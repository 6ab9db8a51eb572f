//! Cauchy-preserving nonlinear transformations, angular random walks and
//! Cauchy continued-fraction chains, with Monte Carlo verification.
//!
//! Module map:
//!
//! * [`cauchy`]: density, CDF, quantile, characteristic function, samplers.
//! * [`transform`]: closed-form laws of `(γC₁ + δC₂)/(α − βC₁C₂)` and
//!   `(C₁ + C₂)/(1 − C₁C₂)` for general inputs.
//! * [`chain`]: exact Fibonacci-rational continued-fraction chains.
//! * [`walk`]: Euclidean angular walks and hyperbolic right triangles.
//! * [`stats`]: KS tests, empirical characteristic functions, quadrature.
//! * [`experiment`] / [`verify`]: named experiments and the acceptance checks.

pub mod cauchy;
pub mod chain;
pub mod error;
pub mod experiment;
pub mod report;
pub mod rng;
pub mod stats;
pub mod transform;
pub mod verify;
pub mod walk;

pub use cauchy::CauchyParams;
pub use error::{Error, Result};
pub use rng::RngSeed;
