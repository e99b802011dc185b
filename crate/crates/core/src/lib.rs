//! Rate-controlling planar curves and the asymptotics of projected means.
//!
//! A strictly increasing rate function `f` with `f(0) = 0` determines a
//! planar curve `q(t) = r(|t|) (cos t, sin t)` with `r(t) = 1 + ∫₀ᵗ f⁻¹`.
//! Projecting the Euclidean sample mean of a centered planar distribution
//! onto that curve yields an estimator of `q(0) = (1, 0)` whose convergence
//! rate is dictated by `f`: polynomial, logarithmic, exponential or sticky.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and the parallel replicate runner live in the `pml` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod curve;
pub mod diagnostics;
mod error;
pub mod montecarlo;
pub mod projection;
pub mod quadrature;
pub mod rate;
pub mod stats;

pub use curve::{Curve, CurveKind, PlanarPoint, Side};
pub use error::{Error, Result};
pub use projection::{project, ProjectionResult};
pub use rate::{Family, RateFunction};
