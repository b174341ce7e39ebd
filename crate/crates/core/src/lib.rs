//! Eigenvector-following saddle dynamics.
//!
//! `saddlewalk` integrates and analyses the idealized saddle dynamics (ISD)
//!
//! ```text
//! x' = -(I - 2 v1(x) v1(x)^T) grad E(x)
//! ```
//!
//! and the gentlest ascent dynamics (GAD), in which the orientation `v`
//! relaxes towards the lowest Hessian eigenvector on a time scale `eps^2`.
//! Besides the flows themselves the crate provides the tools needed to study
//! where these methods break down: location and classification of
//! eigenvalue-crossing singularities, finite-time blow-up detection, sampled
//! certification of index-1 regions, the reduced planar systems that govern
//! GAD near an attractive singularity, and measurement of the resulting
//! quasi-periodic orbits.
//!
//! Module map:
//!
//! * [`landscape`]: energy models with derivatives up to third order.
//! * [`spectral`]: lowest eigenpairs, sign gauge, invariant subspaces.
//! * [`ode`]: fixed (RK4) and adaptive (Dormand-Prince 5(4)) steppers.
//! * [`flows`]: gradient flow, ISD and GAD fields plus event-aware integration.
//! * [`singularity`]: discriminant, matrix `A`, classification, Newton location.
//! * [`reduced`]: leading-order, polar and `(r, omega)` reduced systems.
//! * [`analysis`]: region certificates, Lyapunov checks, basin maps, cycles.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod flows;
pub mod io;
pub mod landscape;
pub mod ode;
pub mod reduced;
pub mod singularity;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use flows::{Dynamics, IntegratorConfig, StopEvent, Trajectory};
pub use landscape::{EnergyModel, Landscape, ModelSpec};
pub use spectral::SpectralInfo;
pub use tensor::Tensor3;

/// 2x2 rotation matrix of angle `omega`.
pub fn rotation(omega: f64) -> nalgebra::Matrix2<f64> {
    let (s, c) = omega.sin_cos();
    nalgebra::Matrix2::new(c, -s, s, c)
}
