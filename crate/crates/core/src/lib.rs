//! Numerical laboratory for curvature-improved Hardy inequalities.
//!
//! Every kernel is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`, which is what the verification tolerances assume.

pub mod conformal;
pub mod geometry;
pub mod hardy;
pub mod scalar;

pub use scalar::Real;

pub type Domain = geometry::DomainSpec<f64>;
pub type Domain32 = geometry::DomainSpec<f32>;
pub type MapSpec = conformal::ConformalMapSpec<f64>;
pub type Inequality = hardy::InequalitySpec<f64>;
pub type Profile = hardy::TestProfile<f64>;
pub type Quadrature = hardy::QuadratureSpec<f64>;
pub type Report = hardy::HardyReport<f64>;
