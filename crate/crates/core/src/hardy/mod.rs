//! Hardy inequalities: weights, test functions, quadrature and verification.

mod constant;
mod fmt;
mod function;
mod inequality;
mod profile;
mod quadrature;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::scalar::Real;

pub use constant::{estimate_constant, hardy_quotient, ConstantEstimate, ConstantFamily, PowerBumpParams};
pub use fmt::{compare_fmt, fmt_bound, FmtRow, FmtTable};
pub use function::{band_limit, make_test_function, min_ridge_distance, random_cases, Side, TestFunction};
pub use inequality::{
    annulus_al_weight, ball_quadratic_weight, ball_weight, catalog, convex_weight, exterior_weight, fmt_c_alpha,
    fmt_weight, quadratic_form_weight, ridge_weight, torus_extra, torus_weight, two_boundary_weight, weight,
    weight_at, weighted_exterior_weight, InequalitySpec, LhsForm, PointData, WeightForm,
};
pub use profile::TestProfile;
pub use quadrature::{QuadratureSpec, Scheme};
pub use verify::{
    lhs_directional, lhs_full_gradient, rhs, truncation, verify, Estimate, HardyReport, QuadratureEcho, WeightSample,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error("invalid test profile: {0}")]
    InvalidProfile(String),
    #[error("inequality {inequality} does not apply to domain {domain}")]
    DomainMismatch { inequality: &'static str, domain: &'static str },
    #[error("inadmissible exponent: {0}")]
    InadmissibleExponent(String),
    #[error("alpha {0} is outside the admissible range")]
    AlphaOutOfRange(f64),
    #[error("inadmissible point: {0}")]
    InadmissiblePoint(String),
    #[error("band is empty or outside the domain")]
    BandEmpty,
    #[error("band reaches the ridge")]
    BandTouchesRidge,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(GeometryError),
}

/// Exponent `1 < p < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Exponent<T>(T);

impl<T: Real> Exponent<T> {
    pub fn new(p: T) -> Result<Self, HardyError> {
        if !(p.is_finite() && p > T::one()) {
            return Err(HardyError::InadmissibleExponent(format!("p = {} must satisfy 1 < p < inf", p.as_f64())));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> T {
        self.0
    }
}
