//! Distance-to-boundary fields, near points, ridges and boundary curvature
//! for a fixed catalog of analytic domains.

pub mod curve;
pub mod domain;
mod nearest;
mod ridge;
pub mod sample;
pub mod vector;

use thiserror::Error;

pub use domain::{BoundaryParam, DomainSpec, Frame, ParamAxis};
pub use nearest::{default_multiplicity_tol, distance, near_points, NearPoint, NearPointResult};
pub use ridge::{
    curvature_data, is_near_ridge, laplacian_distance, laplacian_distance_fd,
    level_surface_curvatures, principal_curvatures, ridge_distance, ridge_point, CurvatureData,
    RidgeReason, RidgeVerdict,
};
pub use sample::sample_off_ridge;
pub use vector::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("point has {got} coordinates, domain needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point outside domain")]
    PointOutsideDomain,
    #[error("near-point refinement did not converge")]
    FailedMinimization,
    #[error("boundary parameter out of range")]
    ParameterOutOfRange,
    #[error("point lies on the ridge")]
    OnRidge,
    #[error("finite-difference stencil leaves the domain")]
    StencilLeavesDomain,
    #[error("finite-difference stencil crosses the ridge")]
    StencilCrossesRidge,
    #[error("ridge march exceeds the domain truncation")]
    MarchExceedsTruncation,
}
