use serde::Serialize;

use crate::scalar::Real;

use super::domain::{BoundaryParam, DomainSpec};
use super::nearest::{candidates, checked_point, default_multiplicity_tol, resolve, unchecked_distance};
use super::vector::{self, Point};
use super::GeometryError;

/// Boundary curvature at the near point of `x` and the induced level-set data.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData<T> {
    pub kappas: Vec<T>,
    /// `κᵢ/(1+δκᵢ)`
    pub level_kappas: Vec<T>,
    /// `κ̃ = Σ κᵢ/(1+δκᵢ)`
    pub kappa_tilde: T,
    pub delta: T,
    pub param: BoundaryParam<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RidgeReason {
    Multiplicity,
    CurvatureDegenerate,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RidgeVerdict<T> {
    pub on_ridge: bool,
    pub reason: RidgeReason,
    /// Remaining distance along the normal ray to the ridge, when known in
    /// closed form.
    pub distance_to_ridge_estimate: Option<T>,
}

/// Principal curvatures at a boundary parameter, inward-normal sign.
///
/// Order: planar curves `[κ]`; cylinder `[−1/r, 0]`; torus `[tube, ring]`;
/// hyperboloid `[parallel, meridian]`.
pub fn principal_curvatures<T: Real>(domain: &DomainSpec<T>, param: &BoundaryParam<T>) -> Result<Vec<T>, GeometryError> {
    domain.validate()?;
    if param.component >= domain.component_count() || param.s.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::ParameterOutOfRange);
    }
    let k = domain.frame(param)?.line_kappas;
    Ok(match domain {
        DomainSpec::Cylinder { .. } => vec![k[0], k[1]],
        DomainSpec::Torus { .. } | DomainSpec::Hyperboloid { .. } => vec![k[1], k[0]],
        _ => vec![k[0]],
    })
}

pub fn curvature_data<T: Real>(domain: &DomainSpec<T>, x: &[T]) -> Result<CurvatureData<T>, GeometryError> {
    let p = checked_point(domain, x)?;
    let cands = candidates(domain, p)?;
    let tol = default_multiplicity_tol(cands.list[0].distance);
    let near = resolve(p, cands, tol);
    if near.multiplicity != 1 {
        return Err(GeometryError::OnRidge);
    }
    let param = near.near_points[0].param;
    let delta = near.delta;
    let kappas = principal_curvatures(domain, &param)?;
    let mut level_kappas = Vec::with_capacity(kappas.len());
    for &k in &kappas {
        let denom = T::one() + delta * k;
        if denom <= T::zero() {
            return Err(GeometryError::OnRidge);
        }
        level_kappas.push(k / denom);
    }
    let kappa_tilde = level_kappas.iter().copied().fold(T::zero(), |a, b| a + b);
    Ok(CurvatureData {
        kappas,
        level_kappas,
        kappa_tilde,
        delta,
        param,
    })
}

/// `Δδ(x) = Σ κᵢ/(1+δκᵢ)` at the near point of `x`.
pub fn laplacian_distance<T: Real>(domain: &DomainSpec<T>, x: &[T]) -> Result<T, GeometryError> {
    Ok(curvature_data(domain, x)?.kappa_tilde)
}

/// Principal curvatures of the level set of `δ` through `x`.
pub fn level_surface_curvatures<T: Real>(domain: &DomainSpec<T>, x: &[T]) -> Result<Vec<T>, GeometryError> {
    Ok(curvature_data(domain, x)?.level_kappas)
}

/// Second-order central-difference Laplacian of the distance field.
pub fn laplacian_distance_fd<T: Real>(domain: &DomainSpec<T>, x: &[T], h: T) -> Result<T, GeometryError> {
    let p = checked_point(domain, x)?;
    let three_h = T::lit(3.0) * h;
    let cands = candidates(domain, p)?;
    let delta = cands.list[0].distance;
    if delta <= three_h {
        return Err(GeometryError::StencilLeavesDomain);
    }
    let near = resolve(p, cands, default_multiplicity_tol(delta));
    if near.multiplicity != 1 {
        return Err(GeometryError::StencilCrossesRidge);
    }
    let param = near.near_points[0].param;
    if let Some(total) = ridge_distance(domain, &param)? {
        if total - delta <= three_h {
            return Err(GeometryError::StencilCrossesRidge);
        }
    }
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for k in 0..domain.dim() {
        let e = vector::unit_axis::<T>(k);
        let plus = vector::axpy(p, h, e);
        let minus = vector::axpy(p, -h, e);
        if !domain.contains(&plus[..domain.dim()]) || !domain.contains(&minus[..domain.dim()]) {
            return Err(GeometryError::StencilLeavesDomain);
        }
        let fp = unchecked_distance(domain, plus)?;
        let fm = unchecked_distance(domain, minus)?;
        acc = acc + (fp - two * delta + fm);
    }
    Ok(acc / (h * h))
}

/// Ridge verdict at multiplicity tolerance `eps·δ` and curvature margin `eps`.
pub fn is_near_ridge<T: Real>(domain: &DomainSpec<T>, x: &[T], eps: T) -> Result<RidgeVerdict<T>, GeometryError> {
    let p = checked_point(domain, x)?;
    let cands = candidates(domain, p)?;
    let delta = cands.list[0].distance;
    let tol = (eps * delta).max(T::lit(1e-12) * domain.scale());
    let near = resolve(p, cands, tol);
    if near.multiplicity != 1 {
        return Ok(RidgeVerdict {
            on_ridge: true,
            reason: RidgeReason::Multiplicity,
            distance_to_ridge_estimate: Some(T::zero()),
        });
    }
    let param = near.near_points[0].param;
    let kappas = principal_curvatures(domain, &param)?;
    let min_factor = kappas
        .iter()
        .map(|&k| T::one() + delta * k)
        .fold(T::infinity(), T::min);
    let remaining = domain
        .closed_form_ridge_distance(&param)
        .flatten()
        .map(|total| (total - delta).max(T::zero()));
    if min_factor <= eps {
        return Ok(RidgeVerdict {
            on_ridge: true,
            reason: RidgeReason::CurvatureDegenerate,
            distance_to_ridge_estimate: remaining,
        });
    }
    Ok(RidgeVerdict {
        on_ridge: false,
        reason: RidgeReason::Clear,
        distance_to_ridge_estimate: remaining,
    })
}

/// Distance from the boundary point at `param` to its ridge point along the
/// inward normal; `None` when the ray never meets the ridge.
pub fn ridge_distance<T: Real>(domain: &DomainSpec<T>, param: &BoundaryParam<T>) -> Result<Option<T>, GeometryError> {
    if let Some(known) = domain.closed_form_ridge_distance(param) {
        return Ok(known);
    }
    let frame = domain.frame(param)?;
    march(domain, frame.point, frame.normal, T::zero()).map(Some)
}

/// Ridge point `p(x)` of an off-ridge point, by marching along the normal ray
/// through `x` and bisecting on a change of near point.
pub fn ridge_point<T: Real>(domain: &DomainSpec<T>, x: &[T]) -> Result<Point<T>, GeometryError> {
    let p = checked_point(domain, x)?;
    let cands = candidates(domain, p)?;
    let delta = cands.list[0].distance;
    let near = resolve(p, cands, default_multiplicity_tol(delta));
    if near.multiplicity != 1 {
        return Err(GeometryError::OnRidge);
    }
    let frame = domain.frame(&near.near_points[0].param)?;
    let t = march(domain, frame.point, frame.normal, delta)?;
    Ok(vector::axpy(frame.point, t, frame.normal))
}

fn march<T: Real>(domain: &DomainSpec<T>, y: Point<T>, normal: Point<T>, start: T) -> Result<T, GeometryError> {
    let scale = domain.scale();
    let dim = domain.dim();
    let keeps = |t: T| -> Result<bool, GeometryError> {
        let q = vector::axpy(y, t, normal);
        if !domain.contains(&q[..dim]) {
            return Ok(false);
        }
        let cands = candidates(domain, q)?;
        let tight = T::lit(1e-12) * scale;
        let near = resolve(q, cands, tight);
        Ok(!near.continuum
            && near.multiplicity == 1
            && vector::dist(near.near_points[0].point, y) <= T::lit(1e-6) * scale)
    };
    let step = T::lit(0.01) * scale;
    let limit = T::lit(50.0) * scale;
    let mut lo = start.max(T::lit(1e-6) * scale);
    if !keeps(lo)? {
        lo = start.max(T::lit(1e-9) * scale);
    }
    let mut hi = lo + step;
    while keeps(hi)? {
        lo = hi;
        hi = hi + step;
        if hi > limit {
            return Err(GeometryError::MarchExceedsTruncation);
        }
    }
    while hi - lo > T::lit(1e-10) * scale {
        let mid = (lo + hi) * T::lit(0.5);
        if keeps(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}
