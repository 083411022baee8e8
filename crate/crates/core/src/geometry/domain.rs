use crate::conformal::ConformalMapSpec;
use crate::scalar::Real;

use super::curve::PlaneCurve;
use super::vector::{self, Point};
use super::GeometryError;

/// Catalog of analytic domains with closed-form boundary parametrizations.
///
/// Lengths are in the same unit throughout. `half_height` and `s_max` are
/// quadrature truncations of genuinely unbounded domains and never change
/// membership or distance.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec<T> {
    Disc { radius: T },
    Annulus { inner: T, outer: T },
    Ellipse { a: T, b: T },
    ExteriorDisc { radius: T },
    Cylinder { radius: T, half_height: T },
    Torus { major: T, minor: T },
    /// `x₁² + x₂² < 1 + x₃²`
    Hyperboloid { s_max: T },
    ConformalAnnulus { map: ConformalMapSpec<T> },
}

/// A boundary parameter `s′` together with the boundary component it lives on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryParam<T> {
    pub component: usize,
    pub s: [T; 2],
}

impl<T: Real> BoundaryParam<T> {
    pub fn new(component: usize, s: &[T]) -> Self {
        let mut arr = [T::zero(); 2];
        for (dst, &src) in arr.iter_mut().zip(s) {
            *dst = src;
        }
        BoundaryParam { component, s: arr }
    }
}

/// Range of one boundary parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamAxis<T> {
    pub lo: T,
    pub hi: T,
    pub periodic: bool,
    /// Every quantity in the catalog is invariant along this parameter.
    pub symmetric: bool,
}

/// Boundary point, inward normal and the principal parameter lines through it.
#[derive(Clone, Copy, Debug)]
pub struct Frame<T> {
    pub point: Point<T>,
    pub normal: Point<T>,
    /// Unit tangent of each parameter line.
    pub tangents: [Point<T>; 2],
    /// `|∂γ/∂sⁱ|`
    pub speeds: [T; 2],
    /// Normal curvature along each parameter line, inward-normal sign.
    pub line_kappas: [T; 2],
}

impl<T: Real> DomainSpec<T> {
    pub fn validate(&self) -> Result<(), GeometryError> {
        let positive = |name: &str, v: T| -> Result<(), GeometryError> {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(GeometryError::InvalidDomain(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            DomainSpec::Disc { radius } | DomainSpec::ExteriorDisc { radius } => {
                positive("radius", *radius)
            }
            DomainSpec::Annulus { inner, outer } => {
                positive("inner radius", *inner)?;
                positive("outer radius", *outer)?;
                if inner >= outer {
                    return Err(GeometryError::InvalidDomain(
                        "annulus needs inner < outer".into(),
                    ));
                }
                Ok(())
            }
            DomainSpec::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)
            }
            DomainSpec::Cylinder { radius, half_height } => {
                positive("radius", *radius)?;
                positive("half_height", *half_height)
            }
            DomainSpec::Torus { major, minor } => {
                positive("major radius", *major)?;
                positive("minor radius", *minor)?;
                if major <= minor {
                    return Err(GeometryError::InvalidDomain(
                        "torus needs major > minor".into(),
                    ));
                }
                Ok(())
            }
            DomainSpec::Hyperboloid { s_max } => positive("s_max", *s_max),
            DomainSpec::ConformalAnnulus { map } => map
                .validate()
                .map_err(|e| GeometryError::InvalidDomain(e.to_string())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Cylinder { .. } | DomainSpec::Torus { .. } | DomainSpec::Hyperboloid { .. } => 3,
            _ => 2,
        }
    }

    /// Characteristic length used to size finite-difference steps and
    /// tolerances. Truncation lengths do not count.
    pub fn scale(&self) -> T {
        match self {
            DomainSpec::Disc { radius }
            | DomainSpec::ExteriorDisc { radius }
            | DomainSpec::Cylinder { radius, .. } => *radius,
            DomainSpec::Annulus { outer, .. } => *outer,
            DomainSpec::Ellipse { a, b } => a.max(*b),
            DomainSpec::Torus { major, .. } => *major,
            DomainSpec::Hyperboloid { .. } => T::one(),
            DomainSpec::ConformalAnnulus { map } => map.bounding_radius(),
        }
    }

    /// `sup δ`, when finite and known in closed form.
    pub fn inradius(&self) -> Option<T> {
        match self {
            DomainSpec::Disc { radius } | DomainSpec::Cylinder { radius, .. } => Some(*radius),
            DomainSpec::Annulus { inner, outer } => Some((*outer - *inner) * T::lit(0.5)),
            DomainSpec::Ellipse { a, b } => Some(a.min(*b)),
            DomainSpec::Torus { minor, .. } => Some(*minor),
            DomainSpec::ExteriorDisc { .. } | DomainSpec::Hyperboloid { .. } => None,
            DomainSpec::ConformalAnnulus { .. } => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(
            self,
            DomainSpec::ExteriorDisc { .. } | DomainSpec::Cylinder { .. } | DomainSpec::Hyperboloid { .. }
        )
    }

    pub fn is_convex(&self) -> bool {
        matches!(
            self,
            DomainSpec::Disc { .. } | DomainSpec::Ellipse { .. } | DomainSpec::Cylinder { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            DomainSpec::Disc { .. } => "disc",
            DomainSpec::Annulus { .. } => "annulus",
            DomainSpec::Ellipse { .. } => "ellipse",
            DomainSpec::ExteriorDisc { .. } => "exterior-disc",
            DomainSpec::Cylinder { .. } => "cylinder",
            DomainSpec::Torus { .. } => "torus",
            DomainSpec::Hyperboloid { .. } => "hyperboloid",
            DomainSpec::ConformalAnnulus { .. } => "conformal-annulus",
        }
    }

    pub(crate) fn check_dim(&self, x: &[T]) -> Result<Point<T>, GeometryError> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::PointOutsideDomain);
        }
        Ok(vector::from_slice(x))
    }

    /// Membership test.
    pub fn contains(&self, x: &[T]) -> bool {
        let Ok(p) = self.check_dim(x) else {
            return false;
        };
        let rxy = (p[0] * p[0] + p[1] * p[1]).sqrt();
        match self {
            DomainSpec::Disc { radius } => rxy < *radius,
            DomainSpec::Annulus { inner, outer } => rxy > *inner && rxy < *outer,
            DomainSpec::Ellipse { a, b } => {
                let u = p[0] / *a;
                let v = p[1] / *b;
                u * u + v * v < T::one()
            }
            DomainSpec::ExteriorDisc { radius } => rxy > *radius,
            DomainSpec::Cylinder { radius, .. } => rxy < *radius,
            DomainSpec::Torus { major, minor } => {
                let dr = rxy - *major;
                dr * dr + p[2] * p[2] < *minor * *minor
            }
            DomainSpec::Hyperboloid { .. } => p[0] * p[0] + p[1] * p[1] < T::one() + p[2] * p[2],
            DomainSpec::ConformalAnnulus { map } => {
                map.contains(num_complex::Complex::new(p[0], p[1]))
            }
        }
    }

    /// Planar boundary curves with the side the domain lies on
    /// (`true` = inside the curve). Empty for the three-dimensional variants.
    pub fn plane_curves(&self) -> Vec<(PlaneCurve<T>, bool)> {
        match self {
            DomainSpec::Disc { radius } => vec![(PlaneCurve::Circle { radius: *radius }, true)],
            DomainSpec::Annulus { inner, outer } => vec![
                (PlaneCurve::Circle { radius: *inner }, false),
                (PlaneCurve::Circle { radius: *outer }, true),
            ],
            DomainSpec::Ellipse { a, b } => vec![(PlaneCurve::Ellipse { a: *a, b: *b }, true)],
            DomainSpec::ExteriorDisc { radius } => {
                vec![(PlaneCurve::Circle { radius: *radius }, false)]
            }
            DomainSpec::ConformalAnnulus { map } => map.boundary_curves(),
            _ => Vec::new(),
        }
    }

    pub fn component_count(&self) -> usize {
        match self.dim() {
            3 => 1,
            _ => self.plane_curves().len(),
        }
    }

    /// Parameter axes of one component; `n − 1` entries.
    pub fn param_axes(&self, _component: usize) -> Vec<ParamAxis<T>> {
        let angle = |symmetric| ParamAxis {
            lo: T::zero(),
            hi: T::TAU(),
            periodic: true,
            symmetric,
        };
        match self {
            DomainSpec::Disc { .. } | DomainSpec::Annulus { .. } | DomainSpec::ExteriorDisc { .. } => {
                vec![angle(true)]
            }
            DomainSpec::Ellipse { .. } | DomainSpec::ConformalAnnulus { .. } => vec![angle(false)],
            DomainSpec::Cylinder { half_height, .. } => vec![
                angle(true),
                ParamAxis {
                    lo: -*half_height,
                    hi: *half_height,
                    periodic: false,
                    symmetric: false,
                },
            ],
            DomainSpec::Torus { .. } => vec![angle(true), angle(false)],
            DomainSpec::Hyperboloid { s_max } => vec![
                ParamAxis {
                    lo: -*s_max,
                    hi: *s_max,
                    periodic: false,
                    symmetric: false,
                },
                angle(true),
            ],
        }
    }

    /// Boundary frame at `param`.
    pub fn frame(&self, param: &BoundaryParam<T>) -> Result<Frame<T>, GeometryError> {
        let zero = T::zero();
        let one = T::one();
        match self {
            DomainSpec::Cylinder { radius, .. } => {
                let (sin, cos) = param.s[0].sin_cos();
                Ok(Frame {
                    point: [*radius * cos, *radius * sin, param.s[1]],
                    normal: [-cos, -sin, zero],
                    tangents: [[-sin, cos, zero], [zero, zero, one]],
                    speeds: [*radius, one],
                    line_kappas: [-radius.recip(), zero],
                })
            }
            DomainSpec::Torus { major, minor } => {
                let (s1, c1) = param.s[0].sin_cos();
                let (s2, c2) = param.s[1].sin_cos();
                let ring = *major + *minor * c2;
                Ok(Frame {
                    point: [ring * c1, ring * s1, *minor * s2],
                    normal: [-c2 * c1, -c2 * s1, -s2],
                    tangents: [[-s1, c1, zero], [-s2 * c1, -s2 * s1, c2]],
                    speeds: [ring, *minor],
                    line_kappas: [-c2 / ring, -minor.recip()],
                })
            }
            DomainSpec::Hyperboloid { .. } => {
                let s = param.s[0];
                let (st, ct) = param.s[1].sin_cos();
                let q = (s * s + one).sqrt();
                let w = (s * s * T::lit(2.0) + one).sqrt();
                let meridian = [s / q * ct, s / q * st, one];
                let mlen = w / q;
                Ok(Frame {
                    point: [q * ct, q * st, s],
                    normal: [-q * ct / w, -q * st / w, s / w],
                    tangents: [vector::scale(meridian, mlen.recip()), [-st, ct, zero]],
                    speeds: [mlen, q],
                    line_kappas: [(w * w * w).recip(), -w.recip()],
                })
            }
            _ => {
                let curves = self.plane_curves();
                let (curve, inside) = curves
                    .get(param.component)
                    .ok_or(GeometryError::ParameterOutOfRange)?;
                let jet = curve.eval(param.s[0]);
                let left = jet.left_normal();
                let sign = if *inside { one } else { -one };
                let speed = jet.speed();
                Ok(Frame {
                    point: [jet.p[0], jet.p[1], zero],
                    normal: [sign * left[0], sign * left[1], zero],
                    tangents: [[jet.d1[0] / speed, jet.d1[1] / speed, zero], [zero; 3]],
                    speeds: [speed, zero],
                    line_kappas: [-sign * jet.signed_curvature(), zero],
                })
            }
        }
    }

    /// Distance along the inward normal from the boundary point at `param`
    /// to its ridge point, when known in closed form. `None` with `Ok` means
    /// the ray never meets the ridge.
    pub(crate) fn closed_form_ridge_distance(
        &self,
        param: &BoundaryParam<T>,
    ) -> Option<Option<T>> {
        let half = T::lit(0.5);
        match self {
            DomainSpec::Disc { radius } | DomainSpec::Cylinder { radius, .. } => Some(Some(*radius)),
            DomainSpec::Annulus { inner, outer } => Some(Some((*outer - *inner) * half)),
            DomainSpec::ExteriorDisc { .. } => Some(None),
            DomainSpec::Torus { minor, .. } => Some(Some(*minor)),
            DomainSpec::Hyperboloid { .. } => {
                let s = param.s[0];
                Some(Some((s * s * T::lit(2.0) + T::one()).sqrt()))
            }
            DomainSpec::Ellipse { a, b } => {
                // the inward normal meets the longer axis inside the skeleton segment
                let (sin, cos) = param.s[0].sin_cos();
                let n = (*b * *b * cos * cos + *a * *a * sin * sin).sqrt();
                Some(Some(if a >= b { *b / *a * n } else { *a / *b * n }))
            }
            DomainSpec::ConformalAnnulus { .. } => None,
        }
    }
}
