//! The inequality catalog: left-hand-side forms, constants, weights and
//! admissible domains.

use serde::Serialize;

use crate::geometry::{
    self, laplacian_distance, near_points, principal_curvatures, BoundaryParam,
    DomainSpec, Point,
};
use crate::geometry::vector;
use crate::scalar::Real;

use super::{Exponent, HardyError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InequalitySpec<T> {
    /// Weight `1 − pδΔδ/(p−1)` with `Δδ` from finite differences of `δ`.
    GeneralRidge,
    /// Weight `1 − pδκ̃/(p−1)` with `κ̃` from boundary curvature.
    CurvatureRidge,
    /// Weight `1 + pδ|κ̃|/(p−1)`.
    ConvexImproved,
    /// Full gradient, weight `1 + pδ(n−1)/((p−1)|x|)`.
    BallImproved,
    /// `p = 2`, full gradient, constant 1/4, form
    /// `(n−2)²/|x|² + (1+2|δΔδ|)/δ² + 2(n−2)x·∇δ/(|x|²δ)`.
    QuadraticForm2,
    /// `p = 2`, full gradient, constant 1/4, form `(n−2)²/|x|² + 1/δ² + 2/(|x|δ)`.
    BallQuadratic,
    /// Full gradient, weight `1 − pκ̃δ/(p−1)` outside a convex set.
    ExteriorConvex,
    /// `∫δᵖ|∇δ·∇f|ᵖ ≥ p⁻ᵖ∫(1+pκ̃δ)|f|ᵖ`.
    WeightedExterior,
    /// `p = 2`, full gradient, two convex boundaries.
    TwoBoundary,
    /// `p = 2`, full gradient, `(n−1)(n−3)/|x|² + (1/δ₁ + 1/δ₂)²`.
    AnnulusAL,
    /// Weight `1 + pδ(1/(r−δ) − 1/√(x₁²+x₂²))/(p−1)` on a ring torus.
    TorusImproved,
    /// Weight `1 − pδκ̃/(p−1)` on the one-sheeted hyperboloid.
    HyperboloidSigned,
    /// `p = 2`, full gradient, constant 1/4, form
    /// `1/δ² + 4c_α D^{−(α+2)} δ^α`, `D = 2 sup δ`.
    FmtComparison { alpha: T },
}

/// Integrand of the left-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhsForm {
    /// `|∇δ·∇f|ᵖ`
    Directional,
    /// `|∇f|ᵖ`
    FullGradient,
    /// `δᵖ|∇δ·∇f|ᵖ`
    WeightedDirectional,
}

/// Whether the weight multiplies `|f|ᵖ/δᵖ` or `|f|ᵖ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightForm {
    OverDeltaP,
    Plain,
}

/// Every inequality in the catalog, with `α = −1` for the comparison entry.
pub fn catalog<T: Real>() -> Vec<InequalitySpec<T>> {
    use InequalitySpec::*;
    vec![
        GeneralRidge,
        CurvatureRidge,
        ConvexImproved,
        BallImproved,
        QuadraticForm2,
        BallQuadratic,
        ExteriorConvex,
        WeightedExterior,
        TwoBoundary,
        AnnulusAL,
        TorusImproved,
        HyperboloidSigned,
        FmtComparison { alpha: -T::one() },
    ]
}

impl<T: Real> InequalitySpec<T> {
    pub fn name(&self) -> &'static str {
        match self {
            InequalitySpec::GeneralRidge => "general-ridge",
            InequalitySpec::CurvatureRidge => "curvature-ridge",
            InequalitySpec::ConvexImproved => "convex-improved",
            InequalitySpec::BallImproved => "ball-improved",
            InequalitySpec::QuadraticForm2 => "quadratic-form2",
            InequalitySpec::BallQuadratic => "ball-quadratic",
            InequalitySpec::ExteriorConvex => "exterior-convex",
            InequalitySpec::WeightedExterior => "weighted-exterior",
            InequalitySpec::TwoBoundary => "two-boundary",
            InequalitySpec::AnnulusAL => "annulus-al",
            InequalitySpec::TorusImproved => "torus-improved",
            InequalitySpec::HyperboloidSigned => "hyperboloid-signed",
            InequalitySpec::FmtComparison { .. } => "fmt-comparison",
        }
    }

    pub fn lhs_form(&self) -> LhsForm {
        match self {
            InequalitySpec::GeneralRidge
            | InequalitySpec::CurvatureRidge
            | InequalitySpec::ConvexImproved
            | InequalitySpec::TorusImproved
            | InequalitySpec::HyperboloidSigned => LhsForm::Directional,
            InequalitySpec::WeightedExterior => LhsForm::WeightedDirectional,
            _ => LhsForm::FullGradient,
        }
    }

    pub fn weight_form(&self) -> WeightForm {
        match self {
            InequalitySpec::QuadraticForm2
            | InequalitySpec::BallQuadratic
            | InequalitySpec::TwoBoundary
            | InequalitySpec::AnnulusAL
            | InequalitySpec::WeightedExterior
            | InequalitySpec::FmtComparison { .. } => WeightForm::Plain,
            _ => WeightForm::OverDeltaP,
        }
    }

    pub fn p2_only(&self) -> bool {
        matches!(
            self,
            InequalitySpec::QuadraticForm2
                | InequalitySpec::BallQuadratic
                | InequalitySpec::TwoBoundary
                | InequalitySpec::AnnulusAL
                | InequalitySpec::FmtComparison { .. }
        )
    }

    /// Constant in front of the right-hand side.
    pub fn constant(&self, p: Exponent<T>) -> T {
        let p = p.value();
        match self {
            InequalitySpec::WeightedExterior => p.powf(-p),
            InequalitySpec::QuadraticForm2
            | InequalitySpec::BallQuadratic
            | InequalitySpec::TwoBoundary
            | InequalitySpec::AnnulusAL
            | InequalitySpec::FmtComparison { .. } => T::lit(0.25),
            _ => ((p - T::one()) / p).powf(p),
        }
    }

    /// Test functions must be supported away from the ridge.
    pub fn requires_ridge_avoidance(&self, domain: &DomainSpec<T>) -> bool {
        match self {
            InequalitySpec::GeneralRidge
            | InequalitySpec::CurvatureRidge
            | InequalitySpec::HyperboloidSigned
            | InequalitySpec::QuadraticForm2
            | InequalitySpec::TwoBoundary => true,
            // the neighbourhood sign condition is established for balls and cylinders only
            InequalitySpec::ConvexImproved => matches!(domain, DomainSpec::Ellipse { .. }),
            _ => false,
        }
    }

    /// Condition the result relies on without checking it numerically.
    pub fn assumption(&self, domain: &DomainSpec<T>) -> Option<&'static str> {
        match (self, domain) {
            (InequalitySpec::ConvexImproved, DomainSpec::Disc { .. } | DomainSpec::Cylinder { .. })
            | (InequalitySpec::BallImproved, _)
            | (InequalitySpec::TorusImproved, _) => {
                Some("inward ridge-neighbourhood sign condition taken as given for this domain")
            }
            _ => None,
        }
    }

    pub fn admits(&self, domain: &DomainSpec<T>) -> bool {
        use DomainSpec as D;
        let ring_torus = matches!(domain, D::Torus { major, minor } if *major > *minor + *minor);
        match self {
            InequalitySpec::GeneralRidge | InequalitySpec::CurvatureRidge => !matches!(domain, D::ConformalAnnulus { .. }),
            InequalitySpec::ConvexImproved => matches!(domain, D::Disc { .. } | D::Ellipse { .. } | D::Cylinder { .. }),
            InequalitySpec::BallImproved | InequalitySpec::BallQuadratic => matches!(domain, D::Disc { .. }),
            InequalitySpec::QuadraticForm2 => {
                ring_torus
                    || matches!(
                        domain,
                        D::Disc { .. } | D::Ellipse { .. } | D::Cylinder { .. } | D::Hyperboloid { .. }
                    )
            }
            InequalitySpec::ExteriorConvex | InequalitySpec::WeightedExterior => matches!(domain, D::ExteriorDisc { .. }),
            InequalitySpec::TwoBoundary | InequalitySpec::AnnulusAL => matches!(domain, D::Annulus { .. }),
            InequalitySpec::TorusImproved => ring_torus,
            InequalitySpec::HyperboloidSigned => matches!(domain, D::Hyperboloid { .. }),
            InequalitySpec::FmtComparison { .. } => {
                matches!(domain, D::Disc { .. } | D::Ellipse { .. } | D::Cylinder { .. })
            }
        }
    }

    pub fn check(&self, domain: &DomainSpec<T>, p: Exponent<T>) -> Result<(), HardyError> {
        domain.validate()?;
        if !self.admits(domain) {
            return Err(HardyError::DomainMismatch {
                inequality: self.name(),
                domain: domain.name(),
            });
        }
        if self.p2_only() && p.value() != T::lit(2.0) {
            return Err(HardyError::InadmissibleExponent(format!(
                "{} holds for p = 2 only",
                self.name()
            )));
        }
        if let InequalitySpec::FmtComparison { alpha } = self {
            if !(*alpha > -T::lit(2.0)) || !alpha.is_finite() {
                return Err(HardyError::AlphaOutOfRange(alpha.as_f64()));
            }
        }
        Ok(())
    }
}

/// Geometry at one point: distance, near point, curvature and `∇δ`.
#[derive(Clone, Debug)]
pub struct PointData<T> {
    pub x: Point<T>,
    pub delta: T,
    pub param: BoundaryParam<T>,
    pub kappas: Vec<T>,
    pub grad_delta: Point<T>,
}

impl<T: Real> PointData<T> {
    pub fn at(domain: &DomainSpec<T>, x: &[T]) -> Result<Self, HardyError> {
        let near = near_points(domain, x, geometry::default_multiplicity_tol(T::one()))?;
        if near.multiplicity != 1 {
            return Err(HardyError::InadmissiblePoint("point lies on the ridge".into()));
        }
        let np = near.near_points[0];
        Ok(PointData {
            x: vector::from_slice(x),
            delta: near.delta,
            param: np.param,
            kappas: principal_curvatures(domain, &np.param)?,
            grad_delta: near.grad_delta.unwrap_or([T::zero(); 3]),
        })
    }

    /// Point `γ(s′) + δ n(s′)` in normal coordinates.
    pub(crate) fn from_normal(domain: &DomainSpec<T>, param: BoundaryParam<T>, delta: T) -> Result<Self, HardyError> {
        let frame = domain.frame(&param)?;
        Ok(PointData {
            x: vector::axpy(frame.point, delta, frame.normal),
            delta,
            param,
            kappas: principal_curvatures(domain, &param)?,
            grad_delta: frame.normal,
        })
    }

    pub fn kappa_tilde(&self) -> T {
        self.kappas
            .iter()
            .map(|&k| k / (T::one() + self.delta * k))
            .fold(T::zero(), |a, b| a + b)
    }

    fn radius(&self) -> T {
        vector::norm(self.x)
    }
}

pub fn ridge_weight<T: Real>(p: T, delta: T, lap: T) -> T {
    T::one() - p * delta * lap / (p - T::one())
}

pub fn convex_weight<T: Real>(p: T, delta: T, kappa_tilde: T) -> T {
    T::one() + p * delta * kappa_tilde.abs() / (p - T::one())
}

pub fn ball_weight<T: Real>(p: T, n: usize, delta: T, radius: T) -> T {
    T::one() + p * delta * T::count(n - 1) / ((p - T::one()) * radius)
}

pub fn quadratic_form_weight<T: Real>(n: usize, radius: T, delta: T, lap: T, x_dot_grad: T) -> T {
    let m = T::count(n) - T::lit(2.0);
    let two = T::lit(2.0);
    m * m / (radius * radius) + (T::one() + two * (delta * lap).abs()) / (delta * delta)
        + two * m * x_dot_grad / (radius * radius * delta)
}

pub fn ball_quadratic_weight<T: Real>(n: usize, radius: T, delta: T) -> T {
    let m = T::count(n) - T::lit(2.0);
    m * m / (radius * radius) + (delta * delta).recip() + T::lit(2.0) / (radius * delta)
}

/// Bracket of the two-boundary inequality.
#[allow(clippy::too_many_arguments)]
pub fn two_boundary_weight<T: Real>(
    n: usize,
    radius: T,
    d1: T,
    d2: T,
    lap1: T,
    lap2: T,
    g1_dot_g2: T,
    x_dot_g1: T,
    x_dot_g2: T,
) -> T {
    let nf = T::count(n);
    let one = T::one();
    let two = T::lit(2.0);
    let r2 = radius * radius;
    (nf - one) * (nf - T::lit(3.0)) / r2 + (d1 * d1).recip() + (d2 * d2).recip()
        - two * lap1 / d1
        - two * lap2 / d2
        - two * g1_dot_g2 / (d1 * d2)
        + two * (nf - one) * x_dot_g1 / (r2 * d1)
        + two * (nf - one) * x_dot_g2 / (r2 * d2)
}

pub fn annulus_al_weight<T: Real>(n: usize, radius: T, d1: T, d2: T) -> T {
    let nf = T::count(n);
    let s = d1.recip() + d2.recip();
    (nf - T::one()) * (nf - T::lit(3.0)) / (radius * radius) + s * s
}

pub fn exterior_weight<T: Real>(p: T, delta: T, kappa_tilde: T) -> T {
    T::one() - p * kappa_tilde * delta / (p - T::one())
}

pub fn weighted_exterior_weight<T: Real>(p: T, delta: T, kappa_tilde: T) -> T {
    T::one() + p * kappa_tilde * delta
}

/// The extra torus term `1/(r−δ) − 1/√(x₁²+x₂²)`.
pub fn torus_extra<T: Real>(minor: T, delta: T, axis_distance: T) -> T {
    (minor - delta).recip() - axis_distance.recip()
}

pub fn torus_weight<T: Real>(p: T, minor: T, delta: T, axis_distance: T) -> T {
    T::one() + p * delta * torus_extra(minor, delta, axis_distance) / (p - T::one())
}

/// `c_α`: `2^α(2α+3)` for `α ≥ −1`, `2^α(α+2)²` for `−2 < α < −1`.
pub fn fmt_c_alpha<T: Real>(alpha: T) -> T {
    let two_a = T::lit(2.0).powf(alpha);
    if alpha >= -T::one() {
        two_a * (T::lit(2.0) * alpha + T::lit(3.0))
    } else {
        let e = alpha + T::lit(2.0);
        two_a * e * e
    }
}

pub fn fmt_weight<T: Real>(alpha: T, d_int: T, delta: T) -> T {
    (delta * delta).recip()
        + T::lit(4.0) * fmt_c_alpha(alpha) * d_int.powf(-(alpha + T::lit(2.0))) * delta.powf(alpha)
}

/// Weight of `spec` at a prepared point. See [`WeightForm`] for what it
/// multiplies.
pub fn weight_at<T: Real>(
    spec: &InequalitySpec<T>,
    domain: &DomainSpec<T>,
    pd: &PointData<T>,
    p: Exponent<T>,
) -> Result<T, HardyError> {
    let p = p.value();
    let n = domain.dim();
    let delta = pd.delta;
    Ok(match spec {
        // Δδ = κ̃ off the ridge
        InequalitySpec::GeneralRidge => ridge_weight(p, delta, pd.kappa_tilde()),
        InequalitySpec::CurvatureRidge | InequalitySpec::HyperboloidSigned => ridge_weight(p, delta, pd.kappa_tilde()),
        InequalitySpec::ConvexImproved => convex_weight(p, delta, pd.kappa_tilde()),
        InequalitySpec::BallImproved => ball_weight(p, n, delta, pd.radius()),
        InequalitySpec::QuadraticForm2 => {
            quadratic_form_weight(n, pd.radius(), delta, pd.kappa_tilde(), vector::dot(pd.x, pd.grad_delta))
        }
        InequalitySpec::BallQuadratic => ball_quadratic_weight(n, pd.radius(), delta),
        InequalitySpec::ExteriorConvex => exterior_weight(p, delta, pd.kappa_tilde()),
        InequalitySpec::WeightedExterior => weighted_exterior_weight(p, delta, pd.kappa_tilde()),
        InequalitySpec::TwoBoundary => {
            let DomainSpec::Annulus { inner, outer } = domain else {
                return Err(HardyError::DomainMismatch { inequality: spec.name(), domain: domain.name() });
            };
            let inside: DomainSpec<T> = DomainSpec::ExteriorDisc { radius: *inner };
            let outside: DomainSpec<T> = DomainSpec::Disc { radius: *outer };
            let x = &pd.x[..n];
            let tol = geometry::default_multiplicity_tol(T::one());
            let n1 = near_points(&inside, x, tol)?;
            let n2 = near_points(&outside, x, tol)?;
            let (Some(g1), Some(g2)) = (n1.grad_delta, n2.grad_delta) else {
                return Err(HardyError::InadmissiblePoint("boundary distance not differentiable".into()));
            };
            two_boundary_weight(
                n,
                pd.radius(),
                n1.delta,
                n2.delta,
                laplacian_distance(&inside, x)?,
                laplacian_distance(&outside, x)?,
                vector::dot(g1, g2),
                vector::dot(pd.x, g1),
                vector::dot(pd.x, g2),
            )
        }
        InequalitySpec::AnnulusAL => {
            let DomainSpec::Annulus { inner, outer } = domain else {
                return Err(HardyError::DomainMismatch { inequality: spec.name(), domain: domain.name() });
            };
            let r = pd.radius();
            annulus_al_weight(n, r, r - *inner, *outer - r)
        }
        InequalitySpec::TorusImproved => {
            let DomainSpec::Torus { minor, .. } = domain else {
                return Err(HardyError::DomainMismatch { inequality: spec.name(), domain: domain.name() });
            };
            torus_weight(p, *minor, delta, pd.x[0].hypot(pd.x[1]))
        }
        InequalitySpec::FmtComparison { alpha } => {
            let d_int = domain
                .inradius()
                .map(|r| r + r)
                .ok_or(HardyError::DomainMismatch { inequality: spec.name(), domain: domain.name() })?;
            fmt_weight(*alpha, d_int, delta)
        }
    })
}

/// Weight of `spec` at `x`.
pub fn weight<T: Real>(spec: &InequalitySpec<T>, domain: &DomainSpec<T>, x: &[T], p: Exponent<T>) -> Result<T, HardyError> {
    spec.check(domain, p)?;
    let pd = PointData::at(domain, x)?;
    weight_at(spec, domain, &pd, p)
}
