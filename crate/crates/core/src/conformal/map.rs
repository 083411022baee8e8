use num_complex::Complex;

use crate::geometry::curve::PlaneCurve;
use crate::scalar::Real;

use super::ConformalError;

/// Post-composition applied to the image of a map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MapTransform<T> {
    Scale(T),
    Rotation(T),
    Inversion,
}

/// Closed-form analytic map of a planar domain onto an annulus `ρ < |w| < R`.
#[derive(Clone, Debug, PartialEq)]
pub enum ConformalMapSpec<T> {
    /// The annulus itself, `F(z) = z`.
    IdentityAnnulus { rho: T, outer: T },
    /// `transform ∘ base`; the domain is the domain of `base`.
    Composed {
        base: Box<ConformalMapSpec<T>>,
        transform: MapTransform<T>,
    },
    /// `F(z) = √((z−1)(z+1))` on `{ρ² < |z²−1| < R²}`.
    SqrtQuadratic { rho: T, outer: T },
    /// `z ↦ z²` on `√ρ < |z| < √R`. Two-to-one; kept as a negative control for
    /// the univalence probe.
    SquareControl { rho: T, outer: T },
}

impl<T: Real> ConformalMapSpec<T> {
    pub fn composed(self, transform: MapTransform<T>) -> Self {
        ConformalMapSpec::Composed {
            base: Box::new(self),
            transform,
        }
    }

    pub fn validate(&self) -> Result<(), ConformalError> {
        match self {
            ConformalMapSpec::IdentityAnnulus { rho, outer }
            | ConformalMapSpec::SquareControl { rho, outer } => check_radii(*rho, *outer),
            ConformalMapSpec::SqrtQuadratic { rho, outer } => {
                check_radii(*rho, *outer)?;
                if *outer <= T::one() {
                    return Err(ConformalError::InvalidMap(
                        "sqrt-quadratic needs R > 1 for a connected domain".into(),
                    ));
                }
                if (*rho - T::one()).abs() < T::lit(1e-9) {
                    return Err(ConformalError::InvalidMap(
                        "sqrt-quadratic with rho = 1 pinches the inner boundary".into(),
                    ));
                }
                Ok(())
            }
            ConformalMapSpec::Composed { base, transform } => {
                base.validate()?;
                match *transform {
                    MapTransform::Scale(s) if !(s > T::zero()) || !s.is_finite() => Err(
                        ConformalError::InvalidMap("scale factor must be positive".into()),
                    ),
                    MapTransform::Rotation(t) if !t.is_finite() => {
                        Err(ConformalError::InvalidMap("rotation angle must be finite".into()))
                    }
                    _ => Ok(()),
                }
            }
        }
    }

    /// Radii `(ρ, R)` of the image annulus.
    pub fn annulus_radii(&self) -> (T, T) {
        match self {
            ConformalMapSpec::IdentityAnnulus { rho, outer }
            | ConformalMapSpec::SqrtQuadratic { rho, outer }
            | ConformalMapSpec::SquareControl { rho, outer } => (*rho, *outer),
            ConformalMapSpec::Composed { base, transform } => {
                let (rho, outer) = base.annulus_radii();
                match *transform {
                    MapTransform::Scale(s) => (s * rho, s * outer),
                    MapTransform::Rotation(_) => (rho, outer),
                    MapTransform::Inversion => (outer.recip(), rho.recip()),
                }
            }
        }
    }

    fn root(&self) -> &ConformalMapSpec<T> {
        match self {
            ConformalMapSpec::Composed { base, .. } => base.root(),
            other => other,
        }
    }

    /// Membership in the source domain.
    pub fn contains(&self, z: Complex<T>) -> bool {
        match self.root() {
            ConformalMapSpec::IdentityAnnulus { rho, outer } => {
                let r = z.norm();
                r > *rho && r < *outer
            }
            ConformalMapSpec::SquareControl { rho, outer } => {
                let r2 = z.norm_sqr();
                r2 > *rho && r2 < *outer
            }
            ConformalMapSpec::SqrtQuadratic { rho, outer } => {
                let m = (z * z - T::one()).norm();
                m > *rho * *rho && m < *outer * *outer
            }
            ConformalMapSpec::Composed { .. } => unreachable!("root is never composed"),
        }
    }

    /// Radius of a disc centred at the origin that contains the source domain.
    pub fn bounding_radius(&self) -> T {
        match self.root() {
            ConformalMapSpec::IdentityAnnulus { outer, .. } => *outer,
            ConformalMapSpec::SquareControl { outer, .. } => outer.sqrt(),
            ConformalMapSpec::SqrtQuadratic { outer, .. } => (*outer * *outer + T::one()).sqrt(),
            ConformalMapSpec::Composed { .. } => unreachable!("root is never composed"),
        }
    }

    /// Boundary curves of the source domain, each flagged with the side the
    /// domain lies on.
    pub fn boundary_curves(&self) -> Vec<(PlaneCurve<T>, bool)> {
        match self.root() {
            ConformalMapSpec::IdentityAnnulus { rho, outer } => vec![
                (PlaneCurve::Circle { radius: *rho }, false),
                (PlaneCurve::Circle { radius: *outer }, true),
            ],
            ConformalMapSpec::SquareControl { rho, outer } => vec![
                (PlaneCurve::Circle { radius: rho.sqrt() }, false),
                (PlaneCurve::Circle { radius: outer.sqrt() }, true),
            ],
            ConformalMapSpec::SqrtQuadratic { rho, outer } => {
                let mut curves = cassini_curves(*rho, false);
                curves.extend(cassini_curves(*outer, true));
                curves
            }
            ConformalMapSpec::Composed { .. } => unreachable!("root is never composed"),
        }
    }

    /// Closed-form value without a membership check.
    pub(crate) fn eval_unchecked(&self, z: Complex<T>) -> Complex<T> {
        match self {
            ConformalMapSpec::IdentityAnnulus { .. } => z,
            ConformalMapSpec::SquareControl { .. } => z * z,
            ConformalMapSpec::SqrtQuadratic { .. } => sqrt_quadratic(z),
            ConformalMapSpec::Composed { base, transform } => {
                let w = base.eval_unchecked(z);
                match *transform {
                    MapTransform::Scale(s) => w * s,
                    MapTransform::Rotation(t) => w * Complex::from_polar(T::one(), t),
                    MapTransform::Inversion => w.inv(),
                }
            }
        }
    }

    pub(crate) fn deriv_unchecked(&self, z: Complex<T>) -> Complex<T> {
        match self {
            ConformalMapSpec::IdentityAnnulus { .. } => Complex::new(T::one(), T::zero()),
            ConformalMapSpec::SquareControl { .. } => z * T::lit(2.0),
            ConformalMapSpec::SqrtQuadratic { .. } => z / sqrt_quadratic(z),
            ConformalMapSpec::Composed { base, transform } => {
                let d = base.deriv_unchecked(z);
                match *transform {
                    MapTransform::Scale(s) => d * s,
                    MapTransform::Rotation(t) => d * Complex::from_polar(T::one(), t),
                    MapTransform::Inversion => {
                        let w = base.eval_unchecked(z);
                        -d / (w * w)
                    }
                }
            }
        }
    }

    /// A point of the source domain whose image lies on the positive real
    /// axis at mid-radius; used as the base of branch continuation.
    pub(crate) fn base_point(&self) -> Complex<T> {
        let half = T::lit(0.5);
        match self.root() {
            ConformalMapSpec::IdentityAnnulus { rho, outer } => {
                Complex::new((*rho + *outer) * half, T::zero())
            }
            ConformalMapSpec::SquareControl { rho, outer } => {
                Complex::new(((*rho + *outer) * half).sqrt(), T::zero())
            }
            ConformalMapSpec::SqrtQuadratic { rho, outer } => {
                let m = (*rho + *outer) * half;
                Complex::new((m * m + T::one()).sqrt(), T::zero())
            }
            ConformalMapSpec::Composed { .. } => unreachable!("root is never composed"),
        }
    }
}

fn check_radii<T: Real>(rho: T, outer: T) -> Result<(), ConformalError> {
    if !(rho > T::zero()) || !(outer > rho) || !outer.is_finite() {
        return Err(ConformalError::InvalidMap(format!(
            "annulus radii need 0 < rho < R, got rho={rho}, R={outer}"
        )));
    }
    Ok(())
}

/// `√(z−1)·√(z+1)` with principal roots: positive on `(1, ∞)`, continuous off
/// `[−1, 1]`, odd.
pub(crate) fn sqrt_quadratic<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    (z - one).sqrt() * (z + one).sqrt()
}

/// Level set `|z²−1| = c²`: two lobes for `c < 1`, one oval for `c > 1`.
fn cassini_curves<T: Real>(c: T, domain_inside: bool) -> Vec<(PlaneCurve<T>, bool)> {
    if c < T::one() {
        vec![
            (PlaneCurve::CassiniLobe { c, sign: T::one() }, domain_inside),
            (PlaneCurve::CassiniLobe { c, sign: -T::one() }, domain_inside),
        ]
    } else {
        vec![(PlaneCurve::CassiniOval { c }, domain_inside)]
    }
}
