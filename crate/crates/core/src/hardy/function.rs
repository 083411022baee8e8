use serde::Serialize;

use crate::geometry::{self, near_points, ridge_distance, BoundaryParam, DomainSpec, ParamAxis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

use super::inequality::InequalitySpec;
use super::profile::{smooth_step, TestProfile};
use super::HardyError;

/// Which boundary components of an annulus a test function lives next to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    #[default]
    Both,
    Inner,
    Outer,
}

impl Side {
    fn admits(self, component: usize) -> bool {
        match self {
            Side::Both => true,
            Side::Inner => component == 0,
            Side::Outer => component == 1,
        }
    }
}

/// `f(x) = η(δ(x))·χ(s′(x))`, where `s′` is the near-point parameter and `χ`
/// a smooth cutoff along the truncated parameter of an unbounded boundary
/// (`χ ≡ 1` otherwise). `∇δ·∇χ = 0`, so `∇δ·∇f = η′χ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestFunction<T> {
    pub profile: TestProfile<T>,
    pub band: (T, T),
    pub side: Side,
    /// `f ≡ 0`
    pub zero: bool,
}

/// Fraction of a truncation over which the cutoff `χ` falls from 1 to 0.
const CUTOFF_FRACTION: f64 = 0.25;

impl<T: Real> TestFunction<T> {
    pub fn zero() -> Self {
        TestFunction {
            profile: TestProfile::SmoothBump,
            band: (T::one(), T::lit(2.0)),
            side: Side::Both,
            zero: true,
        }
    }

    pub(crate) fn active(&self, component: usize) -> bool {
        !self.zero && self.side.admits(component)
    }

    /// `(η, η′)` at distance `delta`.
    pub fn radial(&self, delta: T) -> (T, T) {
        if self.zero {
            return (T::zero(), T::zero());
        }
        self.profile.eval(self.band.0, self.band.1, delta)
    }

    /// `χ` and its partial derivatives in the boundary parameters.
    pub(crate) fn cutoff(&self, axes: &[ParamAxis<T>], param: &BoundaryParam<T>) -> (T, [T; 2]) {
        let mut chi = T::one();
        let mut grad = [T::zero(); 2];
        let mut factors = [(T::one(), T::zero()); 2];
        for (i, axis) in axes.iter().enumerate() {
            if axis.periodic {
                continue;
            }
            let half = (axis.hi - axis.lo) * T::lit(0.5);
            let mid = (axis.hi + axis.lo) * T::lit(0.5);
            let offset = param.s[i] - mid;
            let ramp = half * T::lit(CUTOFF_FRACTION);
            let (v, dv) = smooth_step((half - offset.abs()) / ramp);
            factors[i] = (v, -offset.signum() * dv / ramp);
        }
        for (i, f) in factors.iter().enumerate() {
            chi = chi * f.0;
            let mut g = f.1;
            for (j, other) in factors.iter().enumerate() {
                if j != i {
                    g = g * other.0;
                }
            }
            grad[i] = g;
        }
        (chi, grad)
    }

    /// `f(x)`.
    pub fn value(&self, domain: &DomainSpec<T>, x: &[T]) -> Result<T, HardyError> {
        if self.zero {
            return Ok(T::zero());
        }
        let near = near_points(domain, x, geometry::default_multiplicity_tol(T::one()))?;
        let np = &near.near_points[0];
        if !self.side.admits(np.param.component) {
            return Ok(T::zero());
        }
        let (eta, _) = self.radial(near.delta);
        if eta == T::zero() {
            return Ok(T::zero());
        }
        let (chi, _) = self.cutoff(&domain.param_axes(np.param.component), &np.param);
        Ok(eta * chi)
    }
}

/// Smallest ridge distance over the (truncated) boundary, the largest band
/// end a ridge-avoiding test function may use.
pub fn min_ridge_distance<T: Real>(domain: &DomainSpec<T>) -> Result<Option<T>, HardyError> {
    Ok(match domain {
        DomainSpec::Disc { radius } | DomainSpec::Cylinder { radius, .. } => Some(*radius),
        DomainSpec::Annulus { inner, outer } => Some((*outer - *inner) * T::lit(0.5)),
        DomainSpec::ExteriorDisc { .. } => None,
        DomainSpec::Torus { minor, .. } => Some(*minor),
        DomainSpec::Hyperboloid { .. } => Some(T::one()),
        DomainSpec::Ellipse { a, b } => Some(if a >= b { *b * *b / *a } else { *a * *a / *b }),
        DomainSpec::ConformalAnnulus { .. } => {
            let mut best: Option<T> = None;
            for component in 0..domain.component_count() {
                for i in 0..64 {
                    let s = T::TAU() * T::count(i) / T::lit(64.0);
                    if let Some(d) = ridge_distance(domain, &BoundaryParam { component, s: [s, T::zero()] })? {
                        best = Some(best.map_or(d, |b| b.min(d)));
                    }
                }
            }
            best
        }
    })
}

/// Builds `f = η∘δ` on `band`, checking the band against the domain.
pub fn make_test_function<T: Real>(
    profile: TestProfile<T>,
    domain: &DomainSpec<T>,
    band: (T, T),
    side: Side,
    avoid_ridge: bool,
) -> Result<TestFunction<T>, HardyError> {
    domain.validate()?;
    profile.validate()?;
    let (a, b) = band;
    if !(a > T::zero()) || !(b > a) || !b.is_finite() {
        return Err(HardyError::BandEmpty);
    }
    if side != Side::Both && !matches!(domain, DomainSpec::Annulus { .. }) {
        return Err(HardyError::InvalidConfig("band side applies to the annulus only".into()));
    }
    if let Some(sup) = domain.inradius() {
        if b > sup {
            return Err(HardyError::BandTouchesRidge);
        }
    }
    if avoid_ridge {
        if let Some(limit) = min_ridge_distance(domain)? {
            if b >= limit {
                return Err(HardyError::BandTouchesRidge);
            }
        }
    }
    Ok(TestFunction { profile, band, side, zero: false })
}

/// Largest band end usable for `spec` on `domain`: the inradius, or `3·scale`
/// on unbounded domains, capped below the ridge when it must be avoided.
pub fn band_limit<T: Real>(spec: &InequalitySpec<T>, domain: &DomainSpec<T>) -> Result<T, HardyError> {
    let mut limit = domain.inradius().unwrap_or(T::lit(3.0) * domain.scale());
    if spec.requires_ridge_avoidance(domain) {
        if let Some(r) = min_ridge_distance(domain)? {
            limit = limit.min(r);
        }
    }
    Ok(limit)
}

/// Random `(profile, band)` pairs inside `(0, band_limit)`, reproducible from
/// `seed`.
pub fn random_cases<T: Real>(
    spec: &InequalitySpec<T>,
    domain: &DomainSpec<T>,
    count: usize,
    seed: u64,
) -> Result<Vec<(TestProfile<T>, (T, T))>, HardyError> {
    let limit = band_limit(spec, domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = move || T::lit(rng.gen::<f64>());
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let a = limit * (T::lit(0.02) + T::lit(0.48) * u());
        let b = a + (T::lit(0.98) * limit - a) * (T::lit(0.2) + T::lit(0.8) * u());
        let profile = match i % 3 {
            0 => TestProfile::SmoothBump,
            1 => TestProfile::PowerBump { exponent: T::lit(0.2) + T::lit(0.8) * u(), ramp: T::lit(1.5) + T::lit(8.0) * u() },
            _ => {
                let peak = T::lit(0.25) + T::lit(0.5) * u();
                let height = T::lit(0.5) + u();
                TestProfile::RadialCustom {
                    table: vec![
                        (T::zero(), T::zero()),
                        (peak * T::lit(0.5), height * T::lit(0.6)),
                        (peak, height),
                        ((peak + T::one()) * T::lit(0.5), height * T::lit(0.5)),
                        (T::one(), T::zero()),
                    ],
                }
            }
        };
        out.push((profile, (a, b)));
    }
    Ok(out)
}
