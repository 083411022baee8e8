use crate::scalar::Real;

use super::curve::CurveJet;
use super::domain::{BoundaryParam, DomainSpec};
use super::vector::{self, Point};
use super::GeometryError;

/// Coarse samples per boundary parameter before local refinement.
pub(crate) const COARSE_SAMPLES: usize = 256;
const MAX_REFINE_ITER: usize = 200;
/// Representative points reported for a continuum of near points.
const CONTINUUM_REPS: usize = 8;

#[derive(Clone, Copy, Debug)]
pub struct NearPoint<T> {
    pub param: BoundaryParam<T>,
    pub point: Point<T>,
    pub distance: T,
}

/// Near points of an interior point. Planar points carry a zero third
/// coordinate.
#[derive(Clone, Debug)]
pub struct NearPointResult<T> {
    pub delta: T,
    pub near_points: Vec<NearPoint<T>>,
    /// Number of listed near points. A continuum is reported through
    /// representatives and `continuum = true`.
    pub multiplicity: usize,
    pub continuum: bool,
    /// `∇δ(x) = (x − y)/|x − y|`, present only for a single near point.
    pub grad_delta: Option<Point<T>>,
}

/// Two minima count as equal when their distances differ by less than this.
pub fn default_multiplicity_tol<T: Real>(delta: T) -> T {
    T::lit(1e-9).max(T::lit(1e-7) * delta)
}

/// All local minimizers of `|γ − x|` plus, for rotationally degenerate
/// configurations, how far `x` is from the degenerate set.
pub(crate) struct Candidates<T> {
    /// Sorted by distance.
    pub list: Vec<NearPoint<T>>,
    /// Maximal variation of `|γ − x|` over the would-be continuum
    /// (twice the offset from the symmetry axis or centre).
    pub spread: Option<T>,
    /// Representatives used when `spread` is within tolerance.
    pub reps: Vec<NearPoint<T>>,
}

fn near_at<T: Real>(domain: &DomainSpec<T>, x: Point<T>, param: BoundaryParam<T>) -> Result<NearPoint<T>, GeometryError> {
    let point = domain.frame(&param)?.point;
    Ok(NearPoint {
        param,
        point,
        distance: vector::dist(point, x),
    })
}

fn reps_over<T: Real>(
    domain: &DomainSpec<T>,
    x: Point<T>,
    base: BoundaryParam<T>,
    axis: usize,
) -> Result<Vec<NearPoint<T>>, GeometryError> {
    (0..CONTINUUM_REPS)
        .map(|k| {
            let mut param = base;
            param.s[axis] = param.s[axis] + T::TAU() * T::count(k) / T::count(CONTINUUM_REPS);
            near_at(domain, x, param)
        })
        .collect()
}

pub(crate) fn candidates<T: Real>(domain: &DomainSpec<T>, x: Point<T>) -> Result<Candidates<T>, GeometryError> {
    let rxy = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let azimuth = x[1].atan2(x[0]);
    let two = T::lit(2.0);
    let mut spread = None;
    let mut reps = Vec::new();
    let mut list = match domain {
        DomainSpec::Disc { .. } | DomainSpec::Cylinder { .. } => {
            let param = BoundaryParam { component: 0, s: [azimuth, x[2]] };
            spread = Some(two * rxy);
            reps = reps_over(domain, x, param, 0)?;
            vec![near_at(domain, x, param)?]
        }
        DomainSpec::Annulus { .. } => vec![
            near_at(domain, x, BoundaryParam { component: 0, s: [azimuth, T::zero()] })?,
            near_at(domain, x, BoundaryParam { component: 1, s: [azimuth, T::zero()] })?,
        ],
        DomainSpec::ExteriorDisc { .. } => {
            vec![near_at(domain, x, BoundaryParam { component: 0, s: [azimuth, T::zero()] })?]
        }
        DomainSpec::Torus { major, .. } => {
            let u = rxy - *major;
            let tube = (u * u + x[2] * x[2]).sqrt();
            let param = BoundaryParam { component: 0, s: [azimuth, x[2].atan2(u)] };
            spread = Some(two * tube);
            reps = reps_over(domain, x, param, 1)?;
            vec![near_at(domain, x, param)?]
        }
        DomainSpec::Hyperboloid { .. } => {
            let meridian = hyperboloid_meridian_minima(rxy, x[2])?;
            spread = Some(two * rxy);
            let axis_minima = hyperboloid_meridian_minima(T::zero(), x[2])?;
            for s in axis_minima {
                reps.extend(reps_over(domain, x, BoundaryParam { component: 0, s: [s, azimuth] }, 1)?);
            }
            meridian
                .into_iter()
                .map(|s| near_at(domain, x, BoundaryParam { component: 0, s: [s, azimuth] }))
                .collect::<Result<Vec<_>, _>>()?
        }
        DomainSpec::Ellipse { .. } | DomainSpec::ConformalAnnulus { .. } => {
            let mut all = Vec::new();
            for (component, (curve, _)) in domain.plane_curves().iter().enumerate() {
                let minima = curve_minima(|s| curve.eval(s), [x[0], x[1]], T::zero(), T::TAU(), true)?;
                for s in minima {
                    all.push(near_at(domain, x, BoundaryParam { component, s: [s, T::zero()] })?);
                }
            }
            all
        }
    };
    list.sort_by(|a, b| a.distance.partial_cmp(&b.distance).unwrap_or(std::cmp::Ordering::Equal));
    if list.is_empty() {
        return Err(GeometryError::FailedMinimization);
    }
    Ok(Candidates { list, spread, reps })
}

/// Meridian parameters `s` minimizing the distance from `(ρ, z)` to the
/// profile `(√(1+s²), s)`.
fn hyperboloid_meridian_minima<T: Real>(rho: T, z: T) -> Result<Vec<T>, GeometryError> {
    let one = T::one();
    let jet = |s: T| {
        let q = (one + s * s).sqrt();
        CurveJet {
            p: [q, s],
            d1: [s / q, one],
            d2: [(q * q * q).recip(), T::zero()],
        }
    };
    // the global minimum lies within |s − z| ≤ √(1+z²) − ρ
    let reach = ((one + z * z).sqrt() - rho).max(T::zero()) * T::lit(1.01) + T::lit(1e-9);
    curve_minima(jet, [rho, z], z - reach, z + reach, false)
}

fn sqdist<T: Real>(p: [T; 2], x: [T; 2]) -> T {
    let dx = p[0] - x[0];
    let dy = p[1] - x[1];
    dx * dx + dy * dy
}

/// Local minimizers of `|γ(s) − x|` over `[lo, hi]`: coarse sampling, then
/// safeguarded Newton on the derivative of the squared distance.
pub(crate) fn curve_minima<T: Real, F: Fn(T) -> CurveJet<T>>(
    jet: F,
    x: [T; 2],
    lo: T,
    hi: T,
    periodic: bool,
) -> Result<Vec<T>, GeometryError> {
    let n = COARSE_SAMPLES;
    let h = (hi - lo) / T::count(n);
    let count = if periodic { n } else { n + 1 };
    let at = |i: usize| lo + T::count(i) * h;
    let g: Vec<T> = (0..count).map(|i| sqdist(jet(at(i)).p, x)).collect();

    let mut found: Vec<(T, T)> = Vec::new();
    for i in 0..count {
        let prev = if i > 0 { Some(i - 1) } else if periodic { Some(count - 1) } else { None };
        let next = if i + 1 < count { Some(i + 1) } else if periodic { Some(0) } else { None };
        let is_min = prev.is_none_or(|j| g[i] <= g[j]) && next.is_none_or(|j| g[i] <= g[j]);
        if !is_min {
            continue;
        }
        let s0 = at(i);
        let (mut a, mut b) = (s0 - h, s0 + h);
        if !periodic {
            a = a.max(lo);
            b = b.min(hi);
        }
        for s in refine(&jet, x, a, b, s0, periodic, lo, hi)? {
            found.push((s, sqdist(jet(s).p, x)));
        }
    }

    if periodic {
        let period = hi - lo;
        for entry in &mut found {
            let k = ((entry.0 - lo) / period).floor();
            entry.0 = entry.0 - k * period;
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let same = T::lit(1e-7) * (hi - lo);
    let mut merged: Vec<(T, T)> = Vec::new();
    for cand in found {
        match merged.last_mut() {
            Some(last) if (cand.0 - last.0).abs() < same => {
                if cand.1 < last.1 {
                    *last = cand;
                }
            }
            _ => merged.push(cand),
        }
    }
    if periodic && merged.len() > 1 {
        let first = merged[0];
        let last = merged[merged.len() - 1];
        if (first.0 + (hi - lo) - last.0).abs() < same {
            let keep = if first.1 <= last.1 { first } else { last };
            merged.pop();
            merged[0] = keep;
        }
    }
    Ok(merged.into_iter().map(|(s, _)| s).collect())
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Real, F: Fn(T) -> CurveJet<T>>(
    jet: &F,
    x: [T; 2],
    a: T,
    b: T,
    s0: T,
    periodic: bool,
    lo: T,
    hi: T,
) -> Result<Vec<T>, GeometryError> {
    let slope = |s: T| {
        let j = jet(s);
        let r = [j.p[0] - x[0], j.p[1] - x[1]];
        let f = r[0] * j.d1[0] + r[1] * j.d1[1];
        let df = j.d1[0] * j.d1[0] + j.d1[1] * j.d1[1] + r[0] * j.d2[0] + r[1] * j.d2[1];
        (f, df)
    };
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0));
    let fa = slope(a).0;
    let fb = slope(b).0;
    if !periodic {
        if a == lo && fa > T::zero() && fb >= T::zero() {
            return Ok(vec![lo]);
        }
        if b == hi && fb < T::zero() && fa <= T::zero() {
            return Ok(vec![hi]);
        }
    }
    if !(fa <= T::zero() && fb >= T::zero()) {
        return Ok(vec![golden(jet, x, a, b)]);
    }
    let root = newton_root(&slope, a, b, s0, tol)?;
    if slope(root).1 > T::zero() {
        return Ok(vec![root]);
    }
    // converged onto a maximum between two nearby minima
    Ok(vec![golden(jet, x, a, root), golden(jet, x, root, b)])
}

fn newton_root<T: Real, S: Fn(T) -> (T, T)>(slope: &S, mut a: T, mut b: T, s0: T, tol: T) -> Result<T, GeometryError> {
    let mut s = s0;
    for _ in 0..MAX_REFINE_ITER {
        let (f, df) = slope(s);
        if f == T::zero() {
            return Ok(s);
        }
        if f < T::zero() {
            a = s;
        } else {
            b = s;
        }
        let mut next = if df > T::zero() { s - f / df } else { T::nan() };
        if !(next > a && next < b) {
            next = (a + b) * T::lit(0.5);
        }
        let scale = T::one().max(next.abs());
        if (next - s).abs() <= tol * scale || b - a <= tol * scale {
            return Ok(next);
        }
        s = next;
    }
    Err(GeometryError::FailedMinimization)
}

fn golden<T: Real, F: Fn(T) -> CurveJet<T>>(jet: &F, x: [T; 2], mut a: T, mut b: T) -> T {
    let ratio = T::lit(0.618_033_988_749_894_8);
    let g = |s: T| sqdist(jet(s).p, x);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..MAX_REFINE_ITER {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
        if b - a <= T::epsilon() * T::one().max(a.abs()) {
            break;
        }
    }
    (a + b) * T::lit(0.5)
}

pub(crate) fn checked_point<T: Real>(domain: &DomainSpec<T>, x: &[T]) -> Result<Point<T>, GeometryError> {
    domain.validate()?;
    let p = domain.check_dim(x)?;
    if !domain.contains(x) {
        return Err(GeometryError::PointOutsideDomain);
    }
    Ok(p)
}

/// `δ(x)`, the distance from an interior point to the boundary.
pub fn distance<T: Real>(domain: &DomainSpec<T>, x: &[T]) -> Result<T, GeometryError> {
    let p = checked_point(domain, x)?;
    unchecked_distance(domain, p)
}

pub(crate) fn unchecked_distance<T: Real>(domain: &DomainSpec<T>, p: Point<T>) -> Result<T, GeometryError> {
    let rxy = (p[0] * p[0] + p[1] * p[1]).sqrt();
    Ok(match domain {
        DomainSpec::Disc { radius } | DomainSpec::Cylinder { radius, .. } => *radius - rxy,
        DomainSpec::Annulus { inner, outer } => (rxy - *inner).min(*outer - rxy),
        DomainSpec::ExteriorDisc { radius } => rxy - *radius,
        DomainSpec::Torus { major, minor } => {
            let u = rxy - *major;
            *minor - (u * u + p[2] * p[2]).sqrt()
        }
        _ => candidates(domain, p)?.list[0].distance,
    })
}

/// Near points within `tol` of the global minimum distance.
pub fn near_points<T: Real>(domain: &DomainSpec<T>, x: &[T], tol: T) -> Result<NearPointResult<T>, GeometryError> {
    let p = checked_point(domain, x)?;
    let cands = candidates(domain, p)?;
    Ok(resolve(p, cands, tol))
}

pub(crate) fn resolve<T: Real>(x: Point<T>, cands: Candidates<T>, tol: T) -> NearPointResult<T> {
    let delta = cands.list[0].distance;
    if cands.spread.is_some_and(|s| s <= tol) {
        return NearPointResult {
            delta,
            multiplicity: cands.reps.len(),
            near_points: cands.reps,
            continuum: true,
            grad_delta: None,
        };
    }
    let near: Vec<NearPoint<T>> = cands
        .list
        .into_iter()
        .filter(|c| c.distance - delta <= tol)
        .collect();
    let grad_delta = match near.as_slice() {
        [only] if only.distance > T::zero() => {
            Some(vector::scale(vector::sub(x, only.point), only.distance.recip()))
        }
        _ => None,
    };
    NearPointResult {
        delta,
        multiplicity: near.len(),
        near_points: near,
        continuum: false,
        grad_delta,
    }
}
