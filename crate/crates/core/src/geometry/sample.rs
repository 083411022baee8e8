//! Random interior points kept away from the boundary and the ridge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

use super::domain::{BoundaryParam, DomainSpec};
use super::ridge::{is_near_ridge, ridge_distance};
use super::vector::{self, Point};
use super::GeometryError;

/// Draws `count` points `γ(s′) + δ n(s′)` with `s′` uniform over the
/// (truncated) parameter box and `δ` uniform in
/// `[margin·scale, L(s′) − margin·scale]`, where `L` is the distance to the
/// ridge along the normal. Unbounded rays are cut at three times the scale.
///
/// Points are not area-uniform. Each is re-checked with `is_near_ridge`.
pub fn sample_off_ridge<T: Real>(
    domain: &DomainSpec<T>,
    count: usize,
    seed: u64,
    margin: T,
) -> Result<Vec<Point<T>>, GeometryError> {
    domain.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = domain.scale();
    let gap = margin * scale;
    let components = domain.component_count();
    let dim = domain.dim();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 50 * count + 1000 {
            return Err(GeometryError::InvalidDomain(
                "margin leaves no admissible sampling region".into(),
            ));
        }
        let component = rng.gen_range(0..components);
        let mut param = BoundaryParam { component, s: [T::zero(); 2] };
        for (i, axis) in domain.param_axes(component).iter().enumerate() {
            let u = T::lit(rng.gen::<f64>());
            param.s[i] = axis.lo + u * (axis.hi - axis.lo);
        }
        let reach = ridge_distance(domain, &param)?.unwrap_or(T::lit(3.0) * scale);
        if reach <= gap + gap {
            continue;
        }
        let u = T::lit(rng.gen::<f64>());
        let delta = gap + u * (reach - gap - gap);
        let frame = domain.frame(&param)?;
        let x = vector::axpy(frame.point, delta, frame.normal);
        if !domain.contains(&x[..dim]) {
            continue;
        }
        match is_near_ridge(domain, &x[..dim], T::lit(1e-3)) {
            Ok(v) if !v.on_ridge => out.push(x),
            _ => continue,
        }
    }
    Ok(out)
}
