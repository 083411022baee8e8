use serde::Serialize;

use crate::scalar::Real;

use super::inequality::fmt_c_alpha;
use super::HardyError;

/// One radius of the ball comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FmtRow<T> {
    pub radius: T,
    pub delta: T,
    /// `(n−1)/(2δ|x|)`
    pub i1: T,
    /// `c_α D_int^{−(α+2)} δ^α`
    pub i2: T,
    pub bound: T,
    /// `I₁ − I₂ − bound`
    pub margin: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FmtTable<T> {
    pub alpha: T,
    pub outer: T,
    pub n: usize,
    pub rows: Vec<FmtRow<T>>,
    pub min_margin: T,
    pub violations: usize,
    /// Radius below which the bound is positive, when it is not everywhere.
    pub bound_positive_below: Option<T>,
}

/// The displayed lower bound for `I₁ − I₂` on the ball of radius `outer`.
pub fn fmt_bound<T: Real>(alpha: T, outer: T, n: usize, radius: T) -> T {
    let eps = alpha + T::lit(2.0);
    let delta = outer - radius;
    let nn = T::count(n);
    let two = T::lit(2.0);
    if eps >= T::one() {
        (two * nn - T::one() - two * eps) / (T::lit(4.0) * delta * radius)
    } else {
        ((two * nn - two) * outer - (two * nn - T::one()) * radius) / (T::lit(4.0) * delta * delta * radius)
    }
}

/// Compares the curvature term of the ball inequality with the FMT term at
/// `samples` radii `R(k+½)/samples`.
pub fn compare_fmt<T: Real>(alpha: T, outer: T, n: usize, samples: usize) -> Result<FmtTable<T>, HardyError> {
    if !(alpha > -T::lit(2.0)) || !alpha.is_finite() {
        return Err(HardyError::AlphaOutOfRange(alpha.as_f64()));
    }
    if !(outer > T::zero() && outer.is_finite()) || n < 2 || samples == 0 {
        return Err(HardyError::InvalidConfig("need R > 0, n >= 2 and at least one sample".into()));
    }
    let c = fmt_c_alpha(alpha);
    let d_int = T::lit(2.0) * outer;
    let nn = T::count(n);
    let rows: Vec<FmtRow<T>> = (0..samples)
        .map(|k| {
            let radius = outer * (T::count(k) + T::lit(0.5)) / T::count(samples);
            let delta = outer - radius;
            let i1 = (nn - T::one()) / (T::lit(2.0) * delta * radius);
            let i2 = c * d_int.powf(-(alpha + T::lit(2.0))) * delta.powf(alpha);
            let bound = fmt_bound(alpha, outer, n, radius);
            FmtRow { radius, delta, i1, i2, bound, margin: i1 - i2 - bound }
        })
        .collect();
    let violations = rows
        .iter()
        .filter(|r| r.margin < -T::lit(1e-12) * r.i1.abs().max(r.i2.abs()).max(r.bound.abs()))
        .count();
    let min_margin = rows.iter().map(|r| r.margin).fold(T::infinity(), |a, b| a.min(b));
    let eps = alpha + T::lit(2.0);
    let bound_positive_below = if eps < T::one() {
        Some((T::lit(2.0) * nn - T::lit(2.0)) * outer / (T::lit(2.0) * nn - T::one()))
    } else if T::lit(2.0) * nn - T::one() - T::lit(2.0) * eps <= T::zero() {
        Some(T::zero())
    } else {
        None
    };
    Ok(FmtTable { alpha, outer, n, rows, min_margin, violations, bound_positive_below })
}
