use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar every kernel in this crate is written against.
///
/// Implemented for `f32` and `f64`. Verification tolerances in the test
/// suites are pinned for `f64`; `f32` is supported for the geometry and
/// weight kernels at correspondingly looser tolerances.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Sum with a fixed pairwise tree, so the result depends only on the order
/// of `values` and not on how they were produced.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn pairwise_sum_beats_naive_drift() {
        let v = vec![0.1_f32; 1 << 16];
        let naive: f32 = v.iter().sum();
        let pw = pairwise_sum(&v);
        let exact = 6553.6_f64;
        assert!((pw as f64 - exact).abs() < (naive as f64 - exact).abs());
    }
}
