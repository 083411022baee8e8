//! One-dimensional profiles `η(δ)` used to build test functions `f = η∘δ`.

use serde::Serialize;

use crate::scalar::Real;

use super::HardyError;

/// Shape of `η` on a band `(a, b)` of distances. Every profile vanishes
/// together with its derivative at both band ends.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestProfile<T> {
    /// `exp(4 − 1/(t(1−t)))` in the normalized coordinate `t`, peak 1.
    SmoothBump,
    /// `δ^q`, switched on and off smoothly over a factor `ramp` at each band
    /// end (logarithmic scale).
    PowerBump { exponent: T, ramp: T },
    /// Monotone cubic through `(t, value)` nodes in the normalized band
    /// coordinate `t ∈ [0, 1]`; both end values must be zero.
    RadialCustom { table: Vec<(T, T)> },
}

impl<T: Real> TestProfile<T> {
    pub fn name(&self) -> &'static str {
        match self {
            TestProfile::SmoothBump => "smooth-bump",
            TestProfile::PowerBump { .. } => "power-bump",
            TestProfile::RadialCustom { .. } => "radial-custom",
        }
    }

    pub fn validate(&self) -> Result<(), HardyError> {
        match self {
            TestProfile::SmoothBump => Ok(()),
            TestProfile::PowerBump { exponent, ramp } => {
                if !exponent.is_finite() || *exponent < T::zero() {
                    return Err(HardyError::InvalidProfile("power exponent must be ≥ 0".into()));
                }
                if !(*ramp > T::one()) || !ramp.is_finite() {
                    return Err(HardyError::InvalidProfile("ramp factor must exceed 1".into()));
                }
                Ok(())
            }
            TestProfile::RadialCustom { table } => {
                if table.len() < 3 {
                    return Err(HardyError::InvalidProfile("table needs at least 3 nodes".into()));
                }
                let first = table[0];
                let last = table[table.len() - 1];
                if first.0 != T::zero() || last.0 != T::one() {
                    return Err(HardyError::InvalidProfile("table must span t = 0 to t = 1".into()));
                }
                if first.1 != T::zero() || last.1 != T::zero() {
                    return Err(HardyError::InvalidProfile("table must vanish at both ends".into()));
                }
                if table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(HardyError::InvalidProfile("table nodes must increase".into()));
                }
                if table.iter().any(|n| !n.1.is_finite()) {
                    return Err(HardyError::InvalidProfile("table values must be finite".into()));
                }
                Ok(())
            }
        }
    }

    /// `(η(δ), η′(δ))` on the band `(a, b)`; zero outside it.
    pub fn eval(&self, a: T, b: T, delta: T) -> (T, T) {
        let zero = (T::zero(), T::zero());
        if !(delta > a && delta < b) {
            return zero;
        }
        match self {
            TestProfile::SmoothBump => {
                let width = b - a;
                let t = (delta - a) / width;
                let s = t * (T::one() - t);
                let eta = (T::lit(4.0) - s.recip()).exp();
                let deta = eta * (T::one() - t - t) / (s * s) / width;
                (eta, deta)
            }
            TestProfile::PowerBump { exponent, ramp } => {
                let len = ramp.ln();
                let (lo, dlo) = smooth_step((delta / a).ln() / len);
                let (hi, dhi) = smooth_step((b / delta).ln() / len);
                let pw = delta.powf(*exponent);
                let dpw = *exponent * pw / delta;
                let eta = pw * lo * hi;
                let deta = dpw * lo * hi + pw * (dlo * hi - lo * dhi) / (len * delta);
                (eta, deta)
            }
            TestProfile::RadialCustom { table } => {
                let width = b - a;
                let (v, dv) = pchip(table, (delta - a) / width);
                (v, dv / width)
            }
        }
    }
}

/// `ψ(u)/(ψ(u)+ψ(1−u))` with `ψ(u) = e^{−1/u}`: `0` for `u ≤ 0`, `1` for
/// `u ≥ 1`, smooth in between. Returns value and derivative.
pub(crate) fn smooth_step<T: Real>(u: T) -> (T, T) {
    if u <= T::zero() {
        return (T::zero(), T::zero());
    }
    if u >= T::one() {
        return (T::one(), T::zero());
    }
    let v = T::one() - u;
    let psi_u = (-u.recip()).exp();
    let psi_v = (-v.recip()).exp();
    let dpsi_u = psi_u / (u * u);
    let dpsi_v = psi_v / (v * v);
    let den = psi_u + psi_v;
    let value = psi_u / den;
    let deriv = (dpsi_u * psi_v + psi_u * dpsi_v) / (den * den);
    (value, deriv)
}

/// Fritsch–Carlson monotone cubic with zero end slopes.
fn pchip<T: Real>(table: &[(T, T)], t: T) -> (T, T) {
    let n = table.len();
    let k = match table.iter().rposition(|node| node.0 <= t) {
        Some(k) if k + 1 < n => k,
        Some(_) => n - 2,
        None => 0,
    };
    let secant = |i: usize| (table[i + 1].1 - table[i].1) / (table[i + 1].0 - table[i].0);
    let slope = |i: usize| -> T {
        if i == 0 || i == n - 1 {
            return T::zero();
        }
        let d0 = secant(i - 1);
        let d1 = secant(i);
        if d0 * d1 <= T::zero() {
            return T::zero();
        }
        let h0 = table[i].0 - table[i - 1].0;
        let h1 = table[i + 1].0 - table[i].0;
        let w1 = T::lit(2.0) * h1 + h0;
        let w2 = h1 + T::lit(2.0) * h0;
        (w1 + w2) / (w1 / d0 + w2 / d1)
    };
    let (x0, y0) = table[k];
    let (x1, y1) = table[k + 1];
    let h = x1 - x0;
    let s = (t - x0) / h;
    let (m0, m1) = (slope(k), slope(k + 1));
    let s2 = s * s;
    let s3 = s2 * s;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let h00 = two * s3 - three * s2 + T::one();
    let h10 = s3 - two * s2 + s;
    let h01 = -two * s3 + three * s2;
    let h11 = s3 - s2;
    let value = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
    let six = T::lit(6.0);
    let d00 = six * s2 - six * s;
    let d10 = three * s2 - T::lit(4.0) * s + T::one();
    let d01 = -six * s2 + six * s;
    let d11 = three * s2 - two * s;
    let deriv = (d00 * y0 + d01 * y1) / h + d10 * m0 + d11 * m1;
    (value, deriv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(profile: &TestProfile<f64>, a: f64, b: f64) {
        let h = 1e-7 * (b - a);
        for i in 1..200 {
            let d = a + (b - a) * i as f64 / 200.0;
            let (_, deriv) = profile.eval(a, b, d);
            let fd = (profile.eval(a, b, d + h).0 - profile.eval(a, b, d - h).0) / (2.0 * h);
            assert!((deriv - fd).abs() <= 1e-5 * (1.0 + fd.abs()), "{profile:?} at {d}: {deriv} vs {fd}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        fd_check(&TestProfile::SmoothBump, 0.1, 0.6);
        fd_check(&TestProfile::PowerBump { exponent: 0.5, ramp: 2.0 }, 0.1, 0.9);
        let table = vec![(0.0, 0.0), (0.3, 1.0), (0.5, 0.4), (1.0, 0.0)];
        fd_check(&TestProfile::RadialCustom { table }, 0.2, 0.7);
    }

    #[test]
    fn bump_peaks_at_one_and_vanishes_outside() {
        let p: TestProfile<f64> = TestProfile::SmoothBump;
        assert!((p.eval(0.1, 0.6, 0.35).0 - 1.0).abs() < 1e-15);
        assert_eq!(p.eval(0.1, 0.6, 0.05), (0.0, 0.0));
        assert_eq!(p.eval(0.1, 0.6, 0.6), (0.0, 0.0));
    }

    #[test]
    fn power_bump_is_pure_power_on_its_plateau() {
        let p = TestProfile::PowerBump { exponent: 0.5, ramp: 2.0 };
        let (v, d) = p.eval(0.01, 0.8, 0.1);
        assert!((v - 0.1_f64.sqrt()).abs() < 1e-15);
        assert!((d - 0.5 / 0.1_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn custom_table_is_monotone_between_nodes() {
        let table = vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)];
        let p = TestProfile::RadialCustom { table };
        let mut prev = 0.0;
        for i in 1..50 {
            let v = p.eval(0.0, 1.0, i as f64 / 100.0).0;
            assert!(v >= prev && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        assert!(TestProfile::PowerBump { exponent: 0.5, ramp: 1.0 }.validate().is_err());
        let table = vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.2)];
        assert!(TestProfile::RadialCustom { table }.validate().is_err());
    }
}
