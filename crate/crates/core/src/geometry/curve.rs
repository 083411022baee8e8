//! Closed planar boundary curves, parametrized counter-clockwise over
//! `[0, 2π)`.

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum PlaneCurve<T> {
    Circle { radius: T },
    Ellipse { a: T, b: T },
    /// One lobe of `|z²−1| = c²` (`c < 1`): `z = sign·√(1 + c² e^{is})`.
    CassiniLobe { c: T, sign: T },
    /// The single oval of `|z²−1| = c²` (`c > 1`): `z = w√(1 + w⁻²)`, `w = c e^{is}`.
    CassiniOval { c: T },
}

/// Position and first two derivatives at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct CurveJet<T> {
    pub p: [T; 2],
    pub d1: [T; 2],
    pub d2: [T; 2],
}

impl<T: Real> CurveJet<T> {
    /// Signed curvature, positive when the curve turns left.
    pub fn signed_curvature(&self) -> T {
        let cross = self.d1[0] * self.d2[1] - self.d1[1] * self.d2[0];
        let speed = self.speed();
        cross / (speed * speed * speed)
    }

    pub fn speed(&self) -> T {
        (self.d1[0] * self.d1[0] + self.d1[1] * self.d1[1]).sqrt()
    }

    /// Unit normal pointing to the left of the direction of travel.
    pub fn left_normal(&self) -> [T; 2] {
        let s = self.speed();
        [-self.d1[1] / s, self.d1[0] / s]
    }
}

fn jet_from_complex<T: Real>(z: Complex<T>, dz: Complex<T>, d2z: Complex<T>) -> CurveJet<T> {
    CurveJet {
        p: [z.re, z.im],
        d1: [dz.re, dz.im],
        d2: [d2z.re, d2z.im],
    }
}

impl<T: Real> PlaneCurve<T> {
    pub fn eval(&self, s: T) -> CurveJet<T> {
        let (sin, cos) = s.sin_cos();
        match *self {
            PlaneCurve::Circle { radius } => CurveJet {
                p: [radius * cos, radius * sin],
                d1: [-radius * sin, radius * cos],
                d2: [-radius * cos, -radius * sin],
            },
            PlaneCurve::Ellipse { a, b } => CurveJet {
                p: [a * cos, b * sin],
                d1: [-a * sin, b * cos],
                d2: [-a * cos, -b * sin],
            },
            PlaneCurve::CassiniLobe { c, sign } => {
                // z² = 1 + u, u = c² e^{is}
                let i = Complex::new(T::zero(), T::one());
                let u = Complex::from_polar(c * c, s);
                let z = (u + T::one()).sqrt() * sign;
                let dz = i * u / (z * T::lit(2.0));
                let d2z = (-u - dz * dz * T::lit(2.0)) / (z * T::lit(2.0));
                jet_from_complex(z, dz, d2z)
            }
            PlaneCurve::CassiniOval { c } => {
                // z² = 1 + u, u = c² e^{2is}
                let i = Complex::new(T::zero(), T::one());
                let w = Complex::from_polar(c, s);
                let u = w * w;
                let z = w * (w.inv() * w.inv() + T::one()).sqrt();
                let dz = i * u / z;
                let d2z = (-u * T::lit(2.0) - dz * dz) / z;
                jet_from_complex(z, dz, d2z)
            }
        }
    }

    pub fn period(&self) -> T {
        T::TAU()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(curve: PlaneCurve<f64>) {
        let h = 1e-5;
        for k in 0..32 {
            let s = k as f64 * 0.2 + 0.05;
            let j = curve.eval(s);
            let jp = curve.eval(s + h);
            let jm = curve.eval(s - h);
            for c in 0..2 {
                let d1 = (jp.p[c] - jm.p[c]) / (2.0 * h);
                let d2 = (jp.p[c] - 2.0 * j.p[c] + jm.p[c]) / (h * h);
                assert!((d1 - j.d1[c]).abs() < 1e-7, "{curve:?} d1 at {s}");
                assert!((d2 - j.d2[c]).abs() < 1e-4, "{curve:?} d2 at {s}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        fd_check(PlaneCurve::Circle { radius: 2.0 });
        fd_check(PlaneCurve::Ellipse { a: 2.0, b: 1.0 });
        fd_check(PlaneCurve::CassiniLobe { c: 0.5, sign: 1.0 });
        fd_check(PlaneCurve::CassiniLobe { c: 0.5, sign: -1.0 });
        fd_check(PlaneCurve::CassiniOval { c: 2.0 });
    }

    #[test]
    fn cassini_points_lie_on_level_set() {
        for curve in [
            PlaneCurve::CassiniLobe { c: 0.7, sign: -1.0 },
            PlaneCurve::CassiniOval { c: 1.5 },
        ] {
            let c = match curve {
                PlaneCurve::CassiniLobe { c, .. } | PlaneCurve::CassiniOval { c } => c,
                _ => unreachable!(),
            };
            for k in 0..50 {
                let j = curve.eval(k as f64 * 0.13);
                let z = Complex::new(j.p[0], j.p[1]);
                assert!(((z * z - 1.0).norm() - c * c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curves_run_counter_clockwise() {
        for curve in [
            PlaneCurve::Circle { radius: 1.0 },
            PlaneCurve::Ellipse { a: 3.0, b: 1.0 },
            PlaneCurve::CassiniLobe { c: 0.5, sign: -1.0 },
            PlaneCurve::CassiniOval { c: 2.0 },
        ] {
            // shoelace area is positive for counter-clockwise traversal
            let n = 2000;
            let mut area = 0.0;
            for k in 0..n {
                let a = curve.eval(k as f64 * std::f64::consts::TAU / n as f64).p;
                let b = curve.eval((k + 1) as f64 * std::f64::consts::TAU / n as f64).p;
                area += a[0] * b[1] - a[1] * b[0];
            }
            assert!(area > 0.0, "{curve:?}");
        }
    }
}
