use hardylab::conformal::{frak_f, ConformalMapSpec, MapTransform};
use hardylab::geometry::{distance, DomainSpec};
use hardylab::hardy::*;
use num_complex::Complex;
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = TestProfile<f64>> {
    prop_oneof![
        Just(TestProfile::SmoothBump),
        (0.0..1.5f64, 1.2..50.0f64).prop_map(|(exponent, ramp)| TestProfile::PowerBump { exponent, ramp }),
        (0.2..0.8f64, 0.3..2.0f64).prop_map(|(peak, h)| TestProfile::RadialCustom {
            table: vec![(0.0, 0.0), (peak, h), (1.0, 0.0)],
        }),
    ]
}

proptest! {
    #[test]
    fn profiles_are_supported_in_band(prof in profile(), a in 0.01..0.5f64, w in 0.05..1.0f64, t in -0.5..1.5f64) {
        let b = a + w;
        let delta = a + t * w;
        let (eta, deta) = prof.eval(a, b, delta);
        prop_assert!(eta >= 0.0 && eta.is_finite() && deta.is_finite());
        if delta <= a || delta >= b {
            prop_assert_eq!((eta, deta), (0.0, 0.0));
        }
    }

    #[test]
    fn profile_derivative_matches_differences(prof in profile(), t in 0.05..0.95f64) {
        let (a, b) = (0.1, 0.7);
        let d = a + t * (b - a);
        let h = 1e-6;
        let fd = (prof.eval(a, b, d + h).0 - prof.eval(a, b, d - h).0) / (2.0 * h);
        let (_, deta) = prof.eval(a, b, d);
        prop_assert!((fd - deta).abs() <= 1e-4 * deta.abs().max(1.0), "{} vs {}", fd, deta);
    }

    #[test]
    fn convex_weights_dominate_one(x in -0.99..0.99f64, y in -0.99..0.99f64, pv in 1.1..6.0f64) {
        prop_assume!(x * x + y * y < 0.98 && x * x + y * y > 1e-4);
        let disc = DomainSpec::Disc { radius: 1.0 };
        let p = Exponent::new(pv).unwrap();
        let w = weight(&InequalitySpec::ConvexImproved, &disc, &[x, y], p).unwrap();
        let g = weight(&InequalitySpec::GeneralRidge, &disc, &[x, y], p).unwrap();
        prop_assert!(w >= 1.0);
        prop_assert!((w - g).abs() <= 1e-12 * w);
    }

    #[test]
    fn ball_quadratic_is_specialized_form(n in 2usize..7, r in 0.01..0.99f64) {
        let d = 1.0 - r;
        let a = ball_quadratic_weight(n, r, d);
        let b = quadratic_form_weight(n, r, d, -((n - 1) as f64) / r, -r);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn distance_is_one_lipschitz(x in prop::array::uniform2(-1.8..1.8f64), y in prop::array::uniform2(-1.8..1.8f64)) {
        let e = DomainSpec::Ellipse { a: 2.0, b: 1.0 };
        prop_assume!(e.contains(&x) && e.contains(&y));
        let gap = (distance(&e, &x).unwrap() - distance(&e, &y).unwrap()).abs();
        let dist = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
        prop_assert!(gap <= dist + 1e-9);
    }

    #[test]
    fn frak_f_is_scale_invariant(re in -2.2..2.2f64, im in -2.2..2.2f64, s in 0.1..10.0f64) {
        let map = ConformalMapSpec::SqrtQuadratic { rho: 0.5, outer: 2.0 };
        let z = Complex::new(re, im);
        prop_assume!(map.contains(z));
        let scaled = map.clone().composed(MapTransform::Scale(s));
        let (Ok(a), Ok(b)) = (frak_f(&map, z), frak_f(&scaled, z)) else { return Ok(()) };
        prop_assert!((a.value - b.value).abs() <= 1e-10 * a.value.abs().max(1.0));
    }
}
