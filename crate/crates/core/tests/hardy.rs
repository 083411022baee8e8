use hardylab::geometry::{laplacian_distance_fd, ridge_distance, sample_off_ridge, BoundaryParam, DomainSpec};
use hardylab::hardy::*;

type Spec = InequalitySpec<f64>;

fn p(v: f64) -> Exponent<f64> {
    Exponent::new(v).unwrap()
}

fn disc() -> DomainSpec<f64> {
    DomainSpec::Disc { radius: 1.0 }
}


fn bump(domain: &DomainSpec<f64>, band: (f64, f64)) -> TestFunction<f64> {
    make_test_function(TestProfile::SmoothBump, domain, band, Side::Both, false).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

#[test]
fn exponent_range() {
    assert!(Exponent::new(1.0).is_err());
    assert!(Exponent::new(f64::INFINITY).is_err());
    assert!(Exponent::new(f64::NAN).is_err());
    assert_eq!(p(1.5).value(), 1.5);
}

#[test]
fn weight_examples() {
    let w = weight(&Spec::ConvexImproved, &disc(), &[0.5, 0.0], p(2.0)).unwrap();
    assert!((w - 3.0).abs() < 1e-12);
    // closed form 1 + |2κδ/(1+κδ)| with κ = −1
    let (k, d): (f64, f64) = (-1.0, 0.5);
    assert!((w - (1.0 + (2.0 * k * d / (1.0 + k * d)).abs())).abs() < 1e-12);

    let ext = DomainSpec::ExteriorDisc { radius: 1.0 };
    let w = weight(&Spec::ExteriorConvex, &ext, &[2.0, 0.0], p(2.0)).unwrap();
    assert!(w.abs() < 1e-12);
    assert!(weight(&Spec::ExteriorConvex, &ext, &[1.9, 0.0], p(2.0)).unwrap() > 0.0);
    assert!(weight(&Spec::ExteriorConvex, &ext, &[2.1, 0.0], p(2.0)).unwrap() < 0.0);

    for pv in [1.2, 2.0, 5.0] {
        assert_eq!(ridge_weight(pv, 0.3, 0.0), 1.0);
    }

    let torus = DomainSpec::Torus { major: 3.0, minor: 1.0 };
    let x = [3.5, 0.0, 0.0];
    assert!((torus_extra(1.0_f64, 0.5, 3.5) - 12.0 / 7.0).abs() < 1e-12);
    // oracle: for the torus −Δδ = 1/(r−δ) + 1/|x′|, so the extra term is −Δδ − 2/|x′|
    let lap: f64 = laplacian_distance_fd(&torus, &x, 1e-4).unwrap();
    assert!((-lap - 2.0 / 3.5 - 12.0 / 7.0).abs() < 1e-6);
    let tw = weight(&Spec::TorusImproved, &torus, &x, p(2.0)).unwrap();
    assert!((tw - (1.0 + 2.0 * 0.5 * 12.0 / 7.0)).abs() < 1e-12);
}

#[test]
fn weight_errors() {
    let torus_only = Spec::TorusImproved;
    assert!(matches!(
        weight(&torus_only, &disc(), &[0.5, 0.0], p(2.0)),
        Err(HardyError::DomainMismatch { .. })
    ));
    assert!(matches!(
        weight(&Spec::CurvatureRidge, &disc(), &[0.0, 0.0], p(2.0)),
        Err(HardyError::InadmissiblePoint(_))
    ));
    assert!(weight(&Spec::ConvexImproved, &disc(), &[1.5, 0.0], p(2.0)).is_err());
    assert!(matches!(
        Spec::AnnulusAL.check(&DomainSpec::Annulus { inner: 1.0, outer: 3.0 }, p(3.0)),
        Err(HardyError::InadmissibleExponent(_))
    ));
    assert!(matches!(
        Spec::FmtComparison { alpha: -2.0 }.check(&disc(), p(2.0)),
        Err(HardyError::AlphaOutOfRange(_))
    ));
}

#[test]
fn weighted_exterior_matches_closed_form() {
    let ext = DomainSpec::ExteriorDisc { radius: 1.0 };
    let (pv, n, rho) = (3.0, 2.0, 1.0);
    for r in [1.1, 1.5, 2.0, 3.7] {
        let w = weight(&Spec::WeightedExterior, &ext, &[0.0, r], p(pv)).unwrap();
        let expected = 1.0 + pv * (n - 1.0) * (r - rho) / r;
        assert!((w - expected).abs() < 1e-12, "r={r}: {w} vs {expected}");
    }
}

#[test]
fn exterior_weight_orders_against_inversion_bracket() {
    // the exterior weight 1 − 2δ/|x| sits below the bracket δ²(−1/|x|² + 1/δ²) = 1 − δ²/|x|²
    let ext = DomainSpec::ExteriorDisc { radius: 1.0 };
    for i in 1..200 {
        let r = 1.0 + 0.02 * i as f64;
        let d = r - 1.0;
        let w = weight(&Spec::ExteriorConvex, &ext, &[r, 0.0], p(2.0)).unwrap();
        assert!((w - (1.0 - 2.0 * d / r)).abs() < 1e-12);
        let bracket = d * d * (-1.0 / (r * r) + 1.0 / (d * d));
        assert!(w <= bracket + 1e-12);
    }
}

#[test]
fn specialization_identities() {
    for n in 2..=5 {
        for i in 1..50 {
            let r = 0.02 * i as f64;
            let d = 1.0 - r;
            let lap = -((n - 1) as f64) / r;
            let a = ball_quadratic_weight(n, r, d);
            let b = quadratic_form_weight(n, r, d, lap, -r);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            if n == 2 {
                assert!((a - (1.0 / (d * d) + 2.0 / (r * d))).abs() <= 1e-12 * a);
            }
        }
        for i in 1..50 {
            let r = 1.0 + 0.04 * i as f64;
            let (d1, d2) = (r - 1.0, 3.0 - r);
            let nf = (n - 1) as f64;
            let a = annulus_al_weight(n, r, d1, d2);
            let b = two_boundary_weight(n, r, d1, d2, nf / r, -nf / r, -1.0, r, -r);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}

#[test]
fn fmt_constant_branches() {
    assert!((fmt_c_alpha(-1.0_f64) - 0.5).abs() < 1e-15);
    assert!((fmt_c_alpha(0.0_f64) - 3.0).abs() < 1e-15);
    assert!((fmt_c_alpha(-1.5_f64) - 2f64.powf(-1.5) * 0.25).abs() < 1e-15);
}

#[test]
fn torus_extra_positive_on_ring_tori() {
    for (major, minor) in [(3.0, 1.0), (2.5, 1.0), (5.0, 0.5)] {
        let torus = DomainSpec::Torus { major, minor };
        for x in sample_off_ridge(&torus, 500, 3, 1e-3).unwrap() {
            let x: [f64; 3] = x;
            let pd = PointData::at(&torus, &x).unwrap();
            let axis = (x[0] * x[0] + x[1] * x[1]).sqrt();
            assert!(torus_extra(minor, pd.delta, axis) > 0.0);
        }
    }
}

#[test]
fn test_function_examples() {
    let tf = bump(&disc(), (0.1, 0.6));
    assert_eq!(tf.value(&disc(), &[0.95, 0.0]).unwrap(), 0.0);
    assert_eq!(tf.value(&disc(), &[0.0, 0.3]).unwrap(), 0.0);
    assert!((tf.value(&disc(), &[0.65, 0.0]).unwrap() - 1.0).abs() < 1e-12);

    let torus = DomainSpec::Torus { major: 3.0, minor: 1.0 };
    let tf = make_test_function(TestProfile::SmoothBump, &torus, (0.05, 0.9), Side::Both, true).unwrap();
    assert_eq!(tf.value(&torus, &[3.0, 0.0, 0.0]).unwrap_or(0.0), 0.0);
    assert!(tf.value(&torus, &[3.5, 0.0, 0.0]).unwrap() > 0.0);

    let hyp = DomainSpec::Hyperboloid { s_max: 2.0 };
    make_test_function(TestProfile::SmoothBump, &hyp, (0.05, 0.4), Side::Both, true).unwrap();
    let mut least = f64::INFINITY;
    for i in 0..=80 {
        let s = -2.0 + 0.05 * i as f64;
        if let Some(d) = ridge_distance(&hyp, &BoundaryParam::new(0, &[s, 0.3])).unwrap() {
            least = least.min(d);
        }
    }
    assert!(least > 0.4, "ridge distance {least}");
}

#[test]
fn test_function_errors() {
    let d = disc();
    assert!(matches!(
        make_test_function(TestProfile::SmoothBump, &d, (0.5, 0.5), Side::Both, false),
        Err(HardyError::BandEmpty)
    ));
    assert!(matches!(
        make_test_function(TestProfile::SmoothBump, &d, (-0.1, 0.5), Side::Both, false),
        Err(HardyError::BandEmpty)
    ));
    assert!(matches!(
        make_test_function(TestProfile::SmoothBump, &d, (0.1, 1.2), Side::Both, false),
        Err(HardyError::BandTouchesRidge)
    ));
    let torus = DomainSpec::Torus { major: 3.0, minor: 1.0 };
    assert!(matches!(
        make_test_function(TestProfile::SmoothBump, &torus, (0.1, 1.0), Side::Both, true),
        Err(HardyError::BandTouchesRidge)
    ));
    assert!(make_test_function(TestProfile::SmoothBump, &d, (0.1, 0.5), Side::Inner, false).is_err());
    let bad = TestProfile::PowerBump { exponent: 0.5, ramp: 1.0 };
    assert!(matches!(
        make_test_function(bad, &d, (0.1, 0.5), Side::Both, false),
        Err(HardyError::InvalidProfile(_))
    ));
}

#[test]
fn quadrature_schemes_agree_on_disc() {
    let d = disc();
    let tf = bump(&d, (0.1, 0.6));
    let radial = lhs_directional(&d, &tf, p(2.0), &QuadratureSpec::default()).unwrap();
    let grid = lhs_directional(&d, &tf, p(2.0), &QuadratureSpec::with_scheme(Scheme::TensorGrid, 128)).unwrap();
    assert!(radial.converged && grid.converged);
    assert!(rel(radial.value, grid.value) < 1e-3);
    let mc = lhs_directional(&d, &tf, p(2.0), &QuadratureSpec::with_scheme(Scheme::MonteCarlo, 256)).unwrap();
    assert!(rel(radial.value, mc.value) < 5e-2);
}

#[test]
fn quadrature_schemes_agree_in_three_dimensions() {
    let torus = DomainSpec::Torus { major: 3.0, minor: 1.0 };
    let tf = bump(&torus, (0.1, 0.6));
    let radial = lhs_directional(&torus, &tf, p(2.0), &QuadratureSpec::default()).unwrap();
    let grid = lhs_directional(&torus, &tf, p(2.0), &QuadratureSpec::with_scheme(Scheme::TensorGrid, 64)).unwrap();
    assert!(rel(radial.value, grid.value) < 1e-3, "{radial:?} {grid:?}");
}

#[test]
fn zero_function_integrates_to_zero() {
    let d = disc();
    let zero = TestFunction::zero();
    let q = QuadratureSpec::default();
    assert_eq!(lhs_directional(&d, &zero, p(2.0), &q).unwrap().value, 0.0);
    assert_eq!(lhs_full_gradient(&d, &zero, p(2.0), &q).unwrap().value, 0.0);
    assert_eq!(rhs(&Spec::ConvexImproved, &d, &zero, p(2.0), &q).unwrap().value, 0.0);
}

#[test]
fn annulus_outer_side_matches_disc_shell() {
    let ann = DomainSpec::Annulus { inner: 1.0, outer: 3.0 };
    let big = DomainSpec::Disc { radius: 3.0 };
    let band = (0.1, 0.8);
    let outer = make_test_function(TestProfile::SmoothBump, &ann, band, Side::Outer, false).unwrap();
    let q = QuadratureSpec::default();
    let a = lhs_directional(&ann, &outer, p(2.0), &q).unwrap().value;
    let b = lhs_directional(&big, &bump(&big, band), p(2.0), &q).unwrap().value;
    assert!(rel(a, b) < 1e-6, "{a} {b}");
}

#[test]
fn full_gradient_matches_directional_off_ridge() {
    let q = QuadratureSpec::default();
    for (d, band) in [
        (disc(), (0.1, 0.6)),
        (DomainSpec::Ellipse { a: 2.0, b: 1.0 }, (0.05, 0.4)),
        (DomainSpec::Torus { major: 3.0, minor: 1.0 }, (0.1, 0.8)),
    ] {
        let tf = bump(&d, band);
        for pv in [1.5, 2.0, 3.0] {
            let a = lhs_directional(&d, &tf, p(pv), &q).unwrap().value;
            let b = lhs_full_gradient(&d, &tf, p(pv), &q).unwrap().value;
            assert!(rel(a, b) < 1e-3, "{} p={pv}: {a} {b}", d.name());
        }
    }
    let d = disc();
    let full = lhs_full_gradient(&d, &bump(&d, (0.2, 0.7)), p(2.0), &q).unwrap();
    assert!(full.value.is_finite() && full.value > 0.0 && full.converged);
}

/// Independent radial oracle: `2π∫ r W(r) η(δ)² dr / 4` by composite Simpson.
fn annulus_al_oracle(band: (f64, f64)) -> f64 {
    let (rho, big) = (1.0, 3.0);
    let (a, b) = band;
    let m = 20_000;
    let h = (b - a) / m as f64;
    let mut sum = 0.0;
    for i in 0..=m {
        let delta = a + h * i as f64;
        let r = rho + delta;
        let t = (delta - a) / (b - a);
        let eta = if t <= 0.0 || t >= 1.0 { 0.0 } else { (4.0 - 1.0 / (t * (1.0 - t))).exp() };
        let w = -1.0 / (r * r) + (1.0 / (r - rho) + 1.0 / (big - r)).powi(2);
        let c = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += c * 2.0 * std::f64::consts::PI * r * w * eta * eta;
    }
    sum * h / 3.0 / 4.0
}

#[test]
fn rhs_annulus_al_matches_oracle() {
    let ann = DomainSpec::Annulus { inner: 1.0, outer: 3.0 };
    let band = (0.1, 0.4);
    let tf = make_test_function(TestProfile::SmoothBump, &ann, band, Side::Inner, false).unwrap();
    let r = rhs(&Spec::AnnulusAL, &ann, &tf, p(2.0), &QuadratureSpec::default()).unwrap();
    assert!(rel(r.value, annulus_al_oracle(band)) < 1e-3, "{} {}", r.value, annulus_al_oracle(band));
}

#[test]
fn verify_examples() {
    let q = QuadratureSpec::default();
    let d = disc();
    let r = verify(&Spec::ConvexImproved, &d, p(2.0), &bump(&d, (0.1, 0.6)), &q).unwrap();
    assert!(r.holds && r.ratio.unwrap() >= 1.0 && r.converged);
    assert_eq!(r.constant_used, 0.25);

    let ext = DomainSpec::ExteriorDisc { radius: 1.0 };
    let r = verify(&Spec::ExteriorConvex, &ext, p(2.0), &bump(&ext, (0.05, 0.9)), &q).unwrap();
    assert!(r.holds && r.ratio.unwrap() >= 1.0);
    assert!(r.min_pointwise_weight.unwrap() > 0.0);

    let r = verify(&Spec::WeightedExterior, &ext, p(3.0), &bump(&ext, (0.2, 2.0)), &q).unwrap();
    assert!(r.holds && r.ratio.unwrap() >= 1.0);
    assert!((r.constant_used - 1.0 / 27.0).abs() < 1e-15);

    let zero = verify(&Spec::ConvexImproved, &d, p(2.0), &TestFunction::zero(), &q).unwrap();
    assert!(zero.holds && zero.ratio.is_none());
}

#[test]
fn verify_rejects_bad_combinations() {
    let q = QuadratureSpec::default();
    let d = disc();
    let tf = bump(&d, (0.1, 0.6));
    assert!(matches!(
        verify(&Spec::TorusImproved, &d, p(2.0), &tf, &q),
        Err(HardyError::DomainMismatch { .. })
    ));
    assert!(verify(&Spec::BallQuadratic, &d, p(3.0), &tf, &q).is_err());
    let low = QuadratureSpec { resolution: 32, ..QuadratureSpec::default() };
    assert!(matches!(verify(&Spec::ConvexImproved, &d, p(2.0), &tf, &low), Err(HardyError::InvalidConfig(_))));
}

#[test]
fn random_cases_are_reproducible_and_admissible() {
    let torus = DomainSpec::Torus { major: 3.0, minor: 1.0 };
    let a = random_cases(&Spec::GeneralRidge, &torus, 20, 5).unwrap();
    let b = random_cases(&Spec::GeneralRidge, &torus, 20, 5).unwrap();
    assert_eq!(a, b);
    for (profile, band) in a {
        make_test_function(profile, &torus, band, Side::Both, true).unwrap();
    }
}

#[test]
fn constant_search_brackets_the_sharp_value() {
    let q = QuadratureSpec::default();
    let fam = ConstantFamily::default();
    let d = estimate_constant(&disc(), p(2.0), &fam, &q).unwrap();
    assert!(d.value >= 0.25 - 3e-3 && d.value <= 0.30, "{d:?}");
    assert!(d.converged && !d.budget_exhausted);
    // the cylinder cross-section is the same disc computation
    let c = estimate_constant(&DomainSpec::Disc { radius: 2.0 }, p(2.0), &fam, &q).unwrap();
    assert!(rel(c.value, d.value) < 1e-6);
    let a = estimate_constant(&DomainSpec::Annulus { inner: 1.0, outer: 3.0 }, p(2.0), &fam, &q).unwrap();
    assert!(a.value >= 0.25 - 3e-3);

    let tight = ConstantFamily { max_evaluations: 5, ..fam };
    assert!(estimate_constant(&disc(), p(2.0), &tight, &q).unwrap().budget_exhausted);
    assert!(estimate_constant(&DomainSpec::ExteriorDisc { radius: 1.0 }, p(2.0), &fam, &q).is_err());
}

#[test]
fn fmt_examples() {
    let t = compare_fmt(-1.0_f64, 1.0, 2, 1).unwrap();
    let row = t.rows[0];
    assert_eq!(row.radius, 0.5);
    assert!((row.bound - 1.0).abs() < 1e-12);
    assert!(row.margin >= 0.0);

    let t = compare_fmt(-1.5_f64, 1.0, 2, 3000).unwrap();
    assert!((t.bound_positive_below.unwrap() - 2.0 / 3.0).abs() < 1e-15);
    for r in &t.rows {
        assert_eq!(r.bound > 0.0, r.radius < 2.0 / 3.0);
    }
    assert_eq!(t.violations, 0);

    assert!(matches!(compare_fmt(-2.0, 1.0, 2, 10), Err(HardyError::AlphaOutOfRange(_))));
    assert!(compare_fmt(-1.999_999, 1.0, 2, 10).is_ok());
}
