use std::f64::consts::PI;

use hardylab::conformal::*;
use hardylab::geometry::DomainSpec;
use hardylab::hardy::{make_test_function, verify, Exponent, InequalitySpec, QuadratureSpec, Side, TestFunction, TestProfile};
use num_complex::Complex;

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn identity() -> ConformalMapSpec<f64> {
    ConformalMapSpec::IdentityAnnulus { rho: 1.0, outer: 3.0 }
}

fn sqrt_map(rho: f64, outer: f64) -> ConformalMapSpec<f64> {
    ConformalMapSpec::SqrtQuadratic { rho, outer }
}

fn bump(rho: f64, outer: f64, band: (f64, f64)) -> TestFunction<f64> {
    let annulus = DomainSpec::Annulus { inner: rho, outer };
    make_test_function(TestProfile::SmoothBump, &annulus, band, Side::Both, false).unwrap()
}

#[test]
fn map_eval_examples() {
    assert_eq!(map_eval(&identity(), c(2.0, 0.0)).unwrap(), c(2.0, 0.0));
    assert_eq!(map_eval(&identity(), c(0.5, 0.0)), Err(ConformalError::PointOutsideDomain));

    // ρ < 1: two holes, and no continuous branch of the square root
    let holed = sqrt_map(0.5, 2.0);
    assert!((map_modulus(&holed, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    assert!((map_modulus(&holed, c(3.0f64.sqrt() * 0.9, 0.1)).unwrap()).is_finite());
    assert!(matches!(map_eval(&holed, c(0.0, 0.0)), Err(ConformalError::BranchDiscontinuity { .. })));

    let ring = sqrt_map(1.5, 3.0);
    let f = map_eval(&ring, c(3.0, 0.0)).unwrap();
    assert!((f.norm() - 8f64.sqrt()).abs() < 1e-12);
    assert!(f.re > 0.0, "positive on the real axis beyond 1");
    let g = map_eval(&ring, c(-3.0, 0.0)).unwrap();
    assert!((g + f).norm() < 1e-12);
}

#[test]
fn map_validation() {
    assert!(matches!(
        map_eval(&ConformalMapSpec::IdentityAnnulus { rho: 2.0, outer: 1.0 }, c(1.5, 0.0)),
        Err(ConformalError::InvalidMap(_))
    ));
    assert!(sqrt_map(0.5, 0.9).validate().is_err());
    assert!(sqrt_map(1.0, 2.0).validate().is_err());
    assert!(identity().composed(MapTransform::Scale(-1.0)).validate().is_err());
}

#[test]
fn derivative_matches_complex_differences() {
    let maps = [
        identity(),
        sqrt_map(1.5, 3.0),
        sqrt_map(1.5, 3.0).composed(MapTransform::Inversion),
        identity().composed(MapTransform::Rotation(0.7)),
    ];
    let h = 1e-5;
    for map in maps {
        let branch = BranchContinuation::new(&map, DEFAULT_CONTINUATION_RESOLUTION).unwrap();
        let pts = sample_domain(&map, 1000, 11).unwrap();
        for z in pts {
            let dz = c(h, 0.0);
            if !(map.contains(z + dz) && map.contains(z - dz)) {
                continue;
            }
            let fd = (branch.eval(z + dz).unwrap() - branch.eval(z - dz).unwrap()) / (2.0 * h);
            let d = branch.deriv(z).unwrap();
            assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0), "{z}: {fd} vs {d}");
        }
    }
}

#[test]
fn frak_f_examples() {
    let v = frak_f(&identity(), c(2.0, 0.0)).unwrap();
    assert!((v.value - 3.75).abs() < 1e-12);
    assert!((v.components.0 + 0.25).abs() < 1e-12 && (v.components.1 - 4.0).abs() < 1e-12);
    // oracle: the annulus weight −1/|y|² + (1/δρ + 1/δR)²
    for z in [c(1.3, 0.4), c(-2.1, 1.2), c(0.0, -2.7)] {
        let r = z.norm();
        let oracle = -1.0 / (r * r) + (1.0 / (r - 1.0) + 1.0 / (3.0 - r)).powi(2);
        assert!((frak_f(&identity(), z).unwrap().value - oracle).abs() < 1e-12 * oracle);
    }

    let scaled = identity().composed(MapTransform::Scale(2.0));
    let inverted = identity().composed(MapTransform::Inversion);
    for z in [c(2.0, 0.0), c(1.1, -1.4)] {
        let base = frak_f(&identity(), z).unwrap().value;
        assert!((frak_f(&scaled, z).unwrap().value - base).abs() < 1e-12 * base.max(1.0));
        assert!((frak_f(&inverted, z).unwrap().value - base).abs() < 1e-12 * base.max(1.0));
    }
    assert_eq!(inverted.annulus_radii(), (1.0 / 3.0, 1.0));

    assert_eq!(frak_f(&identity(), c(3.5, 0.0)), Err(ConformalError::PointOutsideDomain));
    assert_eq!(
        frak_f(&identity(), c(1.0 + 1e-13, 0.0)),
        Err(ConformalError::AnnulusBoundary)
    );
}

#[test]
fn invariance_examples() {
    let transforms = [MapTransform::Scale(3.0), MapTransform::Rotation(PI / 5.0), MapTransform::Inversion];
    for map in [identity(), sqrt_map(0.5, 2.0), sqrt_map(1.5, 3.0)] {
        for t in transforms {
            let r = invariance_check(&map, t, 1000, 4).unwrap();
            assert_eq!(r.samples, 1000);
            assert!(r.max_rel_deviation <= 1e-10, "{map:?} {t:?}: {r:?}");
        }
    }
}

#[test]
fn printed_closed_form_agrees_only_on_the_real_axis() {
    let cmp = compare_display(0.5, 2.0, 2000, 9).unwrap();
    assert!(cmp.max_relative_deviation_real_axis <= 1e-10);
    assert!(cmp.disagreeing > 0 && cmp.undefined > 0);
    let z = c(1.2, 0.0);
    let lemma = frak_f(&sqrt_map(0.5, 2.0), z).unwrap().value;
    let printed = frak_f_display(0.5, 2.0, z).unwrap();
    assert!((lemma - printed).abs() < 1e-10 * lemma.abs());
}

#[test]
fn univalence_examples() {
    assert!(matches!(
        univalence_probe(&identity(), 2000, 1).unwrap(),
        UnivalenceVerdict::NoCollisionFound { .. }
    ));
    assert!(matches!(
        univalence_probe(&sqrt_map(0.5, 2.0), 10_000, 1).unwrap(),
        UnivalenceVerdict::NoCollisionFound { samples: 10_000 }
    ));
    let control = ConformalMapSpec::SquareControl { rho: 1.0, outer: 4.0 };
    match univalence_probe(&control, 2000, 1).unwrap() {
        UnivalenceVerdict::Collision::<f64> { z1, z2, .. } => {
            assert!((z1.0 + z2.0).abs() < 1e-8 && (z1.1 + z2.1).abs() < 1e-8);
        }
        other => panic!("expected a collision, got {other:?}"),
    }
}

#[test]
fn pullback_matches_annulus_verification() {
    let q = QuadratureSpec::default();
    let tf = bump(1.0, 3.0, (0.1, 0.4));
    let pb = pullback_verify(&identity(), &tf, &q).unwrap();
    let annulus = DomainSpec::Annulus { inner: 1.0, outer: 3.0 };
    let r = verify(&InequalitySpec::AnnulusAL, &annulus, Exponent::new(2.0).unwrap(), &tf, &q).unwrap();
    let gap = (pb.ratio.unwrap() - r.ratio.unwrap()).abs() / r.ratio.unwrap();
    assert!(gap <= 1e-6, "{pb:?} vs {r:?}");
    assert!(pb.identity_holds && pb.holds && pb.converged);
}

#[test]
fn pullback_sqrt_quadratic() {
    let q = QuadratureSpec::default();
    for map in [sqrt_map(0.5, 2.0), sqrt_map(1.5, 3.0)] {
        let (rho, outer) = map.annulus_radii();
        let pb = pullback_verify(&map, &bump(rho, outer, (0.1, 0.4)), &q).unwrap();
        assert!(pb.holds && pb.ratio.unwrap() >= 1.0, "{pb:?}");
        assert!(pb.identity_lhs_gap <= 1e-3 && pb.identity_rhs_gap <= 1e-3);
    }
    let zero = pullback_verify(&sqrt_map(0.5, 2.0), &TestFunction::zero(), &q).unwrap();
    assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
    assert!(zero.holds && zero.ratio.is_none());
}

#[test]
fn pullback_rejects_wide_bands() {
    let q = QuadratureSpec::default();
    let tf = TestFunction { band: (0.1, 1.2), ..bump(1.0, 3.0, (0.1, 0.4)) };
    assert!(matches!(pullback_verify(&identity(), &tf, &q), Err(ConformalError::Hardy(_))));
}

#[test]
fn sampling_is_seeded() {
    let m = sqrt_map(0.5, 2.0);
    let a = sample_domain(&m, 100, 5).unwrap();
    assert_eq!(a, sample_domain(&m, 100, 5).unwrap());
    assert!(a.iter().all(|&z| m.contains(z)));
}
