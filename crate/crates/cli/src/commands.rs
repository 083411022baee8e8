use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use hardylab::conformal::{invariance_check, pullback_verify, ConformalError};
use hardylab::geometry::{laplacian_distance, laplacian_distance_fd, sample_off_ridge, DomainSpec, GeometryError};
use hardylab::hardy::{
    compare_fmt, estimate_constant, make_test_function, truncation, verify as run_verify, ConstantFamily, Exponent,
    HardyError, HardyReport, QuadratureSpec, Scheme, TestFunction,
};

use crate::report::{csv_bytes, Body, Environment, FmtSweepRow, Report, SweepRow, Tolerances, Truncation, VERSION};
use crate::{parse, ConstantArgs, Format, GeometryArgs, InvarianceArgs, QuadArgs, SchemeArg, SweepArgs, VerifyArgs};

/// Tolerance for exact algebraic identities.
const ALGEBRAIC_TOL: f64 = 1e-10;
/// Agreement required between analytic and finite-difference Laplacians.
const FD_TOL: f64 = 1e-4;

pub enum Failure {
    /// Invalid input; nothing was computed.
    Config(String),
    Io(String),
}

type Outcome = Result<(Body, bool), Failure>;

fn config<E: ToString>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn hardy_is_config(e: &HardyError) -> bool {
    match e {
        HardyError::InadmissiblePoint(_) => false,
        HardyError::Geometry(g) => matches!(g, GeometryError::InvalidDomain(_) | GeometryError::DimensionMismatch { .. }),
        _ => true,
    }
}

fn conformal_is_config(e: &ConformalError) -> bool {
    match e {
        ConformalError::InvalidMap(_) => true,
        ConformalError::Hardy(h) => hardy_is_config(h),
        _ => false,
    }
}

fn environment(tolerance: f64, domain: Option<&DomainSpec<f64>>, seed: u64) -> Environment {
    Environment {
        tolerances: Tolerances {
            quadrature: tolerance,
            ratio: 3.0 * tolerance,
            algebraic: ALGEBRAIC_TOL,
            finite_difference: FD_TOL,
        },
        truncations: domain
            .and_then(truncation)
            .map(|(parameter, half_width)| vec![Truncation { parameter, half_width }])
            .unwrap_or_default(),
        seed,
    }
}

fn quad_spec(q: &QuadArgs, seed: u64) -> Result<QuadratureSpec<f64>, Failure> {
    let spec = QuadratureSpec { scheme: scheme(q.scheme), resolution: q.resolution, seed, tolerance: q.tolerance };
    spec.validate().map_err(config)?;
    Ok(spec)
}

fn scheme(s: SchemeArg) -> Scheme {
    match s {
        SchemeArg::Radial1d => Scheme::Radial1d,
        SchemeArg::TensorGrid => Scheme::TensorGrid,
        SchemeArg::MonteCarlo => Scheme::MonteCarlo,
    }
}

fn echo<A: Serialize>(a: &A) -> Value {
    serde_json::to_value(a).unwrap_or(Value::Null)
}

fn value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).unwrap_or(Value::Null)
}

fn json_only(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Config(format!("{command} writes json only")));
    }
    Ok(())
}

fn sweep_row(domain: &DomainSpec<f64>, profile: &str, r: &HardyReport<f64>) -> SweepRow {
    SweepRow {
        domain: domain.name().to_string(),
        ineq: r.inequality.to_string(),
        p: r.p,
        band_a: r.band.0,
        band_b: r.band.1,
        profile: profile.to_string(),
        resolution: r.quadrature.resolution,
        lhs: r.lhs,
        rhs: r.rhs,
        ratio: r.ratio,
        min_weight: r.min_pointwise_weight,
        converged: r.converged,
    }
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let p = Exponent::new(a.p).map_err(config)?;
    let profile = parse::profile(&a.profile).map_err(Failure::Config)?;
    let band = parse::band(&a.band).map_err(Failure::Config)?;
    let side = parse::side(&a.side).map_err(Failure::Config)?;
    let quad = quad_spec(&a.quad, a.common.seed)?;
    let env = |d: Option<&DomainSpec<f64>>| environment(quad.tolerance, d, a.common.seed);
    let mut report = Report {
        version: VERSION,
        command: "verify",
        config: echo(a),
        passed: false,
        results: Vec::new(),
        errors: Vec::new(),
        environment: env(None),
    };

    if let Some(map) = &a.map {
        json_only(a.common.format, "verify --map")?;
        let map = parse::conformal_map(map).map_err(Failure::Config)?;
        if a.p != 2.0 {
            return Err(Failure::Config("the pullback check is for p = 2".into()));
        }
        let tf = TestFunction { profile, band, side, zero: false };
        match pullback_verify(&map, &tf, &quad) {
            Ok(r) => {
                report.passed = r.holds && r.identity_holds;
                report.results.push(value(&r));
            }
            Err(e) if conformal_is_config(&e) => return Err(config(e)),
            Err(e) => report.errors.push(e.to_string()),
        }
        let passed = report.passed;
        return Ok((Body::Json(report), passed));
    }

    let domain = parse::domain(a.domain.as_deref().unwrap_or_default()).map_err(Failure::Config)?;
    report.environment = env(Some(&domain));
    let spec = parse::inequality(&a.ineq, a.alpha).map_err(Failure::Config)?;
    spec.check(&domain, p).map_err(config)?;
    let tf = make_test_function(profile, &domain, band, side, spec.requires_ridge_avoidance(&domain)).map_err(config)?;
    let outcome = run_verify(&spec, &domain, p, &tf, &quad);
    match (a.common.format, outcome) {
        (Format::Csv, Ok(r)) => {
            let passed = r.holds;
            let bytes = csv_bytes(&[sweep_row(&domain, &a.profile, &r)]).map_err(Failure::Io)?;
            Ok((Body::Csv(bytes), passed))
        }
        (_, Ok(r)) => {
            report.passed = r.holds;
            report.results.push(value(&r));
            let passed = report.passed;
            Ok((Body::Json(report), passed))
        }
        (_, Err(e)) if hardy_is_config(&e) => Err(config(e)),
        (Format::Csv, Err(e)) => Err(Failure::Io(e.to_string())),
        (Format::Json, Err(e)) => {
            report.errors.push(e.to_string());
            Ok((Body::Json(report), false))
        }
    }
}

#[derive(Serialize)]
struct ConstantResult {
    estimate: hardylab::hardy::ConstantEstimate<f64>,
    /// `((p−1)/p)^p`
    sharp_constant: f64,
    /// Whether the estimate is held to the sharp constant, which is proven for
    /// convex domains only.
    bound_asserted: bool,
    lower_limit: f64,
}

pub fn constant(a: &ConstantArgs) -> Outcome {
    json_only(a.common.format, "constant")?;
    let domain = parse::domain(&a.domain).map_err(Failure::Config)?;
    let p = Exponent::new(a.p).map_err(config)?;
    let quad = quad_spec(&a.quad, a.common.seed)?;
    let family = ConstantFamily { max_evaluations: a.max_evals, ..ConstantFamily::default() };
    let mut report = Report {
        version: VERSION,
        command: "constant",
        config: echo(a),
        passed: false,
        results: Vec::new(),
        errors: Vec::new(),
        environment: environment(quad.tolerance, Some(&domain), a.common.seed),
    };
    match estimate_constant(&domain, p, &family, &quad) {
        Ok(estimate) => {
            let sharp = ((a.p - 1.0) / a.p).powf(a.p);
            let lower_limit = sharp - 3.0 * quad.tolerance;
            let bound_asserted = domain.is_convex();
            report.passed = !bound_asserted || estimate.value >= lower_limit;
            report.results.push(value(&ConstantResult { estimate, sharp_constant: sharp, bound_asserted, lower_limit }));
        }
        Err(e) if hardy_is_config(&e) => return Err(config(e)),
        Err(e) => report.errors.push(e.to_string()),
    }
    let passed = report.passed;
    Ok((Body::Json(report), passed))
}

#[derive(Serialize)]
struct InvarianceResult {
    report: hardylab::conformal::InvarianceReport<f64>,
    threshold: f64,
}

pub fn invariance(a: &InvarianceArgs) -> Outcome {
    json_only(a.common.format, "invariance")?;
    let map = parse::conformal_map(&a.map).map_err(Failure::Config)?;
    let transform = parse::transform(&a.transform).map_err(Failure::Config)?;
    if a.samples == 0 {
        return Err(Failure::Config("--samples must be positive".into()));
    }
    let mut report = Report {
        version: VERSION,
        command: "invariance",
        config: echo(a),
        passed: false,
        results: Vec::new(),
        errors: Vec::new(),
        environment: environment(0.0, None, a.common.seed),
    };
    match invariance_check(&map, transform, a.samples, a.common.seed) {
        Ok(r) => {
            report.passed = r.max_rel_deviation <= ALGEBRAIC_TOL;
            report.results.push(value(&InvarianceResult { report: r, threshold: ALGEBRAIC_TOL }));
        }
        Err(e) if conformal_is_config(&e) => return Err(config(e)),
        Err(e) => report.errors.push(e.to_string()),
    }
    let passed = report.passed;
    Ok((Body::Json(report), passed))
}

pub fn sweep(a: &SweepArgs) -> Outcome {
    let domain = parse::domain(&a.domain).map_err(Failure::Config)?;
    let mut report = Report {
        version: VERSION,
        command: "sweep",
        config: echo(a),
        passed: false,
        results: Vec::new(),
        errors: Vec::new(),
        environment: environment(a.tolerance, Some(&domain), a.common.seed),
    };
    if matches!(a.ineq.as_str(), "fmt-compare" | "fmt-comparison") {
        let DomainSpec::Disc { radius } = domain else {
            return Err(Failure::Config("fmt-compare runs on a disc".into()));
        };
        let alphas = parse::number_list(&a.alphas).map_err(Failure::Config)?;
        if alphas.is_empty() {
            return Err(Failure::Config("empty --alphas".into()));
        }
        let mut rows = Vec::new();
        for alpha in alphas {
            let t = compare_fmt(alpha, radius, 2, a.samples).map_err(config)?;
            rows.push(FmtSweepRow {
                alpha,
                outer: radius,
                n: 2,
                samples: a.samples,
                min_margin: t.min_margin,
                violations: t.violations,
            });
        }
        rows.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));
        let passed = rows.iter().all(|r| r.violations == 0);
        if a.common.format == Format::Csv {
            return Ok((Body::Csv(csv_bytes(&rows).map_err(Failure::Io)?), passed));
        }
        report.passed = passed;
        report.results = rows.iter().map(value).collect();
        return Ok((Body::Json(report), passed));
    }

    let spec = parse::inequality(&a.ineq, None).map_err(Failure::Config)?;
    let p = Exponent::new(a.p).map_err(config)?;
    spec.check(&domain, p).map_err(config)?;
    let side = parse::side(&a.side).map_err(Failure::Config)?;
    let bands = parse::list(&a.bands, parse::band).map_err(Failure::Config)?;
    let profiles: Vec<String> = a.profiles.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    let resolutions: Vec<usize> = parse::number_list(&a.resolutions)
        .map_err(Failure::Config)?
        .into_iter()
        .map(|r| r as usize)
        .collect();
    if bands.is_empty() || profiles.is_empty() || resolutions.is_empty() {
        return Err(Failure::Config("sweep needs at least one band, profile and resolution".into()));
    }
    let avoid = spec.requires_ridge_avoidance(&domain);
    let mut jobs = Vec::new();
    for &band in &bands {
        for name in &profiles {
            let profile = parse::profile(name).map_err(Failure::Config)?;
            let tf = make_test_function(profile, &domain, band, side, avoid).map_err(config)?;
            for &resolution in &resolutions {
                let quad = QuadratureSpec { scheme: scheme(a.scheme), resolution, seed: a.common.seed, tolerance: a.tolerance };
                quad.validate().map_err(config)?;
                jobs.push((name.clone(), tf.clone(), quad));
            }
        }
    }
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|(name, tf, quad)| (name, run_verify(&spec, &domain, p, tf, quad)))
        .collect();
    let mut rows = Vec::new();
    for (name, outcome) in outcomes {
        match outcome {
            Ok(r) => rows.push((sweep_row(&domain, name, &r), r.holds)),
            Err(e) => report.errors.push(e.to_string()),
        }
    }
    rows.sort_by(|(x, _), (y, _)| {
        (x.band_a, x.band_b)
            .partial_cmp(&(y.band_a, y.band_b))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| x.profile.cmp(&y.profile))
            .then_with(|| x.resolution.cmp(&y.resolution))
    });
    let passed = report.errors.is_empty() && rows.iter().all(|(_, h)| *h);
    let rows: Vec<SweepRow> = rows.into_iter().map(|(r, _)| r).collect();
    if a.common.format == Format::Csv {
        return Ok((Body::Csv(csv_bytes(&rows).map_err(Failure::Io)?), passed));
    }
    report.passed = passed;
    report.results = rows.iter().map(value).collect();
    Ok((Body::Json(report), passed))
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ExpectedSign {
    NonPositive,
    NonNegative,
    Negative,
    BothSigns,
    Unspecified,
}

fn expected_sign(domain: &DomainSpec<f64>) -> ExpectedSign {
    match domain {
        DomainSpec::Disc { .. } | DomainSpec::Ellipse { .. } | DomainSpec::Cylinder { .. } => ExpectedSign::NonPositive,
        DomainSpec::ExteriorDisc { .. } => ExpectedSign::NonNegative,
        DomainSpec::Torus { major, minor } if *major > 2.0 * *minor => ExpectedSign::Negative,
        DomainSpec::Hyperboloid { .. } => ExpectedSign::BothSigns,
        _ => ExpectedSign::Unspecified,
    }
}

#[derive(Debug, Serialize)]
struct Witness {
    point: Vec<f64>,
    laplacian: f64,
}

#[derive(Debug, Serialize)]
struct GeometryResult {
    domain: &'static str,
    samples: usize,
    expected_sign: ExpectedSign,
    negative: usize,
    zero: usize,
    positive: usize,
    sign_violations: usize,
    min: Option<Witness>,
    max: Option<Witness>,
    violations: Vec<Witness>,
    fd_step: f64,
    fd_margin: f64,
    fd_checked: usize,
    fd_skipped: usize,
    max_fd_gap: f64,
}

/// Values within this of zero count as zero.
const ZERO_BAND: f64 = 1e-12;

pub fn geometry_check(a: &GeometryArgs) -> Outcome {
    json_only(a.common.format, "geometry-check")?;
    let domain = parse::domain(&a.domain).map_err(Failure::Config)?;
    let fraction = |m: f64| m > 0.0 && m < 0.5;
    if a.samples == 0 || !fraction(a.margin) || !fraction(a.fd_margin) {
        return Err(Failure::Config("need --samples > 0 and margins in (0, 0.5)".into()));
    }
    let mut report = Report {
        version: VERSION,
        command: "geometry-check",
        config: echo(a),
        passed: false,
        results: Vec::new(),
        errors: Vec::new(),
        environment: environment(0.0, Some(&domain), a.common.seed),
    };
    let sampled = sample_off_ridge(&domain, a.samples, a.common.seed, a.margin)
        .and_then(|p| Ok((p, sample_off_ridge(&domain, a.samples, a.common.seed, a.fd_margin)?)));
    let (points, fd_points) = match sampled {
        Ok(p) => p,
        Err(e) => {
            report.errors.push(e.to_string());
            return Ok((Body::Json(report), false));
        }
    };
    let n = domain.dim();
    let h = 1e-4 * domain.scale();
    let evals: Vec<_> = points
        .par_iter()
        .map(|x| (x[..n].to_vec(), laplacian_distance(&domain, &x[..n])))
        .collect();
    // The FD truncation error grows like h²/s³ at distance s from the ridge,
    // so the comparison runs on its own, better separated, points.
    let fd_gaps: Vec<Option<f64>> = fd_points
        .par_iter()
        .map(|x| {
            let x = &x[..n];
            let exact = laplacian_distance(&domain, x).ok()?;
            laplacian_distance_fd(&domain, x, h).ok().map(|f| (f - exact).abs())
        })
        .collect();
    let expected = expected_sign(&domain);
    let mut res = GeometryResult {
        domain: domain.name(),
        samples: points.len(),
        expected_sign: expected,
        negative: 0,
        zero: 0,
        positive: 0,
        sign_violations: 0,
        min: None,
        max: None,
        violations: Vec::new(),
        fd_step: h,
        fd_margin: a.fd_margin,
        fd_checked: 0,
        fd_skipped: 0,
        max_fd_gap: 0.0,
    };
    for gap in fd_gaps {
        match gap {
            Some(g) => {
                res.fd_checked += 1;
                res.max_fd_gap = res.max_fd_gap.max(g);
            }
            None => res.fd_skipped += 1,
        }
    }
    for (x, lap) in evals {
        let lap = match lap {
            Ok(v) => v,
            Err(e) => {
                report.errors.push(format!("{x:?}: {e}"));
                continue;
            }
        };
        if lap < -ZERO_BAND {
            res.negative += 1;
        } else if lap > ZERO_BAND {
            res.positive += 1;
        } else {
            res.zero += 1;
        }
        let bad = match expected {
            ExpectedSign::NonPositive => lap > ZERO_BAND,
            ExpectedSign::NonNegative => lap < -ZERO_BAND,
            ExpectedSign::Negative => lap >= 0.0,
            ExpectedSign::BothSigns | ExpectedSign::Unspecified => false,
        };
        if bad {
            res.sign_violations += 1;
            if res.violations.len() < 10 {
                res.violations.push(Witness { point: x.clone(), laplacian: lap });
            }
        }
        if res.min.as_ref().is_none_or(|m| lap < m.laplacian) {
            res.min = Some(Witness { point: x.clone(), laplacian: lap });
        }
        if res.max.as_ref().is_none_or(|m| lap > m.laplacian) {
            res.max = Some(Witness { point: x, laplacian: lap });
        }
    }
    if matches!(expected, ExpectedSign::BothSigns) && (res.negative == 0 || res.positive == 0) {
        // one missing sign counts as a single violation
        res.sign_violations += 1;
    }
    report.passed = report.errors.is_empty() && res.sign_violations == 0 && res.max_fd_gap <= FD_TOL;
    report.results.push(value(&res));
    let passed = report.passed;
    Ok((Body::Json(report), passed))
}
