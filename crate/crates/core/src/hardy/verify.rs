use serde::Serialize;

use crate::geometry::{DomainSpec, GeometryError};
use crate::scalar::Real;

use super::function::{Side, TestFunction};
use super::inequality::{weight_at, InequalitySpec, LhsForm, WeightForm};
use super::quadrature::{integrate, NodeOut, QuadResult, QuadratureSpec, Scheme};
use super::{Exponent, HardyError};

/// Quadrature settings as used, including any truncation of the domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureEcho<T> {
    pub scheme: Scheme,
    pub resolution: usize,
    /// Resolution of the reported values, after adaptive doubling.
    pub refined_resolution: usize,
    pub tolerance: T,
    pub seed: u64,
    /// `(parameter name, half-width)` of truncated unbounded directions.
    pub truncation: Option<(&'static str, T)>,
}

/// One pointwise diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightSample<T> {
    pub label: &'static str,
    pub delta: T,
    pub weight: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyReport<T> {
    pub inequality: &'static str,
    pub domain: &'static str,
    pub p: T,
    pub band: (T, T),
    pub side: Side,
    pub profile: &'static str,
    pub lhs: T,
    pub rhs: T,
    /// `lhs/rhs`; absent when `rhs ≤ 0`, where the inequality holds trivially.
    pub ratio: Option<T>,
    /// `lhs ≥ (1 − ratio_tolerance)·rhs`
    pub holds: bool,
    pub ratio_tolerance: T,
    pub min_pointwise_weight: Option<T>,
    pub constant_used: T,
    pub converged: bool,
    pub lhs_coarse: T,
    pub rhs_coarse: T,
    pub quadrature: QuadratureEcho<T>,
    pub samples: Vec<WeightSample<T>>,
    pub notes: Vec<&'static str>,
}

/// Truncated parameter of an unbounded boundary and its half-width.
pub fn truncation<T: Real>(domain: &DomainSpec<T>) -> Option<(&'static str, T)> {
    match domain {
        DomainSpec::Cylinder { half_height, .. } => Some(("half_height", *half_height)),
        DomainSpec::Hyperboloid { s_max } => Some(("s_max", *s_max)),
        _ => None,
    }
}

/// The four integrals of one run: `∫|∇δ·∇f|ᵖ`, `∫|∇f|ᵖ`, `∫δᵖ|∇δ·∇f|ᵖ` and the
/// un-normalized right-hand side `∫W|f|ᵖ(/δᵖ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrals<T> {
    pub lhs_directional: T,
    pub lhs_full: T,
    pub lhs_weighted: T,
    pub rhs_raw: T,
    pub min_weight: Option<(T, T)>,
}

fn run<T: Real>(
    spec: Option<&InequalitySpec<T>>,
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    p: Exponent<T>,
    quad: &QuadratureSpec<T>,
    resolution: usize,
) -> Result<Integrals<T>, HardyError> {
    let pv = p.value();
    let half_p = pv * T::lit(0.5);
    let g = move |node: &super::quadrature::Node<T>| -> Result<NodeOut<T, 4>, HardyError> {
        let dir = node.directional.abs().powf(pv);
        let full = node.grad_sq.powf(half_p);
        let weighted = node.data.delta.powf(pv) * dir;
        let fp = node.f.abs().powf(pv);
        let (rhs, weight) = match spec {
            Some(spec) if fp > T::zero() => {
                let w = weight_at(spec, domain, &node.data, p)?;
                let base = match spec.weight_form() {
                    WeightForm::OverDeltaP => fp / node.data.delta.powf(pv),
                    WeightForm::Plain => fp,
                };
                (w * base, Some(w))
            }
            _ => (T::zero(), None),
        };
        Ok(NodeOut { values: [dir, full, weighted, rhs], weight })
    };
    let r: QuadResult<T, 4> = integrate(domain, tf, quad.scheme, resolution, quad.seed, &g)?;
    Ok(Integrals {
        lhs_directional: r.sums[0],
        lhs_full: r.sums[1],
        lhs_weighted: r.sums[2],
        rhs_raw: r.sums[3],
        min_weight: r.min_weight,
    })
}

fn relative_change<T: Real>(coarse: T, fine: T) -> T {
    let scale = fine.abs().max(coarse.abs());
    if scale == T::zero() {
        T::zero()
    } else {
        (fine - coarse).abs() / scale
    }
}

/// Resolution doublings tried before a result is reported unconverged.
const MAX_DOUBLINGS: usize = 3;

/// Integrals at the last two resolutions of a doubling sequence that starts
/// at the base resolution and stops once every integral settles.
pub(crate) fn run_refined<T: Real>(
    spec: Option<&InequalitySpec<T>>,
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    p: Exponent<T>,
    quad: &QuadratureSpec<T>,
) -> Result<(Integrals<T>, Integrals<T>, usize), HardyError> {
    quad.validate()?;
    domain.validate().map_err(HardyError::from)?;
    let mut resolution = 2 * quad.resolution;
    let mut coarse = run(spec, domain, tf, p, quad, quad.resolution)?;
    let mut fine = run(spec, domain, tf, p, quad, resolution)?;
    for _ in 0..MAX_DOUBLINGS {
        let settled = converged(
            &[
                (coarse.lhs_directional, fine.lhs_directional),
                (coarse.lhs_full, fine.lhs_full),
                (coarse.lhs_weighted, fine.lhs_weighted),
                (coarse.rhs_raw, fine.rhs_raw),
            ],
            quad.tolerance,
        );
        if settled {
            break;
        }
        resolution *= 2;
        coarse = fine;
        fine = run(spec, domain, tf, p, quad, resolution)?;
    }
    Ok((coarse, fine, resolution))
}

fn converged<T: Real>(pairs: &[(T, T)], tol: T) -> bool {
    pairs.iter().all(|&(c, f)| relative_change(c, f) <= tol)
}

/// Integral with its convergence flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub coarse: T,
    pub converged: bool,
}

fn estimate<T: Real>(coarse: T, fine: T, tol: T) -> Estimate<T> {
    Estimate { value: fine, coarse, converged: relative_change(coarse, fine) <= tol }
}

/// `∫|∇δ·∇f|ᵖ`
pub fn lhs_directional<T: Real>(
    domain: &DomainSpec<T>,
    f: &TestFunction<T>,
    p: Exponent<T>,
    quad: &QuadratureSpec<T>,
) -> Result<Estimate<T>, HardyError> {
    let (c, f, _) = run_refined(None, domain, f, p, quad)?;
    Ok(estimate(c.lhs_directional, f.lhs_directional, quad.tolerance))
}

/// `∫|∇f|ᵖ`
pub fn lhs_full_gradient<T: Real>(
    domain: &DomainSpec<T>,
    f: &TestFunction<T>,
    p: Exponent<T>,
    quad: &QuadratureSpec<T>,
) -> Result<Estimate<T>, HardyError> {
    let (c, f, _) = run_refined(None, domain, f, p, quad)?;
    Ok(estimate(c.lhs_full, f.lhs_full, quad.tolerance))
}

/// Right-hand side including its constant.
pub fn rhs<T: Real>(
    spec: &InequalitySpec<T>,
    domain: &DomainSpec<T>,
    f: &TestFunction<T>,
    p: Exponent<T>,
    quad: &QuadratureSpec<T>,
) -> Result<Estimate<T>, HardyError> {
    spec.check(domain, p)?;
    let (c, fi, _) = run_refined(Some(spec), domain, f, p, quad)?;
    let k = spec.constant(p);
    Ok(estimate(k * c.rhs_raw, k * fi.rhs_raw, quad.tolerance))
}

fn pick_lhs<T: Real>(form: LhsForm, i: &Integrals<T>) -> T {
    match form {
        LhsForm::Directional => i.lhs_directional,
        LhsForm::FullGradient => i.lhs_full,
        LhsForm::WeightedDirectional => i.lhs_weighted,
    }
}

/// Evaluates both sides of `spec` for `f` and checks the inequality.
pub fn verify<T: Real>(
    spec: &InequalitySpec<T>,
    domain: &DomainSpec<T>,
    p: Exponent<T>,
    f: &TestFunction<T>,
    quad: &QuadratureSpec<T>,
) -> Result<HardyReport<T>, HardyError> {
    spec.check(domain, p)?;
    if !f.zero {
        let avoid = spec.requires_ridge_avoidance(domain);
        super::function::make_test_function(f.profile.clone(), domain, f.band, f.side, avoid)?;
    }
    let (coarse, fine, final_resolution) = run_refined(Some(spec), domain, f, p, quad)?;
    let k = spec.constant(p);
    let form = spec.lhs_form();
    let lhs = pick_lhs(form, &fine);
    let lhs_coarse = pick_lhs(form, &coarse);
    let rhs = k * fine.rhs_raw;
    let rhs_coarse = k * coarse.rhs_raw;
    let ratio = if rhs > T::zero() { Some(lhs / rhs) } else { None };
    let ratio_tolerance = T::lit(3.0) * quad.tolerance;
    let holds = rhs <= T::zero() || lhs >= (T::one() - ratio_tolerance) * rhs;
    let mut notes = Vec::new();
    if let Some(note) = spec.assumption(domain) {
        notes.push(note);
    }
    let samples = fine
        .min_weight
        .map(|(w, d)| vec![WeightSample { label: "min-weight", delta: d, weight: w }])
        .unwrap_or_default();
    Ok(HardyReport {
        inequality: spec.name(),
        domain: domain.name(),
        p: p.value(),
        band: f.band,
        side: f.side,
        profile: f.profile.name(),
        lhs,
        rhs,
        ratio,
        holds,
        ratio_tolerance,
        min_pointwise_weight: fine.min_weight.map(|m| m.0),
        constant_used: k,
        converged: converged(&[(lhs_coarse, lhs), (rhs_coarse, rhs)], quad.tolerance),
        lhs_coarse,
        rhs_coarse,
        quadrature: QuadratureEcho {
            scheme: quad.scheme,
            resolution: quad.resolution,
            refined_resolution: final_resolution,
            tolerance: quad.tolerance,
            seed: quad.seed,
            truncation: truncation(domain),
        },
        samples,
        notes,
    })
}

impl From<GeometryError> for HardyError {
    fn from(e: GeometryError) -> Self {
        HardyError::Geometry(e)
    }
}
