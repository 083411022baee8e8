//! Quadrature over the support of a test function.
//!
//! `Radial1d` integrates in normal coordinates `x = γ(s′) + δ n(s′)`, where
//! `dx = Πᵢ |∂ᵢγ|(1 + δκᵢ) ds′ dδ`; `δ` is integrated in `ln δ` by composite
//! Gauss–Legendre, up to the ridge distance of each normal ray. The other two
//! schemes work in Cartesian coordinates and serve as independent checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{self, near_points, ridge_distance, BoundaryParam, DomainSpec, Point};
use crate::geometry::vector;
use crate::scalar::{pairwise_sum, Real};

use super::function::TestFunction;
use super::inequality::PointData;
use super::HardyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Radial1d,
    TensorGrid,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec<T> {
    pub scheme: Scheme,
    /// Nodes per axis (samples per axis for Monte Carlo); at least 64.
    pub resolution: usize,
    pub seed: u64,
    /// Relative change under resolution doubling below which an integral
    /// counts as converged.
    pub tolerance: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::Radial1d,
            resolution: 64,
            seed: 0,
            tolerance: T::lit(1e-3),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn with_scheme(scheme: Scheme, resolution: usize) -> Self {
        QuadratureSpec { scheme, resolution, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), HardyError> {
        if self.resolution < 64 {
            return Err(HardyError::InvalidConfig("quadrature resolution must be at least 64".into()));
        }
        if !(self.tolerance > T::zero()) {
            return Err(HardyError::InvalidConfig("quadrature tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Everything an integrand may need at one node.
pub struct Node<T> {
    pub data: PointData<T>,
    /// `f`
    pub f: T,
    /// `∇δ·∇f`
    pub directional: T,
    /// `|∇f|²`
    pub grad_sq: T,
}

/// Integrand output: values to integrate and, optionally, the pointwise
/// weight to track.
pub struct NodeOut<T, const K: usize> {
    pub values: [T; K],
    pub weight: Option<T>,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T, const K: usize> {
    pub sums: [T; K],
    /// Minimum tracked weight and the distance where it occurs.
    pub min_weight: Option<(T, T)>,
}

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss–Legendre nodes and weights on `[lo, hi]`.
fn gauss_legendre<T: Real>(lo: T, hi: T, panels: usize) -> Vec<(T, T)> {
    let width = (hi - lo) / T::count(panels);
    let half = width * T::lit(0.5);
    let mut out = Vec::with_capacity(panels * 8);
    for k in 0..panels {
        let mid = lo + width * (T::count(k) + T::lit(0.5));
        for (&x, &w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            let (x, w) = (T::lit(x), T::lit(w));
            out.push((mid - half * x, half * w));
            out.push((mid + half * x, half * w));
        }
    }
    out
}

type Integrand<'a, T, const K: usize> = dyn Fn(&Node<T>) -> Result<NodeOut<T, K>, HardyError> + Sync + 'a;

struct Accum<T, const K: usize> {
    values: Vec<[T; K]>,
    min_weight: Option<(T, T)>,
}

fn reduce<T: Real, const K: usize>(parts: Vec<Accum<T, K>>) -> QuadResult<T, K> {
    let mut sums = [T::zero(); K];
    let mut min_weight: Option<(T, T)> = None;
    let mut column = Vec::new();
    for (k, sum) in sums.iter_mut().enumerate() {
        column.clear();
        for part in &parts {
            column.extend(part.values.iter().map(|v| v[k]));
        }
        *sum = pairwise_sum(&column);
    }
    for part in &parts {
        if let Some(m) = part.min_weight {
            if min_weight.is_none_or(|cur| m.0 < cur.0) {
                min_weight = Some(m);
            }
        }
    }
    QuadResult { sums, min_weight }
}

fn push<T: Real, const K: usize>(acc: &mut Accum<T, K>, out: NodeOut<T, K>, measure: T, delta: T) {
    let mut v = out.values;
    for x in v.iter_mut() {
        *x = *x * measure;
    }
    acc.values.push(v);
    if let Some(w) = out.weight {
        if acc.min_weight.is_none_or(|cur| w < cur.0) {
            acc.min_weight = Some((w, delta));
        }
    }
}

pub(crate) fn integrate<T: Real, const K: usize>(
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    scheme: Scheme,
    resolution: usize,
    seed: u64,
    g: &Integrand<'_, T, K>,
) -> Result<QuadResult<T, K>, HardyError> {
    if tf.zero {
        return Ok(QuadResult { sums: [T::zero(); K], min_weight: None });
    }
    match scheme {
        Scheme::Radial1d => normal_coordinates(domain, tf, resolution, g),
        Scheme::TensorGrid | Scheme::MonteCarlo => cartesian(domain, tf, scheme, resolution, seed, g),
    }
}

fn normal_coordinates<T: Real, const K: usize>(
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    resolution: usize,
    g: &Integrand<'_, T, K>,
) -> Result<QuadResult<T, K>, HardyError> {
    let (a, b) = tf.band;
    let mut rays: Vec<(BoundaryParam<T>, T)> = Vec::new();
    for component in 0..domain.component_count() {
        if !tf.active(component) {
            continue;
        }
        let axes = domain.param_axes(component);
        let mut grids: Vec<Vec<(T, T)>> = Vec::new();
        for axis in &axes {
            let span = axis.hi - axis.lo;
            if axis.symmetric {
                grids.push(vec![(axis.lo, span)]);
            } else {
                let h = span / T::count(resolution);
                let offset = if axis.periodic { T::zero() } else { T::lit(0.5) };
                grids.push(
                    (0..resolution)
                        .map(|i| (axis.lo + (T::count(i) + offset) * h, h))
                        .collect(),
                );
            }
        }
        let second = grids.get(1).cloned().unwrap_or_else(|| vec![(T::zero(), T::one())]);
        for &(s0, w0) in &grids[0] {
            for &(s1, w1) in &second {
                rays.push((BoundaryParam { component, s: [s0, s1] }, w0 * w1));
            }
        }
    }
    let panels = (resolution / 8).max(1);
    let parts: Result<Vec<Accum<T, K>>, HardyError> = rays
        .par_iter()
        .map(|&(param, ray_weight)| {
            let mut acc = Accum { values: Vec::new(), min_weight: None };
            let upper = match ridge_distance(domain, &param)? {
                Some(l) => b.min(l),
                None => b,
            };
            if upper <= a {
                return Ok(acc);
            }
            let frame = domain.frame(&param)?;
            let axes = domain.param_axes(param.component);
            let (chi, dchi) = tf.cutoff(&axes, &param);
            if chi == T::zero() && dchi.iter().all(|d| *d == T::zero()) {
                return Ok(acc);
            }
            let dims = domain.dim() - 1;
            for (u, wu) in gauss_legendre(a.ln(), upper.ln(), panels) {
                let delta = u.exp();
                let mut jac = T::one();
                let mut tangential = T::zero();
                for i in 0..dims {
                    let stretch = frame.speeds[i] * (T::one() + delta * frame.line_kappas[i]);
                    jac = jac * stretch;
                    let c = dchi[i] / stretch;
                    tangential = tangential + c * c;
                }
                let (eta, deta) = tf.radial(delta);
                let data = PointData::from_normal(domain, param, delta)?;
                let node = Node {
                    data,
                    f: eta * chi,
                    directional: deta * chi,
                    grad_sq: deta * deta * chi * chi + eta * eta * tangential,
                };
                let out = g(&node)?;
                push(&mut acc, out, ray_weight * wu * delta * jac, delta);
            }
            Ok(acc)
        })
        .collect();
    Ok(reduce(parts?))
}

/// Axis-aligned box containing the support of `tf`.
pub(crate) fn support_box<T: Real>(domain: &DomainSpec<T>, tf: &TestFunction<T>) -> (Point<T>, Point<T>) {
    let b = tf.band.1;
    let z = T::zero();
    let (lo, hi) = match domain {
        DomainSpec::Disc { radius } => ([-*radius, -*radius, z], [*radius, *radius, z]),
        DomainSpec::Annulus { outer, .. } => ([-*outer, -*outer, z], [*outer, *outer, z]),
        DomainSpec::Ellipse { a, b } => ([-*a, -*b, z], [*a, *b, z]),
        DomainSpec::ExteriorDisc { radius } => {
            let r = *radius + b;
            ([-r, -r, z], [r, r, z])
        }
        DomainSpec::Cylinder { radius, half_height } => {
            ([-*radius, -*radius, -*half_height], [*radius, *radius, *half_height])
        }
        DomainSpec::Torus { major, minor } => {
            let r = *major + *minor;
            ([-r, -r, -*minor], [r, r, *minor])
        }
        DomainSpec::Hyperboloid { s_max } => {
            let zmax = *s_max + b;
            let r = (T::one() + zmax * zmax).sqrt();
            ([-r, -r, -zmax], [r, r, zmax])
        }
        DomainSpec::ConformalAnnulus { map } => {
            let r = map.bounding_radius();
            ([-r, -r, z], [r, r, z])
        }
    };
    (lo, hi)
}

fn cartesian<T: Real, const K: usize>(
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    scheme: Scheme,
    resolution: usize,
    seed: u64,
    g: &Integrand<'_, T, K>,
) -> Result<QuadResult<T, K>, HardyError> {
    let dim = domain.dim();
    let (lo, hi) = support_box(domain, tf);
    let mut cell = T::one();
    for k in 0..dim {
        cell = cell * (hi[k] - lo[k]);
    }
    let total = resolution.pow(dim as u32);
    cell = cell / T::count(total);
    let points: Vec<Point<T>> = match scheme {
        Scheme::TensorGrid => (0..total)
            .map(|mut idx| {
                let mut x = [T::zero(); 3];
                for k in 0..dim {
                    let i = idx % resolution;
                    idx /= resolution;
                    x[k] = lo[k] + (hi[k] - lo[k]) * (T::count(i) + T::lit(0.5)) / T::count(resolution);
                }
                x
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..total)
                .map(|_| {
                    let mut x = [T::zero(); 3];
                    for k in 0..dim {
                        x[k] = lo[k] + (hi[k] - lo[k]) * T::lit(rng.gen::<f64>());
                    }
                    x
                })
                .collect()
        }
    };
    let h = T::lit(1e-6) * domain.scale();
    let chunk = 1024;
    let parts: Result<Vec<Accum<T, K>>, HardyError> = points
        .par_chunks(chunk)
        .map(|block| {
            let mut acc = Accum { values: Vec::new(), min_weight: None };
            for x in block {
                if let Some(node) = cartesian_node(domain, tf, *x, h)? {
                    let delta = node.data.delta;
                    push(&mut acc, g(&node)?, cell, delta);
                }
            }
            Ok(acc)
        })
        .collect();
    Ok(reduce(parts?))
}

fn cartesian_node<T: Real>(
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    x: Point<T>,
    h: T,
) -> Result<Option<Node<T>>, HardyError> {
    let dim = domain.dim();
    if !domain.contains(&x[..dim]) {
        return Ok(None);
    }
    let near = near_points(domain, &x[..dim], geometry::default_multiplicity_tol(T::one()))?;
    let (a, b) = tf.band;
    if !(near.delta > a && near.delta < b) {
        return Ok(None);
    }
    let np = near.near_points[0];
    if !tf.active(np.param.component) {
        return Ok(None);
    }
    let axes = domain.param_axes(np.param.component);
    let (eta, deta) = tf.radial(near.delta);
    let (chi, _) = tf.cutoff(&axes, &np.param);
    let f = eta * chi;
    let mut grad_sq = T::zero();
    for k in 0..dim {
        let e = vector::unit_axis::<T>(k);
        let xp = vector::axpy(x, h, e);
        let xm = vector::axpy(x, -h, e);
        let fp = if domain.contains(&xp[..dim]) { tf.value(domain, &xp[..dim])? } else { T::zero() };
        let fm = if domain.contains(&xm[..dim]) { tf.value(domain, &xm[..dim])? } else { T::zero() };
        let d = (fp - fm) / (h + h);
        grad_sq = grad_sq + d * d;
    }
    if f == T::zero() && grad_sq == T::zero() {
        return Ok(None);
    }
    let data = PointData {
        x,
        delta: near.delta,
        param: np.param,
        kappas: crate::geometry::principal_curvatures(domain, &np.param)?,
        grad_delta: near.grad_delta.unwrap_or([T::zero(); 3]),
    };
    Ok(Some(Node {
        data,
        f,
        directional: deta * chi,
        grad_sq,
    }))
}
