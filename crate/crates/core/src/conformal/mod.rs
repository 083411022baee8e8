//! Conformal invariant of doubly connected planar domains.

mod map;
mod pullback;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hardy::HardyError;
use crate::scalar::Real;

pub use map::{ConformalMapSpec, MapTransform};
pub use pullback::{pullback_verify, PullbackReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConformalError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("point lies outside the domain of the map")]
    PointOutsideDomain,
    #[error("no continuous branch: jump detected near ({re}, {im})")]
    BranchDiscontinuity { re: f64, im: f64 },
    #[error("image lies on the annulus boundary")]
    AnnulusBoundary,
    #[error("rejection sampling gave up after {0} draws")]
    SamplingExhausted(usize),
    #[error(transparent)]
    Hardy(#[from] HardyError),
}

/// Grid nodes per axis used by [`map_eval`] and [`deriv_eval`] to certify the
/// branch.
pub const DEFAULT_CONTINUATION_RESOLUTION: usize = 128;

/// A branch of the map made continuous along grid paths from its base point.
#[derive(Clone, Debug)]
pub struct BranchContinuation<T> {
    map: ConformalMapSpec<T>,
    lo: T,
    step: T,
    n: usize,
    /// Sign applied to the closed form at each grid node; `0` outside the
    /// domain or unreached.
    signs: Vec<i8>,
}

impl<T: Real> BranchContinuation<T> {
    /// Continues the branch positive at the base point over an
    /// `resolution × resolution` grid of the bounding box, failing if some
    /// grid edge inside the domain carries a jump larger than half the local
    /// `|F|`.
    pub fn new(map: &ConformalMapSpec<T>, resolution: usize) -> Result<Self, ConformalError> {
        map.validate()?;
        let n = resolution.max(8);
        let bound = map.bounding_radius() * T::lit(1.01);
        let lo = -bound;
        let step = (bound + bound) / T::count(n - 1);
        let node = |i: usize, j: usize| Complex::new(lo + step * T::count(i), lo + step * T::count(j));
        let values: Vec<Option<Complex<T>>> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let z = node(k % n, k / n);
                map.contains(z).then(|| map.eval_unchecked(z))
            })
            .collect();
        let edge_ok = |a: Complex<T>, b: Complex<T>| -> bool {
            let mid = (a + b) * T::lit(0.5);
            map.contains(mid)
        };
        let jump = |fa: Complex<T>, fb: Complex<T>| (fa - fb).norm() > T::lit(0.5) * fa.norm().max(fb.norm());
        let base = map.base_point();
        let bi = ((base.re - lo) / step).round().to_usize().unwrap_or(0).min(n - 1);
        let bj = ((base.im - lo) / step).round().to_usize().unwrap_or(0).min(n - 1);
        let mut start = None;
        'search: for r in 0..n {
            for di in -(r as isize)..=(r as isize) {
                for dj in -(r as isize)..=(r as isize) {
                    let (i, j) = (bi as isize + di, bj as isize + dj);
                    if i >= 0 && j >= 0 && (i as usize) < n && (j as usize) < n && values[i as usize + n * j as usize].is_some() {
                        start = Some(i as usize + n * j as usize);
                        break 'search;
                    }
                }
            }
        }
        let start = start.ok_or_else(|| ConformalError::InvalidMap("domain contains no grid node".into()))?;
        let mut signs = vec![0i8; n * n];
        let f0 = values[start].unwrap();
        signs[start] = if f0.re >= T::zero() { 1 } else { -1 };
        let neighbours = |k: usize| {
            let (i, j) = (k % n, k / n);
            let mut out = Vec::with_capacity(4);
            if i > 0 { out.push(k - 1); }
            if i + 1 < n { out.push(k + 1); }
            if j > 0 { out.push(k - n); }
            if j + 1 < n { out.push(k + n); }
            out
        };
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let fk = values[k].unwrap() * T::lit(f64::from(signs[k]));
            for m in neighbours(k) {
                let Some(fm) = values[m] else { continue };
                if signs[m] != 0 || !edge_ok(node(k % n, k / n), node(m % n, m / n)) {
                    continue;
                }
                signs[m] = if (fm - fk).norm() <= (fm + fk).norm() { 1 } else { -1 };
                queue.push_back(m);
            }
        }
        for k in 0..n * n {
            if signs[k] == 0 {
                continue;
            }
            let fk = values[k].unwrap() * T::lit(f64::from(signs[k]));
            for m in neighbours(k) {
                if m < k || signs[m] == 0 || !edge_ok(node(k % n, k / n), node(m % n, m / n)) {
                    continue;
                }
                let fm = values[m].unwrap() * T::lit(f64::from(signs[m]));
                if jump(fk, fm) {
                    let z = (node(k % n, k / n) + node(m % n, m / n)) * T::lit(0.5);
                    return Err(ConformalError::BranchDiscontinuity { re: z.re.as_f64(), im: z.im.as_f64() });
                }
            }
        }
        Ok(BranchContinuation { map: map.clone(), lo, step, n, signs })
    }

    fn sign_near(&self, z: Complex<T>) -> Result<T, ConformalError> {
        if !self.map.contains(z) {
            return Err(ConformalError::PointOutsideDomain);
        }
        let f = self.map.eval_unchecked(z);
        let fi = ((z.re - self.lo) / self.step).floor().to_isize().unwrap_or(-1);
        let fj = ((z.im - self.lo) / self.step).floor().to_isize().unwrap_or(-1);
        let mut best: Option<(T, T)> = None;
        for di in -1..=2 {
            for dj in -1..=2 {
                let (i, j) = (fi + di, fj + dj);
                if i < 0 || j < 0 || i as usize >= self.n || j as usize >= self.n {
                    continue;
                }
                let k = i as usize + self.n * j as usize;
                if self.signs[k] == 0 {
                    continue;
                }
                let w = Complex::new(self.lo + self.step * T::count(i as usize), self.lo + self.step * T::count(j as usize));
                let d = (w - z).norm();
                if best.is_none_or(|(bd, _)| d < bd) {
                    let fw = self.map.eval_unchecked(w) * T::lit(f64::from(self.signs[k]));
                    let s = if (f - fw).norm() <= (f + fw).norm() { T::one() } else { -T::one() };
                    best = Some((d, s));
                }
            }
        }
        Ok(best.map_or(T::one(), |b| b.1))
    }

    /// `F(z)` on the continued branch.
    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>, ConformalError> {
        let s = self.sign_near(z)?;
        Ok(self.map.eval_unchecked(z) * s)
    }

    /// `F′(z)` on the continued branch.
    pub fn deriv(&self, z: Complex<T>) -> Result<Complex<T>, ConformalError> {
        let s = self.sign_near(z)?;
        Ok(self.map.deriv_unchecked(z) * s)
    }
}

/// `F(z)`; fails when `z` is outside the domain or the map has no continuous
/// branch there.
pub fn map_eval<T: Real>(map: &ConformalMapSpec<T>, z: Complex<T>) -> Result<Complex<T>, ConformalError> {
    BranchContinuation::new(map, DEFAULT_CONTINUATION_RESOLUTION)?.eval(z)
}

/// `F′(z)`, on the same branch as [`map_eval`].
pub fn deriv_eval<T: Real>(map: &ConformalMapSpec<T>, z: Complex<T>) -> Result<Complex<T>, ConformalError> {
    BranchContinuation::new(map, DEFAULT_CONTINUATION_RESOLUTION)?.deriv(z)
}

/// `|F(z)|`, which is the same on every branch.
pub fn map_modulus<T: Real>(map: &ConformalMapSpec<T>, z: Complex<T>) -> Result<T, ConformalError> {
    map.validate()?;
    if !map.contains(z) {
        return Err(ConformalError::PointOutsideDomain);
    }
    Ok(map.eval_unchecked(z).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrakFValue<T> {
    pub value: T,
    /// `(−|F′|²/|F|², |F′|²(1/(|F|−ρ) + 1/(R−|F|))²)`
    pub components: (T, T),
}

/// The invariant `𝔉(z)`. Depends on `|F|` and `|F′|` only, so it is the same
/// on every branch.
pub fn frak_f<T: Real>(map: &ConformalMapSpec<T>, z: Complex<T>) -> Result<FrakFValue<T>, ConformalError> {
    map.validate()?;
    if !map.contains(z) {
        return Err(ConformalError::PointOutsideDomain);
    }
    let m = map.eval_unchecked(z).norm();
    let d2 = map.deriv_unchecked(z).norm_sqr();
    let (rho, outer) = map.annulus_radii();
    let eps = T::lit(1e-12);
    if (m - rho).abs() <= eps || (outer - m).abs() <= eps {
        return Err(ConformalError::AnnulusBoundary);
    }
    let bracket = (m - rho).recip() + (outer - m).recip();
    let first = -d2 / (m * m);
    let second = d2 * bracket * bracket;
    Ok(FrakFValue { value: first + second, components: (first, second) })
}

/// The closed form printed for `F(z) = √(z²−1)`, with `√(|z|²−1)` in the
/// bracket. `None` where `|z| ≤ 1`.
pub fn frak_f_display<T: Real>(rho: T, outer: T, z: Complex<T>) -> Option<T> {
    let z2 = z.norm_sqr();
    let phi = (z * z - T::one()).norm();
    let root = (z2 - T::one()).sqrt();
    if !(z2 > T::one()) {
        return None;
    }
    let num = (outer - rho) * (outer - rho);
    let den = (root - rho) * (root - rho) * (outer - root) * (outer - root);
    Some(-z2 / (phi * phi) + z2 / phi * num / den)
}

/// Where the printed closed form and the invariant agree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DisplayComparison<T> {
    pub samples: usize,
    /// Samples with `|z| ≤ 1`, where the printed form is undefined.
    pub undefined: usize,
    /// Samples with relative disagreement above `1e−10`.
    pub disagreeing: usize,
    pub max_relative_deviation: T,
    /// Largest relative deviation on the real axis, `|x| > 1`.
    pub max_relative_deviation_real_axis: T,
}

pub fn compare_display<T: Real>(rho: T, outer: T, samples: usize, seed: u64) -> Result<DisplayComparison<T>, ConformalError> {
    let map = ConformalMapSpec::SqrtQuadratic { rho, outer };
    let points = sample_domain(&map, samples, seed)?;
    let rel = |z: Complex<T>| -> Result<Option<T>, ConformalError> {
        let lemma = frak_f(&map, z)?.value;
        Ok(frak_f_display(rho, outer, z).map(|d| (d - lemma).abs() / lemma.abs().max(T::one())))
    };
    let mut out = DisplayComparison {
        samples,
        undefined: 0,
        disagreeing: 0,
        max_relative_deviation: T::zero(),
        max_relative_deviation_real_axis: T::zero(),
    };
    for z in points {
        match rel(z)? {
            None => out.undefined += 1,
            Some(r) => {
                if !(r <= T::lit(1e-10)) {
                    out.disagreeing += 1;
                }
                out.max_relative_deviation = out.max_relative_deviation.max(r);
            }
        }
    }
    let rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = (T::one() + rho * rho).sqrt().max(T::one());
    let hi = (T::one() + outer * outer).sqrt();
    for (k, u) in rng.sample_iter(rand::distributions::Open01).take(samples).enumerate() {
        let x = lo + (hi - lo) * T::lit(u);
        let z = Complex::new(if k % 2 == 0 { x } else { -x }, T::zero());
        if let Some(r) = rel(z).ok().flatten() {
            out.max_relative_deviation_real_axis = out.max_relative_deviation_real_axis.max(r);
        }
    }
    Ok(out)
}

/// Uniform samples of the source domain by rejection from its bounding box.
pub fn sample_domain<T: Real>(map: &ConformalMapSpec<T>, count: usize, seed: u64) -> Result<Vec<Complex<T>>, ConformalError> {
    map.validate()?;
    let bound = map.bounding_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = 1000 * count + 1000;
    let mut out = Vec::with_capacity(count);
    for _ in 0..limit {
        if out.len() == count {
            return Ok(out);
        }
        let z = Complex::new(
            bound * T::lit(rng.gen_range(-1.0..1.0)),
            bound * T::lit(rng.gen_range(-1.0..1.0)),
        );
        if map.contains(z) {
            out.push(z);
        }
    }
    if out.len() == count {
        Ok(out)
    } else {
        Err(ConformalError::SamplingExhausted(limit))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvarianceReport<T> {
    pub samples: usize,
    pub max_abs_deviation: T,
    /// Largest `|Δ𝔉| / max(1, |𝔉|)`.
    pub max_rel_deviation: T,
}

/// Compares `𝔉` of `map` and of `transform ∘ map` at common sample points.
pub fn invariance_check<T: Real>(
    map: &ConformalMapSpec<T>,
    transform: MapTransform<T>,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport<T>, ConformalError> {
    let composed = map.clone().composed(transform);
    composed.validate()?;
    let points = sample_domain(map, samples, seed)?;
    let devs: Vec<(T, T)> = points
        .par_iter()
        .map(|&z| -> Result<(T, T), ConformalError> {
            let a = frak_f(map, z)?.value;
            let b = frak_f(&composed, z)?.value;
            let d = (a - b).abs();
            Ok((d, d / a.abs().max(T::one())))
        })
        .collect::<Result<_, _>>()?;
    Ok(InvarianceReport {
        samples,
        max_abs_deviation: devs.iter().map(|d| d.0).fold(T::zero(), |a, b| a.max(b)),
        max_rel_deviation: devs.iter().map(|d| d.1).fold(T::zero(), |a, b| a.max(b)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum UnivalenceVerdict<T> {
    NoCollisionFound { samples: usize },
    Collision { z1: (T, T), z2: (T, T), image: (T, T) },
}

/// Looks for `z₂ ≠ z₁` with `F(z₂) = F(z₁)` by Newton iteration from a grid
/// of seeds, at `samples` random points `z₁`. Not a proof of univalence.
pub fn univalence_probe<T: Real>(map: &ConformalMapSpec<T>, samples: usize, seed: u64) -> Result<UnivalenceVerdict<T>, ConformalError> {
    let points = sample_domain(map, samples, seed)?;
    let seeds = sample_domain(map, 16, seed ^ 0x9e37_79b9)?;
    let scale = map.bounding_radius();
    let tol = T::lit(1e-6) * scale;
    let found = points.par_iter().find_map_any(|&z1| {
        let target = map.eval_unchecked(z1);
        let fscale = target.norm().max(T::lit(1e-300));
        seeds.iter().find_map(|&s| {
            let mut w = s;
            for _ in 0..60 {
                let d = map.deriv_unchecked(w);
                if d.norm() == T::zero() {
                    return None;
                }
                let step = (map.eval_unchecked(w) - target) / d;
                w = w - step;
                if !w.re.is_finite() || !w.im.is_finite() {
                    return None;
                }
                if step.norm() <= T::lit(1e-14) * scale {
                    break;
                }
            }
            let hit = (map.eval_unchecked(w) - target).norm() <= T::lit(1e-10) * fscale;
            (hit && map.contains(w) && (w - z1).norm() > tol).then_some((z1, w, target))
        })
    });
    Ok(match found {
        None => UnivalenceVerdict::NoCollisionFound { samples },
        Some((z1, z2, image)) => UnivalenceVerdict::Collision {
            z1: (z1.re, z1.im),
            z2: (z2.re, z2.im),
            image: (image.re, image.im),
        },
    })
}
