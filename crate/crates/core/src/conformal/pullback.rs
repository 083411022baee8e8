use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::DomainSpec;
use crate::hardy::{make_test_function, QuadratureSpec, TestFunction};
use crate::scalar::{pairwise_sum, Real};

use super::{ConformalError, ConformalMapSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PullbackReport<T> {
    /// `∫_Ω |∇u|² dx`
    pub lhs: T,
    /// `¼∫_Ω 𝔉 |u|² dx`
    pub rhs: T,
    pub ratio: Option<T>,
    pub holds: bool,
    /// The same two integrals over the annulus, in the image variable.
    pub annulus_lhs: T,
    pub annulus_rhs: T,
    /// Relative gaps between the two sides of the change of variables.
    pub identity_lhs_gap: T,
    pub identity_rhs_gap: T,
    pub identity_holds: bool,
    pub converged: bool,
    pub resolution: usize,
    pub min_frak_f: Option<T>,
}

const MAX_DOUBLINGS: usize = 3;

#[derive(Clone, Copy)]
struct Sums<T> {
    lhs: T,
    rhs: T,
    min_frak_f: Option<T>,
}

fn image_side<T: Real>(tf: &TestFunction<T>, rho: T, outer: T, r: T) -> (T, T, T) {
    let (d_in, d_out) = (r - rho, outer - r);
    let (delta, component) = if d_in <= d_out { (d_in, 0) } else { (d_out, 1) };
    if !tf.active(component) {
        return (delta, T::zero(), T::zero());
    }
    let (eta, deta) = tf.radial(delta);
    (delta, eta, deta)
}

fn frak_f_image<T: Real>(rho: T, outer: T, r: T) -> T {
    let b = (r - rho).recip() + (outer - r).recip();
    -(r * r).recip() + b * b
}

/// Midpoint rule on an `n × n` grid of the bounding box.
fn source_side<T: Real>(map: &ConformalMapSpec<T>, tf: &TestFunction<T>, n: usize) -> Sums<T> {
    let (rho, outer) = map.annulus_radii();
    let bound = map.bounding_radius();
    let h = (bound + bound) / T::count(n);
    let cell = h * h;
    let rows: Vec<(T, T, Option<T>)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = -bound + h * (T::count(j) + T::lit(0.5));
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            let mut min_f: Option<T> = None;
            for i in 0..n {
                let z = Complex::new(-bound + h * (T::count(i) + T::lit(0.5)), y);
                if !map.contains(z) {
                    continue;
                }
                let r = map.eval_unchecked(z).norm();
                let (_, eta, deta) = image_side(tf, rho, outer, r);
                if eta == T::zero() && deta == T::zero() {
                    continue;
                }
                let d2 = map.deriv_unchecked(z).norm_sqr();
                let frak = d2 * frak_f_image(rho, outer, r);
                lhs.push(deta * deta * d2);
                rhs.push(frak * eta * eta);
                if eta != T::zero() {
                    min_f = Some(min_f.map_or(frak, |m| m.min(frak)));
                }
            }
            (pairwise_sum(&lhs), pairwise_sum(&rhs), min_f)
        })
        .collect();
    let lhs: Vec<T> = rows.iter().map(|r| r.0).collect();
    let rhs: Vec<T> = rows.iter().map(|r| r.1).collect();
    Sums {
        lhs: pairwise_sum(&lhs) * cell,
        rhs: pairwise_sum(&rhs) * cell * T::lit(0.25),
        min_frak_f: rows.iter().filter_map(|r| r.2).reduce(|a, b| a.min(b)),
    }
}

const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Radial integrals over the annulus `ρ < |y| < R`.
fn image_integrals<T: Real>(tf: &TestFunction<T>, rho: T, outer: T) -> (T, T) {
    let (a, b) = tf.band;
    let mut intervals = Vec::new();
    if tf.active(0) {
        intervals.push((rho + a, rho + b));
    }
    if tf.active(1) {
        intervals.push((outer - b, outer - a));
    }
    let panels = 256;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (lo, hi) in intervals {
        let width = (hi - lo) / T::count(panels);
        for k in 0..panels {
            let mid = lo + width * (T::count(k) + T::lit(0.5));
            for &(x, w) in &GL8 {
                for r in [mid - width * T::lit(0.5 * x), mid + width * T::lit(0.5 * x)] {
                    let (_, eta, deta) = image_side(tf, rho, outer, r);
                    let jac = T::TAU() * r * width * T::lit(0.5 * w);
                    lhs.push(deta * deta * jac);
                    rhs.push(frak_f_image(rho, outer, r) * eta * eta * jac);
                }
            }
        }
    }
    (pairwise_sum(&lhs), pairwise_sum(&rhs) * T::lit(0.25))
}

fn gap<T: Real>(a: T, b: T) -> T {
    let s = a.abs().max(b.abs());
    if s == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / s
    }
}

/// Checks `∫|∇u|² ≥ ¼∫𝔉|u|²` on the source domain for `u = η(δ_A(F(x)))`,
/// where `δ_A` is the distance to the boundary of the image annulus, and
/// checks the change of variables against the same integrals on the annulus.
pub fn pullback_verify<T: Real>(
    map: &ConformalMapSpec<T>,
    tf: &TestFunction<T>,
    quad: &QuadratureSpec<T>,
) -> Result<PullbackReport<T>, ConformalError> {
    map.validate()?;
    quad.validate()?;
    let (rho, outer) = map.annulus_radii();
    if !tf.zero {
        let annulus = DomainSpec::Annulus { inner: rho, outer };
        make_test_function(tf.profile.clone(), &annulus, tf.band, tf.side, false)?;
    }
    let (annulus_lhs, annulus_rhs) = if tf.zero { (T::zero(), T::zero()) } else { image_integrals(tf, rho, outer) };
    let mut resolution = quad.resolution;
    let mut coarse = source_side(map, tf, resolution);
    let mut converged = false;
    let mut fine = coarse;
    for _ in 0..=MAX_DOUBLINGS {
        resolution *= 2;
        fine = source_side(map, tf, resolution);
        converged = gap(coarse.lhs, fine.lhs) <= quad.tolerance && gap(coarse.rhs, fine.rhs) <= quad.tolerance;
        if converged {
            break;
        }
        coarse = fine;
    }
    let ratio = (fine.rhs > T::zero()).then(|| fine.lhs / fine.rhs);
    let tol = T::lit(3.0) * quad.tolerance;
    let identity_lhs_gap = gap(fine.lhs, annulus_lhs);
    let identity_rhs_gap = gap(fine.rhs, annulus_rhs);
    Ok(PullbackReport {
        lhs: fine.lhs,
        rhs: fine.rhs,
        ratio,
        holds: fine.rhs <= T::zero() || fine.lhs >= (T::one() - tol) * fine.rhs,
        annulus_lhs,
        annulus_rhs,
        identity_lhs_gap,
        identity_rhs_gap,
        identity_holds: identity_lhs_gap <= quad.tolerance && identity_rhs_gap <= quad.tolerance,
        converged,
        resolution,
        min_frak_f: fine.min_frak_f,
    })
}
