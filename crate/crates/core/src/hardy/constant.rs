use serde::Serialize;

use crate::geometry::DomainSpec;
use crate::scalar::Real;

use super::function::{Side, TestFunction};
use super::profile::TestProfile;
use super::quadrature::{integrate, NodeOut, QuadratureSpec};
use super::{Exponent, HardyError};

/// Parameter box for the `PowerBump` search. Band ends are fractions of the
/// inradius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantFamily<T> {
    pub band_start: (T, T),
    pub band_end: (T, T),
    pub exponent: (T, T),
    pub ramp: (T, T),
    pub max_evaluations: usize,
}

impl<T: Real> Default for ConstantFamily<T> {
    fn default() -> Self {
        ConstantFamily {
            band_start: (T::lit(1e-12), T::lit(1e-2)),
            band_end: (T::lit(0.5), T::lit(0.95)),
            exponent: (T::lit(0.45), T::lit(0.75)),
            ramp: (T::lit(2.0), T::lit(200.0)),
            max_evaluations: 400,
        }
    }
}

impl<T: Real> ConstantFamily<T> {
    pub fn validate(&self) -> Result<(), HardyError> {
        let ok = |(lo, hi): (T, T)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if !(ok(self.band_start) && ok(self.band_end) && ok(self.exponent) && ok(self.ramp)) {
            return Err(HardyError::InvalidConfig("family ranges must be finite with lo <= hi".into()));
        }
        if !(self.band_start.0 > T::zero() && self.band_start.1 < self.band_end.0 && self.band_end.1 <= T::one()) {
            return Err(HardyError::InvalidConfig("family bands must satisfy 0 < a < b <= 1".into()));
        }
        if !(self.exponent.0 >= T::zero() && self.ramp.0 > T::one()) {
            return Err(HardyError::InvalidConfig("family needs exponent >= 0 and ramp > 1".into()));
        }
        if self.max_evaluations == 0 {
            return Err(HardyError::InvalidConfig("family needs a positive evaluation budget".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerBumpParams<T> {
    pub band: (T, T),
    pub exponent: T,
    pub ramp: T,
}

/// Smallest Hardy quotient found; an upper bound on the best constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate<T> {
    pub value: T,
    /// Quotient of the best candidate at twice the resolution.
    pub refined_value: T,
    pub converged: bool,
    pub best: PowerBumpParams<T>,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

/// `∫|∇f|ᵖ / ∫|f|ᵖ/δᵖ` for one test function.
pub fn hardy_quotient<T: Real>(
    domain: &DomainSpec<T>,
    tf: &TestFunction<T>,
    p: Exponent<T>,
    quad: &QuadratureSpec<T>,
    resolution: usize,
) -> Result<T, HardyError> {
    let pv = p.value();
    let half_p = pv * T::lit(0.5);
    let g = move |node: &super::quadrature::Node<T>| -> Result<NodeOut<T, 2>, HardyError> {
        let num = node.grad_sq.powf(half_p);
        let den = (node.f.abs() / node.data.delta).powf(pv);
        Ok(NodeOut { values: [num, den], weight: None })
    };
    let r = integrate(domain, tf, quad.scheme, resolution, quad.seed, &g)?;
    if !(r.sums[1] > T::zero()) {
        return Err(HardyError::BandEmpty);
    }
    Ok(r.sums[0] / r.sums[1])
}

// search coordinates: ln a, b, q, ln ramp
struct Search<'a, T: Real> {
    domain: &'a DomainSpec<T>,
    p: Exponent<T>,
    quad: &'a QuadratureSpec<T>,
    inradius: T,
    evaluations: usize,
    budget: usize,
}

impl<T: Real> Search<'_, T> {
    fn params(&self, c: &[T; 4]) -> PowerBumpParams<T> {
        PowerBumpParams {
            band: (c[0].exp() * self.inradius, c[1] * self.inradius),
            exponent: c[2],
            ramp: c[3].exp(),
        }
    }

    fn eval(&mut self, c: &[T; 4]) -> Result<T, HardyError> {
        self.evaluations += 1;
        let pp = self.params(c);
        let tf = TestFunction {
            profile: TestProfile::PowerBump { exponent: pp.exponent, ramp: pp.ramp },
            band: pp.band,
            side: Side::Both,
            zero: false,
        };
        hardy_quotient(self.domain, &tf, self.p, self.quad, self.quad.resolution)
    }

    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }
}

const GOLDEN_STEPS: usize = 12;

/// Searches the `PowerBump` family for the smallest plain Hardy quotient by
/// golden-section coordinate descent.
pub fn estimate_constant<T: Real>(
    domain: &DomainSpec<T>,
    p: Exponent<T>,
    family: &ConstantFamily<T>,
    quad: &QuadratureSpec<T>,
) -> Result<ConstantEstimate<T>, HardyError> {
    domain.validate()?;
    family.validate()?;
    quad.validate()?;
    let inradius = domain
        .inradius()
        .ok_or_else(|| HardyError::InvalidConfig("constant search needs a bounded inradius".into()))?;
    let ranges = [
        (family.band_start.0.ln(), family.band_start.1.ln()),
        family.band_end,
        family.exponent,
        (family.ramp.0.ln(), family.ramp.1.ln()),
    ];
    let mut s = Search { domain, p, quad, inradius, evaluations: 0, budget: family.max_evaluations };
    let mut c = ranges.map(|(lo, hi)| (lo + hi) * T::lit(0.5));
    // starting point: singular-like profile near the sharp exponent
    c[0] = ranges[0].0;
    c[2] = ((p.value() - T::one()) / p.value()).max(ranges[2].0).min(ranges[2].1);
    let mut best = s.eval(&c)?;
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    'outer: loop {
        let start = best;
        for k in 0..4 {
            let (mut lo, mut hi) = ranges[k];
            if hi - lo <= T::zero() {
                continue;
            }
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let mut probe = c;
            probe[k] = x1;
            let mut f1 = s.eval(&probe)?;
            probe[k] = x2;
            let mut f2 = s.eval(&probe)?;
            for _ in 0..GOLDEN_STEPS {
                if s.exhausted() {
                    break;
                }
                if f1 < f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    probe[k] = x1;
                    f1 = s.eval(&probe)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    probe[k] = x2;
                    f2 = s.eval(&probe)?;
                }
            }
            let (x, f) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
            if f < best {
                best = f;
                c[k] = x;
            }
            if s.exhausted() {
                break 'outer;
            }
        }
        if start - best <= T::lit(1e-4) * best {
            break;
        }
    }
    let params = s.params(&c);
    let tf = TestFunction {
        profile: TestProfile::PowerBump { exponent: params.exponent, ramp: params.ramp },
        band: params.band,
        side: Side::Both,
        zero: false,
    };
    let refined_value = hardy_quotient(domain, &tf, p, quad, 2 * quad.resolution)?;
    let scale = refined_value.abs().max(best.abs());
    Ok(ConstantEstimate {
        value: best,
        refined_value,
        converged: (refined_value - best).abs() <= quad.tolerance * scale,
        best: params,
        evaluations: s.evaluations,
        budget_exhausted: s.exhausted(),
    })
}
