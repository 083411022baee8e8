//! Parsers for the `name:key=value,...` strings taken on the command line.

use std::collections::BTreeMap;

use hardylab::conformal::{ConformalMapSpec, MapTransform};
use hardylab::geometry::DomainSpec;
use hardylab::hardy::{InequalitySpec, Side, TestProfile};

type Params = BTreeMap<String, f64>;

fn split(s: &str) -> Result<(&str, Params), String> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut params = Params::new();
    for item in rest.split(',').filter(|t| !t.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value in '{s}', got '{item}'"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("'{v}' is not a number in '{s}'"))?;
        if !v.is_finite() {
            return Err(format!("parameter {k} in '{s}' must be finite"));
        }
        if params.insert(k.trim().to_string(), v).is_some() {
            return Err(format!("parameter {k} given twice in '{s}'"));
        }
    }
    Ok((name.trim(), params))
}

/// Takes the listed keys out of `params`, failing on missing or unknown ones.
fn take<const N: usize>(what: &str, mut params: Params, keys: [&str; N]) -> Result<[f64; N], String> {
    let mut out = [0.0; N];
    for (slot, key) in out.iter_mut().zip(keys) {
        *slot = params.remove(key).ok_or_else(|| format!("{what} needs parameter {key}"))?;
    }
    if let Some(extra) = params.keys().next() {
        return Err(format!("{what} does not take parameter {extra}"));
    }
    Ok(out)
}

pub fn domain(s: &str) -> Result<DomainSpec<f64>, String> {
    if let Some(map) = s.strip_prefix("conformal:") {
        let d = DomainSpec::ConformalAnnulus { map: conformal_map(map)? };
        d.validate().map_err(|e| e.to_string())?;
        return Ok(d);
    }
    let (name, params) = split(s)?;
    let d = match name {
        "disc" => {
            let [r] = take(name, params, ["R"])?;
            DomainSpec::Disc { radius: r }
        }
        "annulus" => {
            let [rho, r] = take(name, params, ["rho", "R"])?;
            DomainSpec::Annulus { inner: rho, outer: r }
        }
        "ellipse" => {
            let [a, b] = take(name, params, ["a", "b"])?;
            DomainSpec::Ellipse { a, b }
        }
        "exterior-disc" => {
            let [rho] = take(name, params, ["rho"])?;
            DomainSpec::ExteriorDisc { radius: rho }
        }
        "cylinder" => {
            let [r, h] = take(name, params, ["r", "half_height"])?;
            DomainSpec::Cylinder { radius: r, half_height: h }
        }
        "torus" => {
            let [big, r] = take(name, params, ["R", "r"])?;
            DomainSpec::Torus { major: big, minor: r }
        }
        "hyperboloid" => {
            let [s] = take(name, params, ["s_max"])?;
            DomainSpec::Hyperboloid { s_max: s }
        }
        other => return Err(format!("unknown domain '{other}'")),
    };
    d.validate().map_err(|e| e.to_string())?;
    Ok(d)
}

pub fn conformal_map(s: &str) -> Result<ConformalMapSpec<f64>, String> {
    let (name, params) = split(s)?;
    let m = match name {
        "identity-annulus" => {
            let [rho, r] = take(name, params, ["rho", "R"])?;
            ConformalMapSpec::IdentityAnnulus { rho, outer: r }
        }
        "sqrt-quadratic" => {
            let [rho, r] = take(name, params, ["rho", "R"])?;
            ConformalMapSpec::SqrtQuadratic { rho, outer: r }
        }
        "square-control" => {
            let [rho, r] = take(name, params, ["rho", "R"])?;
            ConformalMapSpec::SquareControl { rho, outer: r }
        }
        other => return Err(format!("unknown map '{other}'")),
    };
    m.validate().map_err(|e| e.to_string())?;
    Ok(m)
}

pub fn transform(s: &str) -> Result<MapTransform<f64>, String> {
    let (name, params) = split(s)?;
    let t = match name {
        "scale" => {
            let [f] = take(name, params, ["s"])?;
            if f <= 0.0 {
                return Err("scale factor must be positive".into());
            }
            MapTransform::Scale(f)
        }
        "rotation" => {
            let [theta] = take(name, params, ["theta"])?;
            MapTransform::Rotation(theta)
        }
        "inversion" => {
            take(name, params, [])?;
            MapTransform::Inversion
        }
        other => return Err(format!("unknown transform '{other}'")),
    };
    Ok(t)
}

pub fn inequality(s: &str, alpha: Option<f64>) -> Result<InequalitySpec<f64>, String> {
    let spec = match s {
        "general-ridge" => InequalitySpec::GeneralRidge,
        "curvature-ridge" => InequalitySpec::CurvatureRidge,
        "convex-improved" => InequalitySpec::ConvexImproved,
        "ball-improved" => InequalitySpec::BallImproved,
        "quadratic-form2" => InequalitySpec::QuadraticForm2,
        "ball-quadratic" => InequalitySpec::BallQuadratic,
        "exterior-convex" => InequalitySpec::ExteriorConvex,
        "weighted-exterior" => InequalitySpec::WeightedExterior,
        "two-boundary" => InequalitySpec::TwoBoundary,
        "annulus-al" => InequalitySpec::AnnulusAL,
        "torus-improved" => InequalitySpec::TorusImproved,
        "hyperboloid-signed" => InequalitySpec::HyperboloidSigned,
        "fmt-comparison" | "fmt-compare" => InequalitySpec::FmtComparison { alpha: alpha.unwrap_or(-1.0) },
        other => return Err(format!("unknown inequality '{other}'")),
    };
    if alpha.is_some() && !matches!(spec, InequalitySpec::FmtComparison { .. }) {
        return Err("--alpha applies to fmt-comparison only".into());
    }
    Ok(spec)
}

/// `smooth-bump`, `power-bump:q=0.5,ramp=10` or `radial-custom:0/0;0.5/1;1/0`.
pub fn profile(s: &str) -> Result<TestProfile<f64>, String> {
    let p = if let Some(table) = s.strip_prefix("radial-custom:") {
        let mut rows = Vec::new();
        for node in table.split(';').filter(|t| !t.trim().is_empty()) {
            let (t, v) = node.split_once('/').ok_or_else(|| format!("table node '{node}' is not t/value"))?;
            let t: f64 = t.trim().parse().map_err(|_| format!("'{t}' is not a number"))?;
            let v: f64 = v.trim().parse().map_err(|_| format!("'{v}' is not a number"))?;
            rows.push((t, v));
        }
        TestProfile::RadialCustom { table: rows }
    } else {
        let (name, params) = split(s)?;
        match name {
            "smooth-bump" => {
                take(name, params, [])?;
                TestProfile::SmoothBump
            }
            "power-bump" => {
                let mut params = params;
                let q = params.remove("q").unwrap_or(0.5);
                let ramp = params.remove("ramp").unwrap_or(10.0);
                take(name, params, [])?;
                TestProfile::PowerBump { exponent: q, ramp }
            }
            other => return Err(format!("unknown profile '{other}'")),
        }
    };
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

pub fn band(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("band '{s}' is not a,b"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("'{a}' is not a number"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("'{b}' is not a number"))?;
    if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
        return Err(format!("band '{s}' needs 0 < a < b"));
    }
    Ok((a, b))
}

pub fn side(s: &str) -> Result<Side, String> {
    match s {
        "both" => Ok(Side::Both),
        "inner" => Ok(Side::Inner),
        "outer" => Ok(Side::Outer),
        other => Err(format!("unknown side '{other}'")),
    }
}

/// Semicolon-separated list; empty entries are dropped.
pub fn list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    s.split(';').map(str::trim).filter(|t| !t.is_empty()).map(item).collect()
}

pub fn number_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains() {
        assert_eq!(domain("disc:R=1").unwrap(), DomainSpec::Disc { radius: 1.0 });
        assert_eq!(domain("torus:R=3,r=1").unwrap(), DomainSpec::Torus { major: 3.0, minor: 1.0 });
        assert!(domain("disc").is_err());
        assert!(domain("disc:R=1,x=2").is_err());
        assert!(domain("disc:R=-1").is_err());
        assert!(domain("annulus:rho=3,R=1").is_err());
        assert!(domain("blob:R=1").is_err());
        assert!(domain("conformal:sqrt-quadratic:rho=1.5,R=3").is_ok());
    }

    #[test]
    fn maps_and_transforms() {
        assert!(conformal_map("sqrt-quadratic:rho=0.5,R=2").is_ok());
        assert!(conformal_map("sqrt-quadratic:rho=0.5,R=0.8").is_err());
        assert!(matches!(transform("inversion").unwrap(), MapTransform::Inversion));
        assert!(transform("scale:s=0").is_err());
        assert!(transform("inversion:s=1").is_err());
    }

    #[test]
    fn profiles_and_bands() {
        assert_eq!(profile("smooth-bump").unwrap(), TestProfile::SmoothBump);
        assert_eq!(
            profile("power-bump:q=0.4,ramp=5").unwrap(),
            TestProfile::PowerBump { exponent: 0.4, ramp: 5.0 }
        );
        assert!(profile("radial-custom:0/0;0.5/1;1/0").is_ok());
        assert!(profile("radial-custom:0/0;1/0").is_err());
        assert_eq!(band("0.1,0.6").unwrap(), (0.1, 0.6));
        assert!(band("0.6,0.1").is_err());
        assert!(list("", band).unwrap().is_empty());
    }

    #[test]
    fn inequalities() {
        assert!(inequality("convex-improved", None).is_ok());
        assert!(inequality("convex-improved", Some(1.0)).is_err());
        assert!(matches!(
            inequality("fmt-compare", Some(0.5)).unwrap(),
            InequalitySpec::FmtComparison { alpha } if alpha == 0.5
        ));
    }
}
