//! Named, parameterized example mappings.
//!
//! Every entry has exact closed-form evaluators (value, first and second
//! derivative) and an exact companion Taylor series. Entry names and parameter
//! schemas are part of the command-line contract.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapping::{AnalyticPart, HarmonicMapping, Jet, NormClass};
use crate::series::{TaylorSeries, DEFAULT_ORDER};

/// Order of the companion series attached to closed-form catalog parts.
pub const CATALOG_ORDER: usize = 128;

/// Maximum modulus of the zeros of the random Blaschke factors.
const RANDOM_ZERO_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamKind {
    /// Real in `[min, max)` (or `(min, max)` when `open_min`).
    Real { min: f64, max: f64, open_min: bool },
    /// Complex with modulus `< max_modulus`.
    Complex { max_modulus: f64 },
    Integer { min: i64, max: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Complex(Complex64),
    Integer(i64),
}

impl ParamValue {
    pub fn as_real(&self) -> f64 {
        match *self {
            ParamValue::Real(x) => x,
            ParamValue::Complex(c) => c.re,
            ParamValue::Integer(i) => i as f64,
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        match *self {
            ParamValue::Complex(c) => c,
            other => Complex64::new(other.as_real(), 0.0),
        }
    }

    pub fn as_integer(&self) -> i64 {
        match *self {
            ParamValue::Integer(i) => i,
            other => other.as_real() as i64,
        }
    }

    fn render(&self) -> String {
        match self {
            ParamValue::Real(x) => format!("{x}"),
            ParamValue::Integer(i) => format!("{i}"),
            ParamValue::Complex(c) if c.im == 0.0 => format!("{}", c.re),
            ParamValue::Complex(c) => format!("{c}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: ParamValue,
    pub doc: &'static str,
}

impl ParamSpec {
    fn parse(&self, raw: &str) -> Result<ParamValue> {
        let bad = || Error::InvalidArgument(format!("cannot parse `{raw}` for parameter {}", self.name));
        let v = match self.kind {
            ParamKind::Real { .. } => ParamValue::Real(raw.trim().parse().map_err(|_| bad())?),
            ParamKind::Integer { .. } => ParamValue::Integer(raw.trim().parse().map_err(|_| bad())?),
            ParamKind::Complex { .. } => {
                ParamValue::Complex(raw.trim().replace(' ', "").parse().map_err(|_| bad())?)
            }
        };
        self.check(v)?;
        Ok(v)
    }

    fn check(&self, v: ParamValue) -> Result<()> {
        let ok = match self.kind {
            ParamKind::Real { min, max, open_min } => {
                let x = v.as_real();
                x.is_finite() && (if open_min { x > min } else { x >= min }) && x < max
            }
            ParamKind::Complex { max_modulus } => {
                let c = v.as_complex();
                c.is_finite() && c.norm() < max_modulus
            }
            ParamKind::Integer { min, max } => (min..=max).contains(&v.as_integer()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "parameter {} = {} is out of range ({})",
                self.name,
                v.render(),
                self.doc
            )))
        }
    }
}

/// Shape of a reference value recorded for an entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    /// Attained or approached exactly.
    Exact { value: f64 },
    /// The functional is bounded above by `value`.
    AtMost { value: f64 },
    /// The functional is infinite, growing like `(1 − r)^{−exponent}`.
    Diverges { exponent: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct KnownValue {
    /// One of `beta`, `bloch_h`, `bloch_g`, `schlicht_radius_0`.
    pub functional: &'static str,
    pub expected: Expected,
    /// Allowed deviation: shortfall of a scanned supremum below an exact
    /// value, two-sided error of a schlicht radius, error of an exponent, or
    /// excess over an upper bound.
    pub tol: f64,
    pub origin: &'static str,
}

/// Shortfall allowed for suprema approached only at the boundary: the scan
/// stops at `1 − 2⁻²⁰`.
pub const BOUNDARY_SLACK: f64 = 0.03;
/// Tolerance on fitted growth exponents.
pub const EXPONENT_TOL: f64 = 0.1;

pub type ResolvedParams = BTreeMap<String, ParamValue>;

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub params: Vec<ParamSpec>,
    build: fn(&ResolvedParams) -> Result<HarmonicMapping>,
    known: fn(&ResolvedParams) -> Vec<KnownValue>,
}

impl CatalogEntry {
    /// Fills defaults and validates `raw` against the schema.
    pub fn resolve(&self, raw: &BTreeMap<String, String>) -> Result<ResolvedParams> {
        for k in raw.keys() {
            if !self.params.iter().any(|p| p.name == k) {
                return Err(Error::InvalidArgument(format!(
                    "entry {} has no parameter `{k}`",
                    self.name
                )));
            }
        }
        let mut out = ResolvedParams::new();
        for p in &self.params {
            let v = match raw.get(p.name) {
                Some(s) => p.parse(s)?,
                None => p.default,
            };
            out.insert(p.name.to_string(), v);
        }
        Ok(out)
    }

    pub fn build(&self, params: &ResolvedParams) -> Result<HarmonicMapping> {
        for p in &self.params {
            let v = params
                .get(p.name)
                .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {}", p.name)))?;
            p.check(*v)?;
        }
        let mut f = (self.build)(params)?;
        f.name = target_label(self.name, params);
        Ok(f)
    }

    pub fn known_values(&self, params: &ResolvedParams) -> Vec<KnownValue> {
        (self.known)(params)
    }
}

/// `name` or `name:k=v,k=v` with parameters in key order.
pub fn target_label(name: &str, params: &ResolvedParams) -> String {
    if params.is_empty() {
        return name.to_string();
    }
    let kv: Vec<String> = params.iter().map(|(k, v)| format!("{k}={}", v.render())).collect();
    format!("{name}:{}", kv.join(","))
}

/// Splits `name:k=v,k=v` into the entry name and raw parameters.
pub fn parse_target(spec: &str) -> Result<(String, BTreeMap<String, String>)> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec.trim(), None),
    };
    let mut params = BTreeMap::new();
    if let Some(rest) = rest {
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok((name.to_string(), params))
}

pub fn entries() -> Vec<CatalogEntry> {
    let real = |min, max, open_min| ParamKind::Real { min, max, open_min };
    vec![
        CatalogEntry {
            name: "identity",
            description: "f(z) = z",
            params: vec![],
            build: |_| Ok(identity()),
            known: |_| {
                vec![
                    known("beta", Expected::Exact { value: 1.0 }, 1e-9, "J = 1, maximized at 0"),
                    known("schlicht_radius_0", Expected::Exact { value: 1.0 }, 1e-6, "image is the disk"),
                ]
            },
        },
        CatalogEntry {
            name: "koebe",
            description: "analytic Koebe function z/(1-z)^2",
            params: vec![],
            build: |_| Ok(koebe()),
            known: |_| {
                vec![
                    known("beta", Expected::Diverges { exponent: 2.0 }, EXPONENT_TOL, "(1-r^2)(1+r)/(1-r)^3"),
                    known("schlicht_radius_0", Expected::Exact { value: 0.25 }, 0.005, "omitted value -1/4"),
                ]
            },
        },
        CatalogEntry {
            name: "half_plane",
            description: "half-plane map z/(1-z)",
            params: vec![],
            build: |_| Ok(half_plane()),
            known: |_| {
                vec![
                    known("beta", Expected::Diverges { exponent: 1.0 }, EXPONENT_TOL, "(1+r)/(1-r)"),
                    known("schlicht_radius_0", Expected::Exact { value: 0.5 }, 1e-4, "image Re w > -1/2"),
                ]
            },
        },
        CatalogEntry {
            name: "log_map",
            description: "log(1/(1-z))",
            params: vec![],
            build: |_| Ok(log_map()),
            known: |_| {
                vec![
                    known("beta", Expected::Exact { value: 2.0 }, BOUNDARY_SLACK, "(1-r^2)/(1-r) = 1+r"),
                    known("bloch_h", Expected::Exact { value: 2.0 }, BOUNDARY_SLACK, "(1-r^2)/(1-r) = 1+r"),
                    known(
                        "schlicht_radius_0",
                        Expected::Exact { value: std::f64::consts::LN_2 },
                        1e-4, "nearest boundary point -log 2 is the image of z = -1",
                    ),
                ]
            },
        },
        CatalogEntry {
            name: "ex22",
            description: "f = h + conj(h) with h'(z) = (1-z)^{-p}, p > 2",
            params: vec![ParamSpec {
                name: "p",
                kind: real(2.0, 64.0, true),
                default: ParamValue::Real(3.0),
                doc: "p in (2, 64)",
            }],
            build: |p| Ok(ex22(p["p"].as_real())),
            known: |_| vec![known("beta", Expected::Exact { value: 0.0 }, 1e-9, "J vanishes identically")],
        },
        CatalogEntry {
            name: "ex23",
            description: "h = 2(1-z)^{-1/2} with dilatation z",
            params: vec![],
            build: |_| Ok(sharpness(0.0).named("ex23")),
            known: |_| {
                vec![
                    known(
                        "beta",
                        Expected::Exact { value: 2.0 * std::f64::consts::SQRT_2 },
                        BOUNDARY_SLACK, "((1-x^2)/(1-x))^{3/2} -> 2^{3/2}",
                    ),
                    known("bloch_h", Expected::Diverges { exponent: 0.5 }, 0.05, "(1+x)/sqrt(1-x)"),
                ]
            },
        },
        CatalogEntry {
            name: "sharpness_t",
            description: "h = 2(1-z)^{-1/2} with dilatation t + (1-t)z",
            params: vec![ParamSpec {
                name: "t",
                kind: real(0.0, 1.0, false),
                default: ParamValue::Real(0.5),
                doc: "t in [0, 1)",
            }],
            build: |p| Ok(sharpness(p["t"].as_real())),
            known: |p| {
                let t = p["t"].as_real();
                vec![known(
                    "beta",
                    Expected::AtMost { value: 2.0 * std::f64::consts::SQRT_2 * (1.0 + t).sqrt() },
                    1e-6, "horodisk dilatation bound",
                )]
            },
        },
        CatalogEntry {
            name: "shear",
            description: "affine shear z + conj(b) conj(z), |b| < 1",
            params: vec![ParamSpec {
                name: "b",
                kind: ParamKind::Complex { max_modulus: 1.0 },
                default: ParamValue::Complex(Complex64::new(0.5, 0.0)),
                doc: "|b| < 1",
            }],
            build: |p| Ok(shear(p["b"].as_complex())),
            known: |p| {
                let b = p["b"].as_complex().norm();
                vec![
                    known("beta", Expected::Exact { value: (1.0 - b * b).sqrt() }, 1e-9, "constant Jacobian"),
                    known("schlicht_radius_0", Expected::Exact { value: 1.0 - b }, 1e-6, "ellipse minor semi-axis"),
                ]
            },
        },
        CatalogEntry {
            name: "random",
            description: "h' = exp(P), ω = k·B with a random polynomial P and Blaschke product B",
            params: vec![
                ParamSpec {
                    name: "seed",
                    kind: ParamKind::Integer { min: 0, max: i64::MAX },
                    default: ParamValue::Integer(0),
                    doc: "seed >= 0",
                },
                ParamSpec {
                    name: "degree",
                    kind: ParamKind::Integer { min: 0, max: 12 },
                    default: ParamValue::Integer(3),
                    doc: "degree in 0..=12",
                },
                ParamSpec {
                    name: "k",
                    kind: real(0.0, 1.0, false),
                    default: ParamValue::Real(0.5),
                    doc: "k in [0, 1)",
                },
            ],
            build: |p| {
                random_sense_preserving(
                    p["seed"].as_integer() as u64,
                    p["degree"].as_integer() as usize,
                    p["k"].as_real(),
                )
            },
            known: |_| vec![],
        },
    ]
}

fn known(functional: &'static str, expected: Expected, tol: f64, origin: &'static str) -> KnownValue {
    KnownValue { functional, expected, tol, origin }
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

/// Builds a registered mapping from raw `key → value` strings.
pub fn get(name: &str, raw: &BTreeMap<String, String>) -> Result<HarmonicMapping> {
    let e = entry(name)?;
    let params = e.resolve(raw)?;
    e.build(&params)
}

/// Builds a mapping from a `name:k=v,...` target string.
pub fn get_target(spec: &str) -> Result<HarmonicMapping> {
    let (name, raw) = parse_target(spec)?;
    get(&name, &raw)
}

trait Named {
    fn named(self, name: &str) -> Self;
}

impl Named for HarmonicMapping {
    fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `(1 − z)^{−a}` and its first two derivatives.
fn inv_power(a: f64, z: Complex64) -> Jet {
    let u = one() - z;
    let v = u.powf(-a);
    Jet::new(v, a * v / u, a * (a + 1.0) * v / (u * u))
}

pub fn identity() -> HarmonicMapping {
    HarmonicMapping::analytic("identity", AnalyticPart::identity()).declare(true, true, NormClass::SH0)
}

pub fn koebe() -> HarmonicMapping {
    let h = AnalyticPart::closed_form(|z| {
        let u = one() - z;
        Jet::new(z / (u * u), (1.0 + z) / (u * u * u), (4.0 + 2.0 * z) / (u * u * u * u))
    })
    .with_series(
        TaylorSeries::from_coeffs((0..=CATALOG_ORDER).map(|n| Complex64::new(n as f64, 0.0)).collect())
            .expect("finite"),
    );
    HarmonicMapping::analytic("koebe", h).declare(true, true, NormClass::SH0)
}

pub fn half_plane() -> HarmonicMapping {
    let h = AnalyticPart::closed_form(|z| {
        let u = one() - z;
        Jet::new(z / u, 1.0 / (u * u), 2.0 / (u * u * u))
    })
    .with_series(&TaylorSeries::binomial(1.0, CATALOG_ORDER) - &TaylorSeries::constant(one(), CATALOG_ORDER));
    HarmonicMapping::analytic("half_plane", h).declare(true, true, NormClass::SH0)
}

pub fn log_map() -> HarmonicMapping {
    HarmonicMapping::analytic("log_map", log_part()).declare(true, true, NormClass::SH0)
}

/// `log(1/(1 − z))`.
pub fn log_part() -> AnalyticPart {
    AnalyticPart::closed_form(|z| {
        let u = one() - z;
        Jet::new(-u.ln(), 1.0 / u, 1.0 / (u * u))
    })
    .with_series(TaylorSeries::binomial(1.0, CATALOG_ORDER - 1).integrate(Complex64::new(0.0, 0.0)))
}

/// `h' = (1 − z)^{−p}`, `h(0) = 0`, and `f = h + conj(h)`.
pub fn ex22(p: f64) -> HarmonicMapping {
    let h = ex22_part(p);
    HarmonicMapping::new("ex22", h.clone(), h)
}

pub fn ex22_part(p: f64) -> AnalyticPart {
    AnalyticPart::closed_form(move |z| {
        let d = inv_power(p, z);
        let u = one() - z;
        Jet::new((u.powf(1.0 - p) - 1.0) / (p - 1.0), d.value, d.d1)
    })
    .with_series(TaylorSeries::binomial(p, CATALOG_ORDER - 1).integrate(Complex64::new(0.0, 0.0)))
}

/// `h = 2(1 − z)^{−1/2}`.
pub fn sqrt_pole_part() -> AnalyticPart {
    AnalyticPart::closed_form(|z| {
        let d = inv_power(1.5, z);
        Jet::new(2.0 * (one() - z).powf(-0.5), d.value, d.d1)
    })
    .with_series(TaylorSeries::binomial(0.5, CATALOG_ORDER).scale(Complex64::new(2.0, 0.0)))
}

/// `h = 2(1 − z)^{−1/2}`, `ω = t + (1 − t) z`, normalized by `g(0) = 0`:
/// `g = 2(1 − z)^{−1/2} + 2(1 − t)(1 − z)^{1/2} − (4 − 2t)`.
pub fn sharpness(t: f64) -> HarmonicMapping {
    let g = AnalyticPart::closed_form(move |z| {
        let w = Jet::new(t + (1.0 - t) * z, Complex64::new(1.0 - t, 0.0), Complex64::new(0.0, 0.0));
        let hp = inv_power(1.5, z);
        let u = one() - z;
        let value = 2.0 * u.powf(-0.5) + 2.0 * (1.0 - t) * u.powf(0.5) - (4.0 - 2.0 * t);
        let gp = w * hp;
        Jet::new(value, gp.value, gp.d1)
    })
    .with_series({
        let n = CATALOG_ORDER;
        let a = TaylorSeries::binomial(0.5, n).scale(Complex64::new(2.0, 0.0));
        let b = TaylorSeries::binomial(-0.5, n).scale(Complex64::new(2.0 * (1.0 - t), 0.0));
        &(&a + &b) - &TaylorSeries::constant(Complex64::new(4.0 - 2.0 * t, 0.0), n)
    });
    HarmonicMapping::new("sharpness_t", sqrt_pole_part(), g).declare(true, false, NormClass::None)
}

/// `f(z) = z + conj(b) conj(z)`, i.e. `h = z`, `g = b z`.
pub fn shear(b: Complex64) -> HarmonicMapping {
    let class = if b.norm() == 0.0 { NormClass::SH0 } else { NormClass::SH };
    HarmonicMapping::new("shear", AnalyticPart::identity(), AnalyticPart::linear(b)).declare(
        b.norm() < 1.0,
        b.norm() < 1.0,
        class,
    )
}

/// Series of the finite Blaschke product `e^{iφ} ∏ (z − a_j)/(1 − conj(a_j) z)`.
fn blaschke_series(rotation: f64, zeros: &[Complex64], order: usize) -> TaylorSeries {
    let mut s = TaylorSeries::constant(Complex64::from_polar(1.0, rotation), order);
    for &a in zeros {
        let lin = &TaylorSeries::identity(order) - &TaylorSeries::constant(a, order);
        let factor = &lin * &TaylorSeries::geometric(a.conj(), order);
        s = &s * &factor;
    }
    s
}

fn random_disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

/// Seeded sense-preserving mapping with `h' = exp(P)` for a random polynomial
/// `P` of the given degree (`P(0) = 0`) and `ω = k·B` for a random Blaschke
/// product `B` of degree at most 3. Both parts are series-backed with
/// `h(0) = g(0) = 0`.
pub fn random_sense_preserving(seed: u64, degree: usize, k: f64) -> Result<HarmonicMapping> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidArgument(format!("k = {k} is not in [0, 1)")));
    }
    let order = DEFAULT_ORDER;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = vec![Complex64::new(0.0, 0.0); order + 1];
    for j in 1..=degree.min(order) {
        p[j] = random_disk_point(&mut rng, 0.8 / j as f64);
    }
    let hp = TaylorSeries::from_coeffs(p)?.exp_series();
    let blaschke_degree = rng.gen_range(0..=3usize);
    let zeros: Vec<Complex64> =
        (0..blaschke_degree).map(|_| random_disk_point(&mut rng, RANDOM_ZERO_RADIUS)).collect();
    let rotation = TAU * rng.gen::<f64>();
    let omega = blaschke_series(rotation, &zeros, order).scale(Complex64::new(k, 0.0));
    let zero = Complex64::new(0.0, 0.0);
    let h = AnalyticPart::from_series(hp.integrate(zero));
    let g = AnalyticPart::from_series((&omega * &hp).integrate(zero));
    let name = format!("random:degree={degree},k={k},seed={seed}");
    Ok(HarmonicMapping::new(name, h, g).declare(true, false, NormClass::None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{bloch_type_seminorm, GridSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn every_entry_builds_and_validates() {
        for e in entries() {
            let params = e.resolve(&BTreeMap::new()).unwrap();
            let f = e.build(&params).unwrap();
            f.validate().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn identity_entry() {
        let f = get("identity", &BTreeMap::new()).unwrap();
        assert!(f.univalent && f.sense_preserving);
        assert_eq!(f.class, NormClass::SH0);
        assert_eq!(f.evaluate(c(0.2, 0.3)).unwrap(), c(0.2, 0.3));
    }

    #[test]
    fn ex23_entry() {
        let f = get_target("ex23").unwrap();
        let z = c(0.3, -0.2);
        let u = c(1.0, 0.0) - z;
        assert!((f.h.value(z).unwrap() - 2.0 * u.powf(-0.5)).norm() < 1e-14);
        assert!((f.dilatation_at(z).unwrap() - z).norm() < 1e-14);
        let e = entry("ex23").unwrap();
        let kv = e.known_values(&ResolvedParams::new());
        assert!(matches!(kv[0].expected, Expected::Exact { value } if (value - 2.0 * 2f64.sqrt()).abs() < 1e-15));
    }

    #[test]
    fn sharpness_entry() {
        let f = get_target("sharpness_t:t=0.5").unwrap();
        assert_eq!(f.name, "sharpness_t:t=0.5");
        let z = c(0.4, 0.1);
        assert!((f.dilatation_at(z).unwrap() - (0.5 + 0.5 * z)).norm() < 1e-14);
        assert!(f.g.value(c(0.0, 0.0)).unwrap().norm() < 1e-15);
        let b = bloch_type_seminorm(&f, &GridSpec::default()).unwrap();
        assert!(b.value <= 2.0 * 2f64.sqrt() * 1.5f64.sqrt());
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(get_target("nope"), Err(Error::UnknownEntry(_))));
        assert!(matches!(get_target("ex22:p=2"), Err(Error::InvalidArgument(_))));
        assert!(matches!(get_target("sharpness_t:t=1"), Err(Error::InvalidArgument(_))));
        assert!(matches!(get_target("shear:b=0.6+0.9i"), Err(Error::InvalidArgument(_))));
        assert!(matches!(get_target("shear:q=1"), Err(Error::InvalidArgument(_))));
        assert!(get_target("shear:b=0.3+0.2i").is_ok());
    }

    #[test]
    fn closed_forms_match_series() {
        for t in ["identity", "koebe", "half_plane", "log_map", "ex22:p=2.5", "ex23", "sharpness_t:t=0.3", "shear:b=0.4-0.2i"] {
            let f = get_target(t).unwrap();
            for part in [&f.h, &f.g] {
                let series = AnalyticPart::from_series(part.stored_series().unwrap().clone());
                for z in crate::mapping::polar_grid(6, 12, 0.7) {
                    let a = part.jet(z).unwrap();
                    let b = series.jet(z).unwrap();
                    for (x, y) in [(a.d1, b.d1), (a.d2, b.d2)] {
                        assert!((x - y).norm() <= 1e-8 * x.norm().max(1.0), "{t} at {z}: {x} vs {y}");
                    }
                }
                assert!(part.finite_difference_discrepancy(0.9).unwrap() < 1e-6, "{t}");
            }
        }
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_sense_preserving(7, 4, 0.6).unwrap();
        let b = random_sense_preserving(7, 4, 0.6).unwrap();
        assert_eq!(a.h.stored_series(), b.h.stored_series());
        assert_eq!(a.g.stored_series(), b.g.stored_series());
        let c2 = random_sense_preserving(8, 4, 0.6).unwrap();
        assert_ne!(a.h.stored_series(), c2.h.stored_series());
    }

    #[test]
    fn random_is_sense_preserving() {
        for seed in 0..10 {
            let f = random_sense_preserving(seed, 5, 0.9).unwrap();
            f.validate().unwrap();
            for z in crate::mapping::validation_grid().into_iter().step_by(7) {
                assert!(f.jacobian(z).unwrap() > 0.0);
                assert!(f.dilatation_at(z).unwrap().norm() <= 0.9 + 1e-12);
            }
        }
    }

    #[test]
    fn random_degenerate_is_analytic() {
        let f = random_sense_preserving(3, 0, 0.0).unwrap();
        assert_eq!(f.g.stored_series().unwrap().max_abs(), 0.0);
        for z in [c(0.1, 0.2), c(-0.7, 0.3)] {
            assert!((f.h.derivative(z).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        }
    }
}
