//! Schlicht radius of univalent mappings and the covering, Hall and radius
//! bounds built on it.

use std::f64::consts::{FRAC_PI_2, SQRT_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{bloch_type_seminorm, sup_disk, GridSpec, SCAN_INFLATION};
use crate::mapping::{HarmonicMapping, NormClass};
use crate::report::{Check, VerificationReport};

/// Exponents `j` of the radial levels `ρ = 1 − 2⁻ʲ`.
pub const RHO_EXPONENTS: std::ops::RangeInclusive<i32> = 6..=14;

pub const INITIAL_SAMPLES: usize = 4096;
pub const MAX_SAMPLES: usize = 1 << 20;

/// Relative change below which doubling the boundary samples stops.
pub const SAMPLE_CONVERGENCE: f64 = 1e-3;

/// Relative slack on geometric checks, covering the extrapolation error of
/// the schlicht radius in equality cases.
pub const GEOMETRY_REL_TOL: f64 = 1e-6;

/// Image of the circle `|z| = ρ` as a closed polyline.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub rho: f64,
    pub points: Vec<Complex64>,
}

impl BoundaryCurve {
    /// Distance from `w` to the closed polyline, measured to segments.
    pub fn distance(&self, w: Complex64) -> f64 {
        let n = self.points.len();
        (0..n)
            .into_par_iter()
            .with_min_len(1024)
            .map(|k| segment_distance(w, self.points[k], self.points[(k + 1) % n]))
            .reduce(|| f64::INFINITY, f64::min)
    }
}

fn segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = (((w - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (w - (a + t * ab)).norm()
}

pub fn boundary_curve(f: &HarmonicMapping, rho: f64, m: usize) -> Result<BoundaryCurve> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!("rho = {rho} is not in (0, 1)")));
    }
    if m < 64 {
        return Err(Error::InvalidArgument(format!("m = {m} < 64 boundary samples")));
    }
    let points = (0..m)
        .into_par_iter()
        .map(|k| f.evaluate(Complex64::from_polar(rho, TAU * k as f64 / m as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryCurve { rho, points })
}

#[derive(Debug, Clone, Serialize)]
pub struct SchlichtRadiusEstimate {
    pub value: f64,
    /// `(ρ, minimum distance)` per level.
    pub rho_levels: Vec<(f64, f64)>,
    pub extrapolated: bool,
}

/// Distances from every `f(z)` to the boundary curve at `rho`, doubling the
/// sample count until the largest relative change is below
/// [`SAMPLE_CONVERGENCE`]. The chord error of the polyline is `O(m⁻²)` and is
/// removed by Richardson extrapolation over the last doubling.
fn level_distances(f: &HarmonicMapping, images: &[Complex64], rho: f64) -> Result<Vec<f64>> {
    let distances = |m: usize| -> Result<Vec<f64>> {
        let curve = boundary_curve(f, rho, m)?;
        Ok(images.iter().map(|&w| curve.distance(w)).collect())
    };
    let mut m = INITIAL_SAMPLES;
    let mut prev = distances(m)?;
    while m < MAX_SAMPLES {
        m *= 2;
        let next = distances(m)?;
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if change < SAMPLE_CONVERGENCE || m == MAX_SAMPLES {
            return Ok(prev.iter().zip(&next).map(|(a, b)| (4.0 * b - a) / 3.0).collect());
        }
        prev = next;
    }
    Ok(prev)
}

/// Schlicht radii `d_f(z)` at every point of `zs`, using the `levels` deepest
/// ρ-levels up to `1 − 2⁻¹⁴`.
pub fn schlicht_radii_with_levels(
    f: &HarmonicMapping,
    zs: &[Complex64],
    levels: usize,
) -> Result<Vec<SchlichtRadiusEstimate>> {
    if !f.univalent {
        return Err(Error::Contract(format!(
            "{} is not declared univalent; the schlicht radius is only computed as a boundary distance",
            f.name
        )));
    }
    for &z in zs {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(z));
        }
    }
    let exps: Vec<i32> = RHO_EXPONENTS.collect();
    let exps = &exps[exps.len().saturating_sub(levels)..];
    let images = zs.iter().map(|&z| f.evaluate(z)).collect::<Result<Vec<_>>>()?;
    let mut per_level: Vec<(f64, Vec<f64>)> = Vec::new();
    for &j in exps {
        let rho = 1.0 - 2f64.powi(-j);
        per_level.push((rho, level_distances(f, &images, rho)?));
    }
    let out = zs
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            // Levels must enclose z with room to spare.
            let usable: Vec<(f64, f64)> = per_level
                .iter()
                .filter(|(rho, _)| 1.0 - rho <= 0.5 * (1.0 - z.norm()))
                .map(|(rho, d)| (*rho, d[i]))
                .collect();
            let rows: Vec<(f64, f64)> = per_level.iter().map(|(rho, d)| (*rho, d[i])).collect();
            match usable.as_slice() {
                [.., (_, a), (_, b)] => SchlichtRadiusEstimate {
                    // Halving 1 − ρ; the distance increases with ρ.
                    value: (2.0 * b - a).max(*b),
                    rho_levels: rows,
                    extrapolated: true,
                },
                _ => SchlichtRadiusEstimate {
                    value: rows.last().map_or(0.0, |r| r.1),
                    rho_levels: rows,
                    extrapolated: false,
                },
            }
        })
        .collect();
    Ok(out)
}

pub fn schlicht_radii(f: &HarmonicMapping, zs: &[Complex64]) -> Result<Vec<SchlichtRadiusEstimate>> {
    schlicht_radii_with_levels(f, zs, RHO_EXPONENTS.count())
}

pub fn schlicht_radius(f: &HarmonicMapping, z: Complex64) -> Result<SchlichtRadiusEstimate> {
    Ok(schlicht_radii(f, &[z])?.remove(0))
}

fn require_univalent_normalized(f: &HarmonicMapping) -> Result<()> {
    if f.class == NormClass::None || !f.univalent {
        return Err(Error::Contract(format!("{} is not declared in S_H", f.name)));
    }
    Ok(())
}

fn geometric_tol(tol: f64, rhs: f64) -> f64 {
    tol.max(GEOMETRY_REL_TOL * rhs.abs())
}

/// `(1 − |z|²)(|h'| − |g'|)/16 ≤ d_f(z) ≤ (π/2)(1 − |z|²)|h'|` at every sample.
pub fn verify_radius_sandwich(f: &HarmonicMapping, zs: &[Complex64], tol: f64) -> Result<VerificationReport> {
    require_univalent_normalized(f)?;
    let mut report = VerificationReport::new("radius");
    let radii = schlicht_radii(f, zs)?;
    for (&z, d) in zs.iter().zip(&radii) {
        let w = 1.0 - z.norm_sqr();
        let (hp, gp) = (f.h.derivative(z)?.norm(), f.g.derivative(z)?.norm());
        let lower = w * (hp - gp) / 16.0;
        let upper = FRAC_PI_2 * w * hp;
        report.push(Check::ge(&f.name, "sandwich_lower", d.value, lower, geometric_tol(tol, lower)).at(z));
        report.push(Check::le(&f.name, "sandwich_upper", d.value, upper, geometric_tol(tol, upper)).at(z));
    }
    Ok(report)
}

/// `(1 − |b₁|)/16 ≤ d_f(0) ≤ π/2`.
pub fn covering_check(f: &HarmonicMapping, tol: f64) -> Result<VerificationReport> {
    require_univalent_normalized(f)?;
    let zero = Complex64::new(0.0, 0.0);
    let d = schlicht_radius(f, zero)?.value;
    let b1 = f.b1()?.norm();
    let lower = (1.0 - b1) / 16.0;
    let mut report = VerificationReport::new("radius");
    report.push(Check::ge(&f.name, "covering", d, lower, geometric_tol(tol, lower)).at(zero));
    report.push(Check::le(&f.name, "hall", d, FRAC_PI_2, geometric_tol(tol, FRAC_PI_2)).at(zero));
    Ok(report)
}

/// Points `1 − 2⁻ᵏ`, `k = 0..=8`, on the positive real axis.
pub fn default_radial_path() -> Vec<Complex64> {
    (0..=8).map(|k| Complex64::new(1.0 - 2f64.powi(-k), 0.0)).collect()
}

/// Growth of the schlicht radius along `path` against the seminorm:
/// `d_f(z)√(1 − |z|) ≤ (π/2)√((1 + |b₁|)/(1 − |b₁|)) β`, the uniform bound
/// `d_f ≤ (π/2) β/√(1 − ‖ω‖_∞)` when `‖ω‖_∞ < 1`, and the converse
/// `(1 − |z|²)√J ≤ 16√2 √((1 + |b₁|)/(1 − |b₁|)) d_f(z)/√(1 − |z|)`.
pub fn radius_asymptotics(
    f: &HarmonicMapping,
    path: &[Complex64],
    spec: &GridSpec,
    tol: f64,
) -> Result<VerificationReport> {
    require_univalent_normalized(f)?;
    let beta = bloch_type_seminorm(f, spec)?;
    if beta.diverged {
        return Err(Error::Hypothesis(format!("β({}) diverges", f.name)));
    }
    let beta_large = beta.inflated(SCAN_INFLATION);
    let b1 = f.b1()?.norm();
    let skew = ((1.0 + b1) / (1.0 - b1)).sqrt();
    let dil = f.dilatation();
    let omega_sup = sup_disk(|z| Ok(dil.value(z)?.norm()), spec)?;
    let quasiconformal = !omega_sup.diverged && omega_sup.value < 1.0 - 1e-6;
    let radii = schlicht_radii(f, path)?;

    let mut report = VerificationReport::new("radius");
    for (&z, d) in path.iter().zip(&radii) {
        let s = (1.0 - z.norm()).sqrt();
        let bound = FRAC_PI_2 * skew * beta_large;
        report.push(Check::le(&f.name, "radius_growth", d.value * s, bound, geometric_tol(tol, bound)).at(z));
        if quasiconformal {
            let uniform = FRAC_PI_2 * beta_large / (1.0 - omega_sup.value).sqrt();
            report.push(Check::le(&f.name, "radius_uniform", d.value, uniform, geometric_tol(tol, uniform)).at(z));
        }
        let density = f.bloch_density(z)?;
        let converse = 16.0 * SQRT_2 * skew * d.value / s;
        report.push(Check::le(&f.name, "radius_converse", density, converse, geometric_tol(tol, converse)).at(z));
    }
    if !quasiconformal {
        report.push(Check::skip(&f.name, "radius_uniform", "dilatation not bounded away from 1"));
    }
    Ok(report)
}
