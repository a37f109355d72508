//! Lower-bound estimation of suprema of scalar fields over the unit disk.
//!
//! The scan walks radial levels `r_k = 1 − 2^{−k}` toward the boundary. Every
//! level is sampled on a uniform angular grid, the best few ring maxima are
//! sharpened by golden-section search in the angle, and the global incumbent
//! is polished by a compass search in `(r, θ)`. Fields whose level maxima keep
//! growing are flagged as divergent and get a fitted exponent `α` in
//! `field ~ (1 − r)^{−α}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapping::{hyperbolic_derivative, AnalyticPart, Dilatation, HarmonicMapping};

/// Number of trailing levels used for the exponent fit.
pub const FIT_LEVELS: usize = 6;

/// Fraction of failed samples above which a scan is aborted.
pub const MAX_FAILED_FRACTION: f64 = 0.01;

/// Factor applied to a scanned supremum used on the large side of an
/// inequality; scans only ever under-estimate.
pub const SCAN_INFLATION: f64 = 1.05;

const GOLDEN_ITERATIONS: usize = 48;
const RING_SEEDS: usize = 3;
/// Level maxima used as starting points of the final local search.
const COMPASS_STARTS: usize = 4;
const COMPASS_MOVES: usize = 64;
const COMPASS_SHRINK: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub radial_levels: Vec<f64>,
    pub angular_count: usize,
    pub refine_depth: usize,
    pub divergence_ratio: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::with_rmax_exp(20)
    }
}

impl GridSpec {
    /// Levels `1 − 2^{−j/2}` for `j = 1..=2 k_max` (roughly even hyperbolic
    /// spacing, deepest level `1 − 2^{−k_max}`), other fields at their defaults.
    pub fn with_rmax_exp(k_max: u32) -> Self {
        Self {
            radial_levels: (1..=2 * k_max).map(|j| 1.0 - 2f64.powf(-(j as f64) / 2.0)).collect(),
            angular_count: 512,
            refine_depth: 5,
            divergence_ratio: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_levels.is_empty() {
            return Err(Error::InvalidArgument("no radial levels".into()));
        }
        let increasing = self.radial_levels.windows(2).all(|w| w[0] < w[1]);
        let inside = self.radial_levels.iter().all(|&r| r > 0.0 && r < 1.0);
        if !increasing || !inside {
            return Err(Error::InvalidArgument(
                "radial levels must be strictly increasing inside (0, 1)".into(),
            ));
        }
        if self.angular_count < 8 {
            return Err(Error::InvalidArgument("angular_count must be at least 8".into()));
        }
        Ok(())
    }

    pub fn r_max(&self) -> f64 {
        *self.radial_levels.last().unwrap_or(&0.0)
    }
}

/// Per-level audit entry of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub r_max: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupEstimate {
    /// Lower bound of the supremum: the field value at `argmax`.
    pub value: f64,
    pub argmax: Complex64,
    pub diverged: bool,
    pub exponent: Option<f64>,
    pub levels: Vec<Level>,
    pub evaluations: usize,
    pub skipped: usize,
}

impl SupEstimate {
    /// Value inflated by `factor` when used on the large side of an inequality.
    pub fn inflated(&self, factor: f64) -> f64 {
        self.value * factor
    }
}

struct Scanner<'a, F> {
    field: &'a F,
    total: usize,
    failed: usize,
    best: Option<(f64, Complex64)>,
}

impl<'a, F> Scanner<'a, F>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    fn eval(&mut self, z: Complex64) -> Option<f64> {
        self.total += 1;
        match (self.field)(z) {
            Ok(v) if v.is_finite() => {
                self.offer(v, z);
                Some(v)
            }
            _ => {
                self.failed += 1;
                None
            }
        }
    }

    fn offer(&mut self, v: f64, z: Complex64) {
        // Strict comparison keeps the first point in scan order on ties.
        if self.best.is_none_or(|(b, _)| v > b) {
            self.best = Some((v, z));
        }
    }

    fn ring(&mut self, r: f64, n: usize) -> Vec<Option<f64>> {
        let field = self.field;
        let values: Vec<Option<f64>> = (0..n)
            .into_par_iter()
            .map(|j| match field(Complex64::from_polar(r, TAU * j as f64 / n as f64)) {
                Ok(v) if v.is_finite() => Some(v),
                _ => None,
            })
            .collect();
        for (j, v) in values.iter().enumerate() {
            self.total += 1;
            match v {
                Some(v) => self.offer(*v, Complex64::from_polar(r, TAU * j as f64 / n as f64)),
                None => self.failed += 1,
            }
        }
        values
    }

    /// Golden-section search for the maximum of the field on `|z| = r` with
    /// `θ ∈ [lo, hi]`.
    fn refine_angle(&mut self, r: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let mut f = |t: f64| self.eval(Complex64::from_polar(r, t));
        let (t, v) = golden_max(&mut f, lo, hi, GOLDEN_ITERATIONS);
        v.map(|v| (v, t))
    }

    fn compass(&mut self, start: (f64, f64), r_cap: f64, mut dr: f64, mut dt: f64, rounds: usize) {
        let (mut r, mut t) = start;
        let Some(mut cur) = self.eval(Complex64::from_polar(r, t)) else { return };
        for _ in 0..rounds {
            for _ in 0..COMPASS_MOVES {
                let mut moved = None;
                for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let rn = (r + a * dr).clamp(0.0, r_cap);
                    let tn = t + b * dt;
                    if let Some(v) = self.eval(Complex64::from_polar(rn, tn)) {
                        if v > cur && moved.is_none_or(|(m, _, _)| v > m) {
                            moved = Some((v, rn, tn));
                        }
                    }
                }
                match moved {
                    Some((v, rn, tn)) => {
                        cur = v;
                        r = rn;
                        t = tn;
                    }
                    None => break,
                }
            }
            dr /= COMPASS_SHRINK;
            dt /= COMPASS_SHRINK;
        }
    }
}

/// Golden-section maximization on `[lo, hi]`; failed evaluations count as −∞.
pub fn golden_max<F>(f: &mut F, lo: f64, hi: f64, iterations: usize) -> (f64, Option<f64>)
where
    F: FnMut(f64) -> Option<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let score = |v: Option<f64>| v.unwrap_or(f64::NEG_INFINITY);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iterations {
        if score(fc) >= score(fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if score(fc) >= score(fd) {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Least-squares slope of `ln value` against `−ln(1 − r)`.
pub fn fit_growth_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(r, v)| *v > 0.0 && *r < 1.0)
        .map(|(r, v)| (-(1.0 - r).ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Local maxima of a circular sequence, best first.
fn ring_peaks(values: &[Option<f64>], k: usize) -> Vec<usize> {
    let n = values.len();
    let s = |i: usize| values[i % n].unwrap_or(f64::NEG_INFINITY);
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| values[i].is_some() && s(i) >= s(i + n - 1) && s(i) >= s(i + 1))
        .collect();
    peaks.sort_by(|&a, &b| s(b).total_cmp(&s(a)).then(a.cmp(&b)));
    peaks.truncate(k);
    peaks
}

/// Adaptive supremum scan of `field` over the disk.
pub fn sup_disk<F>(field: F, spec: &GridSpec) -> Result<SupEstimate>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let mut sc = Scanner { field: &field, total: 0, failed: 0, best: None };
    let n = spec.angular_count;
    let dtheta = TAU / n as f64;
    let mut levels = Vec::with_capacity(spec.radial_levels.len() + 1);

    let origin = sc.eval(Complex64::new(0.0, 0.0));
    levels.push(Level { r_max: 0.0, max: origin.unwrap_or(f64::NEG_INFINITY) });

    let mut prev_angle: Option<f64> = None;
    let mut starts: Vec<(f64, Complex64)> = Vec::new();
    for &r in &spec.radial_levels {
        let ring = sc.ring(r, n);
        let mut level_max = f64::NEG_INFINITY;
        let mut level_angle = 0.0;
        for (j, v) in ring.iter().enumerate() {
            if let Some(v) = v {
                if *v > level_max {
                    level_max = *v;
                    level_angle = dtheta * j as f64;
                }
            }
        }
        let mut seeds: Vec<f64> = ring_peaks(&ring, RING_SEEDS).iter().map(|&j| dtheta * j as f64).collect();
        seeds.extend(prev_angle);
        for s in seeds {
            if let Some((v, t)) = sc.refine_angle(r, s - dtheta, s + dtheta) {
                if v > level_max {
                    level_max = v;
                    level_angle = t;
                }
            }
        }
        if level_max.is_finite() {
            prev_angle = Some(level_angle);
            starts.push((level_max, Complex64::from_polar(r, level_angle)));
        }
        levels.push(Level { r_max: r, max: level_max });
    }

    if sc.best.is_none() {
        return Err(Error::EmptyScan);
    }
    if spec.refine_depth > 0 {
        let (v0, z0) = sc.best.unwrap();
        starts.push((v0, z0));
        starts.sort_by(|a, b| b.0.total_cmp(&a.0));
        starts.dedup_by(|a, b| a.1 == b.1);
        for &(_, z) in starts.iter().take(COMPASS_STARTS) {
            let r0 = z.norm();
            // Half the distance to the nearest other radial level.
            let gap = std::iter::once(0.0)
                .chain(spec.radial_levels.iter().copied())
                .map(|r| (r - r0).abs())
                .filter(|d| *d > 1e-15)
                .fold(f64::INFINITY, f64::min);
            let dr = if gap.is_finite() { 0.5 * gap } else { 0.25 };
            sc.compass((r0, z.arg()), spec.r_max(), dr, 0.5 * dtheta, spec.refine_depth);
        }
    }

    if sc.failed > 0 && sc.failed as f64 > MAX_FAILED_FRACTION * sc.total as f64 {
        return Err(Error::ScanAborted { failed: sc.failed, total: sc.total });
    }
    let (value, argmax) = sc.best.ok_or(Error::EmptyScan)?;

    let base = levels
        .iter()
        .filter(|l| l.r_max <= 0.5)
        .map(|l| l.max)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = levels.last().map(|l| l.max).unwrap_or(f64::NEG_INFINITY);
    let outer: Vec<f64> = levels.iter().filter(|l| l.r_max >= 0.5).map(|l| l.max).collect();
    let growing = outer.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let diverged = last > 0.0 && last > spec.divergence_ratio * base.max(0.0) && growing;
    let exponent = if diverged {
        let tail: Vec<(f64, f64)> = levels
            .iter()
            .rev()
            .take(FIT_LEVELS)
            .map(|l| (l.r_max, l.max))
            .collect();
        fit_growth_exponent(&tail)
    } else {
        None
    };

    Ok(SupEstimate {
        value,
        argmax,
        diverged,
        exponent,
        levels,
        evaluations: sc.total,
        skipped: sc.failed,
    })
}

/// `β(f) = sup (1 − |z|²) √|J_f(z)|`.
pub fn bloch_type_seminorm(f: &HarmonicMapping, spec: &GridSpec) -> Result<SupEstimate> {
    sup_disk(|z| f.bloch_density(z), spec)
}

/// `β(φ) = sup (1 − |z|²) |φ'(z)|` for analytic `φ`.
pub fn analytic_bloch_seminorm(phi: &AnalyticPart, spec: &GridSpec) -> Result<SupEstimate> {
    sup_disk(|z| Ok((1.0 - z.norm_sqr()) * phi.derivative(z)?.norm()), spec)
}

/// `‖ω‖_h = sup |ω*(z)|`.
pub fn hyperbolic_norm(w: &Dilatation, spec: &GridSpec) -> Result<SupEstimate> {
    sup_disk(|z| Ok(hyperbolic_derivative(w, z)?.norm()), spec)
}

/// `M_∞(r, f) = max_{|z| = r} |f(z)|` over `m` equispaced points, refined by
/// golden-section search around the best sample.
pub fn max_modulus<F>(f: F, r: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    max_modulus_point(f, r, m).map(|(v, _)| v)
}

/// As [`max_modulus`], also returning the maximizing point.
pub fn max_modulus_point<F>(f: F, r: f64, m: usize) -> Result<(f64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(Complex64::new(r, 0.0)));
    }
    if r == 0.0 {
        let z = Complex64::new(0.0, 0.0);
        return Ok((f(z)?.norm(), z));
    }
    let m = m.max(8);
    let dt = TAU / m as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..m {
        let t = dt * j as f64;
        let v = f(Complex64::from_polar(r, t))?.norm();
        if v > best.0 {
            best = (v, t);
        }
    }
    let mut g = |t: f64| f(Complex64::from_polar(r, t)).ok().map(|w| w.norm());
    let (t, v) = golden_max(&mut g, best.1 - dt, best.1 + dt, GOLDEN_ITERATIONS);
    if let Some(v) = v {
        if v > best.0 {
            best = (v, t);
        }
    }
    Ok((best.0, Complex64::from_polar(r, best.1)))
}
