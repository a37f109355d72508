//! Harmonic mappings `f = h + conj(g)` on the unit disk and their pointwise
//! differential functionals.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{
    coefficients_via_cauchy, default_sample_count, TaylorSeries, DEFAULT_EXTRACTION_RADIUS,
};

/// Absolute tolerance for the `S_H` / `S_H⁰` normalization checks.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Value together with first and second complex derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl Jet {
    pub fn new(value: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Self { value, d1, d2 }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(c, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn variable(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn scale(self, s: Complex64) -> Self {
        Self::new(self.value * s, self.d1 * s, self.d2 * s)
    }

    /// Chain rule: `outer` is the jet of F at `inner.value`; returns the jet of F∘u.
    pub fn compose(outer: Jet, inner: Jet) -> Jet {
        Jet::new(
            outer.value,
            outer.d1 * inner.d1,
            outer.d2 * inner.d1 * inner.d1 + outer.d1 * inner.d2,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

/// Order at which exact low-degree polynomials store their (genuinely zero)
/// higher coefficients.
const POLYNOMIAL_ORDER: usize = 256;

type Evaluator = Arc<dyn Fn(Complex64) -> Jet + Send + Sync>;
type DerivativeEvaluator = Arc<dyn Fn(Complex64) -> (Complex64, Complex64) + Send + Sync>;

/// Gauss–Legendre nodes per segment of the graded radial quadrature.
const RADIAL_NODES: usize = 16;

/// Nodes of the trapezoidal contour rule for second derivatives.
const CONTOUR_NODES: usize = 48;

#[derive(Clone)]
enum Backing {
    /// Full jet, plus a cheaper evaluator for `(f', f'')` alone.
    ClosedForm(Evaluator, DerivativeEvaluator),
    Series { value: TaylorSeries, d1: TaylorSeries, d2: TaylorSeries },
}

/// An analytic function on the disk with exact first and second derivatives.
///
/// Closed-form parts may carry a companion Taylor series; series-backed parts
/// evaluate the truncated polynomial and its term-wise derivatives.
#[derive(Clone)]
pub struct AnalyticPart {
    backing: Backing,
    companion: Option<TaylorSeries>,
}

impl fmt::Debug for AnalyticPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.backing {
            Backing::ClosedForm(..) => f
                .debug_struct("AnalyticPart")
                .field("backing", &"closed-form")
                .field("series_order", &self.companion.as_ref().map(|s| s.order()))
                .finish(),
            Backing::Series { value, .. } => f
                .debug_struct("AnalyticPart")
                .field("backing", &"series")
                .field("series_order", &value.order())
                .finish(),
        }
    }
}

impl AnalyticPart {
    pub fn closed_form<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Jet + Send + Sync + 'static,
    {
        let f: Evaluator = Arc::new(f);
        let g = f.clone();
        Self::with_evaluators(f, Arc::new(move |z| {
            let j = g(z);
            (j.d1, j.d2)
        }))
    }

    fn with_evaluators(jet: Evaluator, derivatives: DerivativeEvaluator) -> Self {
        Self { backing: Backing::ClosedForm(jet, derivatives), companion: None }
    }

    /// A part known through exact evaluators of `(f', f'')` and the value
    /// `f(0)`. Values are recovered by graded Gauss–Legendre quadrature of `f'`
    /// along the radius `[0, z]`.
    pub fn from_derivatives<F>(value_at_zero: Complex64, d: F) -> Self
    where
        F: Fn(Complex64) -> (Complex64, Complex64) + Send + Sync + 'static,
    {
        let d: DerivativeEvaluator = Arc::new(d);
        let e = d.clone();
        Self::with_evaluators(
            Arc::new(move |z| {
                let (d1, d2) = e(z);
                Jet::new(value_at_zero + radial_integral(|w| e(w).0, z), d1, d2)
            }),
            d,
        )
    }

    pub fn from_series(s: TaylorSeries) -> Self {
        let d1 = s.differentiate();
        let d2 = d1.differentiate();
        Self { backing: Backing::Series { value: s, d1, d2 }, companion: None }
    }

    /// Attaches a companion series to a closed-form part. Ignored for
    /// series-backed parts, which are their own series.
    pub fn with_series(mut self, s: TaylorSeries) -> Self {
        if let Backing::ClosedForm(..) = self.backing {
            self.companion = Some(s);
        }
        self
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::closed_form(move |_| Jet::constant(c))
            .with_series(TaylorSeries::constant(c, POLYNOMIAL_ORDER))
    }

    /// `z ↦ c z`.
    pub fn linear(c: Complex64) -> Self {
        let s = TaylorSeries::identity(POLYNOMIAL_ORDER).scale(c);
        Self::closed_form(move |z| Jet::variable(z).scale(c)).with_series(s)
    }

    pub fn identity() -> Self {
        Self::linear(Complex64::new(1.0, 0.0))
    }

    pub fn is_series_backed(&self) -> bool {
        matches!(self.backing, Backing::Series { .. })
    }

    /// The series this part is backed by or carries, if any.
    pub fn stored_series(&self) -> Option<&TaylorSeries> {
        match &self.backing {
            Backing::Series { value, .. } => Some(value),
            Backing::ClosedForm(..) => self.companion.as_ref(),
        }
    }

    /// Jet without the domain or finiteness checks.
    pub(crate) fn jet_unchecked(&self, z: Complex64) -> Jet {
        match &self.backing {
            Backing::ClosedForm(f, _) => f(z),
            Backing::Series { value, d1, d2 } => Jet::new(value.eval(z), d1.eval(z), d2.eval(z)),
        }
    }

    pub(crate) fn derivatives_unchecked(&self, z: Complex64) -> (Complex64, Complex64) {
        match &self.backing {
            Backing::ClosedForm(_, d) => d(z),
            Backing::Series { d1, d2, .. } => (d1.eval(z), d2.eval(z)),
        }
    }

    /// `(f'(z), f''(z))` without evaluating `f` itself.
    pub fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(z));
        }
        let (d1, d2) = self.derivatives_unchecked(z);
        if !(d1.is_finite() && d2.is_finite()) {
            return Err(Error::Evaluation(z));
        }
        Ok((d1, d2))
    }

    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(z));
        }
        let j = self.jet_unchecked(z);
        if !j.is_finite() {
            return Err(Error::Evaluation(z));
        }
        Ok(j)
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z).map(|j| j.value)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.derivatives(z).map(|d| d.0)
    }

    pub fn second_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.derivatives(z).map(|d| d.1)
    }

    /// Taylor coefficients `c_0..=c_order`.
    ///
    /// Uses the stored series when it is long enough, otherwise extracts the
    /// coefficients with the trapezoidal Cauchy rule.
    pub fn series(&self, order: usize) -> Result<TaylorSeries> {
        if let Some(s) = self.stored_series() {
            if s.order() >= order || self.is_series_backed() {
                return Ok(s.truncate(order));
            }
        }
        coefficients_via_cauchy(
            |z| self.value(z),
            order,
            DEFAULT_EXTRACTION_RADIUS,
            default_sample_count(order),
        )
    }

    /// `a·p + b·q`, evaluated exactly; the companion series is combined when
    /// both operands carry one.
    pub fn linear_combination(a: Complex64, p: &Self, b: Complex64, q: &Self) -> Self {
        let (pp, qq) = (p.clone(), q.clone());
        let (pd, qd) = (p.clone(), q.clone());
        let part = Self::with_evaluators(
            Arc::new(move |z| pp.jet_unchecked(z).scale(a) + qq.jet_unchecked(z).scale(b)),
            Arc::new(move |z| {
                let (p1, p2) = pd.derivatives_unchecked(z);
                let (q1, q2) = qd.derivatives_unchecked(z);
                (a * p1 + b * q1, a * p2 + b * q2)
            }),
        );
        match (p.stored_series(), q.stored_series()) {
            (Some(sp), Some(sq)) => part.with_series(&sp.scale(a) + &sq.scale(b)),
            _ => part,
        }
    }

    /// `self - c`.
    pub fn shifted(&self, c: Complex64) -> Self {
        let (p, q) = (self.clone(), self.clone());
        let part = Self::with_evaluators(
            Arc::new(move |z| {
                let j = p.jet_unchecked(z);
                Jet::new(j.value - c, j.d1, j.d2)
            }),
            Arc::new(move |z| q.derivatives_unchecked(z)),
        );
        match self.stored_series() {
            Some(s) => part.with_series(&s.clone() - &TaylorSeries::constant(c, s.order())),
            None => part,
        }
    }

    /// Exact composition `self ∘ φ_α`, `φ_α(z) = (α + z)/(1 + ᾱz)`. A stored
    /// series is re-expanded at twice its order.
    pub fn precompose_automorphism(&self, alpha: Complex64) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::Domain(alpha));
        }
        let (p, q) = (self.clone(), self.clone());
        let part = Self::with_evaluators(
            Arc::new(move |z| {
                let m = mobius_jet(alpha, z);
                Jet::compose(p.jet_unchecked(m.value), m)
            }),
            Arc::new(move |z| {
                let m = mobius_jet(alpha, z);
                let (d1, d2) = q.derivatives_unchecked(m.value);
                (d1 * m.d1, d2 * m.d1 * m.d1 + d1 * m.d2)
            }),
        );
        match self.stored_series() {
            Some(s) if alpha.norm() > 0.0 => {
                let order = 2 * s.order();
                let re = coefficients_via_cauchy(
                    |z| part.value(z),
                    order,
                    DEFAULT_EXTRACTION_RADIUS,
                    default_sample_count(order),
                )?;
                Ok(part.with_series(re))
            }
            Some(s) => Ok(part.with_series(s.clone())),
            None => Ok(part),
        }
    }

    /// Largest relative discrepancy between the stored derivatives and
    /// fourth-order central differences, over a polar grid with `|z| ≤ r_max`.
    pub fn finite_difference_discrepancy(&self, r_max: f64) -> Result<f64> {
        let step = 1e-3;
        let mut worst: f64 = 0.0;
        for z in polar_grid(8, 16, r_max) {
            let j = self.jet(z)?;
            let fd = |f: &dyn Fn(Complex64) -> Result<Complex64>| -> Result<Complex64> {
                let d = Complex64::new(step, 0.0);
                let near = f(z + d)? - f(z - d)?;
                let far = f(z + 2.0 * d)? - f(z - 2.0 * d)?;
                Ok((8.0 * near - far) / (12.0 * step))
            };
            let d1 = fd(&|w| self.value(w))?;
            let d2 = fd(&|w| self.derivative(w))?;
            let rel = |exact: Complex64, approx: Complex64| {
                (exact - approx).norm() / exact.norm().max(1.0)
            };
            worst = worst.max(rel(j.d1, d1)).max(rel(j.d2, d2));
        }
        Ok(worst)
    }
}

fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(RADIAL_NODES).expect("nonzero")))
        .as_node_weight_pairs()
}

/// `∫₀^z f(w) dw` along the radius, for `f` analytic in the disk.
///
/// The segment is split at `|w| = 1 − 2⁻ʲ`, so every piece is no longer than
/// its distance to the unit circle and Gauss–Legendre converges geometrically
/// however close `z` is to the boundary.
pub fn radial_integral<F>(f: F, z: Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let dir = z / r;
    let mut total = Complex64::new(0.0, 0.0);
    let mut a = 0.0;
    let mut j = 1;
    while a < r {
        let b = (1.0 - 0.5f64.powi(j)).min(r);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut piece = Complex64::new(0.0, 0.0);
        for &(x, w) in gauss_legendre() {
            piece += w * f(dir * (mid + half * x));
        }
        total += piece * half;
        a = b;
        j += 1;
    }
    total * dir
}

/// `f'(z)` by the trapezoidal Cauchy rule on the circle of radius
/// `(1 − |z|)/2` about `z`; the error decays like `2^{−CONTOUR_NODES}`
/// relative to the size of `f` on the circle.
pub fn contour_derivative<F>(f: F, z: Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let rho = 0.5 * (1.0 - z.norm());
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CONTOUR_NODES {
        let e = Complex64::from_polar(1.0, TAU * k as f64 / CONTOUR_NODES as f64);
        acc += f(z + rho * e) / e;
    }
    acc / (rho * CONTOUR_NODES as f64)
}

/// Jet of the disk automorphism `φ_α` at `z`.
pub fn mobius_jet(alpha: Complex64, z: Complex64) -> Jet {
    let one = Complex64::new(1.0, 0.0);
    let den = one + alpha.conj() * z;
    let k = 1.0 - alpha.norm_sqr();
    Jet::new(
        (alpha + z) / den,
        k / (den * den),
        -2.0 * alpha.conj() * k / (den * den * den),
    )
}

/// `n_r × n_θ` polar grid with radii `r_max·i/n_r`, `i = 1..=n_r`.
pub fn polar_grid(n_r: usize, n_theta: usize, r_max: f64) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(n_r * n_theta);
    for i in 1..=n_r {
        let r = r_max * i as f64 / n_r as f64;
        for j in 0..n_theta {
            pts.push(Complex64::from_polar(r, TAU * j as f64 / n_theta as f64));
        }
    }
    pts
}

/// Grid on which declared flags are validated: 64 × 64 polar points with
/// `r ≤ 1 − 2⁻¹⁰`.
pub fn validation_grid() -> Vec<Complex64> {
    polar_grid(64, 64, 1.0 - 2f64.powi(-10))
}

/// Normalization class of a univalent sense-preserving mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum NormClass {
    None,
    /// `h(0) = 0`, `h'(0) = 1`.
    SH,
    /// `S_H` with additionally `g'(0) = 0`.
    SH0,
}

/// `f = h + conj(g)` with declared properties.
#[derive(Debug, Clone)]
pub struct HarmonicMapping {
    pub name: String,
    pub h: AnalyticPart,
    pub g: AnalyticPart,
    pub sense_preserving: bool,
    pub univalent: bool,
    pub class: NormClass,
}

impl HarmonicMapping {
    /// A mapping with no declared properties.
    pub fn new(name: impl Into<String>, h: AnalyticPart, g: AnalyticPart) -> Self {
        Self {
            name: name.into(),
            h,
            g,
            sense_preserving: false,
            univalent: false,
            class: NormClass::None,
        }
    }

    /// Analytic mapping `f = h`.
    pub fn analytic(name: impl Into<String>, h: AnalyticPart) -> Self {
        Self::new(name, h, AnalyticPart::zero())
    }

    pub fn declare(mut self, sense_preserving: bool, univalent: bool, class: NormClass) -> Self {
        self.sense_preserving = sense_preserving;
        self.univalent = univalent;
        self.class = class;
        self
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.value(z)? + self.g.value(z)?.conj())
    }

    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        Ok(self.h.derivative(z)?.norm_sqr() - self.g.derivative(z)?.norm_sqr())
    }

    /// `(1 − |z|²) √|J_f(z)|`, the field whose supremum is `β(f)`.
    pub fn bloch_density(&self, z: Complex64) -> Result<f64> {
        Ok((1.0 - z.norm_sqr()) * self.jacobian(z)?.abs().sqrt())
    }

    pub fn dilatation_at(&self, z: Complex64) -> Result<Complex64> {
        let hp = self.h.derivative(z)?;
        if hp.norm() == 0.0 {
            return Err(Error::BranchPoint(z));
        }
        Ok(self.g.derivative(z)? / hp)
    }

    /// `P_f = h''/h' − conj(ω) ω' / (1 − |ω|²)`.
    pub fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let (om, om_d) = Dilatation::of(self).eval(z)?;
        let (h1, h2) = self.h.derivatives(z)?;
        let denom = 1.0 - om.norm_sqr();
        if denom <= 0.0 {
            return Err(Error::Singularity(z));
        }
        Ok(h2 / h1 - om.conj() * om_d / denom)
    }

    pub fn dilatation(&self) -> Dilatation {
        Dilatation::of(self)
    }

    /// `b_1 = g'(0)`.
    pub fn b1(&self) -> Result<Complex64> {
        self.g.derivative(Complex64::new(0.0, 0.0))
    }

    /// Checks every declared flag on [`validation_grid`].
    pub fn validate(&self) -> Result<()> {
        let zero = Complex64::new(0.0, 0.0);
        if self.class != NormClass::None {
            let h = self.h.jet(zero)?;
            if h.value.norm() > NORMALIZATION_TOL || (h.d1 - 1.0).norm() > NORMALIZATION_TOL {
                return Err(Error::Contract(format!(
                    "{}: h(0) = {}, h'(0) = {} violate the S_H normalization",
                    self.name, h.value, h.d1
                )));
            }
            if self.class == NormClass::SH0 && self.b1()?.norm() > NORMALIZATION_TOL {
                return Err(Error::Contract(format!("{}: g'(0) != 0 in S_H0", self.name)));
            }
        }
        if self.sense_preserving {
            for z in validation_grid() {
                if self.g.derivative(z)?.norm() >= self.h.derivative(z)?.norm() {
                    return Err(Error::NotSensePreserving(z));
                }
            }
        }
        Ok(())
    }
}

/// Builds `f = h + conj(g)` with `g(0) = 0` and `g' = ω h'`.
///
/// `g'` and `g''` are evaluated exactly from `ω` and `h`; the companion series
/// of `g` comes from series extraction, Cauchy product and integration.
pub fn from_h_and_dilatation(
    name: impl Into<String>,
    h: AnalyticPart,
    omega: &AnalyticPart,
    order: usize,
) -> Result<HarmonicMapping> {
    for z in validation_grid() {
        if omega.value(z)?.norm() >= 1.0 {
            return Err(Error::NotSelfMap(z));
        }
    }
    let hp = h.series(order + 1)?.differentiate();
    let w = omega.series(order)?;
    let series = (&w * &hp).integrate(Complex64::new(0.0, 0.0));
    let (hh, ww) = (h.clone(), omega.clone());
    let g = AnalyticPart::from_derivatives(Complex64::new(0.0, 0.0), move |z| {
        let (h1, h2) = hh.derivatives_unchecked(z);
        let wj = ww.jet_unchecked(z);
        (wj.value * h1, wj.d1 * h1 + wj.value * h2)
    })
    .with_series(series);
    Ok(HarmonicMapping::new(name, h, g).declare(
        true,
        false,
        NormClass::None,
    ))
}

/// An analytic self-map of the disk, either the dilatation `g'/h'` of a
/// mapping or a standalone function.
#[derive(Debug, Clone)]
pub enum Dilatation {
    Ratio { h: AnalyticPart, g: AnalyticPart },
    SelfMap(AnalyticPart),
}

impl Dilatation {
    pub fn of(f: &HarmonicMapping) -> Self {
        Dilatation::Ratio { h: f.h.clone(), g: f.g.clone() }
    }

    pub fn self_map(w: AnalyticPart) -> Self {
        Dilatation::SelfMap(w)
    }

    /// `(ω(z), ω'(z))`. For a ratio, `ω' = (g''h' − g'h'')/h'²` from exact
    /// derivatives.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match self {
            Dilatation::Ratio { h, g } => {
                let (h1, h2) = h.derivatives(z)?;
                let (g1, g2) = g.derivatives(z)?;
                if h1.norm() == 0.0 {
                    return Err(Error::BranchPoint(z));
                }
                let om = g1 / h1;
                let om_d = (g2 * h1 - g1 * h2) / (h1 * h1);
                Ok((om, om_d))
            }
            Dilatation::SelfMap(w) => {
                let j = w.jet(z)?;
                Ok((j.value, j.d1))
            }
        }
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z).map(|(w, _)| w)
    }

    /// `c_0 = ω(0)`.
    pub fn c0(&self) -> Result<Complex64> {
        self.value(Complex64::new(0.0, 0.0))
    }
}

/// `ω*(z) = ω'(z)(1 − |z|²)/(1 − |ω(z)|²)`.
pub fn hyperbolic_derivative(w: &Dilatation, z: Complex64) -> Result<Complex64> {
    let (om, om_d) = w.eval(z)?;
    let denom = 1.0 - om.norm_sqr();
    if denom <= 0.0 {
        return Err(Error::Singularity(z));
    }
    Ok(om_d * (1.0 - z.norm_sqr()) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> Complex64 {
        c(1.0, 0.0)
    }

    fn ex23_h() -> AnalyticPart {
        AnalyticPart::closed_form(|z| {
            let u = Complex64::new(1.0, 0.0) - z;
            Jet::new(2.0 * u.powf(-0.5), u.powf(-1.5), 1.5 * u.powf(-2.5))
        })
    }

    fn ex23() -> HarmonicMapping {
        let h = ex23_h();
        let g = AnalyticPart::closed_form(|z| {
            let u = Complex64::new(1.0, 0.0) - z;
            Jet::new(
                2.0 * u.powf(-0.5) + 2.0 * u.powf(0.5) - 4.0,
                z * u.powf(-1.5),
                u.powf(-1.5) + 1.5 * z * u.powf(-2.5),
            )
        });
        HarmonicMapping::new("ex23", h, g).declare(true, false, NormClass::None)
    }

    fn koebe() -> HarmonicMapping {
        let h = AnalyticPart::closed_form(|z| {
            let u = Complex64::new(1.0, 0.0) - z;
            Jet::new(z / (u * u), (1.0 + z) / (u * u * u), (4.0 + 2.0 * z) / (u * u * u * u))
        });
        HarmonicMapping::analytic("koebe", h).declare(true, true, NormClass::SH)
    }

    fn shear(b: Complex64) -> HarmonicMapping {
        HarmonicMapping::new("shear", AnalyticPart::identity(), AnalyticPart::linear(b))
    }

    #[test]
    fn evaluate_examples() {
        let id = HarmonicMapping::analytic("id", AnalyticPart::identity());
        assert_eq!(id.evaluate(c(0.3, 0.1)).unwrap(), c(0.3, 0.1));

        let h = ex23_h();
        let f = HarmonicMapping::new("ex22-like", h.clone(), h);
        let w = f.evaluate(c(0.2, -0.4)).unwrap();
        assert!(w.im.abs() < 1e-15);

        let s = shear(c(0.5, 0.0));
        assert!((s.evaluate(c(0.0, 1.0 - 1e-12)).unwrap() - c(0.0, 0.5)).norm() < 1e-11);
        assert!(matches!(s.evaluate(c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn jacobian_examples() {
        let id = HarmonicMapping::analytic("id", AnalyticPart::identity());
        assert_eq!(id.jacobian(c(0.4, 0.4)).unwrap(), 1.0);
        let h = ex23_h();
        let f = HarmonicMapping::new("g=h", h.clone(), h);
        assert_eq!(f.jacobian(c(0.7, 0.1)).unwrap(), 0.0);
        assert!((ex23().jacobian(c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobian_factorizes_through_dilatation() {
        let f = ex23();
        for z in polar_grid(6, 12, 0.95) {
            let hp = f.h.derivative(z).unwrap();
            let w = f.dilatation_at(z).unwrap();
            let lhs = f.jacobian(z).unwrap();
            let rhs = hp.norm_sqr() * (1.0 - w.norm_sqr());
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300));
        }
    }

    #[test]
    fn dilatation_examples() {
        let k = koebe();
        assert_eq!(k.dilatation_at(c(0.3, 0.2)).unwrap(), c(0.0, 0.0));
        let f = ex23();
        let z = c(0.25, -0.6);
        assert!((f.dilatation_at(z).unwrap() - z).norm() < 1e-14);
        let crit = HarmonicMapping::analytic("z^2", AnalyticPart::from_series(
            TaylorSeries::from_real(&[0.0, 0.0, 1.0]).unwrap(),
        ));
        assert!(matches!(crit.dilatation_at(c(0.0, 0.0)), Err(Error::BranchPoint(_))));
    }

    #[test]
    fn pre_schwarzian_examples() {
        assert!((koebe().pre_schwarzian(c(0.0, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-14);
        assert!((ex23().pre_schwarzian(c(0.0, 0.0)).unwrap() - c(1.5, 0.0)).norm() < 1e-14);

        // Constant dilatation: P_f = h''/h'.
        let h = koebe().h;
        let g = AnalyticPart::linear_combination(c(0.3, 0.1), &h, c(0.0, 0.0), &h);
        let f = HarmonicMapping::new("const-w", h.clone(), g);
        let z = c(0.1, 0.5);
        let j = h.jet(z).unwrap();
        assert!((f.pre_schwarzian(z).unwrap() - j.d2 / j.d1).norm() < 1e-12);
    }

    #[test]
    fn hyperbolic_derivative_examples() {
        let id = Dilatation::self_map(AnalyticPart::identity());
        assert!((hyperbolic_derivative(&id, c(0.3, -0.5)).unwrap() - one()).norm() < 1e-15);
        let k = Dilatation::self_map(AnalyticPart::constant(c(0.4, 0.0)));
        assert_eq!(hyperbolic_derivative(&k, c(0.3, 0.1)).unwrap(), c(0.0, 0.0));
        let sq = Dilatation::self_map(AnalyticPart::from_series(
            TaylorSeries::from_real(&[0.0, 0.0, 1.0]).unwrap(),
        ));
        assert!((hyperbolic_derivative(&sq, c(0.5, 0.0)).unwrap() - c(0.8, 0.0)).norm() < 1e-15);
        let bad = Dilatation::self_map(AnalyticPart::constant(one()));
        assert!(matches!(hyperbolic_derivative(&bad, c(0.1, 0.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn from_h_and_dilatation_examples() {
        let zero = AnalyticPart::zero();
        let f = from_h_and_dilatation("f", koebe().h, &zero, 32).unwrap();
        assert!(f.g.series(32).unwrap().max_abs() == 0.0);

        let cst = c(0.25, -0.5);
        let f = from_h_and_dilatation("f", AnalyticPart::identity(), &AnalyticPart::constant(cst), 16)
            .unwrap();
        let z = c(0.3, 0.4);
        assert!((f.g.value(z).unwrap() - cst * z).norm() < 1e-15);

        // g = 2(1-z)^{-1/2} + 2(1-z)^{1/2} - 4.
        let h = ex23_h();
        let f = from_h_and_dilatation("f", h, &AnalyticPart::identity(), 64).unwrap();
        for z in [c(0.1, 0.2), c(-0.3, 0.0), c(0.0, -0.4)] {
            let u = one() - z;
            let exact = 2.0 * u.powf(-0.5) + 2.0 * u.powf(0.5) - 4.0;
            assert!((f.g.value(z).unwrap() - exact).norm() < 1e-12);
        }

        let not_self = AnalyticPart::constant(c(1.2, 0.0));
        assert!(matches!(
            from_h_and_dilatation("f", AnalyticPart::identity(), &not_self, 8),
            Err(Error::NotSelfMap(_))
        ));
    }

    #[test]
    fn closed_forms_pass_finite_differences() {
        assert!(ex23_h().finite_difference_discrepancy(0.9).unwrap() < 1e-6);
        assert!(koebe().h.finite_difference_discrepancy(0.9).unwrap() < 1e-6);
        let wrong = AnalyticPart::closed_form(|z| Jet::new(z * z, z, Complex64::new(2.0, 0.0)));
        assert!(wrong.finite_difference_discrepancy(0.9).unwrap() > 1e-2);
    }

    #[test]
    fn validation_catches_bad_flags() {
        let k = koebe();
        assert!(k.validate().is_ok());
        let s = shear(c(1.5, 0.0)).declare(true, false, NormClass::None);
        assert!(matches!(s.validate(), Err(Error::NotSensePreserving(_))));
        let f = ex23().declare(true, false, NormClass::SH);
        assert!(matches!(f.validate(), Err(Error::Contract(_))));
    }

    #[test]
    fn precomposition_matches_direct_evaluation() {
        let alpha = c(0.4, -0.2);
        let h = ex23_h();
        let hc = h.precompose_automorphism(alpha).unwrap();
        let z = c(0.3, 0.5);
        let m = mobius_jet(alpha, z);
        let direct = h.jet(m.value).unwrap();
        let j = hc.jet(z).unwrap();
        assert!((j.value - direct.value).norm() < 1e-13);
        assert!((j.d1 - direct.d1 * m.d1).norm() < 1e-13);
        assert!(hc.finite_difference_discrepancy(0.9).unwrap() < 1e-6);
    }

    #[test]
    fn series_backing_is_consistent() {
        let s = TaylorSeries::binomial(0.5, 64).scale(c(2.0, 0.0));
        let p = AnalyticPart::from_series(s);
        let exact = ex23_h();
        for z in polar_grid(4, 8, 0.5) {
            let a = p.jet(z).unwrap();
            let b = exact.jet(z).unwrap();
            assert!((a.d1 - b.d1).norm() < 1e-8 * b.d1.norm());
            assert!((a.d2 - b.d2).norm() < 1e-8 * b.d2.norm());
        }
    }

    #[test]
    fn radial_quadrature_near_boundary() {
        // ∫₀^z (1 − w)^{-2} dw = z/(1 − z), even with z a hair from 1.
        for z in [c(0.3, 0.4), c(1.0 - 1e-6, 0.0), Complex64::from_polar(1.0 - 2f64.powi(-20), 0.01)] {
            let exact = z / (one() - z);
            let q = radial_integral(|w| 1.0 / ((one() - w) * (one() - w)), z);
            // `1 − w` loses digits like ε/(1 − |z|), whatever the rule.
            let tol = 1e-13 / (1.0 - z.norm());
            assert!((q - exact).norm() <= tol * exact.norm(), "{z}: {q} vs {exact}");
        }
    }

    #[test]
    fn contour_derivative_matches_exact() {
        for z in [c(0.0, 0.0), c(0.5, -0.3), c(0.999, 0.0)] {
            let d = contour_derivative(|w| (one() - w).powf(-1.5), z);
            let exact = 1.5 * (one() - z).powf(-2.5);
            assert!((d - exact).norm() <= 1e-12 * exact.norm(), "{z}");
        }
    }

    #[test]
    fn derivative_backed_part() {
        let p = AnalyticPart::from_derivatives(c(1.0, 0.0), |z| {
            let u = one() - z;
            (1.0 / (u * u), 2.0 / (u * u * u))
        });
        let z = c(-0.4, 0.7);
        let j = p.jet(z).unwrap();
        assert!((j.value - (one() + z / (one() - z))).norm() < 1e-13);
        assert_eq!(p.derivatives(z).unwrap(), (j.d1, j.d2));
        assert!(p.finite_difference_discrepancy(0.9).unwrap() < 1e-6);
    }
}
