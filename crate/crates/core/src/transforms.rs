//! Structural transformations of harmonic mappings and the Becker-type
//! univalence margin.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{
    analytic_bloch_seminorm, bloch_type_seminorm, hyperbolic_norm, sup_disk, GridSpec,
    SupEstimate, SCAN_INFLATION,
};
use crate::mapping::{
    contour_derivative, from_h_and_dilatation, mobius_jet, validation_grid, AnalyticPart,
    Dilatation, HarmonicMapping, Jet, NormClass, NORMALIZATION_TOL,
};

/// Upper bound that the seminorm of a forward construction must respect.
pub const FORWARD_BOUND: f64 = 101.0;

/// Slack on the hyperbolic-norm hypothesis of the inverse construction.
pub const HYPOTHESIS_TOL: f64 = 1e-9;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `φ_α(z) = (α + z)/(1 + ᾱz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskAutomorphism {
    alpha: Complex64,
}

impl DiskAutomorphism {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::Domain(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.jet(z).value
    }

    pub fn jet(&self, z: Complex64) -> Jet {
        mobius_jet(self.alpha, z)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BeckerCertificate {
    /// Sampled supremum of `(1 − |z|²)(|z P_F| + |z ω'|/(1 − |ω|²))`.
    pub margin: f64,
    pub passes: bool,
    pub worst_z: Complex64,
}

/// `F = a f + b conj(f)`, whose analytic parts are `(a h + b g, ā g + b̄ h)`.
pub fn affine_shear(f: &HarmonicMapping, a: Complex64, b: Complex64) -> HarmonicMapping {
    let h = AnalyticPart::linear_combination(a, &f.h, b, &f.g);
    let g = AnalyticPart::linear_combination(a.conj(), &f.g, b.conj(), &f.h);
    let (ma, mb) = (a.norm(), b.norm());
    HarmonicMapping::new(format!("shear({}; {a}, {b})", f.name), h, g).declare(
        f.sense_preserving && ma > mb,
        f.univalent && ma != mb,
        NormClass::None,
    )
}

/// `f ∘ φ_α`.
pub fn precompose_automorphism(f: &HarmonicMapping, phi: &DiskAutomorphism) -> Result<HarmonicMapping> {
    let alpha = phi.alpha();
    let h = f.h.precompose_automorphism(alpha)?;
    let g = f.g.precompose_automorphism(alpha)?;
    let class = if alpha == zero() { f.class } else { NormClass::None };
    Ok(HarmonicMapping::new(format!("{}∘φ[{alpha}]", f.name), h, g).declare(
        f.sense_preserving,
        f.univalent,
        class,
    ))
}

fn require_normalized(f: &HarmonicMapping) -> Result<()> {
    if f.class == NormClass::None {
        return Err(Error::Hypothesis(format!("{} is not declared in S_H", f.name)));
    }
    Ok(())
}

/// `f₀ = (f − conj(b₁) conj(f))/(1 − |b₁|²)`, which lies in `S_H⁰`.
pub fn affine_normalize(f: &HarmonicMapping) -> Result<HarmonicMapping> {
    require_normalized(f)?;
    let b1 = f.b1()?;
    let k = 1.0 - b1.norm_sqr();
    if !(b1.norm() < 1.0) {
        return Err(Error::NotSensePreserving(zero()));
    }
    if f.class == NormClass::SH0 || b1 == zero() {
        let mut same = f.clone();
        same.class = NormClass::SH0;
        return Ok(same);
    }
    let mut f0 = affine_shear(f, Complex64::new(1.0 / k, 0.0), -b1.conj() / k);
    f0.name = format!("normalized({})", f.name);
    Ok(f0.declare(f.sense_preserving, f.univalent, NormClass::SH0))
}

/// `T(z) = (f(φ_α(z)) − f(α)) / ((1 − |α|²) h'(α))`, again in `S_H`.
pub fn koebe_transform(f: &HarmonicMapping, alpha: Complex64) -> Result<HarmonicMapping> {
    require_normalized(f)?;
    let phi = DiskAutomorphism::new(alpha)?;
    let hp = f.h.derivative(alpha)?;
    if hp.norm() == 0.0 {
        return Err(Error::CriticalPoint(alpha));
    }
    let d = (1.0 - alpha.norm_sqr()) * hp;
    let zero_part = AnalyticPart::zero();
    let transform = |p: &AnalyticPart, scale: Complex64| -> Result<AnalyticPart> {
        let shifted = p.precompose_automorphism(phi.alpha())?.shifted(p.value(alpha)?);
        Ok(AnalyticPart::linear_combination(scale, &shifted, zero(), &zero_part))
    };
    let h = transform(&f.h, 1.0 / d)?;
    let g = transform(&f.g, 1.0 / d.conj())?;
    Ok(HarmonicMapping::new(format!("koebe_transform({}; {alpha})", f.name), h, g).declare(
        f.sense_preserving,
        f.univalent,
        NormClass::SH,
    ))
}

/// `a₂(α) = (1 − |α|²) h''(α)/(2h'(α)) − ᾱ`, the second coefficient of the
/// analytic part of [`koebe_transform`].
pub fn koebe_second_coefficient(f: &HarmonicMapping, alpha: Complex64) -> Result<Complex64> {
    let (h1, h2) = f.h.derivatives(alpha)?;
    if h1.norm() == 0.0 {
        return Err(Error::CriticalPoint(alpha));
    }
    Ok((1.0 - alpha.norm_sqr()) * h2 / (2.0 * h1) - alpha.conj())
}

#[derive(Debug, Clone)]
pub struct ForwardConstruction {
    pub mapping: HarmonicMapping,
    pub beta: SupEstimate,
}

/// `f = h + conj(g)` with `h = log H'` and `g' = ω h'`, for univalent
/// sense-preserving `H`. The seminorm scan of `f` must stay below
/// [`FORWARD_BOUND`].
pub fn pommerenke_forward(
    big_h: &HarmonicMapping,
    omega: &AnalyticPart,
    order: usize,
    spec: &GridSpec,
) -> Result<ForwardConstruction> {
    if !(big_h.univalent && big_h.sense_preserving) {
        return Err(Error::Contract(format!(
            "{} must be declared univalent and sense-preserving",
            big_h.name
        )));
    }
    for z in std::iter::once(zero()).chain(validation_grid()) {
        if big_h.h.derivative(z)?.norm() == 0.0 {
            return Err(Error::BranchPoint(z));
        }
    }
    let series = big_h.h.series(order + 1)?.differentiate().log_series()?;
    let hh = big_h.h.clone();
    let log_derivative = move |z: Complex64| {
        let (d1, d2) = hh.derivatives_unchecked(z);
        d2 / d1
    };
    let h = AnalyticPart::from_derivatives(big_h.h.derivative(zero())?.ln(), move |z| {
        (log_derivative(z), contour_derivative(&log_derivative, z))
    })
    .with_series(series);
    let mapping = from_h_and_dilatation(format!("log_derivative({})", big_h.name), h, omega, order)?;
    let beta = bloch_type_seminorm(&mapping, spec)?;
    if !(beta.value < FORWARD_BOUND) {
        return Err(Error::Contract(format!(
            "seminorm scan {} reached the bound {FORWARD_BOUND}",
            beta.value
        )));
    }
    Ok(ForwardConstruction { mapping, beta })
}

#[derive(Debug, Clone)]
pub struct InverseConstruction {
    pub mapping: HarmonicMapping,
    pub certificate: BeckerCertificate,
    /// `c = √(β(g)² + β(f)²)`, inflated by [`SCAN_INFLATION`].
    pub c: f64,
    pub beta_f: SupEstimate,
    pub beta_g: SupEstimate,
    pub omega_norm: SupEstimate,
}

/// `F = H + conj(G)` with `H = ∫ exp((ε/c) h)` and dilatation `ω`.
///
/// Requires finite `β(f)` and `β(g)` and `‖ω‖_h ≤ (1 − ε)/2`; the result must
/// pass the Becker margin.
pub fn pommerenke_inverse(
    f: &HarmonicMapping,
    eps: f64,
    omega: &AnalyticPart,
    order: usize,
    spec: &GridSpec,
) -> Result<InverseConstruction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} is not in (0, 1)")));
    }
    let omega_norm = hyperbolic_norm(&Dilatation::self_map(omega.clone()), spec)?;
    let limit = 0.5 * (1.0 - eps);
    if omega_norm.value > limit + HYPOTHESIS_TOL {
        return Err(Error::Hypothesis(format!(
            "hyperbolic norm of ω is {} > (1 − ε)/2 = {limit}",
            omega_norm.value
        )));
    }
    let beta_f = bloch_type_seminorm(f, spec)?;
    if beta_f.diverged {
        return Err(Error::Hypothesis(format!("β({}) diverges", f.name)));
    }
    let beta_g = analytic_bloch_seminorm(&f.g, spec)?;
    if beta_g.diverged {
        return Err(Error::Hypothesis(format!("the co-analytic part of {} is not Bloch", f.name)));
    }
    let c = beta_f.value.hypot(beta_g.value) * SCAN_INFLATION;
    let s = if c > 0.0 { eps / c } else { 0.0 };

    let hh = f.h.clone();
    let big_h = AnalyticPart::from_derivatives(zero(), move |z| {
        let j = hh.jet_unchecked(z);
        let e = (s * j.value).exp();
        (e, s * j.d1 * e)
    })
    .with_series(
        f.h.series(order)?.scale(Complex64::new(s, 0.0)).exp_series().integrate(zero()),
    );
    let mut mapping = from_h_and_dilatation(format!("inverse({}; ε={eps})", f.name), big_h, omega, order)?;
    let certificate = becker_margin(&mapping, spec)?;
    if !certificate.passes {
        return Err(Error::Contract(format!(
            "Becker margin {} exceeds 1 at {}",
            certificate.margin, certificate.worst_z
        )));
    }
    let hp0 = mapping.h.derivative(zero())?;
    mapping.class = if (hp0 - 1.0).norm() > NORMALIZATION_TOL {
        NormClass::None
    } else if mapping.b1()?.norm() > NORMALIZATION_TOL {
        NormClass::SH
    } else {
        NormClass::SH0
    };
    mapping.univalent = true;
    Ok(InverseConstruction { mapping, certificate, c, beta_f, beta_g, omega_norm })
}

/// Sampled supremum of the Becker left-hand side times `(1 − |z|²)`.
pub fn becker_margin(f: &HarmonicMapping, spec: &GridSpec) -> Result<BeckerCertificate> {
    for z in validation_grid() {
        if f.jacobian(z)? <= 0.0 {
            return Err(Error::NotSensePreserving(z));
        }
    }
    let reversal: OnceLock<Complex64> = OnceLock::new();
    let dil = f.dilatation();
    let est = sup_disk(
        |z| {
            let (om, om_d) = dil.eval(z)?;
            let denom = 1.0 - om.norm_sqr();
            if denom <= 0.0 {
                let _ = reversal.set(z);
                return Err(Error::NotSensePreserving(z));
            }
            let (h1, h2) = f.h.derivatives(z)?;
            let p = h2 / h1 - om.conj() * om_d / denom;
            Ok((1.0 - z.norm_sqr()) * ((z * p).norm() + (z * om_d).norm() / denom))
        },
        spec,
    )?;
    if let Some(&z) = reversal.get() {
        return Err(Error::NotSensePreserving(z));
    }
    Ok(BeckerCertificate { margin: est.value, passes: est.value <= 1.0, worst_z: est.argmax })
}

/// `(c₀ + r)/(1 + c₀ r)`, the Schwarz–Pick bound on `|ω(z)|` at `|z| = r`.
pub fn schwarz_pick_bound(c0_mod: f64, r: f64) -> Result<f64> {
    for x in [c0_mod, r] {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Domain(Complex64::new(x, 0.0)));
        }
    }
    Ok((c0_mod + r) / (1.0 + c0_mod * r))
}
