//! Truncated complex power series and Taylor-coefficient extraction.
//!
//! A [`TaylorSeries`] of order `N` stores `c_0..=c_N`. Binary arithmetic first
//! truncates both operands to the smaller order, so a result never carries
//! coefficients that were not actually computed.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Series order used when nothing else is requested.
pub const DEFAULT_ORDER: usize = 64;

/// Radius used to extract coefficients from evaluator-only functions.
///
/// Large enough that `r^{-n}` does not amplify rounding at `n ≈ 128`.
pub const DEFAULT_EXTRACTION_RADIUS: f64 = 0.9;

/// Default number of circle samples for [`coefficients_via_cauchy`].
pub fn default_sample_count(n_max: usize) -> usize {
    (8 * n_max).max(256)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// Builds a series from `c_0..=c_N`. Fails on an empty list or a non-finite
    /// coefficient.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least c_0".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("coefficient {k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series of `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Coefficients of `(1 - z)^{-alpha}` on the principal branch.
    pub fn binomial(alpha: f64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = 1.0;
        for n in 0..=order {
            coeffs.push(Complex64::new(c, 0.0));
            c *= (alpha + n as f64) / (n as f64 + 1.0);
        }
        Self { coeffs }
    }

    /// Coefficients of `1 / (1 - q z)`.
    pub fn geometric(q: Complex64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = Complex64::new(1.0, 0.0);
        for _ in 0..=order {
            coeffs.push(c);
            c *= q;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `k`, or zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn cauchy_product(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        Self { coeffs }
    }

    /// Term-wise derivative. Order drops by one; an order-0 series yields the
    /// order-0 zero series.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k as f64 + 1.0))
            .collect();
        Self { coeffs }
    }

    /// Antiderivative with constant term `c0`. Order rises by one.
    pub fn integrate(&self, c0: Complex64) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(c0);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)));
        Self { coeffs }
    }

    /// Series of `exp ∘ a` from the recurrence `b' = a' b`.
    pub fn exp_series(&self) -> Self {
        let a = &self.coeffs;
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(a[0].exp());
        for k in 1..=n {
            let s: Complex64 = (1..=k).map(|j| a[j] * j as f64 * b[k - j]).sum();
            b.push(s / k as f64);
        }
        Self { coeffs: b }
    }

    /// Principal-branch series of `log ∘ a` from `a b' = a'`.
    pub fn log_series(&self) -> Result<Self> {
        let a = &self.coeffs;
        if a[0].norm() == 0.0 {
            return Err(Error::BranchPoint(Complex64::new(0.0, 0.0)));
        }
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(a[0].ln());
        for k in 1..=n {
            let s: Complex64 = (1..k).map(|j| b[j] * j as f64 * a[k - j]).sum();
            b.push((a[k] * k as f64 - s) / (a[0] * k as f64));
        }
        Ok(Self { coeffs: b })
    }

    /// Largest coefficient modulus, used for tolerance scaling.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &TaylorSeries {
    type Output = TaylorSeries;

    fn add(self, rhs: &TaylorSeries) -> TaylorSeries {
        let n = self.order().min(rhs.order());
        TaylorSeries { coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect() }
    }
}

impl Sub for &TaylorSeries {
    type Output = TaylorSeries;

    fn sub(self, rhs: &TaylorSeries) -> TaylorSeries {
        let n = self.order().min(rhs.order());
        TaylorSeries { coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect() }
    }
}

impl Mul for &TaylorSeries {
    type Output = TaylorSeries;

    fn mul(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.cauchy_product(rhs)
    }
}

impl Neg for &TaylorSeries {
    type Output = TaylorSeries;

    fn neg(self) -> TaylorSeries {
        TaylorSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// `e^{2πik/m}` for `k < m`. Angles are reduced to the first octant and
/// reflected, so nodes and twiddles share one table and the rounding of `2π`
/// does not drift linearly around the circle (that drift sets a floor of
/// about `ε r^{-n}` on extracted coefficients).
pub fn roots_of_unity(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| {
            // 8k = octant·m + rem, reduced in integers so k and m − k meet
            // the same angle.
            let octant = 8 * k / m;
            let rem = 8 * k - octant * m;
            let num = if octant.is_multiple_of(2) { rem } else { m - rem };
            let (s, c) = if num == m {
                (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
            } else {
                (FRAC_PI_4 * num as f64 / m as f64).sin_cos()
            };
            let (re, im) = match octant {
                0 => (c, s),
                1 => (s, c),
                2 => (-s, c),
                3 => (-c, s),
                4 => (-c, -s),
                5 => (-s, -c),
                6 => (s, -c),
                _ => (c, -s),
            };
            Complex64::new(re, im)
        })
        .collect()
}

/// Extracts `c_0..=c_{n_max}` of `f` by the trapezoidal rule on `|z| = r`:
/// `c_n ≈ (1 / (m rⁿ)) Σ_k f(r e^{iθ_k}) e^{-inθ_k}`, `θ_k = 2πk/m`.
///
/// Spectrally accurate for functions analytic on a neighbourhood of the
/// closed disk of radius `r`.
pub fn coefficients_via_cauchy<F>(f: F, n_max: usize, r: f64, m: usize) -> Result<TaylorSeries>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("extraction radius {r} not in (0, 1)")));
    }
    if m < 4 * n_max.max(1) {
        return Err(Error::InvalidArgument(format!(
            "{m} samples are too few for {n_max} coefficients (need at least 4 per coefficient)"
        )));
    }
    let roots = roots_of_unity(m);
    let mut samples = Vec::with_capacity(m);
    for w in &roots {
        let z = w * r;
        let v = f(z)?;
        if !v.is_finite() {
            return Err(Error::Evaluation(z));
        }
        samples.push(v);
    }
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, v) in samples.iter().enumerate() {
            acc += v * roots[(n * k) % m].conj();
        }
        coeffs.push(acc / (m as f64 * r.powi(n as i32)));
    }
    TaylorSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &TaylorSeries, b: &TaylorSeries, tol: f64) -> bool {
        a.order() == b.order()
            && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn product_identity_factor() {
        let ones = TaylorSeries::from_real(&[1.0; 6]).unwrap();
        let one = TaylorSeries::constant(c(1.0), 5);
        assert_eq!(&ones * &one, ones);
    }

    #[test]
    fn product_of_one_plus_z() {
        let a = TaylorSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let p = &a * &a;
        assert_eq!(p, TaylorSeries::from_real(&[1.0, 2.0, 1.0]).unwrap());
    }

    #[test]
    fn product_truncates_to_smaller_order() {
        let a = TaylorSeries::from_real(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        let b = TaylorSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
    }

    #[test]
    fn inverse_sqrt_squared_is_geometric() {
        // Independent oracle: binomial coefficients of (1-z)^{-1/2} by the
        // explicit product formula (2n)! / (4^n (n!)^2).
        let n = 30;
        let oracle: Vec<f64> = (0..=n)
            .map(|k| {
                let mut v = 1.0;
                for j in 1..=k {
                    v *= (2 * j - 1) as f64 / (2 * j) as f64;
                }
                v
            })
            .collect();
        let a = TaylorSeries::from_real(&oracle).unwrap();
        let sq = &a * &a;
        for k in 0..=n {
            assert!((sq.coeff(k) - c(1.0)).norm() < 1e-12, "k = {k}");
        }
        assert!(close(&a, &TaylorSeries::binomial(0.5, n), 1e-14));
    }

    #[test]
    fn differentiate_examples() {
        let z = TaylorSeries::identity(3);
        assert_eq!(z.differentiate(), TaylorSeries::from_real(&[1.0, 0.0, 0.0]).unwrap());
        let g = TaylorSeries::from_real(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(g.differentiate(), TaylorSeries::from_real(&[1.0, 2.0, 3.0]).unwrap());
        let k = TaylorSeries::constant(c(4.0), 0);
        assert_eq!(k.differentiate(), TaylorSeries::zero(0));
    }

    #[test]
    fn integrate_examples() {
        let one = TaylorSeries::constant(c(1.0), 0);
        assert_eq!(one.integrate(c(0.0)), TaylorSeries::from_real(&[0.0, 1.0]).unwrap());
        let a = TaylorSeries::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(a.integrate(c(5.0)), TaylorSeries::from_real(&[5.0, 1.0, 1.0, 1.0]).unwrap());
    }

    #[test]
    fn exp_examples() {
        let zero = TaylorSeries::zero(8);
        assert_eq!(zero.exp_series(), TaylorSeries::constant(c(1.0), 8));
        let e = TaylorSeries::identity(12).exp_series();
        let mut fact = 1.0;
        for k in 0..=12 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e.coeff(k) - c(1.0 / fact)).norm() < 1e-15);
        }
    }

    #[test]
    fn log_examples() {
        let one = TaylorSeries::constant(c(1.0), 6);
        assert_eq!(one.log_series().unwrap(), TaylorSeries::zero(6));

        let lin = &TaylorSeries::constant(c(1.0), 10) - &TaylorSeries::identity(10);
        let l = lin.log_series().unwrap();
        assert!(l.coeff(0).norm() < 1e-15);
        for k in 1..=10 {
            assert!((l.coeff(k) + c(1.0 / k as f64)).norm() < 1e-14);
        }

        let branch = TaylorSeries::identity(4);
        assert!(matches!(branch.log_series(), Err(Error::BranchPoint(_))));
    }

    #[test]
    fn log_of_koebe_derivative() {
        // k'(z) = (1+z)(1-z)^{-3}; oracle log(1+z) - 3 log(1-z) term-wise.
        let n = 32;
        let one_plus_z = &TaylorSeries::constant(c(1.0), n) + &TaylorSeries::identity(n);
        let kprime = &one_plus_z * &TaylorSeries::binomial(3.0, n);
        let l = kprime.log_series().unwrap();
        for k in 1..=n {
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let expected = sign / kf + 3.0 / kf;
            assert!((l.coeff(k) - c(expected)).norm() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn cauchy_exp() {
        let s = coefficients_via_cauchy(|z| Ok(z.exp()), 8, 0.5, 256).unwrap();
        let mut fact = 1.0;
        for k in 0..=8 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((s.coeff(k) - c(1.0 / fact)).norm() < 1e-10);
        }
    }

    #[test]
    fn cauchy_geometric() {
        let one = c(1.0);
        let s = coefficients_via_cauchy(|z| Ok(one / (one - z)), 16, 0.5, 256).unwrap();
        for k in 0..=16 {
            assert!((s.coeff(k) - one).norm() < 1e-10);
        }
    }

    #[test]
    fn cauchy_binomial_recurrence() {
        // Oracle: a_0 = 2, a_{n+1} = a_n (2n+1)/(2n+2).
        let one = c(1.0);
        let s = coefficients_via_cauchy(|z| Ok(2.0 * (one - z).powf(-0.5)), 12, 0.5, 256).unwrap();
        let mut a = 2.0;
        for n in 0..=12 {
            assert!((s.coeff(n) - c(a)).norm() < 1e-10, "n = {n}");
            a *= (2 * n + 1) as f64 / (2 * n + 2) as f64;
        }
        assert!((s.coeff(3) - c(0.625)).norm() < 1e-10);
    }

    #[test]
    fn cauchy_reports_bad_samples() {
        let err = coefficients_via_cauchy(|_| Ok(Complex64::new(f64::NAN, 0.0)), 4, 0.5, 64);
        assert!(matches!(err, Err(Error::Evaluation(_))));
        let err = coefficients_via_cauchy(Ok, 64, 0.5, 64);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn roots_of_unity_accurate_and_symmetric() {
        for m in [8usize, 24, 256, 1000] {
            let w = roots_of_unity(m);
            for k in 0..m {
                // Reference angle reduced to (−π, π] to keep its own rounding small.
                let j = if 2 * k > m { k as f64 - m as f64 } else { k as f64 };
                let exact = Complex64::from_polar(1.0, TAU * j / m as f64);
                assert!((w[k] - exact).norm() < 1e-15, "m = {m}, k = {k}");
                if k > 0 {
                    assert_eq!(w[m - k], w[k].conj());
                }
            }
        }
    }

    #[test]
    fn cauchy_radius_independent() {
        let f = |z: Complex64| Ok(z.exp() + z.sin());
        let a = coefficients_via_cauchy(f, 16, 0.3, 256).unwrap();
        let b = coefficients_via_cauchy(f, 16, 0.6, 256).unwrap();
        let err = (0..=16).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max);
        assert!(close(&a, &b, 1e-8), "{err}");
    }

    #[test]
    fn cauchy_error_decays_with_samples() {
        // Geometric series sampled at r = 0.9: aliasing error ~ r^m.
        let one = c(1.0);
        let f = |z: Complex64| Ok(one / (one - z));
        let errs: Vec<f64> = [16usize, 32, 64]
            .iter()
            .map(|&m| {
                let s = coefficients_via_cauchy(f, 4, 0.9, m).unwrap();
                (0..=4).map(|k| (s.coeff(k) - one).norm()).fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[1] < errs[0] * 0.5 && errs[2] < errs[1] * 0.5, "{errs:?}");
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TaylorSeries::from_coeffs(vec![Complex64::new(f64::INFINITY, 0.0)]).is_err());
        assert!(TaylorSeries::from_coeffs(vec![]).is_err());
    }
}
