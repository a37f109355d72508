use hblab::catalog::{get_target, random_sense_preserving};
use hblab::transforms::{affine_shear, precompose_automorphism, schwarz_pick_bound, DiskAutomorphism};
use hblab::{Complex64, TaylorSeries};
use proptest::prelude::*;

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

fn disk_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Coefficients with geometric decay, `|a_k| ≤ √2 · 2^{-k}`.
fn series(order: usize) -> impl Strategy<Value = TaylorSeries> {
    prop::collection::vec(complex(1.0), order + 1).prop_map(|c| {
        let c = c.into_iter().enumerate().map(|(k, z)| z * 0.5f64.powi(k as i32)).collect();
        TaylorSeries::from_coeffs(c).unwrap()
    })
}

fn max_diff(a: &TaylorSeries, b: &TaylorSeries) -> f64 {
    let n = a.order().min(b.order());
    (0..=n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn integrate_then_differentiate(a in series(64), c0 in complex(2.0)) {
        prop_assert!(max_diff(&a.integrate(c0).differentiate(), &a) < 1e-12);
    }

    #[test]
    fn differentiate_then_integrate(a in series(64)) {
        let back = a.differentiate().integrate(a.coeff(0));
        prop_assert_eq!(back.order(), 64);
        prop_assert!(max_diff(&back, &a) < 1e-12);
    }

    #[test]
    fn exp_inverts_log(a in series(64)) {
        let mut c = a.coeffs().to_vec();
        c[0] = Complex64::new(1.0, 0.0);
        let a = TaylorSeries::from_coeffs(c).unwrap();
        prop_assert!(max_diff(&a.log_series().unwrap().exp_series(), &a) < 1e-10);
    }

    #[test]
    fn cauchy_product_commutes(a in series(40), b in series(40)) {
        prop_assert!(max_diff(&(&a * &b), &(&b * &a)) < 1e-14);
    }

    #[test]
    fn cauchy_product_truncates_to_smaller_order(a in series(10), b in series(20)) {
        prop_assert_eq!((&a * &b).order(), 10);
    }

    #[test]
    fn product_evaluates_as_product(a in series(64), b in series(64), z in disk_point(0.5)) {
        let p = (&a * &b).eval(z);
        prop_assert!((p - a.eval(z) * b.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn jacobian_shear_law(
        seed in 0u64..1000,
        k in 0.0..0.95f64,
        a in complex(2.0),
        b in complex(2.0),
        z in disk_point(0.95),
    ) {
        let f = random_sense_preserving(seed, 3, k).unwrap();
        let s = affine_shear(&f, a, b);
        let lhs = s.jacobian(z).unwrap();
        let rhs = (a.norm_sqr() - b.norm_sqr()) * f.jacobian(z).unwrap();
        let scale = (a.norm_sqr() + b.norm_sqr()) * (f.h.derivative(z).unwrap().norm_sqr()
            + f.g.derivative(z).unwrap().norm_sqr());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn jacobian_automorphism_law(seed in 0u64..1000, alpha in disk_point(0.9), z in disk_point(0.95)) {
        let f = random_sense_preserving(seed, 2, 0.5).unwrap();
        let phi = DiskAutomorphism::new(alpha).unwrap();
        let fc = precompose_automorphism(&f, &phi).unwrap();
        let w = phi.apply(z);
        let lhs = (1.0 - z.norm_sqr()).powi(2) * fc.jacobian(z).unwrap();
        let rhs = (1.0 - w.norm_sqr()).powi(2) * f.jacobian(w).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
    }

    #[test]
    fn schwarz_pick_dominates(seed in 0u64..1000, k in 0.0..0.99f64, z in disk_point(0.999)) {
        let f = random_sense_preserving(seed, 2, k).unwrap();
        let dil = f.dilatation();
        let c0 = dil.value(Complex64::new(0.0, 0.0)).unwrap().norm();
        let bound = schwarz_pick_bound(c0, z.norm()).unwrap();
        prop_assert!(dil.value(z).unwrap().norm() <= bound + 1e-12);
    }

    #[test]
    fn shear_targets_resolve(b in 0.0..0.99f64) {
        let f = get_target(&format!("shear:b={b}")).unwrap();
        let z = Complex64::new(0.3, -0.4);
        let want = z + b * z.conj();
        prop_assert!((f.evaluate(z).unwrap() - want).norm() < 1e-12);
    }
}
