//! Property tests for expressions and the Nevanlinna functionals.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;
use valdist_core::nevanlinna::{
    characteristic, circle_p_integral_log, count_zeros, deficiency, max_modulus, proximity, proximity_to, Target,
};
use valdist_core::{Domain, FunctionExpr, LogValue};

const TOL: f64 = 1e-8;

fn e(s: &str) -> FunctionExpr {
    FunctionExpr::parse(s).unwrap()
}

fn cplx(max: f64) -> impl Strategy<Value = C> {
    (-max..max, -max..max).prop_map(|(a, b)| C::new(a, b))
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Small plane functions with closed-form derivatives available through
/// differentiation; entire so every radius is admissible.
const ENTIRE: &[&str] = &[
    "exp(z)",
    "(exp(i*z) - exp(-i*z))/(2*i) + z^2",
    "z^3 - 2*z + 1",
    "exp(z^2/4)",
    "(exp(2*i*z) + exp(-2*i*z))*exp(-z)/2",
    "exp(exp(z/2))",
];

fn entire() -> impl Strategy<Value = FunctionExpr> {
    prop::sample::select(ENTIRE).prop_map(e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivative_is_linear(f in entire(), g in entire(), z in cplx(2.0)) {
        let lhs = f.add(&g).differentiate().eval(z).unwrap();
        let rhs = f.differentiate().eval(z).unwrap() + g.differentiate().eval(z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12 || (lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn shifts_compose(f in entire(), a in cplx(1.0), b in cplx(1.0), z in cplx(1.0)) {
        let two = f.shift(a).unwrap().shift(b).unwrap().eval(z).unwrap();
        let one = f.shift(a + b).unwrap().eval(z).unwrap();
        prop_assert!(rel(two, one) < 1e-10 || (two - one).norm() < 1e-12);
    }

    #[test]
    fn qscales_compose(f in entire(), p in 0.5f64..1.5, q in 0.5f64..1.5, z in cplx(1.0)) {
        let (p, q) = (C::new(p, 0.0), C::new(q, 0.3));
        let two = f.qscale(p).unwrap().qscale(q).unwrap().eval(z).unwrap();
        let one = f.qscale(p * q).unwrap().eval(z).unwrap();
        prop_assert!(rel(two, one) < 1e-10 || (two - one).norm() < 1e-12);
    }

    #[test]
    fn evaluation_is_deterministic(f in entire(), z in cplx(3.0)) {
        let a = f.eval_log(z).unwrap();
        let b = f.clone().eval_log(z).unwrap();
        prop_assert_eq!(a.ln_abs.to_bits(), b.ln_abs.to_bits());
        prop_assert_eq!(a.phase.to_bits(), b.phase.to_bits());
    }

    #[test]
    fn disc_functions_reject_the_boundary(rho in 1.0f64..3.0, th in 0.0..(2.0 * PI)) {
        let f = FunctionExpr::parse_in("1/(1-z)", Domain::Disc).unwrap();
        prop_assert!(f.eval(C::from_polar(rho, th)).is_err());
    }

    #[test]
    fn log_value_products(a in cplx(1e3), b in cplx(1e3)) {
        prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
        let p = LogValue::from_complex(a).mul(LogValue::from_complex(b)).to_complex();
        prop_assert!(rel(p, a * b) < 1e-12);
        let q = LogValue::from_complex(a).div(LogValue::from_complex(b)).to_complex();
        prop_assert!(rel(q, a / b) < 1e-12);
    }

    #[test]
    fn mittag_leffler_of_order_one_is_exp(z in cplx(7.0)) {
        let ml = FunctionExpr::var(Domain::Plane).mittag_leffler(1.0).eval(z).unwrap();
        prop_assert!(rel(ml, z.exp()) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn proximity_is_subadditive(f in entire(), g in entire(), r in 0.5f64..4.0) {
        let fg = f.mul(&g);
        let lhs = proximity(&fg, r, TOL).unwrap();
        let rhs = proximity(&f, r, TOL).unwrap() + proximity(&g, r, TOL).unwrap();
        prop_assert!(lhs <= rhs + 1e-7, "{lhs} > {rhs}");
    }

    /// T(r) ≤ log M(r) ≤ (R + r)/(R − r)·T(R) with R = 2r.
    #[test]
    fn characteristic_brackets_max_modulus(f in entire(), r in 0.5f64..3.0) {
        let t = characteristic(&f, r, TOL).unwrap();
        let lm = max_modulus(&f, r).unwrap().log_m;
        let t2 = characteristic(&f, 2.0 * r, TOL).unwrap();
        prop_assert!(t <= lm.max(0.0) + 1e-7, "T {t} > logM {lm}");
        prop_assert!(lm <= 3.0 * t2 + 1e-7, "logM {lm} > 3 T(2r) {t2}");
    }

    /// log⁺ ∫|f|^κ dθ ≥ κ·m(r, f) − log 2π.
    #[test]
    fn jensen_lower_bound(f in entire(), r in 0.5f64..4.0, k in 1usize..4) {
        let kappa = 1.0 / k as f64;
        let lhs = circle_p_integral_log(&f, r, kappa, TOL).unwrap().max(0.0);
        let rhs = kappa * proximity(&f, r, TOL).unwrap() - (2.0 * PI).ln();
        prop_assert!(lhs >= rhs, "{lhs} < {rhs}");
    }

    /// |T(r, 1/(f − a)) − T(r, f)| ≤ |log|f(0) − a|| + log⁺|a| + log 2.
    #[test]
    fn first_main_theorem(idx in 0usize..3, a in cplx(3.0), r in 1.0f64..6.0) {
        let f = e(["exp(z)", "z^3 - 2*z + 1", "exp(exp(z/3)) - 1"][idx]);
        let inv = FunctionExpr::constant(C::new(1.0, 0.0), Domain::Plane).div(&f.add_const(-a));
        let t_inv = characteristic(&inv, r, TOL);
        prop_assume!(t_inv.is_ok());
        let gap = (t_inv.unwrap() - characteristic(&f, r, TOL).unwrap()).abs();
        let bound = (f.eval(C::new(0.0, 0.0)).unwrap() - a).norm().ln().abs() + a.norm().ln().max(0.0) + 2f64.ln();
        prop_assert!(gap <= bound + 1e-6, "{gap} > {bound}");
    }

    #[test]
    fn polynomial_zero_counts(roots in prop::collection::vec((0.0f64..3.0, 0.0..(2.0 * PI)), 0..=6), r in 0.5f64..3.5) {
        let roots: Vec<C> = roots.into_iter().map(|(m, t)| C::from_polar(m, t)).collect();
        prop_assume!(roots.iter().all(|w| (w.norm() - r).abs() > 0.02));
        let z = FunctionExpr::var(Domain::Plane);
        let factors: Vec<FunctionExpr> = roots.iter().map(|w| z.add_const(-w)).collect();
        let p = FunctionExpr::product_of(&factors, Domain::Plane);
        let exact = roots.iter().filter(|w| w.norm() < r).count() as i64;
        prop_assert_eq!(count_zeros(&p, C::new(0.0, 0.0), r).unwrap(), exact);
    }

    #[test]
    fn deficiency_ratios_lie_in_the_unit_interval(a in cplx(2.0)) {
        let f = e("exp(z)");
        let radii: Vec<f64> = (0..6).map(|k| 4.0 + 3.0 * k as f64).collect();
        let rep = deficiency(&f, Target::Finite(a), &radii, TOL, 0.1).unwrap();
        for v in rep.ratios {
            prop_assert!((0.0..=1.0 + 1e-6).contains(&v), "{v}");
        }
    }
}

#[test]
fn proximity_to_infinity_is_proximity() {
    let f = e("exp(z)");
    let a = proximity_to(&f, Target::Infinity, 5.0, TOL).unwrap();
    assert_eq!(a, proximity(&f, 5.0, TOL).unwrap());
}

#[test]
fn characteristic_of_exp_is_r_over_pi() {
    for r in [1.0, 3.0, 7.5] {
        let t = characteristic(&e("exp(z)"), r, 1e-12).unwrap();
        assert!((t - r / PI).abs() < 1e-10, "{r}: {t}");
    }
}

#[test]
fn characteristic_and_max_modulus_are_nondecreasing() {
    let f = e("exp(exp(z/2)) + z");
    let radii: Vec<f64> = (1..20).map(|k| 0.3 * k as f64).collect();
    let t: Vec<f64> = radii.iter().map(|&r| characteristic(&f, r, TOL).unwrap()).collect();
    let m: Vec<f64> = radii.iter().map(|&r| max_modulus(&f, r).unwrap().log_m).collect();
    assert!(t.windows(2).all(|w| w[1] >= w[0] - 1e-8));
    assert!(m.windows(2).all(|w| w[1] >= w[0] - 1e-8));
}
