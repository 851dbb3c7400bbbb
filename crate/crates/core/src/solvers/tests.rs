use super::*;
use crate::equation::{Equation, OperatorKind};
use crate::funcexpr::{Domain, FunctionExpr};
use crate::samples::{random_in_disc, residual_samples};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

fn e(s: &str) -> FunctionExpr {
    FunctionExpr::parse(s).unwrap()
}

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn eq12() -> Equation {
    Equation::new(OperatorKind::Derivative, vec![e("exp(2*z)"), e("-(2*exp(z) + 1)")])
}

fn disc_eq(beta: f64) -> Equation {
    let b = beta;
    let a1 = format!(
        "-{}*exp((1-z)^(-{b}))/(1-z)^({}) - {b}/(1-z)^({}) - {}/(1-z)",
        2.0 * b,
        b + 1.0,
        b + 1.0,
        1.0 + b
    );
    let a0 = format!("{}*exp(2*(1-z)^(-{b}))/(1-z)^({})", b * b, 2.0 * b + 2.0);
    Equation::new(
        OperatorKind::Derivative,
        vec![FunctionExpr::parse_in(&a0, Domain::Disc).unwrap(), FunctionExpr::parse_in(&a1, Domain::Disc).unwrap()],
    )
}

#[test]
fn exponential_along_rays() {
    let eq = Equation::new(OperatorKind::Derivative, vec![e("-1")]);
    for th in [0.0, 1.0, 2.5, -2.0] {
        let sol = integrate_ray(&eq, th, 0.0, 10.0, &[c(1.0)], &[], RayOptions::default()).unwrap();
        assert!(sol.truncated_at.is_none());
        assert!((sol.last_log_abs() - 10.0 * f64::cos(th)).abs() < 1e-8, "{th}: {}", sol.last_log_abs());
    }
}

#[test]
fn sine_grows_like_sinh_on_imaginary_axis() {
    let eq = Equation::new(OperatorKind::Derivative, vec![e("1"), e("0")]);
    let sol = integrate_ray(&eq, PI / 2.0, 0.0, 20.0, &[c(0.0), c(1.0)], &[5.0, 10.0], RayOptions::default()).unwrap();
    let want = 20.0 - 2f64.ln();
    assert!((sol.last_log_abs() - want).abs() < 1e-7);
    let at5 = sol.log_abs_at(5.0).unwrap();
    assert!((at5 - 5f64.sinh().ln()).abs() < 1e-8);
    for p in &sol.points {
        let nrm = p.state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!((0.5..=2.0).contains(&nrm));
    }
}

#[test]
fn exp_exp_solution_on_positive_axis() {
    let ic = [c(1f64.exp()), c(1f64.exp())];
    let sol =
        integrate_ray(&eq12(), 0.0, 0.0, 3.0, &ic, &[], RayOptions { tol: 1e-10, richardson: true }).unwrap();
    let want = 3f64.exp();
    assert!(((sol.last_log_abs() - want) / want).abs() < 1e-6);
    assert_eq!(sol.richardson_ok(), Some(true));
}

#[test]
fn numerical_and_closed_form_agree_off_axis() {
    let f = e("exp(z)*exp(exp(z))");
    let ic = [f.eval(c(0.0)).unwrap(), f.derivative(1).eval(c(0.0)).unwrap()];
    for th in [0.7, 2.0, -2.9] {
        let sol = integrate_ray(&eq12(), th, 0.0, 4.0, &ic, &[], RayOptions::default()).unwrap();
        let exact = f.eval_log(C::from_polar(4.0, th)).unwrap().ln_abs;
        assert!(((sol.last_log_abs() - exact) / exact.abs().max(1.0)).abs() < 1e-6, "{th}");
    }
}

#[test]
fn superposition() {
    let eq = eq12();
    let ic1 = [c(1.0), c(0.0)];
    let ic2 = [c(0.0), c(1.0)];
    let ic3 = [c(1.0), c(1.0)];
    let z = C::from_polar(2.5, 0.9);
    let a = state_at(&eq, &ic1, z, 1e-11).unwrap().component(0);
    let b = state_at(&eq, &ic2, z, 1e-11).unwrap().component(0);
    let s = state_at(&eq, &ic3, z, 1e-11).unwrap().component(0);
    let diff = a.add(b).sub(s);
    assert!(diff.ln_abs() - s.ln_abs() < (1e-7f64).ln());
}

#[test]
fn disc_ray_rejects_boundary() {
    let err = integrate_ray(&disc_eq(2.0), 0.0, 0.0, 1.0, &[c(1.0), c(0.0)], &[], RayOptions::default());
    assert!(matches!(err, Err(SolverError::RadiusOutsideDomain(_))));
}

#[test]
fn zero_initial_condition_rejected() {
    let eq = Equation::new(OperatorKind::Derivative, vec![e("-1")]);
    let err = solution_growth(&eq, &[c(0.0)], &[1.0, 2.0], "list", GrowthOptions::default());
    assert!(matches!(err, Err(SolverError::ZeroInitialCondition)));
}

#[test]
fn growth_of_exponential() {
    let eq = Equation::new(OperatorKind::Derivative, vec![e("-1")]);
    let radii = [2.0, 5.0, 10.0];
    let g = solution_growth(&eq, &[c(1.0)], &radii, "list", GrowthOptions::default()).unwrap();
    for rec in &g.series.records {
        let t = rec.t.unwrap();
        assert!((t / (rec.r / PI) - 1.0).abs() < 0.02, "{}: {t}", rec.r);
        assert!((rec.log_m.unwrap() - rec.r).abs() < 1e-6);
    }
}

#[test]
fn exp_exp_growth_matches_closed_form() {
    // closed-form T(3, f) for f = exp(e^z) and e^z·exp(e^z), by dense quadrature
    let eq = eq12();
    let cases = [([c(1f64.exp()), c(1f64.exp())], 2.031010609), ([c(1f64.exp()), c(2.0 * 1f64.exp())], 2.558615328)];
    for (ic, t3) in cases {
        let g = solution_growth(&eq, &ic, &[1.0, 2.0, 3.0, 5.0], "list", GrowthOptions::default()).unwrap();
        let t = g.series.records[2].t.unwrap();
        assert!((t / t3 - 1.0).abs() < 2e-3, "T(3) = {t}");
        let t5 = g.series.records[3].t.unwrap();
        assert!(t5.ln() >= 0.5 * (2.0 * 5.0 / PI), "T(5) = {t5}");
    }
}

#[test]
fn second_difference_of_identity() {
    let b = delta_to_shift(&[e("0"), e("0")]);
    let sol = iterate_lattice(&b, OperatorKind::Difference, c(0.0), &[c(0.0), c(1.0)], 20).unwrap();
    assert_eq!(sol.max_residual, 0.0);
    for (k, v) in sol.values.iter().enumerate().skip(1) {
        assert!((v.ln_abs - (k as f64).ln()).abs() < 1e-13);
    }
}

#[test]
fn gamma_recurrence_matches_lgamma() {
    use statrs::function::gamma::ln_gamma;
    let b = [e("-z"), e("1")];
    let sol = iterate_lattice(&b, OperatorKind::Difference, c(1.0), &[c(1.0)], 150).unwrap();
    for (k, v) in sol.values.iter().enumerate() {
        let want = ln_gamma(k as f64 + 1.0);
        assert!((v.ln_abs - want).abs() <= 1e-10 * want.abs().max(1.0), "{k}");
    }
}

#[test]
fn q_lattice_points() {
    let b = [e("-2"), e("1")];
    let sol = iterate_lattice(&b, OperatorKind::QDifference(c(2.0)), c(0.5), &[c(1.0)], 5).unwrap();
    assert_eq!(sol.points[3], c(4.0));
    assert!((sol.values[4].ln_abs - 16f64.ln()).abs() < 1e-14);
}

#[test]
fn vanishing_leading_coefficient_is_named() {
    let b = [e("1"), e("z - 3")];
    let err = iterate_lattice(&b, OperatorKind::Difference, c(0.0), &[c(1.0)], 10).unwrap_err();
    assert_eq!(err, SolverError::LeadingVanishes(c(3.0)));
}

#[test]
fn delta_to_shift_second_order() {
    let a0 = e("z^2 + 1");
    let a1 = e("exp(z)");
    let b = delta_to_shift(&[a0.clone(), a1.clone()]);
    assert_eq!(b.len(), 3);
    for z in random_in_disc(3.0, 10, 1) {
        let (v0, v1) = (a0.eval(z).unwrap(), a1.eval(z).unwrap());
        assert!((b[2].eval(z).unwrap() - 1.0).norm() < 1e-14);
        assert!((b[1].eval(z).unwrap() - (v1 - 2.0)).norm() < 1e-12);
        assert!((b[0].eval(z).unwrap() - (1.0 - v1 + v0)).norm() < 1e-12);
    }
}

#[test]
fn shift_and_delta_forms_are_inverse() {
    let a = vec![e("z"), e("exp(2*z)"), e("3 - z^2")];
    let back = shift_to_delta(&delta_to_shift(&a));
    assert_eq!(back.len(), 4);
    for z in random_in_disc(2.0, 10, 3) {
        for k in 0..3 {
            assert!((back[k].eval(z).unwrap() - a[k].eval(z).unwrap()).norm() < 1e-10);
        }
        assert!((back[3].eval(z).unwrap() - 1.0).norm() < 1e-14);
    }
}

#[test]
fn residuals_of_exp_exp_solutions() {
    let samples = random_in_disc(2.0, 100, 42);
    let r1 = equation_residual(&eq12(), &e("exp(exp(z))"), &samples);
    assert!(r1.max < 1e-9 && r1.skipped == 0, "{}", r1.max);
    let r2 = equation_residual(&eq12(), &e("exp(z)*exp(exp(z))"), &samples);
    assert!(r2.max < 1e-9, "{}", r2.max);
    let r3 = equation_residual(&eq12(), &e("z*exp(exp(z))"), &samples);
    assert!(r3.max > 1e-3);
}

#[test]
fn residuals_of_disc_solutions() {
    let samples: Vec<C> = random_in_disc(0.5, 100, 42);
    let f1 = FunctionExpr::parse_in("exp(exp((1-z)^(-2)))", Domain::Disc).unwrap();
    let f2 = FunctionExpr::parse_in("exp(exp((1-z)^(-2)))*exp((1-z)^(-2))", Domain::Disc).unwrap();
    for f in [f1, f2] {
        let r = equation_residual(&disc_eq(2.0), &f, &samples);
        assert!(r.max < 1e-8, "{}", r.max);
    }
    let r = equation_residual(&disc_eq(2.0), &FunctionExpr::parse_in("exp(exp((1-z)^(-2)))", Domain::Disc).unwrap(), &residual_samples(Domain::Disc, 42));
    assert!(r.max < 1e-8);
}

#[test]
fn zero_candidate_is_trivial() {
    let r = equation_residual(&eq12(), &e("0"), &[c(1.0), c(2.0)]);
    assert!(r.trivial);
    assert_eq!(r.max, 0.0);
}

#[test]
fn difference_residual_of_gamma() {
    // Δ²f + (−3z−1)Δf + (2z²−z−2)f = 0 has Γ(z) and 2^z Γ(z) as solutions
    let eq = Equation::new(OperatorKind::Difference, vec![e("2*z^2 - z - 2"), e("-3*z - 1")]);
    let samples: Vec<C> = random_in_disc(2.0, 30, 5).into_iter().map(|z| z + 3.0).collect();
    for f in ["gamma(z)", "2^z*gamma(z)"] {
        let r = equation_residual(&eq, &e(f), &samples);
        assert!(r.max < 1e-12, "{f}: {}", r.max);
    }
}
