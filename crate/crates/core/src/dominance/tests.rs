use super::*;
use crate::nevanlinna::{trace_max_curve, GrowthRecord};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

fn es(v: &[&str]) -> Vec<FunctionExpr> {
    v.iter().map(|s| FunctionExpr::parse(s).unwrap()).collect()
}

fn lin(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()
}

#[test]
fn exp_exp_equation_selects_zero_with_half_ratio() {
    let rep = find_p(&es(&["exp(2*z)", "-(2*exp(z) + 1)"]), ConditionKind::Characteristic, &lin(5.0, 30.0, 16), 0.1, 1e-8)
        .unwrap();
    assert_eq!(rep.selected, Some(0));
    let est = rep.candidate(0).unwrap().estimate.trimmed;
    assert!((est - 0.5).abs() < 0.05, "{est}");
    assert_eq!(rep.candidates.len(), 1);
}

#[test]
fn transcendental_over_polynomial_selects_one() {
    let rep = find_p(&es(&["z", "exp(z)"]), ConditionKind::Characteristic, &lin(5.0, 30.0, 10), 0.1, 1e-8).unwrap();
    assert_eq!(rep.selected, Some(1));
    assert!(!rep.candidates[0].holds);
    assert_eq!(rep.candidates[1].ratios, vec![0.0; 10]);
    let csv = rep.to_csv();
    assert!(csv.starts_with("p,r,ratio,trimmed,selected\n0,"));
    assert_eq!(csv.lines().count(), 21);
}

#[test]
fn single_coefficient_selects_zero() {
    let rep = find_p(&es(&["z^2"]), ConditionKind::MaxModulus, &[1.0, 2.0], 0.1, 1e-8).unwrap();
    assert_eq!(rep.selected, Some(0));
    assert!(find_p(&[], ConditionKind::Characteristic, &[1.0], 0.1, 1e-8).unwrap().selected.is_none());
}

#[test]
fn max_modulus_condition() {
    // log M(r, e^{2z}) = 2r, log M(r, 2e^z + 1) = log(2e^r + 1)
    let rep = find_p(&es(&["exp(2*z)", "-(2*exp(z) + 1)"]), ConditionKind::MaxModulus, &lin(5.0, 30.0, 10), 0.1, 1e-8).unwrap();
    let c = rep.candidate(0).unwrap();
    for (r, v) in rep.radii.iter().zip(&c.ratios) {
        let want = (2.0 * r.exp() + 1.0).ln() / (2.0 * r);
        assert!((v - want).abs() < 1e-9, "{r}");
    }
}

#[test]
fn circle_integral_weights_scale_correctly() {
    let a = es(&["exp(z)", "exp(z/2) + z"]);
    let scaled: Vec<FunctionExpr> = a.iter().map(|f| f.scale(C::new(4.0, 0.0))).collect();
    let radii = [1.0, 2.0, 3.0];
    let r1 = find_p(&a, ConditionKind::CircleIntegral, &radii, 0.0, 1e-10).unwrap();
    let r2 = find_p(&scaled, ConditionKind::CircleIntegral, &radii, 0.0, 1e-10).unwrap();
    // term j = 1, p = 0: c^{1/(n−j) − 1/(n−p)} = 4^{1 − 1/2} = 2
    for (x, y) in r1.candidates[0].ratios.iter().zip(&r2.candidates[0].ratios) {
        assert!((y / x - 2.0).abs() < 1e-8);
    }
}

#[test]
fn curve_condition_examples() {
    let radii = lin(1.0, 8.0, 15);
    let curve = trace_max_curve(&es(&["exp(z)"])[0], &radii).unwrap();
    let rep = curve_dominance(&es(&["exp(z)", "exp(-z^2)"]), 0, Some(&[2.0]), &curve, 0.1).unwrap();
    assert!(rep.holds && rep.estimate.untrimmed < 1e-10);
    let rep = curve_dominance(&es(&["exp(z)", "exp(-z)"]), 0, None, &curve, 0.1).unwrap();
    for (r, v) in radii.iter().zip(&rep.ratios) {
        let want = 0.5 * (-3.0 * r).exp();
        assert!((v / want - 1.0).abs() < 1e-9);
    }
    let rep = curve_dominance(&es(&["exp(z)", "0"]), 0, None, &curve, 0.1).unwrap();
    assert!(rep.ratios.iter().all(|&v| v == 0.0));
    assert!(matches!(
        curve_dominance(&es(&["exp(z)", "1"]), 0, Some(&[1.0]), &curve, 0.1),
        Err(DominanceError::Eta(_))
    ));
}

fn series(radii: &[f64], t: impl Fn(f64) -> f64) -> GrowthSeries {
    GrowthSeries {
        domain: Domain::Plane,
        grid: "list".into(),
        records: radii
            .iter()
            .map(|&r| GrowthRecord { t: Some(t(r)), m: Some(t(r)), n: Some(0.0), ..GrowthRecord::missing(r) })
            .collect(),
    }
}

#[test]
fn self_comparison_tends_to_zero() {
    let radii = lin(10.0, 200.0, 20);
    let s = series(&radii, |r| r / PI);
    let table = conclusion_check(&s, &Reference::from_series(&s, ConclusionKind::LogTOverT), None, 0.1);
    assert!(table.ratios.windows(2).all(|w| w[1] < w[0]));
    assert!(table.ratios.last().unwrap() < &0.07);
    assert!(!table.resampled);
}

#[test]
fn resampling_in_log_r() {
    let s = series(&[2.0, 4.0], |r| r);
    let reference = Reference { kind: ConclusionKind::LogTOverLogM, radii: vec![1.0, 8.0], values: vec![1.0, 4.0] };
    let table = conclusion_check(&s, &reference, None, 0.0);
    assert!(table.resampled);
    assert!((table.ratios[0] - 2f64.ln() / 2.0).abs() < 1e-12);
    assert!((table.ratios[1] - 4f64.ln() / 3.0).abs() < 1e-12);
}

#[test]
fn exp_exp_conclusion_within_default_window() {
    use crate::equation::{Equation, OperatorKind};
    use crate::solvers::{solution_growth, GrowthOptions};
    let a = es(&["exp(2*z)", "-(2*exp(z) + 1)"]);
    let radii = lin(3.0, 5.0, 5);
    let eq = Equation::new(OperatorKind::Derivative, a.clone());
    let e1 = 1f64.exp();
    let g = solution_growth(&eq, &[C::new(e1, 0.0), C::new(e1, 0.0)], &radii, "list", GrowthOptions::default()).unwrap();
    let ap = coefficient_series(&a[0], &radii, 1e-8).unwrap();
    let table = conclusion_check(&g.series, &Reference::from_series(&ap, ConclusionKind::LogTOverT), None, 0.1);
    assert!(table.within_window, "{:?}", table.ratios);
    assert!(table.ratios.iter().all(|&v| v > 0.3));
}
