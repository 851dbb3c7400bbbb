use super::*;

fn p(s: &str) -> FunctionExpr {
    FunctionExpr::parse(s).unwrap()
}

fn d(s: &str) -> FunctionExpr {
    FunctionExpr::parse_in(s, Domain::Disc).unwrap()
}

const Z0: C = C::new(0.0, 0.0);

#[test]
fn proximity_examples() {
    assert!((proximity(&p("z"), 4.0, 1e-12).unwrap() - 4f64.ln()).abs() < 1e-12);
    assert!((proximity(&p("exp(z)"), 10.0, 1e-12).unwrap() - 10.0 / PI).abs() < 1e-10);
    assert_eq!(proximity(&p("0.5"), 3.0, 1e-12).unwrap(), 0.0);
}

#[test]
fn proximity_rejects_radius_outside_disc() {
    assert!(matches!(proximity(&d("z"), 1.0, 1e-9), Err(NevError::RadiusOutsideDomain { .. })));
}

#[test]
fn count_zeros_examples() {
    assert_eq!(count_zeros(&p("z^2"), Z0, 2.0).unwrap(), 2);
    let sin = p("(exp(i*z) - exp(-i*z))/(2*i)");
    assert_eq!(count_zeros(&sin, Z0, 10.0).unwrap(), 7);
    assert_eq!(count_zeros(&p("exp(z)"), Z0, 37.0).unwrap(), 0);
}

#[test]
fn zero_on_contour_is_reported_and_nudged() {
    let f = p("z - 2");
    assert!(matches!(count_zeros(&f, Z0, 2.0), Err(NevError::ZeroOnContour { .. })));
    let (n, r) = count_zeros_nudged(&f, Z0, 2.0).unwrap();
    assert_eq!(n, 1);
    assert!(r > 2.0 && r < 2.0 + 1e-6);
}

#[test]
fn counting_function_examples() {
    let n = counting_n(&p("z^2"), Z0, 2.0).unwrap();
    assert!((n - 2.0 * 2f64.ln()).abs() < 1e-9);
    let r: f64 = 10.0;
    let oracle = r.ln() + 2.0 * (r / (2.0 * PI)).ln();
    let n = counting_n(&p("exp(z) - 1"), Z0, r).unwrap();
    assert!((n - oracle).abs() < 1e-9, "{n} vs {oracle}");
    assert_eq!(counting_n(&p("exp(z)"), Z0, 50.0).unwrap(), 0.0);
}

#[test]
fn max_modulus_examples() {
    let m = max_modulus(&p("exp(z)"), 3.0).unwrap();
    assert!((m.log_m - 3.0).abs() < 1e-12 && m.theta.abs() < 1e-9);
    let m = max_modulus(&d("exp((1-z)^(-2))"), 0.5).unwrap();
    assert!((m.log_m - 4.0).abs() < 1e-12 && m.theta.abs() < 1e-9);
    let m = max_modulus(&p("z"), 2.0).unwrap();
    assert_eq!(m.theta, 0.0);
}

#[test]
fn characteristic_of_exp_exp_is_of_order_exp_r_over_sqrt_r() {
    let f = p("exp(exp(z))");
    for r in [3.0f64, 4.0, 5.0] {
        let t = characteristic(&f, r, 1e-10).unwrap();
        let s = t * r.sqrt() / r.exp();
        assert!((0.1..=1.2).contains(&s), "r={r}: {s}");
    }
}

#[test]
fn characteristic_counts_poles_of_quotients() {
    // T(r, 1/z) = log r for r > 1 (m = 0, N = log r)
    let t = characteristic(&p("1/z"), 3.0, 1e-12).unwrap();
    assert!((t - 3f64.ln()).abs() < 1e-9);
}

#[test]
fn max_curve_examples() {
    let radii = [1.0, 2.0, 4.0, 8.0];
    let c = trace_max_curve(&p("exp(z)"), &radii).unwrap();
    assert!(c.thetas.iter().all(|t| t.abs() < 1e-9));
    assert!(!c.has_jumps());
    let c = trace_max_curve(&p("z"), &radii).unwrap();
    assert!(c.thetas.iter().all(|t| *t == 0.0));
    let c = trace_max_curve(&p("exp(-z^2)"), &radii).unwrap();
    assert!(c.thetas.iter().all(|t| (t - PI / 2.0).abs() < 1e-8), "{:?}", c.thetas);
}

fn bessel_i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut s = 1.0;
    for k in 1..200 {
        term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
        s += term;
    }
    s
}

#[test]
fn circle_integral_examples() {
    let v = circle_p_integral(&p("3"), 2.0, 1.5, 1e-12).unwrap();
    assert!((v - 2.0 * PI * 3f64.powf(1.5)).abs() < 1e-11);
    let v = circle_p_integral(&p("exp(z)"), 5.0, 1.0, 1e-13).unwrap();
    let oracle = 2.0 * PI * bessel_i0(5.0);
    assert!((v / oracle - 1.0).abs() < 1e-12);
    let f = d("(1-z)^(-2)");
    for r in [0.9, 0.99] {
        let v = (1.0 - r) * circle_p_integral(&f, r, 1.0, 1e-12).unwrap();
        // exact value 2π/(1+r)
        assert!((v - 2.0 * PI / (1.0 + r)).abs() < 1e-8, "{v}");
    }
}

#[test]
fn area_integral_of_constant() {
    let v = area_p_integral(&p("2"), 1.5, 1.0, 1e-12).unwrap();
    assert!((v - 2.0 * PI * 1.5 * 1.5 / 2.0 * 2.0).abs() < 1e-10);
    let v = area_p_integral(&p("z"), 1.0, 2.0, 1e-12).unwrap();
    assert!((v - PI / 2.0).abs() < 1e-10);
}

#[test]
fn deficiency_examples() {
    let radii: Vec<f64> = (0..9).map(|k| 10.0 * 1.25f64.powi(k)).collect();
    let f = p("exp(z)");
    let rep = deficiency(&f, Target::Finite(Z0), &radii, 1e-9, 0.1).unwrap();
    assert!((rep.liminf.untrimmed - 1.0).abs() < 0.05);
    assert!(rep.ratios.iter().all(|x| *x <= 1.0 + 1e-6));
    let rep = deficiency(&f, Target::Finite(C::new(1.0, 0.0)), &radii, 1e-9, 0.1).unwrap();
    assert!(rep.liminf.untrimmed < 0.05, "{:?}", rep.ratios);
    let rep = deficiency(&f, Target::Infinity, &radii, 1e-9, 0.1).unwrap();
    assert_eq!(rep.liminf.untrimmed, 1.0);
}

#[test]
fn deficiency_requires_unbounded_characteristic() {
    let r = deficiency(&d("1/(2-z)"), Target::Finite(Z0), &[0.5, 0.7, 0.9], 1e-9, 0.1);
    assert_eq!(r.unwrap_err(), NevError::BoundedCharacteristic);
}

#[test]
fn admissibility_examples() {
    let radii = crate::grid::Grid::parse("disc:8:28:4").unwrap();
    let a = admissibility_index(&d("exp((1-z)^(-2))"), radii.radii(), 3.0, 1e-9).unwrap();
    assert!(a.admissible, "{:?}", a.ratios);
    let a = admissibility_index(&d("5"), radii.radii(), 3.0, 1e-9).unwrap();
    assert!(!a.admissible);
    let k = korenblum_probe(&d("5"), 0.0, radii.radii()).unwrap();
    assert!((k.sup - 5.0).abs() < 1e-12);
}

#[test]
fn density_examples() {
    let radii: Vec<f64> = (1..=30).map(|k| 1.0 - 2f64.powf(-(k as f64) / 4.0)).collect();
    let eps = 0.05;
    let mask: Vec<bool> = radii.iter().map(|r| *r >= 1.0 - eps).collect();
    let full = GridSet::new(radii.clone(), mask).unwrap();
    assert!((density_upper(&full) - 1.0).abs() < 1e-12);
    let empty = GridSet::new(radii.clone(), vec![false; radii.len()]).unwrap();
    assert_eq!(density_upper(&empty), 0.0);
}

#[test]
fn hyper_order_examples() {
    let radii: Vec<f64> = (0..10).map(|k| 2.0 + 0.35 * k as f64).collect();
    let s = growth_series(&p("exp(exp(z))"), &radii, "test", 1e-9).unwrap();
    let h = hyper_order(&s);
    assert!((h.estimate - 1.0).abs() <= 0.1 && !h.low_confidence, "{h:?}");
    let radii: Vec<f64> = (0..10).map(|k| 20.0 * 1.3f64.powi(k)).collect();
    let s = growth_series(&p("exp(z)"), &radii, "test", 1e-9).unwrap();
    assert!(hyper_order(&s).estimate.abs() < 0.05);
    let s = growth_series(&p("z^3 + 1"), &radii, "test", 1e-9).unwrap();
    let h = hyper_order(&s);
    assert_eq!(h.estimate, 0.0);
}
