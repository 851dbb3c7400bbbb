//! Built-in scenarios for the examples discussed in the literature on
//! rapid solutions of linear equations.

use super::scenario::Scenario;
use crate::funcexpr::canonical_product_text;

struct Entry {
    name: &'static str,
    summary: &'static str,
    body: fn() -> String,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "frei-ex12",
        summary: "f'' - (2e^z+1)f' + e^{2z}f = 0: dominance p = 0, order reduction, log T(r,f)/T(r,A0)",
        body: frei_ex12,
    },
    Entry {
        name: "canonical-product",
        summary: "zero-order canonical product with zeros 2^n and 2^n + eps_n: growth and deficiency of 0",
        body: canonical_product,
    },
    Entry {
        name: "ex-curve-2-4",
        summary: "f'' + e^{-z^2}f' + e^z f = 0: characteristic test fails at p = 0, curve test along R+ holds",
        body: ex_curve_2_4,
    },
    Entry {
        name: "ex-curve-exp",
        summary: "f'' + e^{-z}f' + e^z f = 0: equal characteristics, curve test holds for p = 0",
        body: ex_curve_exp,
    },
    Entry {
        name: "ex-2-5",
        summary: "f'' + (e^{z^2}-e^z)f' - (e^{z^2+z}+e^z)f = 0 with solution e^{e^z}",
        body: ex_2_5,
    },
    Entry {
        name: "ml-coefficient",
        summary: "Mittag-Leffler coefficient E_{1/2}: T(r) ~ log M(r)/(2 pi), characteristic versus max-modulus tests",
        body: ml_coefficient,
    },
    Entry {
        name: "disc-beta2",
        summary: "unit-disc equation with beta = 2 and solutions exp(exp((1-z)^-2)), exp((1-z)^-2)exp(exp((1-z)^-2))",
        body: disc_beta2,
    },
    Entry {
        name: "disc-curve",
        summary: "unit-disc coefficients exp(-(1-z)^-4), exp((1-z)^-2): curve test along (0, 1)",
        body: disc_curve,
    },
    Entry {
        name: "gamma-difference",
        summary: "second-order difference equation with solutions Gamma(z), 2^z Gamma(z)",
        body: gamma_difference,
    },
    Entry {
        name: "qdiff-poly",
        summary: "q-difference equation (q = 2) with polynomial solutions 1+z, z^2",
        body: qdiff_poly,
    },
    Entry {
        name: "exp-exp-growth",
        summary: "T(r, e^{e^z}) from quadrature and from ray integration of f'' - (e^z+1)f' = 0",
        body: exp_exp_growth,
    },
];

/// (name, one-line description) for every built-in scenario.
pub fn examples_catalogue() -> Vec<(&'static str, &'static str)> {
    ENTRIES.iter().map(|e| (e.name, e.summary)).collect()
}

/// TOML text of a built-in scenario.
pub fn catalogue_toml(name: &str) -> Option<String> {
    ENTRIES.iter().find(|e| e.name == name).map(|e| (e.body)())
}

pub fn catalogue_scenario(name: &str) -> Option<Scenario> {
    catalogue_toml(name).map(|t| Scenario::from_toml(&t).expect("built-in scenario parses"))
}

fn frei_ex12() -> String {
    r#"name = "frei-ex12"
description = "f'' - (2e^z+1)f' + e^{2z}f = 0"
domain = "plane"
operator = "derivative"
coefficients = ["exp(2*z)", "-(2*exp(z) + 1)"]
solutions = ["exp(exp(z))", "exp(z)*exp(exp(z))"]
analyses = ["residual", "dominance", "reduce", "conclusion"]
grid = "lin:5:30:16"

[dominance]
kinds = ["characteristic", "max-modulus"]

[reduce]
p = [0, 1]

[conclusion]
kind = "logT/T"
p = 0
grid = "lin:3:5:9"
"#
    .into()
}

fn canonical_product() -> String {
    format!(
        r#"name = "canonical-product"
description = "canonical product with zeros 2^n and 2^n + exp(-exp(2^n))/2"
functions = ["{}"]
analyses = ["growth", "deficiency"]
grid = "geom:8.5:60:10"

[deficiency]
function = "F0"
targets = ["0"]
"#,
        canonical_product_text(64.0)
    )
}

fn ex_curve_2_4() -> String {
    r#"name = "ex-curve-2-4"
description = "f'' + e^{-z^2}f' + e^z f = 0"
coefficients = ["exp(z)", "exp(-z^2)"]
analyses = ["dominance", "curve"]
grid = "lin:2:12:12"

[dominance]
kinds = ["characteristic", "max-modulus"]

[curve]
p = 0
"#
    .into()
}

fn ex_curve_exp() -> String {
    r#"name = "ex-curve-exp"
description = "f'' + e^{-z}f' + e^z f = 0"
coefficients = ["exp(z)", "exp(-z)"]
analyses = ["dominance", "curve"]
grid = "lin:2:12:12"

[dominance]
kinds = ["characteristic", "max-modulus"]

[curve]
p = 0
"#
    .into()
}

fn ex_2_5() -> String {
    r#"name = "ex-2-5"
description = "f'' + (e^{z^2}-e^z)f' - (e^{z^2+z}+e^z)f = 0"
coefficients = ["-(exp(z^2 + z) + exp(z))", "exp(z^2) - exp(z)"]
solutions = ["exp(exp(z))"]
functions = ["exp(exp(z))"]
analyses = ["residual", "dominance", "growth"]
grid = "lin:2:8:10"

[dominance]
kinds = ["characteristic"]

[growth]
functions = ["F0", "A0", "A1"]
"#
    .into()
}

fn ml_coefficient() -> String {
    r#"name = "ml-coefficient"
description = "A0 = E_{1/2}(z) against A1 = e^z"
coefficients = ["ml(0.5; z)", "exp(z)"]
analyses = ["growth", "dominance"]
grid = "lin:4:16:10"

[dominance]
kinds = ["characteristic", "max-modulus"]
"#
    .into()
}

fn disc_beta2() -> String {
    r#"name = "disc-beta2"
description = "unit-disc equation with beta = 2"
domain = "disc"
coefficients = [
    "4*exp(2*(1-z)^(-2))/(1-z)^(6)",
    "-4*exp((1-z)^(-2))/(1-z)^(3) - 2/(1-z)^(3) - 3/(1-z)",
]
solutions = ["exp(exp((1-z)^(-2)))", "exp((1-z)^(-2))*exp(exp((1-z)^(-2)))"]
analyses = ["residual", "growth", "dominance"]
grid = "disc:4:32:4"
# zeros of A1 crowd the boundary, so quadrature converges slowly
tol = 1e-6

[dominance]
kinds = ["characteristic"]
"#
    .into()
}

fn disc_curve() -> String {
    r#"name = "disc-curve"
description = "A1 = exp(-(1-z)^-4), A0 = exp((1-z)^-2) in the unit disc"
domain = "disc"
coefficients = ["exp((1-z)^(-2))", "exp(-(1-z)^(-4))"]
analyses = ["curve", "growth"]
grid = "disc:4:32:4"

[curve]
p = 0
"#
    .into()
}

fn gamma_difference() -> String {
    r#"name = "gamma-difference"
description = "second-order difference equation solved by Gamma(z) and 2^z Gamma(z)"
operator = "difference"
coefficients = ["2*z^2 - z - 2", "-3*z - 1"]
solutions = ["gamma(z)", "2^z*gamma(z)"]
analyses = ["residual", "reduce"]
"#
    .into()
}

fn qdiff_poly() -> String {
    r#"name = "qdiff-poly"
description = "q-difference equation with q = 2 solved by 1 + z and z^2"
operator = "qdifference"
q = 2.0
coefficients = ["6*z/(3 + 2*z)", "-(9 + 8*z)/(3 + 2*z)"]
solutions = ["1 + z", "z^2"]
analyses = ["residual", "reduce"]
"#
    .into()
}

fn exp_exp_growth() -> String {
    r#"name = "exp-exp-growth"
description = "e^{e^z} solves f'' - (e^z+1)f' = 0"
coefficients = ["0", "-(exp(z) + 1)"]
solutions = ["exp(exp(z))"]
functions = ["exp(exp(z))"]
analyses = ["residual", "growth"]
grid = "lin:3:5:5"

[growth]
functions = ["F0"]
numeric = true
ic = [2.718281828459045, 2.718281828459045]
"#
    .into()
}
