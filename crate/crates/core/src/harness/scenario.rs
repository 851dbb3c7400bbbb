//! Scenario documents: TOML with one table per analysis.

use crate::dominance::{ConclusionKind, ConditionKind};
use crate::equation::{Equation, OperatorKind};
use crate::funcexpr::{Domain, FunctionExpr};
use crate::grid::Grid;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Residual,
    Growth,
    Dominance,
    Reduce,
    Deficiency,
    Curve,
    Conclusion,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Residual => "residual",
            Analysis::Growth => "growth",
            Analysis::Dominance => "dominance",
            Analysis::Reduce => "reduce",
            Analysis::Deficiency => "deficiency",
            Analysis::Curve => "curve",
            Analysis::Conclusion => "conclusion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    #[default]
    Derivative,
    Difference,
    Qdifference,
}

fn default_tol() -> f64 {
    1e-8
}
fn default_residual_tol() -> f64 {
    1e-8
}
fn default_trim() -> f64 {
    0.1
}
fn default_seed() -> u64 {
    crate::samples::DEFAULT_SEED
}
fn default_kinds() -> Vec<String> {
    vec!["characteristic".into()]
}
fn default_targets() -> Vec<String> {
    vec!["0".into()]
}
fn default_conclusion_kind() -> String {
    "logT/T".into()
}
fn default_theta_count() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSection {
    /// grid override for this analysis
    pub grid: Option<String>,
    /// names to measure (`F<i>`, `A<j>`, `f<i>`); all F and A when absent
    pub functions: Option<Vec<String>>,
    /// also propagate one solution of the equation along rays
    #[serde(default)]
    pub numeric: bool,
    /// real initial state f(0), f'(0), …; all ones when absent
    pub ic: Option<Vec<f64>>,
    #[serde(default = "default_theta_count")]
    pub theta_count: usize,
}

impl Default for GrowthSection {
    fn default() -> Self {
        GrowthSection { grid: None, functions: None, numeric: false, ic: None, theta_count: default_theta_count() }
    }
}

impl GrowthSection {
    pub fn names(&self, s: &Scenario) -> Vec<String> {
        match &self.functions {
            Some(v) => v.clone(),
            None => (0..s.functions.len())
                .map(|i| format!("F{i}"))
                .chain((0..s.coefficients.len()).map(|j| format!("A{j}")))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceSection {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<String>,
    pub grid: Option<String>,
}

impl Default for DominanceSection {
    fn default() -> Self {
        DominanceSection { kinds: default_kinds(), grid: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ReduceSection {
    /// indices to check; all of 0..n when absent
    pub p: Option<Vec<usize>>,
    /// generate the base numerically instead of using `solutions`
    #[serde(default)]
    pub numeric: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeficiencySection {
    /// `F<i>`, `A<j>` or `f<i>`; defaults to F0, else A0
    pub function: Option<String>,
    #[serde(default = "default_targets")]
    pub targets: Vec<String>,
    pub grid: Option<String>,
}

impl Default for DeficiencySection {
    fn default() -> Self {
        DeficiencySection { function: None, targets: default_targets(), grid: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    #[serde(default)]
    pub p: usize,
    /// η_{p+1}, …, η_{n−1}; all 2 when absent
    pub eta: Option<Vec<f64>>,
    pub grid: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConclusionSection {
    /// logT/T, logT/logM, logT/logCircle or logT/logArea
    #[serde(default = "default_conclusion_kind")]
    pub kind: String,
    #[serde(default)]
    pub p: usize,
    pub grid: Option<String>,
    pub window_lo: Option<f64>,
    pub window_hi: Option<f64>,
    /// propagate the fundamental base numerically instead of using `solutions`
    #[serde(default)]
    pub numeric: bool,
    #[serde(default = "default_theta_count")]
    pub theta_count: usize,
}

impl Default for ConclusionSection {
    fn default() -> Self {
        ConclusionSection {
            kind: default_conclusion_kind(),
            p: 0,
            grid: None,
            window_lo: None,
            window_hi: None,
            numeric: false,
            theta_count: default_theta_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default = "default_domain")]
    pub domain: Domain,
    #[serde(default)]
    pub operator: Operator,
    /// ratio of the q-difference operator (real)
    pub q: Option<f64>,
    /// A_0, …, A_{n−1}; the leading coefficient is 1
    #[serde(default)]
    pub coefficients: Vec<String>,
    /// closed-form solutions of the equation
    #[serde(default)]
    pub solutions: Vec<String>,
    /// standalone functions for growth and deficiency
    #[serde(default)]
    pub functions: Vec<String>,
    pub analyses: Vec<Analysis>,
    /// default radius grid; the domain default when absent
    pub grid: Option<String>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
    #[serde(default = "default_trim")]
    pub trim: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub output: Option<String>,
    #[serde(default)]
    pub growth: GrowthSection,
    #[serde(default)]
    pub dominance: DominanceSection,
    #[serde(default)]
    pub reduce: ReduceSection,
    #[serde(default)]
    pub deficiency: DeficiencySection,
    #[serde(default)]
    pub curve: CurveSection,
    #[serde(default)]
    pub conclusion: ConclusionSection,
}

fn default_domain() -> Domain {
    Domain::Plane
}

/// A problem with one scenario field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario is not valid TOML: {0}")]
    Syntax(String),
    #[error("invalid scenario:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<FieldError>),
}

/// A validated scenario with its expressions parsed.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub scenario: Scenario,
    pub kind: OperatorKind,
    pub coefficients: Vec<FunctionExpr>,
    pub solutions: Vec<FunctionExpr>,
    pub functions: Vec<FunctionExpr>,
    pub grid: Grid,
    pub hash: String,
}

impl Prepared {
    pub fn equation(&self) -> Equation {
        Equation::new(self.kind, self.coefficients.clone())
    }

    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    /// Grid for one analysis: its override, else the scenario grid.
    pub fn grid_for(&self, over: &Option<String>) -> Grid {
        over.as_ref().and_then(|g| Grid::parse(g).ok()).unwrap_or_else(|| self.grid.clone())
    }

    /// All named functions: F<i>, A<j>, f<i>.
    pub fn named(&self) -> Vec<(String, FunctionExpr)> {
        let mut v = Vec::new();
        for (i, f) in self.functions.iter().enumerate() {
            v.push((format!("F{i}"), f.clone()));
        }
        for (j, f) in self.coefficients.iter().enumerate() {
            v.push((format!("A{j}"), f.clone()));
        }
        for (i, f) in self.solutions.iter().enumerate() {
            v.push((format!("f{i}"), f.clone()));
        }
        v
    }

    pub fn lookup(&self, name: &str) -> Option<FunctionExpr> {
        self.named().into_iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Scenario, ScenarioError> {
        toml::from_str(text).map_err(|e| ScenarioError::Syntax(e.message().to_string()))
    }

    /// Canonical TOML with every default written out.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// sha256 of the canonical TOML.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn prepare(&self) -> Result<Prepared, ScenarioError> {
        let mut errs = Vec::new();
        let mut err = |path: &str, message: String| errs.push(FieldError { path: path.to_string(), message });
        if self.name.trim().is_empty() {
            err("name", "must not be empty".into());
        }
        if self.analyses.is_empty() {
            err("analyses", "no analyses requested".into());
        }
        if self.seed > i64::MAX as u64 {
            err("seed", format!("must be at most {} to be written back as TOML", i64::MAX));
        }
        let kind = match (self.operator, self.q) {
            (Operator::Derivative, _) => OperatorKind::Derivative,
            (Operator::Difference, _) => OperatorKind::Difference,
            (Operator::Qdifference, Some(q)) if q.is_finite() && q != 0.0 && q != 1.0 => {
                OperatorKind::QDifference(C::new(q, 0.0))
            }
            (Operator::Qdifference, _) => {
                err("q", "q-difference scenarios need a real q other than 0 and 1".into());
                OperatorKind::Difference
            }
        };
        if kind != OperatorKind::Derivative && self.domain == Domain::Disc {
            err("operator", "difference operators are defined for plane scenarios only".into());
        }
        let parsed = |field: &str, list: &[String]| -> (Vec<FunctionExpr>, Vec<FieldError>) {
            let mut out = Vec::new();
            let mut e = Vec::new();
            for (i, s) in list.iter().enumerate() {
                match FunctionExpr::parse_in(s, self.domain) {
                    Ok(f) => out.push(f),
                    Err(x) => e.push(FieldError { path: format!("{field}[{i}]"), message: x.to_string() }),
                }
            }
            (out, e)
        };
        let (coefficients, e1) = parsed("coefficients", &self.coefficients);
        let (solutions, e2) = parsed("solutions", &self.solutions);
        let (functions, e3) = parsed("functions", &self.functions);
        errs.extend(e1);
        errs.extend(e2);
        errs.extend(e3);
        let mut err = |path: &str, message: String| errs.push(FieldError { path: path.to_string(), message });

        let grid = match &self.grid {
            Some(g) => match Grid::parse(g) {
                Ok(g) => g,
                Err(e) => {
                    err("grid", e.to_string());
                    Grid::default_for(self.domain)
                }
            },
            None => Grid::default_for(self.domain),
        };
        if !grid.fits(self.domain) {
            err("grid", format!("radii do not fit the {} domain", domain_name(self.domain)));
        }
        let check_grid = |path: &str, g: &Option<String>, err: &mut dyn FnMut(&str, String)| {
            if let Some(g) = g {
                match Grid::parse(g) {
                    Ok(parsed) if !parsed.fits(self.domain) => {
                        err(path, format!("radii do not fit the {} domain", domain_name(self.domain)))
                    }
                    Ok(_) => {}
                    Err(e) => err(path, e.to_string()),
                }
            }
        };
        if !(self.tol > 0.0 && self.tol < 1.0) {
            err("tol", format!("must lie in (0, 1), got {}", self.tol));
        }
        if !(self.residual_tol > 0.0) {
            err("residual_tol", "must be positive".into());
        }
        if !(0.0..0.5).contains(&self.trim) {
            err("trim", format!("must lie in [0, 0.5), got {}", self.trim));
        }
        let n = self.coefficients.len();
        for a in &self.analyses {
            match a {
                Analysis::Residual => {
                    if n == 0 {
                        err("coefficients", "residual needs an equation".into());
                    }
                    if self.solutions.is_empty() {
                        err("solutions", "residual needs at least one closed-form solution".into());
                    }
                }
                Analysis::Growth => {
                    let names = self.growth.names(self);
                    if names.is_empty() && !self.growth.numeric {
                        err("growth", "no functions to measure".into());
                    }
                    for (i, name) in names.iter().enumerate() {
                        if !name_exists(self, name) {
                            err(&format!("growth.functions[{i}]"), format!("unknown function '{name}'"));
                        }
                    }
                    if self.growth.numeric {
                        if n == 0 || kind != OperatorKind::Derivative {
                            err("growth.numeric", "numeric solutions need a differential equation".into());
                        }
                        if let Some(ic) = &self.growth.ic {
                            if ic.len() != n {
                                err("growth.ic", format!("expected {n} initial values"));
                            }
                        }
                    }
                    if self.growth.theta_count < 4 {
                        err("growth.theta_count", "must be at least 4".into());
                    }
                    check_grid("growth.grid", &self.growth.grid, &mut err);
                }
                Analysis::Dominance => {
                    if n == 0 {
                        err("coefficients", "dominance needs an equation".into());
                    }
                    if kind != OperatorKind::Derivative {
                        err("operator", "dominance conditions concern differential equations".into());
                    }
                    if self.dominance.kinds.is_empty() {
                        err("dominance.kinds", "at least one condition kind required".into());
                    }
                    for (i, k) in self.dominance.kinds.iter().enumerate() {
                        if ConditionKind::parse(k).is_none() {
                            err(&format!("dominance.kinds[{i}]"), format!("unknown condition kind '{k}'"));
                        }
                    }
                    check_grid("dominance.grid", &self.dominance.grid, &mut err);
                }
                Analysis::Reduce => {
                    if n == 0 {
                        err("coefficients", "reduce needs an equation".into());
                    }
                    if self.reduce.numeric {
                        if kind != OperatorKind::Derivative {
                            err("reduce.numeric", "numeric bases need a differential equation".into());
                        }
                    } else if self.solutions.len() != n {
                        err("reduce", format!("needs {n} solutions (a base) or numeric = true"));
                    }
                    for (i, &p) in self.reduce.p.iter().flatten().enumerate() {
                        if p >= n.max(1) {
                            err(&format!("reduce.p[{i}]"), format!("index {p} out of range 0..{n}"));
                        }
                    }
                }
                Analysis::Deficiency => {
                    let name = self.deficiency.function.clone().unwrap_or_else(|| default_deficiency_name(self));
                    if !name_exists(self, &name) {
                        err("deficiency.function", format!("unknown function '{name}'"));
                    }
                    if self.deficiency.targets.is_empty() {
                        err("deficiency.targets", "at least one target required".into());
                    }
                    for (i, t) in self.deficiency.targets.iter().enumerate() {
                        if parse_target(t).is_none() {
                            err(&format!("deficiency.targets[{i}]"), format!("expected a number or 'inf', got '{t}'"));
                        }
                    }
                    check_grid("deficiency.grid", &self.deficiency.grid, &mut err);
                }
                Analysis::Curve => {
                    if self.curve.p >= n {
                        err("curve.p", format!("index {} out of range 0..{n}", self.curve.p));
                    } else if let Some(eta) = &self.curve.eta {
                        if eta.len() != n - self.curve.p - 1 {
                            err("curve.eta", format!("expected {} exponents", n - self.curve.p - 1));
                        }
                        for (i, e) in eta.iter().enumerate() {
                            if !(*e > 1.0) {
                                err(&format!("curve.eta[{i}]"), format!("must exceed 1, got {e}"));
                            }
                        }
                    }
                    check_grid("curve.grid", &self.curve.grid, &mut err);
                }
                Analysis::Conclusion => {
                    if n == 0 {
                        err("coefficients", "conclusion needs an equation".into());
                    }
                    if conclusion_kind(&self.conclusion.kind).is_none() {
                        err("conclusion.kind", format!("unknown conclusion kind '{}'", self.conclusion.kind));
                    }
                    if self.conclusion.p >= n.max(1) {
                        err("conclusion.p", format!("index {} out of range 0..{n}", self.conclusion.p));
                    }
                    if self.conclusion.numeric {
                        if kind != OperatorKind::Derivative {
                            err("conclusion.numeric", "numeric solutions need a differential equation".into());
                        }
                    } else if self.solutions.is_empty() {
                        err("conclusion", "needs closed-form solutions or numeric = true".into());
                    }
                    if self.conclusion.theta_count < 4 {
                        err("conclusion.theta_count", "must be at least 4".into());
                    }
                    check_grid("conclusion.grid", &self.conclusion.grid, &mut err);
                }
            }
        }
        if !errs.is_empty() {
            return Err(ScenarioError::Invalid(errs));
        }
        Ok(Prepared { scenario: self.clone(), kind, coefficients, solutions, functions, grid, hash: self.hash() })
    }
}

pub(crate) fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Plane => "plane",
        Domain::Disc => "disc",
    }
}

pub(crate) fn default_deficiency_name(s: &Scenario) -> String {
    if s.functions.is_empty() {
        "A0".into()
    } else {
        "F0".into()
    }
}

fn name_exists(s: &Scenario, name: &str) -> bool {
    let (prefix, idx) = name.split_at(name.len().min(1));
    let Ok(i) = idx.parse::<usize>() else { return false };
    match prefix {
        "F" => i < s.functions.len(),
        "A" => i < s.coefficients.len(),
        "f" => i < s.solutions.len(),
        _ => false,
    }
}

pub(crate) fn parse_target(t: &str) -> Option<crate::nevanlinna::Target> {
    use crate::nevanlinna::Target;
    let t = t.trim();
    if t == "inf" || t == "infinity" {
        return Some(Target::Infinity);
    }
    t.parse::<f64>().ok().filter(|x| x.is_finite()).map(|x| Target::Finite(C::new(x, 0.0)))
}

pub(crate) fn conclusion_kind(s: &str) -> Option<ConclusionKind> {
    [ConclusionKind::LogTOverT, ConclusionKind::LogTOverLogM, ConclusionKind::LogTOverLogCircle, ConclusionKind::LogTOverLogArea]
        .into_iter()
        .find(|k| k.name() == s)
}
