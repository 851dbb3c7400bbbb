//! Order reduction of a solution base and the coefficient identity
//! Σ_{k=p}^{n} A_k C_k = 0 (A_n = 1) that it produces.
//!
//! For the derivative kind C_p = 1, so the identity reads
//! −A_p = C_n + A_{n−1}C_{n−1} + ⋯ + A_{p+1}C_{p+1}.

mod ck;
mod jet;

pub use ck::{build_ck, CkSet, Poly};

use crate::equation::{binomial, Equation, OperatorKind};
use crate::funcexpr::{Domain, ExprError, FunctionExpr};
use crate::par;
use crate::samples::{random_in_disc, DEFAULT_SEED};
use crate::scaled::Scaled;
use crate::solvers::{equation_residual, state_at, SolverError};
use jet::Jet;
use num_complex::Complex64 as C;

/// Samples whose denominators fall below this (in modulus) are skipped.
pub const DENOMINATOR_FLOOR: f64 = 1e-120;
pub const SELF_CHECK_TOL: f64 = 1e-8;
pub const BASE_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("degenerate base ordering; permute base (f_{{{level},1}} vanishes identically)")]
    Degenerate { level: usize },
    #[error("base functions {0} and {1} coincide")]
    NotDistinct(usize, usize),
    #[error("empty solution base")]
    EmptyBase,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("index p = {p} must satisfy 0 <= p < n = {n}")]
    BadIndex { p: usize, n: usize },
    #[error("reduced equation of level {level} fails for f_{{{level},{s}}}: residual {residual:e} at {point}")]
    SelfCheck { level: usize, s: usize, point: C, residual: f64 },
    #[error("base function {index} does not solve the equation (residual {residual:e})")]
    BaseNotSolution { index: usize, residual: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// The triangular family f_{q,s}, 0 ≤ q ≤ n−1, 1 ≤ s ≤ n−q.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTable {
    pub kind: OperatorKind,
    pub n: usize,
    /// `f[q][s − 1]` = f_{q,s}
    pub f: Vec<Vec<FunctionExpr>>,
}

impl ReductionTable {
    pub fn get(&self, q: usize, s: usize) -> &FunctionExpr {
        &self.f[q][s - 1]
    }

    pub fn domain(&self) -> Domain {
        self.f[0].iter().fold(Domain::Plane, |d, e| d.join(e.domain()))
    }
}

fn apply_op(kind: OperatorKind, e: &FunctionExpr) -> Result<FunctionExpr, ExprError> {
    match kind {
        OperatorKind::Derivative => Ok(e.differentiate()),
        OperatorKind::Difference => e.delta(),
        OperatorKind::QDifference(q) => e.delta_q(q),
    }
}

fn probe_points(domain: Domain, count: usize) -> Vec<C> {
    let r = match domain {
        Domain::Plane => 2.0,
        Domain::Disc => 0.7,
    };
    random_in_disc(r, count, DEFAULT_SEED)
}

/// All probes below 1e−300, or below 1e−10 relative to `reference` (the
/// quotient the function was obtained from), which catches cancellation.
fn vanishes_identically(e: &FunctionExpr, reference: Option<&FunctionExpr>, pts: &[C]) -> bool {
    if e.is_zero() {
        return true;
    }
    pts.iter().all(|&z| match e.eval_scaled(z) {
        Ok(v) if !v.is_nan() => {
            if v.is_zero() || v.ln_abs() < (1e-300f64).ln() {
                return true;
            }
            match reference.and_then(|r| r.eval_scaled(z).ok()) {
                Some(g) if !g.is_nan() && !g.is_zero() => v.ln_abs() - g.ln_abs() < (1e-10f64).ln(),
                _ => false,
            }
        }
        _ => false,
    })
}

/// f_{q,s} = L(f_{q−1,s+1}/f_{q−1,1}) with L = d/dz, Δ or Δ_q.
pub fn reduce_base(base: &[FunctionExpr], kind: OperatorKind) -> Result<ReductionTable, ReductionError> {
    let n = base.len();
    if n == 0 {
        return Err(ReductionError::EmptyBase);
    }
    for i in 0..n {
        for j in i + 1..n {
            if base[i] == base[j] {
                return Err(ReductionError::NotDistinct(i + 1, j + 1));
            }
        }
    }
    let domain = base.iter().fold(Domain::Plane, |d, e| d.join(e.domain()));
    let pts = probe_points(domain, 20);
    let mut f: Vec<Vec<FunctionExpr>> = vec![base.iter().map(|e| e.with_domain(domain)).collect()];
    if vanishes_identically(&f[0][0], None, &pts) {
        return Err(ReductionError::Degenerate { level: 0 });
    }
    for q in 1..n {
        let prev = &f[q - 1];
        let quotients: Vec<FunctionExpr> = (1..=n - q).map(|s| prev[s].div(&prev[0])).collect();
        let row = quotients.iter().map(|g| apply_op(kind, g)).collect::<Result<Vec<_>, _>>()?;
        if vanishes_identically(&row[0], Some(&quotients[0]), &pts) {
            return Err(ReductionError::Degenerate { level: q });
        }
        f.push(row);
    }
    Ok(ReductionTable { kind, n, f })
}

/// L^l u evaluated at the lattice point `shift` steps from z, over u at
/// `den` steps from z (plain quotient for the derivative kind).
fn level_factor(kind: OperatorKind, u: &FunctionExpr, l: usize, shift: usize, den: usize) -> Result<FunctionExpr, ExprError> {
    match kind {
        OperatorKind::Derivative => Ok(u.derivative(l).div(u)),
        OperatorKind::Difference => {
            let num = kind.apply(u, l).shift(C::new(shift as f64, 0.0))?;
            Ok(num.div(&u.shift(C::new(den as f64, 0.0))?))
        }
        OperatorKind::QDifference(q) => {
            let num = kind.apply(u, l).qscale(q.powu(shift as u32))?;
            Ok(num.div(&u.qscale(q.powu(den as u32))?))
        }
    }
}

/// Coefficients A_{q,j} of the reduced equations solved by f_{q,1..n−q}.
/// Entry q of the result lists A_{q,0..n−q−1}; entry 0 is `a` itself. Each
/// level is checked on `samples` (residual below 1e−8).
pub fn reduced_coefficients(
    a: &[FunctionExpr],
    table: &ReductionTable,
    samples: &[C],
) -> Result<Vec<Vec<FunctionExpr>>, ReductionError> {
    let n = table.n;
    if a.len() != n {
        return Err(ReductionError::CoefficientCount { expected: n, got: a.len() });
    }
    let domain = table.domain();
    let one = FunctionExpr::constant(C::new(1.0, 0.0), domain);
    let mut levels = vec![a.to_vec()];
    for q in 1..n {
        let m = n - q + 1;
        let prev: Vec<FunctionExpr> = levels[q - 1].iter().cloned().chain(std::iter::once(one.clone())).collect();
        let u = table.get(q - 1, 1);
        let mut row = Vec::with_capacity(m - 1);
        for j in 0..m - 1 {
            let mut terms = Vec::new();
            for k in j + 1..=m {
                let fac = level_factor(table.kind, u, k - j - 1, j + 1, m)?;
                terms.push(prev[k].mul(&fac).scale(C::new(binomial(k, j + 1) as f64, 0.0)));
            }
            row.push(FunctionExpr::sum_of(&terms, domain));
        }
        let eq = Equation::new(table.kind, row.clone());
        for s in 1..=n - q {
            let rep = equation_residual(&eq, table.get(q, s), samples);
            if rep.max > SELF_CHECK_TOL || rep.max.is_nan() {
                let worst = rep
                    .values
                    .iter()
                    .position(|v| *v == Some(rep.max))
                    .map(|i| samples[i])
                    .unwrap_or_default();
                return Err(ReductionError::SelfCheck { level: q, s, point: worst, residual: rep.max });
            }
        }
        levels.push(row);
    }
    Ok(levels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub n: usize,
    pub p: usize,
    pub max: f64,
    /// per-sample residual; None for skipped samples
    pub values: Vec<Option<f64>>,
    pub skipped: usize,
}

impl IdentityReport {
    fn from_values(n: usize, p: usize, values: Vec<Option<f64>>) -> IdentityReport {
        let skipped = values.iter().filter(|v| v.is_none()).count();
        let max = values.iter().flatten().copied().fold(0.0, f64::max);
        IdentityReport { n, p, max, values, skipped }
    }
}

fn check_index(n: usize, p: usize) -> Result<(), ReductionError> {
    if p >= n {
        return Err(ReductionError::BadIndex { p, n });
    }
    Ok(())
}

/// Jets of f_{0,1..n}, normalized per function, to the jets of f_{t,1},
/// t = 0..=p.
fn level_jets(base: Vec<Jet>, p: usize) -> Option<Vec<Jet>> {
    let mut row = base;
    let mut out = Vec::with_capacity(p + 1);
    for _ in 0..=p {
        out.push(row[0].clone());
        let lead = row[0].clone();
        let mut next = Vec::with_capacity(row.len().saturating_sub(1));
        for f in row.iter().skip(1) {
            next.push(f.div(&lead)?.derivative());
        }
        row = next;
    }
    Some(out)
}

/// |A_p + Σ_{k>p} A_k C_k| / (1 + |A_p|) from derivative-kind jets.
fn derivative_identity(ck: &CkSet, a_vals: &[C], jets: &[Jet]) -> Option<f64> {
    let (n, p) = (ck.n, ck.p);
    let g: Vec<Vec<C>> = jets
        .iter()
        .map(|j| {
            let top = (n - p).min(j.len() - 1);
            (0..=top).map(|l| j.derivative_value(l) / j.0[0]).collect()
        })
        .collect();
    let coef = |k: usize| if k == n { C::new(1.0, 0.0) } else { a_vals[k] };
    let mut sum = coef(p);
    for (k, poly) in ck.iter().skip(1) {
        let mut c = C::new(0.0, 0.0);
        for (mono, kc) in poly {
            let mut term = C::new(*kc as f64, 0.0);
            for (t, &l) in mono.iter().enumerate() {
                term *= g[t][l];
            }
            c += term;
        }
        sum += coef(k) * c;
    }
    let r = sum.norm() / (1.0 + a_vals[p].norm());
    r.is_finite().then_some(r)
}

fn closed_form_jets(base: &[Vec<FunctionExpr>], z: C) -> Option<Vec<Jet>> {
    base.iter()
        .map(|ders| {
            let vals: Vec<Scaled> = ders.iter().map(|d| d.eval_scaled(z).ok()).collect::<Option<_>>()?;
            if vals.iter().any(|v| v.is_nan() || v.is_infinite()) {
                return None;
            }
            let top = vals.iter().map(|v| v.ln_abs()).fold(f64::NEG_INFINITY, f64::max);
            if top == f64::NEG_INFINITY {
                return None;
            }
            let norm = Scaled::new(C::new(1.0, 0.0), top);
            Some(Jet::from_derivatives(&vals.iter().map(|v| v.div(norm).to_complex()).collect::<Vec<_>>()))
        })
        .collect()
}

fn eval_coeffs(a: &[FunctionExpr], z: C) -> Option<Vec<C>> {
    a.iter()
        .map(|e| e.eval(z).ok().filter(|v| v.re.is_finite() && v.im.is_finite()))
        .collect()
}

/// Max over samples of the identity residual for a closed-form base held
/// in `table`: |A_p + Σ A_k C_k| / (1 + |A_p|) for the derivative kind and
/// |Σ_{k≥p} A_k C_k| / (|C_p| (1 + |A_p|)) for Δ and Δ_q.
pub fn identity_residual(
    a: &[FunctionExpr],
    table: &ReductionTable,
    p: usize,
    samples: &[C],
) -> Result<IdentityReport, ReductionError> {
    let n = table.n;
    check_index(n, p)?;
    if a.len() != n {
        return Err(ReductionError::CoefficientCount { expected: n, got: a.len() });
    }
    let eq = Equation::new(table.kind, a.to_vec());
    for (i, f) in table.f[0].iter().enumerate() {
        let rep = equation_residual(&eq, f, samples);
        if rep.max > BASE_CHECK_TOL {
            return Err(ReductionError::BaseNotSolution { index: i + 1, residual: rep.max });
        }
    }
    let ck = build_ck(n, p);
    let values = match table.kind {
        OperatorKind::Derivative => {
            let ders: Vec<Vec<FunctionExpr>> =
                table.f[0].iter().map(|f| (0..=n + 1).map(|k| f.derivative(k)).collect()).collect();
            par::map(samples, |&z| {
                let a_vals = eval_coeffs(a, z)?;
                let jets = level_jets(closed_form_jets(&ders, z)?, p)?;
                derivative_identity(&ck, &a_vals, &jets)
            })
        }
        kind => par::map(samples, |&z| difference_identity(&ck, kind, a, table, z)),
    };
    Ok(IdentityReport::from_values(n, p, values))
}

fn difference_identity(ck: &CkSet, kind: OperatorKind, a: &[FunctionExpr], table: &ReductionTable, z: C) -> Option<f64> {
    let (n, p) = (ck.n, ck.p);
    // u_t at the lattice points 0..=n steps from z
    let vals: Vec<Vec<Scaled>> = (0..=p)
        .map(|t| {
            (0..=n)
                .map(|o| table.get(t, 1).eval_scaled(kind.lattice_point(z, o)).ok().filter(|v| !v.is_nan()))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<_>>()?;
    let floor = DENOMINATOR_FLOOR.ln();
    let factor = |t: usize, l: usize, shift: usize| -> Option<Scaled> {
        let den = if t == p { vals[t][0] } else { vals[t][n - t] };
        if den.is_zero() || den.ln_abs() < floor || den.is_infinite() {
            return None;
        }
        let num = crate::equation::finite_difference(&vals[t][shift..=shift + l], l);
        Some(num.div(den))
    };
    let monomial = |mono: &[usize]| -> Option<Scaled> {
        let mut acc = Scaled::one();
        let mut above = 0usize;
        for t in (0..=p).rev() {
            let shift = if t == p { 0 } else { above + p - t };
            acc = acc.mul(factor(t, mono[t], shift)?);
            above += mono[t];
        }
        Some(acc)
    };
    let a_vals: Vec<Scaled> = a.iter().map(|e| e.eval_scaled(z).ok()).collect::<Option<_>>()?;
    let coef = |k: usize| if k == n { Scaled::one() } else { a_vals[k] };
    let mut cp = Scaled::zero();
    let mut sum = Scaled::zero();
    for (k, poly) in ck.iter() {
        let mut c = Scaled::zero();
        for (mono, kc) in poly {
            c = c.add(monomial(mono)?.mul_c(C::new(*kc as f64, 0.0)));
        }
        if k == p {
            cp = c;
        }
        sum = sum.add(coef(k).mul(c));
    }
    let scale = cp.ln_abs() + (1.0 + a_vals[p].to_complex().norm()).ln();
    let r = (sum.ln_abs() - scale).exp();
    r.is_finite().then_some(r)
}

/// Jet of a solution of the derivative-kind equation from its state
/// (f, …, f^{(n−1)}) at z0, extended to `len` terms through the equation.
fn solution_jet(state: &[C], a_jets: &[Jet], len: usize) -> Jet {
    let n = state.len();
    let mut c = Jet::from_derivatives(state).0;
    c.resize(len.max(n), C::new(0.0, 0.0));
    // falling factorial (m + j)! / m!
    let ff = |m: usize, j: usize| -> f64 { (1..=j).map(|i| (m + i) as f64).product() };
    for m in 0..len.saturating_sub(n) {
        let mut acc = C::new(0.0, 0.0);
        for (j, aj) in a_jets.iter().enumerate() {
            for r in 0..=m {
                acc += aj.0[r] * c[m - r + j] * ff(m - r, j);
            }
        }
        c[m + n] = -acc / ff(m, n);
    }
    Jet(c)
}

/// Identity residual on the fundamental base of a derivative-kind equation
/// generated numerically: unit initial states at the origin propagated to
/// each sample, then extended to jets through the equation itself.
pub fn identity_residual_numeric(eq: &Equation, p: usize, samples: &[C], tol: f64) -> Result<IdentityReport, ReductionError> {
    let n = eq.order();
    check_index(n, p)?;
    if eq.kind != OperatorKind::Derivative {
        return Err(SolverError::NotDerivative.into());
    }
    let len = n + 2;
    let a_ders: Vec<Vec<FunctionExpr>> = eq.coeffs.iter().map(|a| (0..len).map(|k| a.derivative(k)).collect()).collect();
    let ck = build_ck(n, p);
    let results = par::map(samples, |&z| -> Result<Option<f64>, ReductionError> {
        let a_jets: Option<Vec<Jet>> = a_ders
            .iter()
            .map(|ds| ds.iter().map(|d| d.eval(z).ok()).collect::<Option<Vec<_>>>().map(|v| Jet::from_derivatives(&v)))
            .collect();
        let Some(a_jets) = a_jets else { return Ok(None) };
        let mut base = Vec::with_capacity(n);
        for s in 0..n {
            let mut ic = vec![C::new(0.0, 0.0); n];
            ic[s] = C::new(1.0, 0.0);
            let pt = state_at(eq, &ic, z, tol)?;
            base.push(solution_jet(&pt.state, &a_jets, len));
        }
        let a_vals: Vec<C> = a_jets.iter().map(|j| j.0[0]).collect();
        Ok(level_jets(base, p).and_then(|jets| derivative_identity(&ck, &a_vals, &jets)))
    });
    let values = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(IdentityReport::from_values(n, p, values))
}
