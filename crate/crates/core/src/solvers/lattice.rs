//! Forward recurrences for shift-form difference and q-difference
//! equations, and the Δ-form / shift-form coefficient conversions.

use super::SolverError;
use crate::equation::{binomial, OperatorKind};
use crate::funcexpr::{FunctionExpr, LogValue};
use crate::scaled::Scaled;
use num_complex::Complex64 as C;

pub const LATTICE_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution {
    pub z0: C,
    pub kind: OperatorKind,
    pub points: Vec<C>,
    pub values: Vec<LogValue>,
    /// largest relative recurrence residual over interior points
    pub max_residual: f64,
}

/// Σ_{j=0}^{n} B_j(z_k) f(z_{k+j}) relative to Σ |B_j f(z_{k+j})|.
fn relative_residual(b: &[Scaled], f: &[Scaled]) -> f64 {
    let mut sum = Scaled::zero();
    let mut terms = Vec::with_capacity(b.len());
    for (bj, fj) in b.iter().zip(f) {
        let t = bj.mul(*fj);
        sum = sum.add(t);
        terms.push(t.ln_abs());
    }
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    let denom = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    (sum.ln_abs() - denom).exp()
}

/// Iterates Σ_{j=0}^{n} B_j(z) f(z + j) = 0 (or f(q^j z)) forward from the
/// n seed values at z0, producing `count` values in total.
pub fn iterate_lattice(
    b: &[FunctionExpr],
    kind: OperatorKind,
    z0: C,
    seeds: &[C],
    count: usize,
) -> Result<LatticeSolution, SolverError> {
    if kind == OperatorKind::Derivative {
        return Err(SolverError::Invalid("lattice iteration needs a difference or q-difference kind".into()));
    }
    let n = b.len().checked_sub(1).filter(|&n| n > 0).ok_or_else(|| SolverError::Invalid("need at least two shift coefficients".into()))?;
    if seeds.len() != n {
        return Err(SolverError::Invalid(format!("{} seed values given, recurrence order is {n}", seeds.len())));
    }
    let count = count.max(n);
    let points: Vec<C> = (0..count).map(|k| kind.lattice_point(z0, k)).collect();
    let mut vals: Vec<Scaled> = seeds.iter().map(|&c| Scaled::from_c(c)).collect();
    let mut max_residual = 0.0f64;
    let coeffs_at = |z: C| -> Result<Vec<Scaled>, SolverError> {
        b.iter().map(|e| e.eval_scaled(z).map_err(SolverError::from)).collect()
    };
    for k in 0..count - n {
        let bk = coeffs_at(points[k])?;
        if bk[n].is_zero() || bk[n].ln_abs() < -276.0 {
            return Err(SolverError::LeadingVanishes(points[k]));
        }
        let mut acc = Scaled::zero();
        for j in 0..n {
            acc = acc.add(bk[j].mul(vals[k + j]));
        }
        vals.push(acc.neg().div(bk[n]));
        max_residual = max_residual.max(relative_residual(&bk, &vals[k..=k + n]));
    }
    if max_residual > LATTICE_RESIDUAL_TOL {
        return Err(SolverError::LatticeResidual(max_residual));
    }
    Ok(LatticeSolution { z0, kind, points, values: vals.iter().map(|v| v.to_log()).collect(), max_residual })
}

fn signed(c: u64, negative: bool) -> C {
    C::new(if negative { -(c as f64) } else { c as f64 }, 0.0)
}

/// Shift-form coefficients B_0..B_n of Σ_{k=0}^{n} A_k Δ^k f = 0 with
/// A_n = 1, from `a` = A_0..A_{n−1}; the same expansion serves Δ_q.
pub fn delta_to_shift(a: &[FunctionExpr]) -> Vec<FunctionExpr> {
    let n = a.len();
    let domain = a.first().map(|e| e.domain()).unwrap_or(crate::funcexpr::Domain::Plane);
    let one = FunctionExpr::constant(C::new(1.0, 0.0), domain);
    let full: Vec<FunctionExpr> = a.iter().cloned().chain(std::iter::once(one)).collect();
    (0..=n)
        .map(|j| {
            let terms: Vec<FunctionExpr> =
                (j..=n).map(|k| full[k].scale(signed(binomial(k, j), (k - j) % 2 == 1))).collect();
            FunctionExpr::sum_of(&terms, domain)
        })
        .collect()
}

/// Δ-form coefficients A_0..A_n (leading included, not normalized) of
/// Σ_{j=0}^{n} B_j f(z + j) = 0.
pub fn shift_to_delta(b: &[FunctionExpr]) -> Vec<FunctionExpr> {
    let n = b.len().saturating_sub(1);
    let domain = b.first().map(|e| e.domain()).unwrap_or(crate::funcexpr::Domain::Plane);
    (0..b.len())
        .map(|k| {
            let terms: Vec<FunctionExpr> = (k..=n).map(|j| b[j].scale(signed(binomial(j, k), false))).collect();
            FunctionExpr::sum_of(&terms, domain)
        })
        .collect()
}
