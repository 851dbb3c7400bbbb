//! Relative residual of an equation at a candidate solution.

use super::lattice::delta_to_shift;
use crate::equation::{Equation, OperatorKind};
use crate::funcexpr::FunctionExpr;
use crate::par;
use crate::scaled::Scaled;
use num_complex::Complex64 as C;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// max over evaluated samples
    pub max: f64,
    /// per-sample residual, None where the sample was skipped
    pub values: Vec<Option<f64>>,
    pub skipped: usize,
    /// the candidate is identically zero
    pub trivial: bool,
}

/// |Σ t_j| / Σ |t_j| in log scale; 0 when every term vanishes.
pub(crate) fn relative_sum(terms: &[Scaled]) -> Option<f64> {
    let logs: Vec<f64> = terms.iter().map(|t| t.ln_abs()).collect();
    if logs.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
        return None;
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Some(0.0);
    }
    let mut sum = Scaled::zero();
    for t in terms {
        sum = sum.add(*t);
    }
    let denom = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    Some((sum.ln_abs() - denom).exp())
}

/// Terms of the equation at z whose sum is the residual: A_j·L^j f for the
/// derivative kind, B_j·f(z_j) on the lattice for difference kinds.
fn terms_at(coeffs: &[FunctionExpr], fs: &[FunctionExpr], kind: OperatorKind, z: C) -> Option<Vec<Scaled>> {
    let mut out = Vec::with_capacity(fs.len());
    for (j, fj) in fs.iter().enumerate() {
        let (point, c) = match kind {
            OperatorKind::Derivative => (z, coeffs.get(j)),
            _ => (kind.lattice_point(z, j), coeffs.get(j)),
        };
        let fv = fj.eval_scaled(point).ok()?;
        let cv = match c {
            Some(c) => c.eval_scaled(z).ok()?,
            None => Scaled::one(),
        };
        out.push(cv.mul(fv));
    }
    Some(out)
}

pub fn equation_residual(eq: &Equation, candidate: &FunctionExpr, samples: &[C]) -> ResidualReport {
    if candidate.is_zero() {
        return ResidualReport { max: 0.0, values: vec![Some(0.0); samples.len()], skipped: 0, trivial: true };
    }
    let n = eq.order();
    let (coeffs, fs): (Vec<FunctionExpr>, Vec<FunctionExpr>) = match eq.kind {
        OperatorKind::Derivative => (eq.coeffs.clone(), (0..=n).map(|k| candidate.derivative(k)).collect()),
        _ => (delta_to_shift(&eq.coeffs), (0..=n).map(|_| candidate.clone()).collect()),
    };
    let values = par::map(samples, |&z| terms_at(&coeffs, &fs, eq.kind, z).and_then(|t| relative_sum(&t)));
    let skipped = values.iter().filter(|v| v.is_none()).count();
    let max = values.iter().flatten().copied().fold(0.0, f64::max);
    ResidualReport { max, values, skipped, trivial: false }
}
