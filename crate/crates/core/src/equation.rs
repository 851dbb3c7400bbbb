//! Linear equations Σ_{j=0}^{n} A_j L^j f = 0 with A_n = 1, where L is
//! d/dz, Δ or Δ_q.

use crate::funcexpr::{Domain, FunctionExpr};
use crate::scaled::Scaled;
use num_complex::Complex64 as C;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind {
    Derivative,
    /// Δf(z) = f(z+1) − f(z)
    Difference,
    /// Δ_q f(z) = f(qz) − f(z)
    QDifference(C),
}

impl OperatorKind {
    pub fn name(&self) -> String {
        match self {
            OperatorKind::Derivative => "derivative".into(),
            OperatorKind::Difference => "difference".into(),
            OperatorKind::QDifference(q) if q.im == 0.0 => format!("qdifference(q={})", q.re),
            OperatorKind::QDifference(q) => format!("qdifference(q={}{:+}i)", q.re, q.im),
        }
    }

    /// Lattice point m steps from z: z + m or q^m z.
    pub fn lattice_point(&self, z: C, m: usize) -> C {
        match self {
            OperatorKind::Derivative | OperatorKind::Difference => z + m as f64,
            OperatorKind::QDifference(q) => q.powu(m as u32) * z,
        }
    }

    /// Symbolic L^k f.
    pub fn apply(&self, f: &FunctionExpr, k: usize) -> FunctionExpr {
        match self {
            OperatorKind::Derivative => f.derivative(k),
            _ => {
                let mut g = f.clone();
                for _ in 0..k {
                    g = match self {
                        OperatorKind::Difference => g.delta(),
                        OperatorKind::QDifference(q) => g.delta_q(*q),
                        OperatorKind::Derivative => unreachable!(),
                    }
                    .expect("difference operators need plane functions");
                }
                g
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Δ^l (or Δ_q^l) of sampled values: `vals[i]` = f at lattice point i.
pub fn finite_difference(vals: &[Scaled], l: usize) -> Scaled {
    let mut s = Scaled::zero();
    for i in 0..=l {
        let c = binomial(l, i) as f64 * if (l - i) % 2 == 0 { 1.0 } else { -1.0 };
        s = s.add(vals[i].mul_c(C::new(c, 0.0)));
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub kind: OperatorKind,
    /// A_0, …, A_{n−1}; the leading coefficient is 1.
    pub coeffs: Vec<FunctionExpr>,
}

impl Equation {
    pub fn new(kind: OperatorKind, coeffs: Vec<FunctionExpr>) -> Equation {
        Equation { kind, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn domain(&self) -> Domain {
        self.coeffs.iter().fold(Domain::Plane, |d, a| d.join(a.domain()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn second_difference_of_squares_is_two() {
        let vals: Vec<Scaled> = (0..3).map(|i| Scaled::from_c(C::new((i * i) as f64, 0.0))).collect();
        assert_eq!(finite_difference(&vals, 2).to_complex(), C::new(2.0, 0.0));
    }
}
