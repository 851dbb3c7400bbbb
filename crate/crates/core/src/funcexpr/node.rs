//! Expression nodes and simplifying constructors.

use crate::scaled::Scaled;
use num_complex::Complex64 as C;
use std::sync::Arc;

pub(crate) type Expr = Arc<Node>;

#[derive(Debug, PartialEq)]
pub(crate) enum Node {
    Const(C),
    Var,
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quotient(Expr, Expr),
    Neg(Expr),
    /// Principal-branch power with a constant exponent.
    Pow(Expr, C),
    Exp(Expr),
    /// `inner(a·z + b)`
    Affine { inner: Expr, a: C, b: C },
    Gamma(Expr),
    /// ψ^{(k)}
    Polygamma(usize, Expr),
    /// `order`-th derivative of E_alpha
    MittagLeffler { alpha: f64, order: usize, arg: Expr },
}

pub(crate) fn constant(c: C) -> Expr {
    Arc::new(Node::Const(c))
}

pub(crate) fn real(x: f64) -> Expr {
    constant(C::new(x, 0.0))
}

pub(crate) fn var() -> Expr {
    Arc::new(Node::Var)
}

pub(crate) fn as_const(e: &Expr) -> Option<C> {
    match **e {
        Node::Const(c) => Some(c),
        _ => None,
    }
}

fn is_const(e: &Expr, v: f64) -> bool {
    as_const(e) == Some(C::new(v, 0.0))
}

fn scaled_const(s: Scaled) -> Expr {
    constant(s.to_complex())
}

pub(crate) fn sum(terms: Vec<Expr>) -> Expr {
    let mut kept: Vec<Expr> = terms.into_iter().filter(|t| !is_const(t, 0.0)).collect();
    if kept.iter().all(|t| as_const(t).is_some()) {
        return constant(kept.iter().fold(C::new(0.0, 0.0), |a, t| a + as_const(t).unwrap()));
    }
    if kept.len() == 1 {
        return kept.pop().unwrap();
    }
    Arc::new(Node::Sum(kept))
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    sum(vec![a, b])
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    sum(vec![a, neg(b)])
}

pub(crate) fn product(factors: Vec<Expr>) -> Expr {
    if factors.iter().any(|f| is_const(f, 0.0)) {
        return real(0.0);
    }
    let mut kept: Vec<Expr> = factors.into_iter().filter(|f| !is_const(f, 1.0)).collect();
    if kept.iter().all(|t| as_const(t).is_some()) {
        return constant(kept.iter().fold(C::new(1.0, 0.0), |a, t| a * as_const(t).unwrap()));
    }
    if kept.len() == 1 {
        return kept.pop().unwrap();
    }
    Arc::new(Node::Product(kept))
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    product(vec![a, b])
}

pub(crate) fn quotient(a: Expr, b: Expr) -> Expr {
    if is_const(&b, 1.0) {
        return a;
    }
    if is_const(&a, 0.0) {
        return a;
    }
    if let (Some(x), Some(y)) = (as_const(&a), as_const(&b)) {
        return constant(x / y);
    }
    Arc::new(Node::Quotient(a, b))
}

pub(crate) fn neg(a: Expr) -> Expr {
    if let Some(c) = as_const(&a) {
        return constant(-c);
    }
    if let Node::Neg(inner) = &*a {
        return inner.clone();
    }
    Arc::new(Node::Neg(a))
}

pub(crate) fn pow(a: Expr, c: C) -> Expr {
    if c == C::new(0.0, 0.0) {
        return real(1.0);
    }
    if c == C::new(1.0, 0.0) {
        return a;
    }
    if let Some(x) = as_const(&a) {
        return scaled_const(Scaled::from_c(x).powc(c));
    }
    Arc::new(Node::Pow(a, c))
}

pub(crate) fn exp(a: Expr) -> Expr {
    if let Some(x) = as_const(&a) {
        return scaled_const(Scaled::exp_of(x));
    }
    Arc::new(Node::Exp(a))
}

pub(crate) fn gamma(a: Expr) -> Expr {
    if let Some(x) = as_const(&a) {
        return scaled_const(crate::special::gamma(x));
    }
    Arc::new(Node::Gamma(a))
}

pub(crate) fn polygamma(k: usize, a: Expr) -> Expr {
    if let Some(x) = as_const(&a) {
        return constant(crate::special::polygamma(k, x));
    }
    Arc::new(Node::Polygamma(k, a))
}

pub(crate) fn mittag_leffler(alpha: f64, order: usize, a: Expr) -> Expr {
    if let Some(x) = as_const(&a) {
        return scaled_const(crate::special::mittag_leffler(alpha, order, x));
    }
    Arc::new(Node::MittagLeffler { alpha, order, arg: a })
}

pub(crate) fn affine(inner: Expr, a: C, b: C) -> Expr {
    if a == C::new(1.0, 0.0) && b == C::new(0.0, 0.0) {
        return inner;
    }
    match &*inner {
        Node::Const(_) => inner,
        Node::Var => add(mul(constant(a), var()), constant(b)),
        // f(a1 (a2 z + b2) + b1)
        Node::Affine { inner: f, a: a1, b: b1 } => affine(f.clone(), a1 * a, a1 * b + b1),
        _ => Arc::new(Node::Affine { inner, a, b }),
    }
}
