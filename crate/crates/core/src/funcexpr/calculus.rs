//! Symbolic differentiation.

use super::node::{self, Expr, Node};
use num_complex::Complex64 as C;
use std::collections::HashMap;
use std::sync::Arc;

/// Leibniz expansion is used for products up to this many factors; larger
/// families use P·Σ f_k'/f_k.
const LEIBNIZ_MAX: usize = 16;

pub(crate) struct Differ {
    memo: HashMap<*const Node, Expr>,
}

impl Differ {
    pub fn new() -> Differ {
        Differ { memo: HashMap::new() }
    }

    pub fn d(&mut self, e: &Expr) -> Expr {
        let key = Arc::as_ptr(e);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let out = self.d_uncached(e);
        self.memo.insert(key, out.clone());
        out
    }

    fn d_uncached(&mut self, e: &Expr) -> Expr {
        match &**e {
            Node::Const(_) => node::real(0.0),
            Node::Var => node::real(1.0),
            Node::Sum(xs) => node::sum(xs.iter().map(|x| self.d(x)).collect()),
            Node::Neg(a) => node::neg(self.d(a)),
            Node::Product(xs) if xs.len() <= LEIBNIZ_MAX => {
                let mut terms = Vec::with_capacity(xs.len());
                for k in 0..xs.len() {
                    let dk = self.d(&xs[k]);
                    let mut fs: Vec<Expr> = xs.clone();
                    fs[k] = dk;
                    terms.push(node::product(fs));
                }
                node::sum(terms)
            }
            Node::Product(xs) => {
                let logd: Vec<Expr> = xs.iter().map(|x| node::quotient(self.d(x), x.clone())).collect();
                node::mul(e.clone(), node::sum(logd))
            }
            Node::Quotient(u, v) => {
                // u'/v - u v'/v^2
                let du = self.d(u);
                let dv = self.d(v);
                node::sub(
                    node::quotient(du, v.clone()),
                    node::quotient(node::mul(u.clone(), dv), node::pow(v.clone(), C::new(2.0, 0.0))),
                )
            }
            Node::Pow(u, c) => {
                let du = self.d(u);
                node::product(vec![node::constant(*c), node::pow(u.clone(), c - 1.0), du])
            }
            Node::Exp(u) => {
                let du = self.d(u);
                node::mul(e.clone(), du)
            }
            Node::Affine { inner, a, b } => {
                let di = self.d(inner);
                node::mul(node::constant(*a), node::affine(di, *a, *b))
            }
            Node::Gamma(u) => {
                let du = self.d(u);
                node::product(vec![e.clone(), node::polygamma(0, u.clone()), du])
            }
            Node::Polygamma(k, u) => {
                let du = self.d(u);
                node::mul(node::polygamma(k + 1, u.clone()), du)
            }
            Node::MittagLeffler { alpha, order, arg } => {
                let du = self.d(arg);
                node::mul(node::mittag_leffler(*alpha, order + 1, arg.clone()), du)
            }
        }
    }
}
