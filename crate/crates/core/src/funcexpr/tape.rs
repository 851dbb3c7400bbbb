//! Flattened evaluation program for an expression DAG.

use super::node::{Expr, Node};
use crate::scaled::Scaled;
use num_complex::Complex64 as C;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug)]
enum Op {
    Input,
    Affine(usize, C, C),
    Const(C),
    Sum(Vec<usize>),
    Product(Vec<usize>),
    Quot(usize, usize),
    Neg(usize),
    Pow(usize, C),
    Exp(usize),
    Gamma(usize),
    Polygamma(usize, usize),
    Ml(f64, usize, usize),
}

#[derive(Debug)]
pub(crate) struct Tape {
    ops: Vec<Op>,
}

struct Compiler {
    ops: Vec<Op>,
    memo: HashMap<(*const Node, usize), usize>,
    affine_memo: HashMap<(usize, [u64; 4]), usize>,
}

fn key(a: C, b: C) -> [u64; 4] {
    [a.re.to_bits(), a.im.to_bits(), b.re.to_bits(), b.im.to_bits()]
}

impl Compiler {
    fn push(&mut self, op: Op) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    fn compile(&mut self, e: &Expr, v: usize) -> usize {
        let k = (Arc::as_ptr(e), v);
        if let Some(&r) = self.memo.get(&k) {
            return r;
        }
        let op = match &**e {
            Node::Const(c) => Op::Const(*c),
            Node::Var => {
                self.memo.insert(k, v);
                return v;
            }
            Node::Sum(xs) => Op::Sum(xs.iter().map(|x| self.compile(x, v)).collect()),
            Node::Product(xs) => Op::Product(xs.iter().map(|x| self.compile(x, v)).collect()),
            Node::Quotient(a, b) => {
                let (a, b) = (self.compile(a, v), self.compile(b, v));
                Op::Quot(a, b)
            }
            Node::Neg(a) => Op::Neg(self.compile(a, v)),
            Node::Pow(a, c) => Op::Pow(self.compile(a, v), *c),
            Node::Exp(a) => Op::Exp(self.compile(a, v)),
            Node::Gamma(a) => Op::Gamma(self.compile(a, v)),
            Node::Polygamma(n, a) => Op::Polygamma(*n, self.compile(a, v)),
            Node::MittagLeffler { alpha, order, arg } => Op::Ml(*alpha, *order, self.compile(arg, v)),
            Node::Affine { inner, a, b } => {
                let ak = (v, key(*a, *b));
                let w = match self.affine_memo.get(&ak) {
                    Some(&w) => w,
                    None => {
                        let w = self.push(Op::Affine(v, *a, *b));
                        self.affine_memo.insert(ak, w);
                        w
                    }
                };
                let r = self.compile(inner, w);
                self.memo.insert(k, r);
                return r;
            }
        };
        let r = self.push(op);
        self.memo.insert(k, r);
        r
    }
}

impl Tape {
    pub fn compile(root: &Expr) -> Tape {
        let mut c = Compiler { ops: vec![Op::Input], memo: HashMap::new(), affine_memo: HashMap::new() };
        let out = c.compile(root, 0);
        if out != c.ops.len() - 1 {
            // root is the variable itself or a shared register; copy it to the end
            c.ops.push(Op::Sum(vec![out]));
        }
        Tape { ops: c.ops }
    }

    pub fn run(&self, z: C) -> Scaled {
        let mut regs: Vec<Scaled> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Input => Scaled::from_c(z),
                Op::Affine(src, a, b) => Scaled::from_c(a * regs[*src].to_complex() + b),
                Op::Const(c) => Scaled::from_c(*c),
                Op::Sum(xs) => xs.iter().fold(Scaled::zero(), |acc, &i| acc.add(regs[i])),
                Op::Product(xs) => {
                    let mut acc = regs[xs[0]];
                    for &i in &xs[1..] {
                        acc = acc.mul(regs[i]);
                    }
                    acc
                }
                Op::Quot(a, b) => regs[*a].div(regs[*b]),
                Op::Neg(a) => regs[*a].neg(),
                Op::Pow(a, c) => regs[*a].powc(*c),
                Op::Exp(a) => regs[*a].exp(),
                Op::Gamma(a) => plain(regs[*a]).map_or(Scaled::nan(), crate::special::gamma),
                Op::Polygamma(n, a) => plain(regs[*a])
                    .map_or(Scaled::nan(), |w| Scaled::from_c(crate::special::polygamma(*n, w))),
                Op::Ml(alpha, order, a) => plain(regs[*a])
                    .map_or(Scaled::nan(), |w| crate::special::mittag_leffler(*alpha, *order, w)),
            };
            regs.push(v);
        }
        regs.pop().unwrap()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }
}

fn plain(s: Scaled) -> Option<C> {
    let c = s.to_complex();
    (c.re.is_finite() && c.im.is_finite()).then_some(c)
}
