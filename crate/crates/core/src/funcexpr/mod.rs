//! Immutable expression trees for analytic functions on ℂ or the unit disc,
//! closed under differentiation, shifts and q-scaling, with evaluation that
//! survives exp-of-exp magnitudes.
//!
//! ```
//! use valdist_core::funcexpr::FunctionExpr;
//! use num_complex::Complex64;
//!
//! let f = FunctionExpr::parse("exp(exp(z))").unwrap();
//! let v = f.eval_log(Complex64::new(5.0, 0.0)).unwrap();
//! assert!((v.ln_abs - 5f64.exp()).abs() < 1e-10);
//! ```

mod calculus;
mod node;
mod parse;
mod tape;

pub use parse::ParseError;

use crate::scaled::Scaled;
use node::Expr;
use num_complex::Complex64 as C;
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Plane,
    Disc,
}

impl Domain {
    /// Combining a plane and a disc function yields a disc function.
    pub fn join(self, other: Domain) -> Domain {
        if self == Domain::Disc || other == Domain::Disc {
            Domain::Disc
        } else {
            Domain::Plane
        }
    }

    pub fn contains(self, z: C) -> bool {
        match self {
            Domain::Plane => z.re.is_finite() && z.im.is_finite(),
            Domain::Disc => z.norm() < 1.0,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Plane => "plane",
            Domain::Disc => "disc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("expression is tagged {inline} but was supplied as {expected}")]
    DomainMismatch { inline: Domain, expected: Domain },
    #[error("point {0} lies outside the unit disc")]
    OutsideDisc(C),
    #[error("shifts and q-scalings are only defined for plane functions")]
    DiscOperator,
}

/// Natural log of |value| and its phase. Zeros carry `ln_abs = -∞`,
/// poles `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub phase: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { ln_abs: f64::NEG_INFINITY, phase: 0.0 };
    pub const POLE: LogValue = LogValue { ln_abs: f64::INFINITY, phase: 0.0 };

    pub fn from_complex(c: C) -> LogValue {
        Scaled::from_c(c).to_log()
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn is_pole(&self) -> bool {
        self.ln_abs == f64::INFINITY
    }

    pub fn to_complex(&self) -> C {
        if self.is_zero() {
            return C::new(0.0, 0.0);
        }
        C::from_polar(self.ln_abs.exp(), self.phase)
    }

    pub fn mul(self, o: LogValue) -> LogValue {
        LogValue { ln_abs: self.ln_abs + o.ln_abs, phase: self.phase + o.phase }
    }

    pub fn div(self, o: LogValue) -> LogValue {
        LogValue { ln_abs: self.ln_abs - o.ln_abs, phase: self.phase - o.phase }
    }

    /// max(0, ln|value|)
    pub fn log_plus(&self) -> f64 {
        self.ln_abs.max(0.0)
    }
}

#[derive(Clone)]
pub struct FunctionExpr {
    root: Expr,
    domain: Domain,
    tape: Arc<OnceLock<tape::Tape>>,
}

impl PartialEq for FunctionExpr {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.root == other.root
    }
}

impl fmt::Debug for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionExpr[{}]({})", self.domain, self)
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::render(&self.root, "z"))
    }
}

impl FunctionExpr {
    fn wrap(root: Expr, domain: Domain) -> FunctionExpr {
        FunctionExpr { root, domain, tape: Arc::new(OnceLock::new()) }
    }

    /// Parses a plane expression, or a disc one when prefixed with `disc:`.
    pub fn parse(text: &str) -> Result<FunctionExpr, ExprError> {
        let (root, pragma) = parse::parse_tree(text)?;
        Ok(FunctionExpr::wrap(root, pragma.unwrap_or(Domain::Plane)))
    }

    /// Parses with an out-of-band domain tag; an inline tag must agree.
    pub fn parse_in(text: &str, domain: Domain) -> Result<FunctionExpr, ExprError> {
        let (root, pragma) = parse::parse_tree(text)?;
        match pragma {
            Some(inline) if inline != domain => Err(ExprError::DomainMismatch { inline, expected: domain }),
            _ => Ok(FunctionExpr::wrap(root, domain)),
        }
    }

    pub fn constant(c: C, domain: Domain) -> FunctionExpr {
        FunctionExpr::wrap(node::constant(c), domain)
    }

    pub fn var(domain: Domain) -> FunctionExpr {
        FunctionExpr::wrap(node::var(), domain)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(&self, domain: Domain) -> FunctionExpr {
        FunctionExpr { root: self.root.clone(), domain, tape: self.tape.clone() }
    }

    pub fn as_constant(&self) -> Option<C> {
        node::as_const(&self.root)
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(C::new(0.0, 0.0))
    }

    /// If the top-level node is a quotient, its numerator and denominator.
    pub fn as_quotient(&self) -> Option<(FunctionExpr, FunctionExpr)> {
        match &*self.root {
            node::Node::Quotient(a, b) => Some((
                FunctionExpr::wrap(a.clone(), self.domain),
                FunctionExpr::wrap(b.clone(), self.domain),
            )),
            _ => None,
        }
    }

    fn binary(&self, o: &FunctionExpr, f: impl Fn(Expr, Expr) -> Expr) -> FunctionExpr {
        FunctionExpr::wrap(f(self.root.clone(), o.root.clone()), self.domain.join(o.domain))
    }

    fn unary(&self, f: impl Fn(Expr) -> Expr) -> FunctionExpr {
        FunctionExpr::wrap(f(self.root.clone()), self.domain)
    }

    pub fn add(&self, o: &FunctionExpr) -> FunctionExpr {
        self.binary(o, node::add)
    }

    pub fn sub(&self, o: &FunctionExpr) -> FunctionExpr {
        self.binary(o, node::sub)
    }

    pub fn mul(&self, o: &FunctionExpr) -> FunctionExpr {
        self.binary(o, node::mul)
    }

    pub fn div(&self, o: &FunctionExpr) -> FunctionExpr {
        self.binary(o, node::quotient)
    }

    pub fn scale(&self, c: C) -> FunctionExpr {
        self.unary(|e| node::mul(node::constant(c), e))
    }

    pub fn add_const(&self, c: C) -> FunctionExpr {
        self.unary(|e| node::add(e, node::constant(c)))
    }

    pub fn neg(&self) -> FunctionExpr {
        self.unary(node::neg)
    }

    pub fn powc(&self, c: C) -> FunctionExpr {
        self.unary(|e| node::pow(e, c))
    }

    pub fn exp(&self) -> FunctionExpr {
        self.unary(node::exp)
    }

    pub fn gamma(&self) -> FunctionExpr {
        self.unary(node::gamma)
    }

    pub fn mittag_leffler(&self, alpha: f64) -> FunctionExpr {
        self.unary(|e| node::mittag_leffler(alpha, 0, e))
    }

    /// Product of a finite family of factors.
    pub fn product_of(factors: &[FunctionExpr], domain: Domain) -> FunctionExpr {
        let d = factors.iter().fold(domain, |d, f| d.join(f.domain));
        FunctionExpr::wrap(node::product(factors.iter().map(|f| f.root.clone()).collect()), d)
    }

    pub fn sum_of(terms: &[FunctionExpr], domain: Domain) -> FunctionExpr {
        let d = terms.iter().fold(domain, |d, f| d.join(f.domain));
        FunctionExpr::wrap(node::sum(terms.iter().map(|f| f.root.clone()).collect()), d)
    }

    pub fn differentiate(&self) -> FunctionExpr {
        self.unary(|e| calculus::Differ::new().d(&e))
    }

    /// k-th derivative; the 0-th is the function itself.
    pub fn derivative(&self, k: usize) -> FunctionExpr {
        let mut d = calculus::Differ::new();
        let mut e = self.root.clone();
        for _ in 0..k {
            e = d.d(&e);
        }
        FunctionExpr::wrap(e, self.domain)
    }

    /// z ↦ f(z + c)
    pub fn shift(&self, c: C) -> Result<FunctionExpr, ExprError> {
        self.compose_affine(C::new(1.0, 0.0), c)
    }

    /// z ↦ f(qz)
    pub fn qscale(&self, q: C) -> Result<FunctionExpr, ExprError> {
        self.compose_affine(q, C::new(0.0, 0.0))
    }

    /// z ↦ f(az + b)
    pub fn compose_affine(&self, a: C, b: C) -> Result<FunctionExpr, ExprError> {
        if self.domain == Domain::Disc {
            return Err(ExprError::DiscOperator);
        }
        Ok(self.unary(|e| node::affine(e, a, b)))
    }

    /// Δf(z) = f(z+1) − f(z)
    pub fn delta(&self) -> Result<FunctionExpr, ExprError> {
        Ok(self.shift(C::new(1.0, 0.0))?.sub(self))
    }

    /// Δ_q f(z) = f(qz) − f(z)
    pub fn delta_q(&self, q: C) -> Result<FunctionExpr, ExprError> {
        Ok(self.qscale(q)?.sub(self))
    }

    fn tape(&self) -> &tape::Tape {
        self.tape.get_or_init(|| tape::Tape::compile(&self.root))
    }

    /// Number of evaluation steps in the compiled program.
    pub fn tape_len(&self) -> usize {
        self.tape().len()
    }

    fn check(&self, z: C) -> Result<(), ExprError> {
        if self.domain == Domain::Disc && !(z.norm() < 1.0) {
            return Err(ExprError::OutsideDisc(z));
        }
        Ok(())
    }

    pub fn eval_scaled(&self, z: C) -> Result<Scaled, ExprError> {
        self.check(z)?;
        Ok(self.tape().run(z))
    }

    /// Plain complex value; overflows to ∞.
    pub fn eval(&self, z: C) -> Result<C, ExprError> {
        Ok(self.eval_scaled(z)?.to_complex())
    }

    pub fn eval_log(&self, z: C) -> Result<LogValue, ExprError> {
        Ok(self.eval_scaled(z)?.to_log())
    }
}

/// The canonical product Π (1 − z/z_n) with z_{2n−1} = 2ⁿ and
/// z_{2n} = 2ⁿ + ε_n, ε_n = exp(−exp(2ⁿ))/2, truncated so that every omitted
/// factor differs from 1 by less than 1e-15 on |z| ≤ `r_max`.
pub fn canonical_product_text(r_max: f64) -> String {
    let mut n = 1u32;
    while 2f64.powi(n as i32) <= r_max * 1e15 {
        n += 1;
    }
    format!("prod(k=1..{n}; (1 - z/2^k)*(1 - z/(2^k + exp(-exp(2^k))/2)))")
}

pub fn canonical_product(r_max: f64) -> FunctionExpr {
    FunctionExpr::parse(&canonical_product_text(r_max)).expect("canonical product text parses")
}
