//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'z' | 'i' | 'pi' | index
//!          | 'exp(' expr ')' | 'gamma(' expr ')' | 'psi(' int ';' expr ')'
//!          | 'ml(' expr [',' int] ';' expr ')'
//!          | 'prod(' ident '=' int '..' int ';' expr ')'
//!          | '(' expr ')'
//! ```

use super::node::{self, Expr};
use num_complex::Complex64 as C;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Debug, Clone)]
enum Ast {
    Num(f64),
    Z,
    I,
    Pi,
    Index(String, usize),
    /// `+`/`-` chain; subtracted terms are wrapped in `Neg`
    Sum(Vec<Ast>),
    /// `*` chain
    Product(Vec<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>, usize),
    Neg(Box<Ast>),
    Exp(Box<Ast>),
    Gamma(Box<Ast>),
    Psi(usize, Box<Ast>),
    Ml { alpha: Box<Ast>, order: usize, arg: Box<Ast>, at: usize },
    Prod { var: String, lo: i64, hi: i64, body: Box<Ast> },
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    bound: Vec<String>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(b) => format!("found '{}'", b as char),
                None => "found end of input".to_string(),
            };
            err(self.pos, format!("expected '{}', {found}", c as char))
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(Ast::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Sum(terms) })
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let chain = |mut fs: Vec<Ast>| if fs.len() == 1 { fs.pop().unwrap() } else { Ast::Product(fs) };
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.unary()?);
            } else if self.eat(b'/') {
                let num = chain(std::mem::take(&mut factors));
                factors.push(Ast::Div(Box::new(num), Box::new(self.unary()?)));
            } else {
                return Ok(chain(factors));
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.eat(b'-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(e), at));
        }
        Ok(base)
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            if self.pos == start && self.bytes[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| (self.src[start..self.pos].to_string(), start))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .or_else(|_| err(start, "expected an integer"))
    }

    fn number(&mut self) -> Result<Ast, ParseError> {
        let start = self.pos;
        let b = self.bytes;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < b.len() && b[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > s
        };
        let mut p = self.pos;
        let mut any = digits(&mut p);
        // a '.' followed by '.' is a range, not a decimal point
        if p < b.len() && b[p] == b'.' && b.get(p + 1) != Some(&b'.') {
            p += 1;
            any |= digits(&mut p);
        }
        if !any {
            return err(start, "malformed number");
        }
        if p < b.len() && (b[p] == b'e' || b[p] == b'E') {
            let mut q = p + 1;
            if q < b.len() && (b[q] == b'+' || b[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            }
        }
        self.pos = p;
        self.src[start..p].parse().map(Ast::Num).or_else(|_| err(start, "malformed number"))
    }

    fn primary(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            None => err(self.pos, "unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let (name, at) = self.ident().unwrap();
                self.named(name, at)
            }
            Some(c) => err(self.pos, format!("unexpected character '{}'", c as char)),
        }
    }

    fn named(&mut self, name: String, at: usize) -> Result<Ast, ParseError> {
        if self.bound.contains(&name) {
            return Ok(Ast::Index(name, at));
        }
        match name.as_str() {
            "z" => Ok(Ast::Z),
            "i" => Ok(Ast::I),
            "pi" => Ok(Ast::Pi),
            "exp" | "gamma" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b')')?;
                Ok(if name == "exp" { Ast::Exp(Box::new(a)) } else { Ast::Gamma(Box::new(a)) })
            }
            "psi" => {
                self.expect(b'(')?;
                let k = self.integer()?;
                if k < 0 {
                    return err(at, "polygamma order must be nonnegative");
                }
                self.expect(b';')?;
                let a = self.expr()?;
                self.expect(b')')?;
                Ok(Ast::Psi(k as usize, Box::new(a)))
            }
            "ml" => {
                self.expect(b'(')?;
                let alpha = self.expr()?;
                let order = if self.eat(b',') {
                    let k = self.integer()?;
                    if k < 0 {
                        return err(at, "derivative order must be nonnegative");
                    }
                    k as usize
                } else {
                    0
                };
                self.expect(b';')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(Ast::Ml { alpha: Box::new(alpha), order, arg: Box::new(arg), at })
            }
            "prod" => {
                self.expect(b'(')?;
                let (var, vat) = match self.ident() {
                    Some(v) => v,
                    None => return err(self.pos, "expected index variable"),
                };
                if matches!(var.as_str(), "z" | "i" | "pi") {
                    return err(vat, format!("'{var}' cannot be an index variable"));
                }
                self.expect(b'=')?;
                let lo = self.integer()?;
                self.expect(b'.')?;
                self.expect(b'.')?;
                let hi = self.integer()?;
                self.expect(b';')?;
                self.bound.push(var.clone());
                let body = self.expr()?;
                self.bound.pop();
                self.expect(b')')?;
                Ok(Ast::Prod { var, lo, hi, body: Box::new(body) })
            }
            _ => err(at, format!("unknown identifier '{name}'")),
        }
    }
}

fn lower(ast: &Ast, env: &mut HashMap<String, f64>) -> Result<Expr, ParseError> {
    Ok(match ast {
        Ast::Num(x) => node::real(*x),
        Ast::Z => node::var(),
        Ast::I => node::constant(C::i()),
        Ast::Pi => node::real(std::f64::consts::PI),
        Ast::Index(name, at) => match env.get(name) {
            Some(v) => node::real(*v),
            None => return err(*at, format!("unbound index '{name}'")),
        },
        Ast::Sum(xs) => node::sum(xs.iter().map(|x| lower(x, env)).collect::<Result<_, _>>()?),
        Ast::Product(xs) => node::product(xs.iter().map(|x| lower(x, env)).collect::<Result<_, _>>()?),
        Ast::Div(a, b) => node::quotient(lower(a, env)?, lower(b, env)?),
        Ast::Neg(a) => node::neg(lower(a, env)?),
        Ast::Exp(a) => node::exp(lower(a, env)?),
        Ast::Gamma(a) => node::gamma(lower(a, env)?),
        Ast::Psi(k, a) => node::polygamma(*k, lower(a, env)?),
        Ast::Pow(b, e, at) => {
            let base = lower(b, env)?;
            let ex = lower(e, env)?;
            match (node::as_const(&ex), node::as_const(&base)) {
                (Some(c), _) => node::pow(base, c),
                (None, Some(c)) if c.im == 0.0 && c.re > 0.0 => {
                    node::exp(node::mul(ex, node::real(c.re.ln())))
                }
                _ => return err(*at, "exponent must be constant unless the base is a positive constant"),
            }
        }
        Ast::Ml { alpha, order, arg, at } => {
            let a = lower(alpha, env)?;
            match node::as_const(&a) {
                Some(c) if c.im == 0.0 && c.re > 0.0 => {
                    node::mittag_leffler(c.re, *order, lower(arg, env)?)
                }
                _ => return err(*at, "ml order must be a positive real constant"),
            }
        }
        Ast::Prod { var, lo, hi, body } => {
            let saved = env.get(var).copied();
            let mut factors = Vec::new();
            for k in *lo..=*hi {
                env.insert(var.clone(), k as f64);
                factors.push(lower(body, env)?);
            }
            match saved {
                Some(v) => env.insert(var.clone(), v),
                None => env.remove(var),
            };
            node::product(factors)
        }
    })
}

/// Parses `text` into an expression tree; returns the tree and an optional
/// inline domain pragma (`plane:` or `disc:` prefix).
pub(crate) fn parse_tree(text: &str) -> Result<(Expr, Option<super::Domain>), ParseError> {
    let mut p = Parser { src: text, bytes: text.as_bytes(), pos: 0, bound: Vec::new() };
    let mut pragma = None;
    p.skip_ws();
    for (tag, dom) in [("plane:", super::Domain::Plane), ("disc:", super::Domain::Disc)] {
        if text[p.pos..].starts_with(tag) {
            p.pos += tag.len();
            pragma = Some(dom);
        }
    }
    let ast = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected '{}'", c as char));
    }
    let tree = lower(&ast, &mut HashMap::new())?;
    Ok((tree, pragma))
}

fn fmt_c(c: C) -> String {
    if c.im == 0.0 {
        format!("({:e})", c.re)
    } else {
        format!("({:e}+{:e}*i)", c.re, c.im)
    }
}

/// Renders a tree back into the grammar, fully parenthesized; `v` is the text
/// substituted for the variable.
pub(crate) fn render(e: &Expr, v: &str) -> String {
    use super::node::Node::*;
    let join = |xs: &Vec<Expr>, sep: &str| {
        xs.iter().map(|x| format!("({})", render(x, v))).collect::<Vec<_>>().join(sep)
    };
    match &**e {
        Const(c) => fmt_c(*c),
        Var => v.to_string(),
        Sum(xs) => join(xs, "+"),
        Product(xs) => join(xs, "*"),
        Quotient(a, b) => format!("({})/({})", render(a, v), render(b, v)),
        Neg(a) => format!("-({})", render(a, v)),
        Pow(a, c) => format!("({})^{}", render(a, v), fmt_c(*c)),
        Exp(a) => format!("exp({})", render(a, v)),
        Gamma(a) => format!("gamma({})", render(a, v)),
        Polygamma(k, a) => format!("psi({k}; {})", render(a, v)),
        MittagLeffler { alpha, order, arg } => {
            if *order == 0 {
                format!("ml({alpha:e}; {})", render(arg, v))
            } else {
                format!("ml({alpha:e}, {order}; {})", render(arg, v))
            }
        }
        Affine { inner, a, b } => {
            let sub = format!("({}*({v})+{})", fmt_c(*a), fmt_c(*b));
            render(inner, &sub)
        }
    }
}
