//! The expression grammar accepted for functions on the command line.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | pi | VAR | call | '(' expr ')'
//! call  := exp(e) | sqrt(e) | rho(nu, e) | laguerre(n, alpha, e)
//!        | wilson(n, a, b, c, d, e) | cdh(n, a, b, c, e) | prudnikov(n, nu, alpha, e)
//! ```
//!
//! Nothing is executed beyond this closed set of constructs. Each construct
//! carries a bound of the form `x^p e^{c x^q}` at infinity and `x^e` at the
//! origin, from which the decay metadata of the function is derived.

use crate::families::FamilySpec;
use crate::kl::{IndexFunction, RealFunction};
use crate::quad::{DecayProfile, OriginBehavior};
use crate::specfun::{rho_nu, MAX_DEGREE};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError(pub String);

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ExprError {}

type R<T> = Result<T, ExprError>;

fn err<T>(msg: impl Into<String>) -> R<T> {
    Err(ExprError(msg.into()))
}

#[derive(Debug, Clone)]
enum Node {
    Num(f64),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Exp(Box<Node>),
    Rho(f64, Box<Node>),
    /// Polynomial family member of the given degree in its argument.
    Family { spec: FamilySpec, n: usize, degree: usize, arg: Box<Node> },
}

impl Node {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Node::Num(c) => *c,
            Node::Var => x,
            Node::Add(a, b) => a.eval(x) + b.eval(x),
            Node::Sub(a, b) => a.eval(x) - b.eval(x),
            Node::Mul(a, b) => a.eval(x) * b.eval(x),
            Node::Div(a, b) => a.eval(x) / b.eval(x),
            Node::Neg(a) => -a.eval(x),
            Node::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Node::Exp(a) => a.eval(x).exp(),
            Node::Rho(nu, a) => rho_nu(*nu, a.eval(x)).unwrap_or(f64::NAN),
            Node::Family { spec, n, arg, .. } => spec.eval(*n, arg.eval(x)).unwrap_or(f64::NAN),
        }
    }

    fn constant(&self) -> Option<f64> {
        match self {
            Node::Num(c) => Some(*c),
            Node::Var => None,
            Node::Add(a, b) => Some(a.constant()? + b.constant()?),
            Node::Sub(a, b) => Some(a.constant()? - b.constant()?),
            Node::Mul(a, b) => Some(a.constant()? * b.constant()?),
            Node::Div(a, b) => Some(a.constant()? / b.constant()?),
            Node::Neg(a) => Some(-a.constant()?),
            Node::Pow(a, b) => Some(a.constant()?.powf(b.constant()?)),
            Node::Exp(a) => Some(a.constant()?.exp()),
            Node::Rho(nu, a) => rho_nu(*nu, a.constant()?).ok(),
            Node::Family { spec, n, arg, .. } => spec.eval(*n, arg.constant()?).ok(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    var: &'static str,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> R<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(format!("expected '{c}' at offset {}", self.pos))
        }
    }

    fn expr(&mut self) -> R<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> R<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> R<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn number(&mut self) -> R<Node> {
        let rest = &self.src[self.pos..];
        let b = rest.as_bytes();
        let digits = |mut i: usize| {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        let mut i = digits(0);
        if i < b.len() && b[i] == b'.' {
            i = digits(i + 1);
        }
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            let k = digits(j);
            if k > j {
                i = k;
            }
        }
        let lexeme = &rest[..i];
        let v: f64 = lexeme.parse().map_err(|_| ExprError(format!("malformed number '{lexeme}'")))?;
        self.pos += i;
        Ok(Node::Num(v))
    }

    fn ident(&mut self) -> &'a str {
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn args(&mut self, name: &str, count: usize) -> R<Vec<Node>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        if out.len() != count {
            return err(format!("{name} takes {count} arguments, got {}", out.len()));
        }
        Ok(out)
    }

    fn atom(&mut self) -> R<Node> {
        match self.peek() {
            None => err("unexpected end of expression"),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                self.call(name)
            }
            Some(c) => err(format!("unexpected character '{c}' at offset {}", self.pos)),
        }
    }

    fn call(&mut self, name: &str) -> R<Node> {
        if name == self.var {
            return Ok(Node::Var);
        }
        let family = |spec: FamilySpec, n: usize, degree: usize, arg: Node| -> R<Node> {
            spec.validate().map_err(|e| ExprError(e.to_string()))?;
            Ok(Node::Family { spec, n, degree, arg: Box::new(arg) })
        };
        match name {
            "pi" => Ok(Node::Num(PI)),
            "exp" => Ok(Node::Exp(Box::new(self.args(name, 1)?.remove(0)))),
            "sqrt" => Ok(Node::Pow(Box::new(self.args(name, 1)?.remove(0)), Box::new(Node::Num(0.5)))),
            "rho" => {
                let mut a = self.args(name, 2)?;
                let nu = constant(&a[0], "rho order")?;
                if !(nu >= 0.0) {
                    return err(format!("rho needs a non-negative order, got {nu}"));
                }
                Ok(Node::Rho(nu, Box::new(a.remove(1))))
            }
            "laguerre" => {
                let mut a = self.args(name, 3)?;
                let n = degree(&a[0])?;
                let alpha = constant(&a[1], "laguerre alpha")?;
                family(FamilySpec::Laguerre { alpha }, n, n, a.remove(2))
            }
            "wilson" => {
                let mut a = self.args(name, 6)?;
                let n = degree(&a[0])?;
                let p: Vec<f64> = a[1..5].iter().map(|e| constant(e, "wilson parameter")).collect::<R<_>>()?;
                family(FamilySpec::Wilson { a: p[0], b: p[1], c: p[2], d: p[3] }, n, 2 * n, a.remove(5))
            }
            "cdh" => {
                let mut a = self.args(name, 5)?;
                let n = degree(&a[0])?;
                let p: Vec<f64> = a[1..4].iter().map(|e| constant(e, "cdh parameter")).collect::<R<_>>()?;
                family(FamilySpec::ContinuousDualHahn { a: p[0], b: p[1], c: p[2] }, n, 2 * n, a.remove(4))
            }
            "prudnikov" => {
                let mut a = self.args(name, 4)?;
                let n = degree(&a[0])?;
                let nu = constant(&a[1], "prudnikov nu")?;
                let alpha = constant(&a[2], "prudnikov alpha")?;
                family(FamilySpec::PrudnikovP { nu, alpha }, n, n, a.remove(3))
            }
            _ => err(format!("unknown name '{name}' (the variable is '{}')", self.var)),
        }
    }
}

fn constant(node: &Node, what: &str) -> R<f64> {
    match node.constant() {
        Some(v) if v.is_finite() => Ok(v),
        Some(v) => err(format!("{what} evaluates to {v}")),
        None => err(format!("{what} must not depend on the variable")),
    }
}

fn degree(node: &Node) -> R<usize> {
    let v = constant(node, "degree")?;
    if v >= 0.0 && v.fract() == 0.0 && v <= MAX_DEGREE as f64 {
        Ok(v as usize)
    } else {
        err(format!("degree must be an integer in 0..={MAX_DEGREE}, got {v}"))
    }
}

/// `|f| ≲ x^power e^{coef·x^q}` at infinity; `coef = 0` means no exponential factor.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Tail {
    power: f64,
    coef: f64,
    q: f64,
}

impl Tail {
    const ONE: Tail = Tail { power: 0.0, coef: 0.0, q: 1.0 };

    /// Growth order, usable for comparisons.
    fn key(&self) -> (i8, f64, f64, f64) {
        if self.coef > 0.0 {
            (2, self.q, self.coef, self.power)
        } else if self.coef == 0.0 {
            (1, 0.0, 0.0, self.power)
        } else {
            (0, -self.q, self.coef, self.power)
        }
    }

    fn max(self, other: Tail) -> Tail {
        if other.key().partial_cmp(&self.key()) == Some(std::cmp::Ordering::Greater) {
            other
        } else {
            self
        }
    }

    fn times(self, other: Tail) -> Tail {
        let power = self.power + other.power;
        let (lead, rest) = match (self.coef == 0.0, other.coef == 0.0) {
            (true, _) => (other, Tail::ONE),
            (_, true) => (self, Tail::ONE),
            _ if self.q == other.q => {
                let coef = self.coef + other.coef;
                return Tail { power, coef, q: if coef == 0.0 { 1.0 } else { self.q } };
            }
            _ if self.q > other.q => (self, other),
            _ => (other, self),
        };
        // a growing lower-order factor eats into the leading decay
        let coef = if lead.coef < 0.0 && rest.coef > 0.0 { 0.5 * lead.coef } else { lead.coef };
        Tail { power, coef, q: lead.q }
    }

    fn powf(self, k: f64) -> Tail {
        Tail { power: k * self.power, coef: k * self.coef, q: self.q }
    }
}

/// Asymptotic shape of a subexpression.
#[derive(Debug, Clone, Copy)]
struct Shape {
    tail: Tail,
    /// `|f| ≲ x^origin` near zero.
    origin: f64,
    log: bool,
    /// A single term `C x^p e^{c x^q}`, so that the bounds are also lower bounds.
    exact: bool,
}

impl Shape {
    const CONST: Shape = Shape { tail: Tail::ONE, origin: 0.0, log: false, exact: true };
}

/// `Σ c_j x^{q_j}` when the node is a sum of monomials.
fn monomials(node: &Node) -> Option<Vec<(f64, f64)>> {
    if let Some(c) = node.constant() {
        return Some(vec![(c, 0.0)]);
    }
    match node {
        Node::Var => Some(vec![(1.0, 1.0)]),
        Node::Neg(a) => Some(monomials(a)?.into_iter().map(|(c, q)| (-c, q)).collect()),
        Node::Add(a, b) => Some([monomials(a)?, monomials(b)?].concat()),
        Node::Sub(a, b) => Some([monomials(a)?, monomials(&Node::Neg(b.clone()))?].concat()),
        Node::Mul(a, b) => {
            let (ma, mb) = (monomials(a)?, monomials(b)?);
            Some(ma.iter().flat_map(|&(c1, q1)| mb.iter().map(move |&(c2, q2)| (c1 * c2, q1 + q2))).collect())
        }
        Node::Div(a, b) => match monomials(b)?.as_slice() {
            [(c2, q2)] if *c2 != 0.0 => Some(monomials(a)?.into_iter().map(|(c, q)| (c / c2, q - q2)).collect()),
            _ => None,
        },
        Node::Pow(a, b) => match (monomials(a)?.as_slice(), b.constant()) {
            ([(c, q)], Some(k)) if *c > 0.0 => Some(vec![(c.powf(k), q * k)]),
            _ => None,
        },
        _ => None,
    }
}

fn shape(node: &Node) -> R<Shape> {
    if node.constant().is_some() {
        return Ok(Shape::CONST);
    }
    Ok(match node {
        Node::Num(_) => Shape::CONST,
        Node::Var => Shape { tail: Tail { power: 1.0, coef: 0.0, q: 1.0 }, origin: 1.0, log: false, exact: true },
        Node::Neg(a) => shape(a)?,
        Node::Add(a, b) | Node::Sub(a, b) => {
            let (a, b) = (shape(a)?, shape(b)?);
            Shape { tail: a.tail.max(b.tail), origin: a.origin.min(b.origin), log: a.log || b.log, exact: false }
        }
        Node::Mul(a, b) => {
            let (a, b) = (shape(a)?, shape(b)?);
            Shape { tail: a.tail.times(b.tail), origin: a.origin + b.origin, log: a.log || b.log, exact: a.exact && b.exact }
        }
        Node::Div(a, b) => {
            if b.constant() == Some(0.0) {
                return err("division by zero");
            }
            let (a, b) = (shape(a)?, shape(b)?);
            if !b.exact {
                return err("a divisor must be a single term c·x^p·exp(k·x^q)");
            }
            Shape { tail: a.tail.times(b.tail.powf(-1.0)), origin: a.origin - b.origin, log: a.log, exact: a.exact }
        }
        Node::Pow(a, b) => match (a.constant(), b.constant()) {
            (_, Some(k)) => {
                let s = shape(a)?;
                if k < 0.0 && !s.exact {
                    return err("a negative power needs a single-term base c·x^p·exp(k·x^q)");
                }
                Shape { tail: s.tail.powf(k), origin: k * s.origin, log: s.log && k > 0.0, exact: s.exact }
            }
            (Some(base), None) if base > 0.0 => {
                let e = Node::Mul(Box::new(Node::Num(base.ln())), b.clone());
                shape(&Node::Exp(Box::new(e)))?
            }
            _ => return err("powers need a constant exponent or a positive constant base"),
        },
        Node::Exp(g) => {
            let terms = monomials(g).ok_or_else(|| ExprError("exp takes a sum of terms c·x^q".into()))?;
            let growing: Vec<(f64, f64)> = terms.iter().copied().filter(|&(c, q)| q > 0.0 && c != 0.0).collect();
            let singular = terms.iter().copied().filter(|&(c, q)| q < 0.0 && c != 0.0).fold(None, |acc: Option<(f64, f64)>, t| {
                match acc {
                    Some(a) if a.1 <= t.1 => Some(a),
                    _ => Some(t),
                }
            });
            if matches!(singular, Some((c, _)) if c > 0.0) {
                return err("exp grows without bound at the origin");
            }
            let tail = growing
                .iter()
                .map(|&(c, q)| Tail { power: 0.0, coef: c, q })
                .fold(Tail::ONE, Tail::times);
            Shape { tail, origin: 0.0, log: false, exact: growing.len() <= 1 && singular.is_none() }
        }
        Node::Rho(nu, a) => {
            let (c, q) = match monomials(a).as_deref() {
                Some([(c, q)]) if *c > 0.0 && *q > 0.0 => (*c, *q),
                _ => return err("rho takes an argument c·x^q with c, q > 0"),
            };
            // ρ_ν(y) ~ √π y^{ν/2-1/4} e^{-2√y}; bounded at 0 for ν > 0
            Shape {
                tail: Tail { power: (0.5 * nu - 0.25) * q, coef: -2.0 * c.sqrt(), q: 0.5 * q },
                origin: 0.0,
                log: *nu == 0.0,
                exact: false,
            }
        }
        Node::Family { degree, arg, .. } => {
            let s = shape(arg)?;
            if s.tail.coef != 0.0 {
                return err("polynomial families take an argument without exponential factors");
            }
            Shape {
                tail: Tail { power: *degree as f64 * s.tail.power.max(0.0), coef: 0.0, q: 1.0 },
                origin: *degree as f64 * s.origin.min(0.0),
                log: false,
                exact: false,
            }
        }
    })
}

/// A parsed function of one variable with its inferred asymptotics.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Node,
    shape: Shape,
}

impl Expr {
    /// Parses `src` in the variable `var` (`x` or `tau`).
    pub fn parse(src: &str, var: &'static str) -> R<Expr> {
        let mut p = Parser { src, pos: 0, var };
        let root = p.expr()?;
        if p.peek().is_some() {
            return err(format!("unexpected trailing input at offset {}", p.pos));
        }
        let shape = shape(&root)?;
        Ok(Expr { root, shape })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.root.eval(x)
    }

    fn origin(&self) -> R<OriginBehavior> {
        let e = self.shape.origin;
        if e <= -1.0 {
            return err(format!("not integrable at the origin (behaves like x^{e})"));
        }
        Ok(if self.shape.log {
            OriginBehavior::LogSingularity
        } else if e == 0.0 {
            OriginBehavior::Bounded
        } else {
            OriginBehavior::PowerSingularity(e)
        })
    }

    /// Decay at infinity; `NoDecay` when only a kernel can make the integral converge.
    fn decay(&self) -> R<DecayProfile> {
        let t = self.shape.tail;
        Ok(if t.coef < 0.0 {
            let rate = -t.coef;
            if t.q == 1.0 {
                DecayProfile::ExpDecay(rate)
            } else if t.q == 0.5 {
                DecayProfile::SqrtExpDecay(rate)
            } else {
                DecayProfile::StretchedExpDecay { rate, power: t.q }
            }
        } else if t.coef > 0.0 && t.q > 1.0 {
            return err("grows faster than any exponential");
        } else if t.coef == 0.0 && t.power < -1.0 {
            DecayProfile::PowerDecay(-t.power)
        } else {
            DecayProfile::NoDecay
        })
    }

    /// The expression as a function on `(0, ∞)`.
    pub fn real_function(self) -> R<RealFunction> {
        let (decay, origin) = (self.decay()?, self.origin()?);
        let root = self.root;
        Ok(RealFunction::new(move |x| root.eval(x), decay, origin))
    }

    /// The expression as an index function `F(τ)` for the inversion, whose
    /// integrand `τ sinh(πτ) K_{iτ}(x) F(τ)` grows like `e^{πτ/2} F(τ)`.
    /// `cutoff` is the log-scale cutoff of the quadrature.
    pub fn index_function(self, cutoff: f64) -> R<IndexFunction> {
        let t = self.shape.tail;
        let slack = 0.5 * PI;
        let rate = if t.coef < 0.0 && t.q == 1.0 && -t.coef > slack {
            -t.coef - slack
        } else if t.coef < 0.0 && t.q > 1.0 {
            // same truncation point as e^{-|c| τ^q}
            cutoff / (cutoff / -t.coef).powf(1.0 / t.q)
        } else {
            return err("the inversion needs F(τ) to decay faster than e^{-πτ/2}");
        };
        let root = self.root;
        Ok(IndexFunction::new(move |tau| root.eval(tau), false, Some(DecayProfile::IndexDecay(rate))))
    }
}
