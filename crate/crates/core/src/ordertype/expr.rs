//! Order-type expressions and their DSL.
//!
//! ```text
//! expr := "1" | "2" | "R" | "I" | "I^" ord-atom
//!       | "Dup(" expr ")"
//!       | "Replace(" expr "," "default=" expr {"," elem "->" expr} ")"
//!       | "Prod(" [expr {"," expr}] [";"] ["default=" expr | "ladder=" expr] ")"
//!       | "Pow(" expr "," ord ")"
//! ```
//!
//! `I^` takes a single ordinal atom: an integer, `w`, or a parenthesized
//! ordinal, so `I^w*2` is rejected and must be written `I^(w*2)`. `2` is
//! the two-element chain, the same type as `Dup(1)`. Element
//! literals (`elem`) are element JSON.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use super::element::{self, Element};
use crate::error::{Error, Result};
use crate::ordinal::{OrdParser, Ordinal};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderType {
    /// The one-point order.
    Unit,
    /// The real line.
    Real,
    /// The closed unit interval.
    Interval,
    /// `I^α` with the lexicographic ordering.
    IPow(Ordinal),
    /// `X × {0, 1}` with the lexicographic ordering.
    Dup(Box<OrderType>),
    /// `{(x, y) : x ∈ X, y ∈ Y_x}` with the lexicographic ordering.
    Replace(Box<Replacement>),
    /// A countable lexicographic product.
    Prod(Box<Product>),
    /// `X^α` with the lexicographic ordering.
    Pow(Box<OrderType>, Ordinal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Replacement {
    pub base: OrderType,
    pub default: OrderType,
    /// Distinct canonical base elements with their own fiber types.
    pub overrides: Vec<(Element, OrderType)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Product {
    pub factors: Vec<OrderType>,
    pub tail: Tail,
}

/// Factors after the explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Finite product.
    None,
    /// Every further factor is the same type.
    Uniform(OrderType),
    /// Further factor `k` is `base^(ω^γ[k])` along the fundamental sequence
    /// of the limit ordinal `exponent = γ`; together they tile `base^(ω^γ)`.
    Ladder { base: OrderType, exponent: Ordinal },
}

impl Replacement {
    /// The fiber type over a base element.
    pub fn fiber(&self, x: &Element) -> Result<&OrderType> {
        for (key, ty) in &self.overrides {
            if element::compare(&self.base, key, x)?.is_eq() {
                return Ok(ty);
            }
        }
        Ok(&self.default)
    }
}

impl Product {
    /// Number of factors, `None` when countably infinite.
    pub fn len(&self) -> Option<u64> {
        match self.tail {
            Tail::None => Some(self.factors.len() as u64),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn factor(&self, i: u64) -> Option<Cow<'_, OrderType>> {
        if let Some(f) = self.factors.get(i as usize) {
            return Some(Cow::Borrowed(f));
        }
        let k = i - self.factors.len() as u64;
        match &self.tail {
            Tail::None => None,
            Tail::Uniform(ty) => Some(Cow::Borrowed(ty)),
            Tail::Ladder { base, exponent } => {
                let block = Ordinal::omega_pow(exponent.fundamental(k)?);
                Some(Cow::Owned(power_block(base, block)))
            }
        }
    }
}

/// `X^β`, written as `X` itself when `β = 1`.
pub(crate) fn power_block(base: &OrderType, beta: Ordinal) -> OrderType {
    if beta == Ordinal::one() {
        base.clone()
    } else {
        OrderType::Pow(Box::new(base.clone()), beta)
    }
}

impl OrderType {
    pub fn dup(inner: OrderType) -> Self {
        OrderType::Dup(Box::new(inner))
    }

    pub fn replace(base: OrderType, default: OrderType) -> Self {
        OrderType::Replace(Box::new(Replacement { base, default, overrides: Vec::new() }))
    }

    pub fn pow(inner: OrderType, alpha: Ordinal) -> Self {
        OrderType::Pow(Box::new(inner), alpha)
    }

    pub fn prod(factors: Vec<OrderType>, tail: Tail) -> Self {
        OrderType::Prod(Box::new(Product { factors, tail }))
    }

    /// Short constructor name, used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            OrderType::Unit => "Unit",
            OrderType::Real => "R",
            OrderType::Interval => "I",
            OrderType::IPow(_) => "IPow",
            OrderType::Dup(_) => "Dup",
            OrderType::Replace(_) => "Replace",
            OrderType::Prod(_) => "Prod",
            OrderType::Pow(..) => "Pow",
        }
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderType::Unit => f.write_str("1"),
            OrderType::Real => f.write_str("R"),
            OrderType::Interval => f.write_str("I"),
            OrderType::IPow(a) => write!(f, "I^({a})"),
            OrderType::Dup(x) => write!(f, "Dup({x})"),
            OrderType::Replace(r) => {
                write!(f, "Replace({}, default={}", r.base, r.default)?;
                for (key, ty) in &r.overrides {
                    write!(f, ", {} -> {}", element::to_json(key), ty)?;
                }
                f.write_str(")")
            }
            OrderType::Prod(p) => {
                f.write_str("Prod(")?;
                for (i, x) in p.factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                let sep = if p.factors.is_empty() { "" } else { "; " };
                match &p.tail {
                    Tail::None => {}
                    Tail::Uniform(x) => write!(f, "{sep}default={x}")?,
                    Tail::Ladder { base, exponent } => {
                        write!(f, "{sep}ladder={}", OrderType::pow(base.clone(), Ordinal::omega_pow(exponent.clone())))?
                    }
                }
                f.write_str(")")
            }
            OrderType::Pow(x, a) => write!(f, "Pow({x}, {a})"),
        }
    }
}

impl FromStr for OrderType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<OrderType> {
    let mut p = TypeParser { src: text, pos: 0 };
    let ty = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(ty)
}

struct TypeParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TypeParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn ordinal(&mut self, atom_only: bool) -> Result<Ordinal> {
        let mut p = OrdParser::new(self.src, self.pos);
        let ord = if atom_only { p.atom() } else { p.ordinal() }?;
        self.pos = p.pos;
        Ok(ord)
    }

    fn element(&mut self) -> Result<Element> {
        self.skip_ws();
        let mut stream = serde_json::Deserializer::from_str(self.rest()).into_iter::<Value>();
        let value = match stream.next() {
            Some(Ok(v)) => v,
            _ => return Err(self.error("expected an element literal")),
        };
        self.pos += stream.byte_offset();
        element::from_json(&value)
    }

    fn expr(&mut self) -> Result<OrderType> {
        self.skip_ws();
        if self.eat("Dup(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(OrderType::dup(inner));
        }
        if self.eat("Replace(") {
            return self.replace();
        }
        if self.eat("Prod(") {
            return self.product();
        }
        if self.eat("Pow(") {
            let inner = self.expr()?;
            self.expect(",")?;
            let alpha = self.ordinal(false)?;
            self.expect(")")?;
            return Ok(OrderType::pow(inner, alpha));
        }
        if self.eat("I^") {
            let alpha = self.ordinal(true)?;
            self.skip_ws();
            if self.rest().starts_with(['*', '+']) {
                return Err(self.error("ambiguous exponent; parenthesize it, e.g. I^(w*2)"));
            }
            return Ok(OrderType::IPow(alpha));
        }
        if self.eat("1") {
            return Ok(OrderType::Unit);
        }
        if self.eat("2") {
            return Ok(OrderType::dup(OrderType::Unit));
        }
        if self.eat("R") {
            return Ok(OrderType::Real);
        }
        if self.eat("I") {
            return Ok(OrderType::Interval);
        }
        Err(self.error("expected an order-type expression"))
    }

    fn replace(&mut self) -> Result<OrderType> {
        let base = self.expr()?;
        self.expect(",")?;
        self.expect("default=")?;
        let default = self.expr()?;
        let mut overrides: Vec<(Element, OrderType)> = Vec::new();
        while self.eat(",") {
            let at = self.pos;
            let key = self.element()?;
            let key = element::canonicalize(&base, &key).map_err(|e| Error::Syntax {
                pos: at,
                msg: format!("override key is not an element of {base}: {e}"),
            })?;
            if overrides.iter().any(|(k, _)| *k == key) {
                return Err(Error::Syntax { pos: at, msg: "duplicate override key".into() });
            }
            self.expect("->")?;
            let ty = self.expr()?;
            overrides.push((key, ty));
        }
        self.expect(")")?;
        Ok(OrderType::Replace(Box::new(Replacement { base, default, overrides })))
    }

    fn product(&mut self) -> Result<OrderType> {
        let mut factors = Vec::new();
        let mut tail = Tail::None;
        loop {
            if self.eat("default=") {
                tail = Tail::Uniform(self.expr()?);
                break;
            }
            if self.eat("ladder=") {
                let at = self.pos;
                tail = match self.expr()? {
                    OrderType::Pow(base, alpha) => match alpha.terms() {
                        [t] if t.coefficient == 1 && t.exponent.is_limit() => {
                            Tail::Ladder { base: *base, exponent: t.exponent.clone() }
                        }
                        _ => return Err(Error::Syntax { pos: at, msg: "ladder needs Pow(X, w^γ) with γ a limit".into() }),
                    },
                    _ => return Err(Error::Syntax { pos: at, msg: "ladder needs Pow(X, w^γ)".into() }),
                };
                break;
            }
            factors.push(self.expr()?);
            if self.eat(";") {
                continue;
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        if factors.is_empty() && tail == Tail::None {
            return Err(self.error("empty product"));
        }
        Ok(OrderType::prod(factors, tail))
    }
}
