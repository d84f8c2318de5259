//! Finitely supported elements and the lexicographic comparator.
//!
//! Sequences (`I^α`, `X^α`, products) store only the positions where they
//! differ from the factor's default element, in increasing order. In
//! canonical form two elements are equal under [`compare`] exactly when they
//! are structurally equal.

use std::cmp::Ordering;

use num_traits::Zero;
use serde_json::{json, Value};

use super::expr::OrderType;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    /// The point of `1`.
    Point,
    /// A point of `R` or `I`.
    Num(Rational),
    /// Support of a transfinite sequence: `(position, value)` pairs.
    Seq(Vec<(Ordinal, Element)>),
    /// `(x, bit)` in a duplication.
    Dup(Box<Element>, bool),
    /// `(x, y)` in a replacement.
    Pair(Box<Element>, Box<Element>),
    /// Overrides of a product element atop per-factor defaults.
    Tuple(Vec<(u64, Element)>),
}

impl Element {
    pub fn num(r: Rational) -> Self {
        Element::Num(r)
    }

    pub fn dup(inner: Element, bit: bool) -> Self {
        Element::Dup(Box::new(inner), bit)
    }

    pub fn pair(base: Element, fiber: Element) -> Self {
        Element::Pair(Box::new(base), Box::new(fiber))
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match self {
            Element::Num(r) => Some(r),
            _ => None,
        }
    }
}

fn invalid(ty: &OrderType, msg: impl Into<String>) -> Error {
    Error::InvalidElement { expr: ty.to_string(), msg: msg.into() }
}

/// The least-like element: zeros, empty supports, bit 0.
pub fn default(ty: &OrderType) -> Result<Element> {
    Ok(match ty {
        OrderType::Unit => Element::Point,
        OrderType::Real | OrderType::Interval => Element::Num(Rational::zero()),
        OrderType::IPow(_) | OrderType::Pow(..) => Element::Seq(Vec::new()),
        OrderType::Dup(x) => Element::dup(default(x)?, false),
        OrderType::Replace(r) => {
            let x = default(&r.base)?;
            let y = default(r.fiber(&x)?)?;
            Element::pair(x, y)
        }
        OrderType::Prod(_) => Element::Tuple(Vec::new()),
    })
}

/// Factor type and exponent of a sequence type.
fn seq_parts(ty: &OrderType) -> Option<(&OrderType, &Ordinal)> {
    match ty {
        OrderType::IPow(alpha) => Some((&OrderType::Interval, alpha)),
        OrderType::Pow(x, alpha) => Some((x, alpha)),
        _ => None,
    }
}

/// Lexicographic comparison of two elements of `ty`.
pub fn compare(ty: &OrderType, a: &Element, b: &Element) -> Result<Ordering> {
    match (ty, a, b) {
        (OrderType::Unit, Element::Point, Element::Point) => Ok(Ordering::Equal),
        (OrderType::Real, Element::Num(x), Element::Num(y)) => Ok(x.cmp(y)),
        (OrderType::Interval, Element::Num(x), Element::Num(y)) => {
            for v in [x, y] {
                if !rational::in_unit_interval(v) {
                    return Err(invalid(ty, format!("{} is outside [0, 1]", rational::render(v))));
                }
            }
            Ok(x.cmp(y))
        }
        (OrderType::Dup(x), Element::Dup(ea, ba), Element::Dup(eb, bb)) => {
            Ok(compare(x, ea, eb)?.then(ba.cmp(bb)))
        }
        (OrderType::Replace(r), Element::Pair(xa, ya), Element::Pair(xb, yb)) => {
            match compare(&r.base, xa, xb)? {
                Ordering::Equal => compare(r.fiber(xa)?, ya, yb),
                other => Ok(other),
            }
        }
        (OrderType::Prod(p), Element::Tuple(sa), Element::Tuple(sb)) => {
            merge_compare(ty, sa, sb, |i| {
                let factor = match p.factor(*i) {
                    Some(f) => f,
                    None => return Err(invalid(ty, format!("index {i} beyond the last factor"))),
                };
                Ok(factor)
            })
        }
        (_, Element::Seq(sa), Element::Seq(sb)) => {
            let Some((factor, alpha)) = seq_parts(ty) else {
                return Err(invalid(ty, "sequence element for a non-power type"));
            };
            merge_compare(ty, sa, sb, |pos| {
                if pos >= alpha {
                    return Err(invalid(ty, format!("position {pos} is not below {alpha}")));
                }
                Ok(std::borrow::Cow::Borrowed(factor))
            })
        }
        _ => Err(invalid(ty, "element kind does not match the type")),
    }
}

/// Compares two sorted supports position by position, filling gaps with the
/// factor default.
fn merge_compare<'t, K: Ord + std::fmt::Debug>(
    ty: &OrderType,
    a: &[(K, Element)],
    b: &[(K, Element)],
    factor_at: impl Fn(&K) -> Result<std::borrow::Cow<'t, OrderType>>,
) -> Result<Ordering> {
    for s in [a, b] {
        if s.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid(ty, "support positions are not strictly increasing"));
        }
    }
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let key = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => std::cmp::min(&x.0, &y.0),
            (Some(x), None) => &x.0,
            (None, Some(y)) => &y.0,
            (None, None) => unreachable!(),
        };
        let factor = factor_at(key)?;
        let fill = default(&factor)?;
        let va = match a.get(i) {
            Some((k, v)) if k == key => {
                i += 1;
                v
            }
            _ => &fill,
        };
        let vb = match b.get(j) {
            Some((k, v)) if k == key => {
                j += 1;
                v
            }
            _ => &fill,
        };
        match compare(&factor, va, vb)? {
            Ordering::Equal => {}
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

/// Validates `e` against `ty` and returns its canonical form: supports
/// sorted, entries equal to the factor default dropped.
pub fn canonicalize(ty: &OrderType, e: &Element) -> Result<Element> {
    match (ty, e) {
        (OrderType::Unit, Element::Point) => Ok(Element::Point),
        (OrderType::Real, Element::Num(_)) => Ok(e.clone()),
        (OrderType::Interval, Element::Num(v)) => {
            if rational::in_unit_interval(v) {
                Ok(e.clone())
            } else {
                Err(invalid(ty, format!("{} is outside [0, 1]", rational::render(v))))
            }
        }
        (OrderType::Dup(x), Element::Dup(inner, bit)) => Ok(Element::dup(canonicalize(x, inner)?, *bit)),
        (OrderType::Replace(r), Element::Pair(x, y)) => {
            let x = canonicalize(&r.base, x)?;
            let y = canonicalize(r.fiber(&x)?, y)?;
            Ok(Element::pair(x, y))
        }
        (OrderType::Prod(p), Element::Tuple(entries)) => {
            let out = canonical_support(ty, entries, |i| {
                p.factor(*i)
                    .map(|f| f.into_owned())
                    .ok_or_else(|| invalid(ty, format!("index {i} beyond the last factor")))
            })?;
            Ok(Element::Tuple(out))
        }
        (_, Element::Seq(entries)) => {
            let Some((factor, alpha)) = seq_parts(ty) else {
                return Err(invalid(ty, "sequence element for a non-power type"));
            };
            let out = canonical_support(ty, entries, |pos| {
                if pos < alpha {
                    Ok(factor.clone())
                } else {
                    Err(invalid(ty, format!("position {pos} is not below {alpha}")))
                }
            })?;
            Ok(Element::Seq(out))
        }
        _ => Err(invalid(ty, "element kind does not match the type")),
    }
}

fn canonical_support<K: Ord + Clone>(
    ty: &OrderType,
    entries: &[(K, Element)],
    factor_at: impl Fn(&K) -> Result<OrderType>,
) -> Result<Vec<(K, Element)>> {
    let mut out = Vec::with_capacity(entries.len());
    for (k, v) in entries {
        let factor = factor_at(k)?;
        let v = canonicalize(&factor, v)?;
        if v != default(&factor)? {
            out.push((k.clone(), v));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if out.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(invalid(ty, "repeated support position"));
    }
    Ok(out)
}

pub fn validate(ty: &OrderType, e: &Element) -> Result<()> {
    canonicalize(ty, e).map(drop)
}

// ---------------------------------------------------------------------------
// JSON

fn value_json(e: &Element) -> Value {
    match e {
        Element::Num(r) => Value::String(rational::render(r)),
        other => to_json(other),
    }
}

pub fn to_json(e: &Element) -> Value {
    match e {
        Element::Point => json!({ "kind": "unit" }),
        Element::Num(r) => json!({ "kind": "num", "value": rational::render(r) }),
        Element::Seq(s) => json!({
            "kind": "seq",
            "support": s.iter().map(|(p, v)| json!([p.to_string(), value_json(v)])).collect::<Vec<_>>(),
        }),
        Element::Dup(x, bit) => json!({ "kind": "dup", "inner": to_json(x), "bit": u8::from(*bit) }),
        Element::Pair(x, y) => json!({ "kind": "pair", "base": to_json(x), "fiber": to_json(y) }),
        Element::Tuple(s) => json!({
            "kind": "tuple",
            "entries": s.iter().map(|(i, v)| json!([i, value_json(v)])).collect::<Vec<_>>(),
        }),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::ElementJson(msg.into())
}

fn field<'v>(v: &'v Value, name: &str) -> Result<&'v Value> {
    v.get(name).ok_or_else(|| bad(format!("missing field {name:?}")))
}

fn entries<'v>(v: &'v Value, name: &str) -> Result<impl Iterator<Item = Result<(&'v Value, Element)>>> {
    let list = field(v, name)?.as_array().ok_or_else(|| bad(format!("{name:?} must be an array")))?;
    Ok(list.iter().map(|entry| match entry.as_array().map(Vec::as_slice) {
        Some([k, value]) => Ok((k, from_json(value)?)),
        _ => Err(bad("support entries are [key, value] pairs")),
    }))
}

/// Parses element JSON. A bare string is shorthand for a `num` element.
pub fn from_json(v: &Value) -> Result<Element> {
    if let Value::String(s) = v {
        return Ok(Element::Num(rational::parse(s).map_err(|e| bad(e.to_string()))?));
    }
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("\"kind\" must be a string"))?;
    match kind {
        "unit" => Ok(Element::Point),
        "num" => {
            let s = field(v, "value")?.as_str().ok_or_else(|| bad("\"value\" must be a rational string"))?;
            Ok(Element::Num(rational::parse(s).map_err(|e| bad(e.to_string()))?))
        }
        "seq" => {
            let support = entries(v, "support")?
                .map(|r| {
                    let (k, value) = r?;
                    let pos = k.as_str().ok_or_else(|| bad("positions are ordinal strings"))?;
                    Ok((pos.parse::<Ordinal>().map_err(|e| bad(e.to_string()))?, value))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Element::Seq(support))
        }
        "dup" => {
            let bit = match field(v, "bit")?.as_u64() {
                Some(0) => false,
                Some(1) => true,
                _ => return Err(bad("\"bit\" must be 0 or 1")),
            };
            Ok(Element::dup(from_json(field(v, "inner")?)?, bit))
        }
        "pair" => Ok(Element::pair(from_json(field(v, "base")?)?, from_json(field(v, "fiber")?)?)),
        "tuple" => {
            let list = entries(v, "entries")?
                .map(|r| {
                    let (k, value) = r?;
                    Ok((k.as_u64().ok_or_else(|| bad("tuple indices are naturals"))?, value))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Element::Tuple(list))
        }
        other => Err(bad(format!("unknown kind {other:?}"))),
    }
}

pub fn parse_json(text: &str) -> Result<Element> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    from_json(&v)
}
