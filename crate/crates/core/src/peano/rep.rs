//! Representations on `[0,1]` and the spliced functions `h_(x,y)`.
//!
//! An element `e` of a supported type is sent to a function
//! `rep(e): [0,1] → [0,1]` such that `e < e'` implies `rep(e) ≤ rep(e')`
//! pointwise with `rep(e) ≠ rep(e')`. [`rep_witness`] produces a parameter
//! where the inequality is strict.
//!
//! `Dup(X)` for `X ∈ {1, R, I}` uses `f_x = [s < c_x]` and `g_x = [s ≤ c_x]`
//! with `c_x` increasing in `x`. `Replace(X, Y)` evaluates `f_x ∘ P₁` off the
//! fiber `P₁⁻¹({c_x})` and, on it, the representation of `y` at the fiber
//! point's local coordinate squeezed into the middle half of `(f_x(c_x),
//! g_x(c_x))`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::cantor::{cantor_to_hcube, hcube_preimage, CantorPoint};
use super::curve;
use super::fiber::{self, binary};
use crate::error::{Error, Result};
use crate::hilbert::{self, HPoint};
use crate::ordertype::{self, Element, OrderType, Replacement};
use crate::ordinal::Ordinal;
use crate::rational::{self, frac, Rational};

/// Increasing bijection `R → (0, 1)`.
pub fn squash(y: &Rational) -> Rational {
    frac(1, 2) + y / (rational::int(2) * (Rational::one() + y.abs()))
}

/// The fiber parameter `c_x` of a base element.
pub fn fiber_constant(base: &OrderType, x: &Element) -> Result<Rational> {
    match (base, x) {
        (OrderType::Unit, Element::Point) => Ok(frac(1, 2)),
        (OrderType::Interval, Element::Num(v)) if rational::in_unit_interval(v) => Ok(v.clone()),
        (OrderType::Real, Element::Num(v)) => Ok(squash(v)),
        _ => {
            ordertype::validate(base, x)?;
            Err(Error::Unsupported(format!("no base representation for {base}; use 1, R or I")))
        }
    }
}

/// Base data of one fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDatum {
    pub x: Element,
    pub c: Rational,
    /// `f_x(c_x)`.
    pub low: Rational,
    /// `g_x(c_x)`.
    pub high: Rational,
}

impl FiberDatum {
    pub fn new(base: &OrderType, x: &Element) -> Result<Self> {
        let c = fiber_constant(base, x)?;
        Ok(FiberDatum { x: x.clone(), c, low: Rational::zero(), high: Rational::one() })
    }

    /// Increasing map of `[0,1]` into the middle half of `(low, high)`.
    pub fn rescale(&self, v: &Rational) -> Rational {
        &self.low + (&self.high - &self.low) * (frac(1, 4) + v / rational::int(2))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x": ordertype::to_json(&self.x),
            "c": rational::render(&self.c),
            "low": rational::render(&self.low),
            "high": rational::render(&self.high),
        })
    }
}

fn indicator(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// `f_x(s)` for bit 0, `g_x(s)` for bit 1.
fn dup_value(c: &Rational, bit: bool, s: &Rational) -> Rational {
    indicator(if bit { s <= c } else { s < c })
}

fn halve(alpha: &Ordinal, y: &Element) -> Result<HPoint> {
    let p = hilbert::hpoint_from_element(alpha, y)?;
    HPoint::new(p.support().iter().map(|(i, v)| (*i, v / rational::int(2))))
}

/// The Cantor point whose digits are twice the binary digits of `s`, when
/// that expansion terminates.
fn cantor_of(s: &Rational) -> Result<CantorPoint> {
    let (pre, cyc) = binary(s)?;
    if cyc != [0] {
        return Err(Error::Undecidable(format!(
            "parameter {} has no terminating binary expansion",
            rational::render(s)
        )));
    }
    Ok(CantorPoint::from_bits(&pre))
}

fn binary_value(bits: &[u8]) -> Rational {
    rational::from_expansion(bits, &[0], 2)
}

/// Splice engine for `Replace(X, Y)`.
pub struct ReplaceRep<'t> {
    repl: &'t Replacement,
}

impl<'t> ReplaceRep<'t> {
    pub fn new(ty: &'t OrderType) -> Result<Self> {
        let OrderType::Replace(repl) = ty else {
            return Err(Error::EngineMismatch(format!("{ty} is not a replacement")));
        };
        if !matches!(repl.base, OrderType::Unit | OrderType::Real | OrderType::Interval) {
            return Err(Error::EngineMismatch(format!("base {} must be 1, R or I", repl.base)));
        }
        check_supported(&repl.default)?;
        for (_, y) in &repl.overrides {
            check_supported(y)?;
        }
        Ok(ReplaceRep { repl })
    }

    pub fn datum(&self, x: &Element) -> Result<FiberDatum> {
        FiberDatum::new(&self.repl.base, x)
    }

    /// `h_(x,y)(t)`.
    pub fn eval(&self, e: &Element, t: &Rational) -> Result<Rational> {
        let Element::Pair(x, y) = e else {
            return Err(Error::InvalidElement { expr: "Replace".into(), msg: "expected a pair".into() });
        };
        let d = self.datum(x)?;
        let s = curve::p1(t)?;
        if s != d.c {
            return Ok(dup_value(&d.c, false, &s));
        }
        let local = fiber::local_coordinate(t)?;
        let inner = rep_eval(self.repl.fiber(x)?, y, &local)?;
        Ok(d.rescale(&inner))
    }

    /// A parameter where `h_a < h_b`, for `a < b`.
    pub fn witness(&self, a: &Element, b: &Element) -> Result<Rational> {
        let (Element::Pair(x1, y1), Element::Pair(x2, y2)) = (a, b) else {
            return Err(Error::InvalidElement { expr: "Replace".into(), msg: "expected pairs".into() });
        };
        let (d1, d2) = (self.datum(x1)?, self.datum(x2)?);
        match d1.c.cmp(&d2.c) {
            Ordering::Less => Ok(fiber::fiber_point(&rational::midpoint(&d1.c, &d2.c), &Rational::zero())?.t),
            Ordering::Equal => {
                let s = rep_witness(self.repl.fiber(x1)?, y1, y2)?;
                Ok(fiber::fiber_point(&d1.c, &s)?.t)
            }
            Ordering::Greater => Err(Error::Unsupported("witness needs a < b".into())),
        }
    }

    /// Fiber data of the given base elements, for export.
    pub fn fiber_table(&self, xs: &[Element]) -> Result<Value> {
        let rows = xs.iter().map(|x| Ok(self.datum(x)?.to_json())).collect::<Result<Vec<_>>>()?;
        Ok(json!({ "base": self.repl.base.to_string(), "fibers": rows }))
    }
}

fn check_supported(ty: &OrderType) -> Result<()> {
    match ty {
        OrderType::Unit | OrderType::Real | OrderType::Interval | OrderType::IPow(_) => Ok(()),
        OrderType::Dup(x) if matches!(**x, OrderType::Unit | OrderType::Real | OrderType::Interval) => Ok(()),
        OrderType::Replace(_) => ReplaceRep::new(ty).map(drop),
        other => Err(Error::EngineMismatch(format!("no representation on [0,1] for {other}"))),
    }
}

/// Value at `s` of the representation of `e`.
///
/// `I^α` is read through the Cantor surjection: `s`'s binary digits select
/// a point of the Hilbert cube, tested against `H_y'` where `y'` halves
/// every value of `y`.
pub fn rep_eval(ty: &OrderType, e: &Element, s: &Rational) -> Result<Rational> {
    if !rational::in_unit_interval(s) {
        return Err(Error::OutOfUnitInterval(rational::render(s)));
    }
    match (ty, e) {
        (OrderType::Unit, Element::Point) => Ok(frac(1, 2)),
        (OrderType::Interval, Element::Num(v)) => {
            ordertype::validate(ty, e)?;
            Ok(v.clone())
        }
        (OrderType::Real, Element::Num(v)) => Ok(squash(v)),
        (OrderType::Dup(x), Element::Dup(inner, bit)) => {
            check_supported(ty)?;
            Ok(dup_value(&fiber_constant(x, inner)?, *bit, s))
        }
        (OrderType::IPow(alpha), _) => {
            let target = halve(alpha, e)?;
            let p = cantor_to_hcube(&cantor_of(s)?, usize::MAX);
            Ok(indicator(hilbert::h_less(alpha, &p, &target)? == Ordering::Less))
        }
        (OrderType::Replace(_), _) => ReplaceRep::new(ty)?.eval(e, s),
        _ => {
            check_supported(ty)?;
            ordertype::validate(ty, e)?;
            Err(Error::InvalidElement { expr: ty.to_string(), msg: "element kind does not match".into() })
        }
    }
}

/// A parameter where `rep(a) < rep(b)`, for `a < b`.
pub fn rep_witness(ty: &OrderType, a: &Element, b: &Element) -> Result<Rational> {
    if ordertype::compare(ty, a, b)? != Ordering::Less {
        return Err(Error::Unsupported("witness needs a < b".into()));
    }
    match (ty, a, b) {
        (OrderType::Real | OrderType::Interval, _, _) => Ok(Rational::zero()),
        (OrderType::Dup(x), Element::Dup(xa, _), Element::Dup(xb, _)) => {
            let (ca, cb) = (fiber_constant(x, xa)?, fiber_constant(x, xb)?);
            Ok(if ca == cb { ca } else { rational::midpoint(&ca, &cb) })
        }
        (OrderType::IPow(alpha), _, _) => {
            let digits = hcube_preimage(&halve(alpha, a)?)?;
            Ok(binary_value(&digits.bits()))
        }
        (OrderType::Replace(_), _, _) => ReplaceRep::new(ty)?.witness(a, b),
        _ => Err(Error::EngineMismatch(format!("no representation on [0,1] for {ty}"))),
    }
}
