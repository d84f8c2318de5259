//! `I^α` on the Hilbert cube `H = [0,1]^ℕ`.
//!
//! A point `p` of `H` is read as the transfinite sequence `f(φ(n)) = p_n`,
//! where `φ` is [`ordinal::enumerate`]. That pulls the lexicographic order of
//! `I^α` back to `H`, and each `x` is represented by the characteristic
//! function of `H_x = {y : y <_H x}`. `H_x` is both `F_σ` and `G_δ`;
//! [`ambiguity_certificate`] materializes finite prefixes of both unions.
//!
//! For finite `α` the cube is `[0,1]^α` and coordinates must stay below `α`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ordertype::{self, Element, OrderType};
use crate::ordinal::{self, Ordinal};
use crate::rational::{self, Rational};

/// Finitely supported point of the Hilbert cube; unlisted coordinates are 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HPoint {
    support: Vec<(u64, Rational)>,
}

impl HPoint {
    pub fn zero() -> Self {
        HPoint::default()
    }

    /// Builds a point from `(coordinate, value)` pairs in any order; zero
    /// values are dropped.
    pub fn new(entries: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let mut support: Vec<(u64, Rational)> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        support.sort_by_key(|(i, _)| *i);
        if let Some(w) = support.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidElement { expr: "H".into(), msg: format!("coordinate {} repeated", w[0].0) });
        }
        if let Some((_, v)) = support.iter().find(|(_, v)| !rational::in_unit_interval(v)) {
            return Err(Error::OutOfUnitInterval(rational::render(v)));
        }
        Ok(HPoint { support })
    }

    pub fn support(&self) -> &[(u64, Rational)] {
        &self.support
    }

    pub fn get(&self, n: u64) -> Rational {
        match self.support.binary_search_by_key(&n, |(i, _)| *i) {
            Ok(k) => self.support[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.support.iter().map(|(i, v)| json!([i, rational::render(v)])).collect())
    }

    /// Inverse of [`Self::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let entries = v
            .as_array()
            .ok_or_else(|| bad("point must be an array"))?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([i, r]) => Ok((coordinate(i)?, rat(r)?)),
                _ => Err(bad("point entry must be [coordinate, value]")),
            })
            .collect::<Result<Vec<_>>>()?;
        HPoint::new(entries)
    }
}

fn bad(msg: &str) -> Error {
    Error::ElementJson(msg.into())
}

fn coordinate(v: &Value) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad("coordinate must be a natural number"))
}

fn rat(v: &Value) -> Result<Rational> {
    rational::parse(v.as_str().ok_or_else(|| bad("rationals are strings \"p/q\""))?)
}

fn ord_field(v: &Value) -> Result<Ordinal> {
    ordinal::parse(v.as_str().ok_or_else(|| bad("ordinals are strings"))?)
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, v)) in self.support.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}: {}", rational::render(v))?;
        }
        f.write_str("}")
    }
}

fn ipow(alpha: &Ordinal) -> OrderType {
    OrderType::IPow(alpha.clone())
}

fn seq_support(alpha: &Ordinal, x: &Element) -> Result<Vec<(Ordinal, Rational)>> {
    let Element::Seq(s) = ordertype::canonicalize(&ipow(alpha), x)? else { unreachable!() };
    Ok(s.into_iter().map(|(p, v)| (p, v.as_num().expect("values of I").clone())).collect())
}

/// The point with coordinate `n` equal to the value of `x` at `φ(n)`.
///
/// Fails only when some support position has an index beyond `u64`.
pub fn hpoint_from_element(alpha: &Ordinal, x: &Element) -> Result<HPoint> {
    let entries = seq_support(alpha, x)?
        .into_iter()
        .map(|(p, v)| Ok((ordinal::index(alpha, &p)?, v)))
        .collect::<Result<Vec<_>>>()?;
    HPoint::new(entries)
}

/// The transfinite sequence read off a point.
pub fn element_from_hpoint(alpha: &Ordinal, p: &HPoint) -> Result<Element> {
    let mut entries = p
        .support
        .iter()
        .map(|(n, v)| Ok((ordinal::enumerate(alpha, *n)?, Element::Num(v.clone()))))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Element::Seq(entries))
}

/// Coordinates where `p` and `q` differ, in increasing order.
fn differing(p: &HPoint, q: &HPoint) -> Vec<u64> {
    let mut idx: Vec<u64> = p.support.iter().chain(&q.support).map(|(i, _)| *i).collect();
    idx.sort_unstable();
    idx.dedup();
    idx.retain(|&i| p.get(i) != q.get(i));
    idx
}

/// The least differing coordinate under `<` on `φ`-images, with its ordinal.
fn first_difference(alpha: &Ordinal, p: &HPoint, q: &HPoint) -> Result<Option<(u64, Ordinal)>> {
    let mut best: Option<(u64, Ordinal)> = None;
    for i in differing(p, q) {
        let pos = ordinal::enumerate(alpha, i)?;
        if best.as_ref().is_none_or(|(_, b)| pos < *b) {
            best = Some((i, pos));
        }
    }
    Ok(best)
}

/// `<_H`: compares at the coordinate whose ordinal is least among the
/// differing ones.
pub fn h_less(alpha: &Ordinal, p: &HPoint, q: &HPoint) -> Result<Ordering> {
    Ok(match first_difference(alpha, p, q)? {
        Some((i, _)) => p.get(i).cmp(&q.get(i)),
        None => Ordering::Equal,
    })
}

/// Value of the characteristic function of `H_x` at `p`.
pub fn chi_eval(alpha: &Ordinal, x: &Element, p: &HPoint) -> Result<bool> {
    let xp = hpoint_from_element(alpha, x)?;
    Ok(h_less(alpha, p, &xp)? == Ordering::Less)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationKind {
    /// Prefix of the union of clauses `{y : y <_H x}` splits into.
    FSigma,
    /// Complement of a prefix of the union for `{y : x <_H y} ∪ {x}`.
    GDelta,
}

impl TruncationKind {
    pub fn name(self) -> &'static str {
        match self {
            TruncationKind::FSigma => "F_sigma",
            TruncationKind::GDelta => "G_delta",
        }
    }
}

/// One clause of the union, indexed by `β = φ(n)`: agree with `x` below `β`
/// and compare strictly at `β`. Coordinates below `β` that are not listed in
/// `equal` must be 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub n: u64,
    pub beta: Ordinal,
    /// `(coordinate, its ordinal, required value)`.
    pub equal: Vec<(u64, Ordinal, Rational)>,
    /// Required relation of coordinate `n` to `bound`.
    pub strict: Ordering,
    pub bound: Rational,
}

impl Clause {
    fn new(alpha: &Ordinal, x: &HPoint, n: u64, strict: Ordering) -> Result<Self> {
        let beta = ordinal::enumerate(alpha, n)?;
        let mut equal = Vec::new();
        for (i, v) in &x.support {
            let pos = ordinal::enumerate(alpha, *i)?;
            if pos < beta {
                equal.push((*i, pos, v.clone()));
            }
        }
        Ok(Clause { n, beta, equal, strict, bound: x.get(n) })
    }

    /// The clause is satisfiable inside `[0,1]`.
    pub fn is_inhabited(&self) -> bool {
        match self.strict {
            Ordering::Less => !self.bound.is_zero(),
            Ordering::Greater => self.bound < Rational::from_integer(1.into()),
            Ordering::Equal => true,
        }
    }

    pub fn contains(&self, alpha: &Ordinal, p: &HPoint) -> Result<bool> {
        if p.get(self.n).cmp(&self.bound) != self.strict {
            return Ok(false);
        }
        for (i, _, v) in &self.equal {
            if p.get(*i) != *v {
                return Ok(false);
            }
        }
        // coordinates of p below beta that x leaves at 0
        for (i, _) in &p.support {
            if *i == self.n || self.equal.iter().any(|(j, _, _)| j == i) {
                continue;
            }
            if ordinal::enumerate(alpha, *i)? < self.beta {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "beta": self.beta.to_string(),
            "equal": self.equal.iter()
                .map(|(i, pos, v)| json!([i, pos.to_string(), rational::render(v)]))
                .collect::<Vec<_>>(),
            "strict": {
                "coordinate": self.n,
                "op": if self.strict == Ordering::Less { "<" } else { ">" },
                "value": rational::render(&self.bound),
            },
            "others_below_beta": "0",
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let strict = &v["strict"];
        let equal = v["equal"]
            .as_array()
            .ok_or_else(|| bad("clause needs an \"equal\" array"))?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([i, pos, r]) => Ok((coordinate(i)?, ord_field(pos)?, rat(r)?)),
                _ => Err(bad("equal entry must be [coordinate, ordinal, value]")),
            })
            .collect::<Result<Vec<_>>>()?;
        let op = match strict["op"].as_str() {
            Some("<") => Ordering::Less,
            Some(">") => Ordering::Greater,
            _ => return Err(bad("strict op must be \"<\" or \">\"")),
        };
        Ok(Clause { n: coordinate(&v["n"])?, beta: ord_field(&v["beta"])?, equal, strict: op, bound: rat(&strict["value"])? })
    }
}

/// The first `depth` clauses of one of the two unions for `H_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetTruncation {
    pub kind: TruncationKind,
    pub alpha: Ordinal,
    pub point: HPoint,
    pub depth: u64,
    pub clauses: Vec<Clause>,
}

impl SetTruncation {
    pub fn new(kind: TruncationKind, alpha: &Ordinal, x: &Element, depth: u64) -> Result<Self> {
        let point = hpoint_from_element(alpha, x)?;
        let depth = match alpha.as_finite() {
            Some(a) => depth.min(a),
            None => depth,
        };
        let strict = match kind {
            TruncationKind::FSigma => Ordering::Less,
            TruncationKind::GDelta => Ordering::Greater,
        };
        let clauses = (0..depth).map(|n| Clause::new(alpha, &point, n, strict)).collect::<Result<_>>()?;
        Ok(SetTruncation { kind, alpha: alpha.clone(), point, depth, clauses })
    }

    /// Membership of `p` in the union of the clauses (for `F_sigma`) or in
    /// the complement of their union and of `{x}` (for `G_delta`).
    pub fn member(&self, p: &HPoint) -> Result<bool> {
        let mut hit = false;
        for c in &self.clauses {
            if c.contains(&self.alpha, p)? {
                hit = true;
                break;
            }
        }
        Ok(match self.kind {
            TruncationKind::FSigma => hit,
            TruncationKind::GDelta => !hit && *p != self.point,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "alpha": self.alpha.to_string(),
            "depth": self.depth,
            "point": self.point.to_json(),
            "excluded_point": self.kind == TruncationKind::GDelta,
            "clauses": self.clauses.iter().map(Clause::to_json).collect::<Vec<_>>(),
        })
    }

    /// Inverse of [`Self::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = match v["kind"].as_str() {
            Some("F_sigma") => TruncationKind::FSigma,
            Some("G_delta") => TruncationKind::GDelta,
            _ => return Err(bad("kind must be F_sigma or G_delta")),
        };
        let clauses = v["clauses"]
            .as_array()
            .ok_or_else(|| bad("truncation needs a \"clauses\" array"))?
            .iter()
            .map(Clause::from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(SetTruncation {
            kind,
            alpha: ord_field(&v["alpha"])?,
            point: HPoint::from_json(&v["point"])?,
            depth: v["depth"].as_u64().ok_or_else(|| bad("depth must be a natural number"))?,
            clauses,
        })
    }
}

/// `F_σ` and `G_δ` truncations of `H_x` at depth `depth`.
pub fn ambiguity_certificate(alpha: &Ordinal, x: &Element, depth: u64) -> Result<(SetTruncation, SetTruncation)> {
    if depth == 0 {
        return Err(Error::Unsupported("certificate depth must be at least 1".into()));
    }
    Ok((
        SetTruncation::new(TruncationKind::FSigma, alpha, x, depth)?,
        SetTruncation::new(TruncationKind::GDelta, alpha, x, depth)?,
    ))
}

/// Depth from which both truncations agree with `chi_eval` at `p`:
/// one past the largest coordinate where `p` and `x` differ.
pub fn stabilization_depth(alpha: &Ordinal, x: &Element, p: &HPoint) -> Result<u64> {
    let xp = hpoint_from_element(alpha, x)?;
    Ok(differing(p, &xp).last().map_or(1, |i| i + 1))
}
