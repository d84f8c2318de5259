//! Membership in the replacement closure `S(ℋ)`, syntactic rank bounds, and
//! the finite shadow of the rank lemma.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ordertype::{self, Element, OrderType, Sampler, Tail};
use crate::ordinal::Ordinal;
use crate::peano::rep::squash;
use crate::rational::{self, Rational};

/// A base pattern of `ℋ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Unit,
    Real,
    Interval,
    /// `I^α` for every countable `α` (including `I` itself).
    AnyIPow,
    IPow(Ordinal),
    /// The two-element chain, written `Dup(1)` in expressions.
    Chain2,
}

impl Pattern {
    pub fn matches(&self, ty: &OrderType) -> bool {
        match (self, ty) {
            (Pattern::Unit, OrderType::Unit)
            | (Pattern::Real, OrderType::Real)
            | (Pattern::Interval, OrderType::Interval)
            | (Pattern::AnyIPow, OrderType::IPow(_) | OrderType::Interval) => true,
            (Pattern::IPow(a), OrderType::IPow(b)) => a == b,
            (Pattern::IPow(a), OrderType::Interval) => *a == Ordinal::one(),
            (Pattern::Chain2, OrderType::Dup(x)) => **x == OrderType::Unit,
            _ => false,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Unit => f.write_str("1"),
            Pattern::Real => f.write_str("R"),
            Pattern::Interval => f.write_str("I"),
            Pattern::AnyIPow => f.write_str("I^*"),
            Pattern::IPow(a) => write!(f, "I^({a})"),
            Pattern::Chain2 => f.write_str("2"),
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// `1`, `R`, `I`, `2`, `I^*` or `I^(α)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "1" => Pattern::Unit,
            "R" => Pattern::Real,
            "I" => Pattern::Interval,
            "2" | "Dup(1)" => Pattern::Chain2,
            "I^*" => Pattern::AnyIPow,
            _ => match s.strip_prefix("I^") {
                Some(rest) => Pattern::IPow(rest.trim().trim_start_matches('(').trim_end_matches(')').parse()?),
                None => return Err(Error::Syntax { pos: 0, msg: format!("unknown base pattern {s:?}") }),
            },
        })
    }
}

/// The base family `ℋ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Base {
    pub patterns: Vec<Pattern>,
}

impl Base {
    pub fn new(patterns: Vec<Pattern>) -> Self {
        Base { patterns }
    }

    /// Comma-separated patterns.
    pub fn parse(text: &str) -> Result<Self> {
        let patterns = text.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
        Ok(Base { patterns })
    }

    pub fn contains(&self, ty: &OrderType) -> Option<&Pattern> {
        self.patterns.iter().find(|p| p.matches(ty))
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.patterns.iter().map(Pattern::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// membership

/// Outcome of the membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub accepted: bool,
    /// Least stage `α` with the expression in `S_α`, when accepted.
    pub stage: Option<Ordinal>,
    /// The expression lies in `S(ℋ)^ω` through a countable power.
    pub via_omega: bool,
    pub reason: String,
}

impl Membership {
    pub fn to_json(&self) -> Value {
        json!({
            "accepted": self.accepted,
            "stage": self.stage.as_ref().map(Ordinal::to_string),
            "via_omega": self.via_omega,
            "reason": self.reason,
        })
    }
}

/// Stage in `S(ℋ)`, or why there is none.
fn stage(ty: &OrderType, base: &Base) -> std::result::Result<Ordinal, String> {
    if base.contains(ty).is_some() {
        return Ok(Ordinal::zero());
    }
    let after = |parts: Vec<std::result::Result<Ordinal, String>>| -> std::result::Result<Ordinal, String> {
        let mut top = Ordinal::zero();
        for p in parts {
            top = top.max(p?);
        }
        Ok(top.add(&Ordinal::one()))
    };
    match ty {
        OrderType::Replace(r) => {
            let mut parts = vec![stage(&r.base, base), stage(&r.default, base)];
            parts.extend(r.overrides.iter().map(|(_, y)| stage(y, base)));
            after(parts)
        }
        OrderType::Dup(x) => {
            let two = OrderType::dup(OrderType::Unit);
            if base.contains(&two).is_none() {
                return Err(format!("{ty} needs the two-point chain in the base"));
            }
            after(vec![stage(x, base), Ok(Ordinal::zero())])
        }
        OrderType::Prod(p) if matches!(p.tail, Tail::None) => {
            // X₁ × X₂ × … is X₁ with every point replaced by the rest
            let (first, rest) = p.factors.split_first().ok_or("empty product")?;
            if rest.is_empty() {
                return stage(first, base);
            }
            let tail = OrderType::prod(rest.to_vec(), Tail::None);
            after(vec![stage(first, base), stage(&tail, base)])
        }
        OrderType::Pow(x, a) if a.is_finite() && !a.is_zero() => {
            let n = a.as_finite().expect("finite");
            stage(&OrderType::prod(vec![(**x).clone(); n as usize], Tail::None), base)
        }
        OrderType::Prod(_) | OrderType::Pow(..) => Err(format!("{ty} is a countable power, outside S(H)")),
        other => Err(format!("{other} is not in the base")),
    }
}

/// The factor `X` when `ty ⊂ X^ω` syntactically.
fn omega_factor(ty: &OrderType) -> Option<OrderType> {
    match ty {
        OrderType::Pow(x, a) if *a <= Ordinal::omega() => Some((**x).clone()),
        OrderType::IPow(a) if *a <= Ordinal::omega() => Some(OrderType::Interval),
        OrderType::Prod(p) => {
            let first = p.factors.first().cloned().or(match &p.tail {
                Tail::Uniform(x) => Some(x.clone()),
                _ => None,
            })?;
            let same_tail = match &p.tail {
                Tail::None => true,
                Tail::Uniform(x) => *x == first,
                Tail::Ladder { .. } => false,
            };
            (same_tail && p.factors.iter().all(|f| *f == first)).then_some(first)
        }
        _ => None,
    }
}

/// Whether `ty` is generated from `ℋ` by replacements; with `omega`, also
/// accepts subsets of `X^ω` for generated `X`.
pub fn s_member_check(ty: &OrderType, base: &Base, omega: bool) -> Membership {
    match stage(ty, base) {
        Ok(s) => Membership { accepted: true, stage: Some(s), via_omega: false, reason: "generated by replacement".into() },
        Err(reason) => {
            if omega {
                if let Some(x) = omega_factor(ty) {
                    if let Ok(s) = stage(&x, base) {
                        return Membership {
                            accepted: true,
                            stage: Some(s),
                            via_omega: true,
                            reason: format!("subset of ({x})^w"),
                        };
                    }
                }
            }
            Membership { accepted: false, stage: None, via_omega: false, reason }
        }
    }
}

// ---------------------------------------------------------------------------
// rank bounds

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// A member of `ℋ`: rank 0.
    Base(Pattern),
    /// The empty set: rank 0.
    Empty,
    /// A countable set: the whole set is the skeleton, leaving no intervals.
    Countable,
    /// Replacement over a base with a countable dense skeleton; the maximal
    /// intervals lie inside fibers.
    Replace { skeleton: String },
    /// Replacing the single point of `1` changes nothing.
    Single,
}

impl Rule {
    fn name(&self) -> &'static str {
        match self {
            Rule::Base(_) => "base",
            Rule::Empty => "empty",
            Rule::Countable => "countable",
            Rule::Replace { .. } => "replace",
            Rule::Single => "single-point",
        }
    }
}

/// A rank bound with the rule applications behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub expr: String,
    pub rule: Rule,
    pub bound: Ordinal,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "expr": self.expr,
            "rule": self.rule.name(),
            "bound": self.bound.to_string(),
            "children": self.children.iter().map(Derivation::to_json).collect::<Vec<_>>(),
        });
        match &self.rule {
            Rule::Base(p) => v["pattern"] = json!(p.to_string()),
            Rule::Replace { skeleton } => v["skeleton"] = json!(skeleton),
            _ => {}
        }
        v
    }

    /// Leaves of the tree.
    pub fn leaves(&self) -> Vec<&Derivation> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(Derivation::leaves).collect()
    }
}

/// Recomputes the bound of a derivation from its rules alone.
pub fn replay(d: &Derivation) -> Result<Ordinal> {
    let kids = d.children.iter().map(replay).collect::<Result<Vec<_>>>()?;
    let sup = kids.iter().cloned().max().unwrap_or_else(Ordinal::zero);
    let bound = match &d.rule {
        Rule::Base(_) | Rule::Empty if kids.is_empty() => Ordinal::zero(),
        Rule::Countable | Rule::Replace { .. } => sup.add(&Ordinal::one()),
        Rule::Single if kids.len() == 1 => sup,
        _ => return Err(Error::Inconsistent(format!("malformed derivation at {}", d.expr))),
    };
    if bound != d.bound {
        return Err(Error::Inconsistent(format!("{} claims {} but replays to {bound}", d.expr, d.bound)));
    }
    Ok(bound)
}

/// The type has countably many elements.
pub fn is_countable(ty: &OrderType) -> bool {
    match ty {
        OrderType::Unit => true,
        OrderType::Real | OrderType::Interval | OrderType::IPow(_) => false,
        OrderType::Dup(x) => is_countable(x),
        OrderType::Replace(r) => {
            is_countable(&r.base) && is_countable(&r.default) && r.overrides.iter().all(|(_, y)| is_countable(y))
        }
        OrderType::Prod(p) => matches!(p.tail, Tail::None) && p.factors.iter().all(is_countable),
        OrderType::Pow(x, a) => a.is_finite() && is_countable(x),
    }
}

/// `ty` read as a replacement: `(base, default fiber, overrides)`.
fn as_replacement(ty: &OrderType) -> Option<(OrderType, OrderType, Vec<OrderType>)> {
    match ty {
        OrderType::Replace(r) => Some((r.base.clone(), r.default.clone(), r.overrides.iter().map(|(_, y)| y.clone()).collect())),
        OrderType::Dup(x) => Some(((**x).clone(), OrderType::dup(OrderType::Unit), vec![])),
        OrderType::Prod(p) if matches!(p.tail, Tail::None) && p.factors.len() >= 2 => {
            let rest = OrderType::prod(p.factors[1..].to_vec(), Tail::None);
            let rest = if p.factors.len() == 2 { p.factors[1].clone() } else { rest };
            Some((p.factors[0].clone(), rest, vec![]))
        }
        OrderType::Pow(x, a) if a.as_finite().is_some_and(|n| n >= 2) => {
            let n = a.as_finite().expect("finite");
            let rest = if n == 2 { (**x).clone() } else { OrderType::pow((**x).clone(), Ordinal::nat(n - 1)) };
            Some(((**x).clone(), rest, vec![]))
        }
        _ => None,
    }
}

/// Upper bound on the rank of `ty` over `ℋ`.
pub fn rank_bound(ty: &OrderType, base: &Base) -> Result<Derivation> {
    let expr = ty.to_string();
    if let Some(p) = base.contains(ty) {
        return Ok(Derivation { expr, rule: Rule::Base(p.clone()), bound: Ordinal::zero(), children: vec![] });
    }
    if is_countable(ty) {
        let empty = Derivation { expr: "{}".into(), rule: Rule::Empty, bound: Ordinal::zero(), children: vec![] };
        return Ok(Derivation { expr, rule: Rule::Countable, bound: Ordinal::one(), children: vec![empty] });
    }
    let Some((b, default, overrides)) = as_replacement(ty) else {
        return Err(Error::NoRankRule(expr));
    };
    let skeleton = match b {
        OrderType::Unit => {
            let mut fibers = overrides;
            fibers.push(default);
            let only = fibers.swap_remove(0);
            let child = rank_bound(&only, base)?;
            return Ok(Derivation { expr, rule: Rule::Single, bound: child.bound.clone(), children: vec![child] });
        }
        OrderType::Real => "dyadic rationals of R",
        OrderType::Interval => "dyadic rationals of I",
        _ => return Err(Error::NoRankRule(format!("{expr}: base {b} has no countable dense skeleton rule"))),
    };
    let mut children = vec![rank_bound(&default, base)?];
    for y in &overrides {
        children.push(rank_bound(y, base)?);
    }
    let sup = children.iter().map(|c| c.bound.clone()).max().expect("at least the default fiber");
    Ok(Derivation { expr, rule: Rule::Replace { skeleton: skeleton.into() }, bound: sup.add(&Ordinal::one()), children })
}

// ---------------------------------------------------------------------------
// the rank lemma on a finite sample

/// `e` is the least element of `ty`.
pub fn is_min(ty: &OrderType, e: &Element) -> Result<bool> {
    extreme(ty, e, false)
}

/// `e` is the greatest element of `ty`.
pub fn is_max(ty: &OrderType, e: &Element) -> Result<bool> {
    extreme(ty, e, true)
}

fn extreme(ty: &OrderType, e: &Element, top: bool) -> Result<bool> {
    let e = ordertype::canonicalize(ty, e)?;
    Ok(match (ty, &e) {
        (OrderType::Unit, _) => true,
        (OrderType::Real, _) => false,
        (OrderType::Interval, Element::Num(v)) => *v == if top { Rational::one() } else { Rational::zero() },
        (OrderType::Dup(x), Element::Dup(inner, bit)) => *bit == top && extreme(x, inner, top)?,
        (OrderType::Replace(r), Element::Pair(x, y)) => extreme(&r.base, x, top)? && extreme(r.fiber(x)?, y, top)?,
        (OrderType::IPow(_) | OrderType::Pow(..), Element::Seq(s)) => {
            let (factor, alpha) = match ty {
                OrderType::IPow(a) => (OrderType::Interval, a.clone()),
                OrderType::Pow(x, a) => ((**x).clone(), a.clone()),
                _ => unreachable!(),
            };
            let listed = s.iter().map(|(_, v)| extreme(&factor, v, top)).collect::<Result<Vec<_>>>()?;
            let covers_all = alpha.as_finite().is_some_and(|n| n == s.len() as u64);
            listed.iter().all(|b| *b) && (covers_all || extreme(&factor, &ordertype::default(&factor)?, top)?)
        }
        (OrderType::Prod(p), Element::Tuple(s)) => {
            for (i, v) in s {
                if !extreme(&p.factor(*i).expect("valid index"), v, top)? {
                    return Ok(false);
                }
            }
            let unlisted: Vec<OrderType> = match &p.tail {
                Tail::None => (0..p.factors.len() as u64)
                    .filter(|i| s.iter().all(|(j, _)| j != i))
                    .map(|i| p.factors[i as usize].clone())
                    .collect(),
                Tail::Uniform(x) => p.factors.iter().cloned().chain([x.clone()]).collect(),
                Tail::Ladder { base, .. } => p.factors.iter().cloned().chain([base.clone()]).collect(),
            };
            for f in unlisted {
                if !extreme(&f, &ordertype::default(&f)?, top)? {
                    return Ok(false);
                }
            }
            true
        }
        _ => false,
    })
}

/// Order-preserving rational label of a base point.
fn phi(base: &OrderType, x: &Element) -> Result<Rational> {
    match (base, x) {
        (OrderType::Unit, _) => Ok(Rational::zero()),
        (OrderType::Interval, Element::Num(v)) => Ok(v.clone()),
        (OrderType::Real, Element::Num(v)) => Ok(squash(v)),
        _ => Err(Error::EngineMismatch(format!("skeleton labels need base 1, R or I, not {base}"))),
    }
}

/// Labels of the attached first and last elements.
fn sentinels(base: &OrderType) -> (Rational, Rational) {
    match base {
        OrderType::Real => (Rational::zero(), Rational::one()),
        OrderType::Interval => (rational::int(-1), rational::int(2)),
        _ => (rational::int(-1), rational::int(1)),
    }
}

/// One maximal interval of `X ∖ M` met by the sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    /// Human-readable position, e.g. `below #2` or `fiber 3/7`.
    pub place: String,
    /// Base point of the fiber containing it.
    pub fiber: Rational,
    /// `F(I)`: supremum of the labels of skeleton points left of it.
    pub f: Rational,
    /// Index into the sample of the point right after it, if in the same
    /// fiber.
    pub next_point: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub labels: Vec<Rational>,
    pub sentinels: (Rational, Rational),
    pub gaps: Vec<Gap>,
    pub violations: Vec<String>,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels.iter().map(rational::render).collect::<Vec<_>>(),
            "sentinels": [rational::render(&self.sentinels.0), rational::render(&self.sentinels.1)],
            "gaps": self.gaps.iter().map(|g| json!({
                "place": g.place,
                "fiber": rational::render(&g.fiber),
                "F": rational::render(&g.f),
            })).collect::<Vec<_>>(),
            "violations": self.violations,
        })
    }
}

fn replacement_parts(ty: &OrderType) -> Result<(OrderType, OrderType)> {
    match ty {
        OrderType::Replace(r) => Ok((r.base.clone(), ty.clone())),
        OrderType::Dup(x) => {
            Ok(((**x).clone(), OrderType::replace((**x).clone(), OrderType::dup(OrderType::Unit))))
        }
        other => Err(Error::EngineMismatch(format!("{other} is not a replacement"))),
    }
}

fn split_pair(e: &Element) -> Result<(&Element, &Element)> {
    match e {
        Element::Pair(x, y) => Ok((x, y)),
        _ => Err(Error::Inconsistent("skeleton points are pairs (x, y)".into())),
    }
}

/// A non-dyadic point strictly between two rationals.
fn non_dyadic_between(a: &Rational, b: &Rational) -> Rational {
    let third = (b - a) / rational::int(3);
    let mut x = a + &third;
    let mut k = 1;
    while rational::is_dyadic(&x) {
        k += 1;
        x = a + &third / rational::int(k);
    }
    x
}

/// Labels the sample of the skeleton (one point per dyadic fiber) and the
/// maximal intervals of the complement it meets, then checks the lemma's
/// claims on every consecutive run of intervals.
pub fn rank_decompose(ty: &OrderType, sample: &[Element]) -> Result<Decomposition> {
    let (base, repl) = replacement_parts(ty)?;
    let OrderType::Replace(r) = &repl else { unreachable!() };
    let lift = |e: &Element| -> Result<Element> {
        match (ty, e) {
            (OrderType::Dup(_), Element::Dup(x, bit)) => Ok(Element::pair((**x).clone(), Element::dup(Element::Point, *bit))),
            _ => Ok(e.clone()),
        }
    };
    let points = sample.iter().map(lift).collect::<Result<Vec<_>>>()?;
    for w in points.windows(2) {
        if ordertype::compare(&repl, &w[0], &w[1])? != Ordering::Less {
            return Err(Error::Inconsistent("sample is not strictly increasing".into()));
        }
    }
    let mut labels = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let (x, _) = split_pair(p)?;
        ordertype::validate(&repl, p)?;
        let label = phi(&base, x)?;
        if let Element::Num(v) = x {
            if !rational::is_dyadic(v) {
                return Err(Error::Inconsistent(format!("sample point {i} lies over the non-dyadic {}", rational::render(v))));
            }
        }
        if labels.last().is_some_and(|l| *l >= label) {
            return Err(Error::Inconsistent(format!("sample points {} and {i} share a fiber", i - 1)));
        }
        labels.push(label);
    }
    let (lo, hi) = sentinels(&base);

    let mut gaps: Vec<Gap> = Vec::new();
    if base == OrderType::Unit && points.is_empty() {
        gaps.push(Gap { place: "whole fiber".into(), fiber: Rational::zero(), f: lo.clone(), next_point: None });
    }
    for (i, p) in points.iter().enumerate() {
        let (x, y) = split_pair(p)?;
        let fiber = r.fiber(x)?;
        let c = labels[i].clone();
        if i > 0 && base != OrderType::Unit {
            // a whole fiber over a non-dyadic point between the previous sample point and this one
            let mid = non_dyadic_between(&labels[i - 1], &c);
            gaps.push(Gap { place: format!("fiber between #{} and #{i}", i - 1), fiber: mid.clone(), f: mid, next_point: None });
        }
        // the part of the fiber below the sample point: everything in the
        // skeleton to its left has label below c, with supremum c unless
        // this is the first fiber of a one-point or closed base
        if !is_min(fiber, y)? {
            let nothing_left = base == OrderType::Unit
                || (base == OrderType::Interval && c.is_zero());
            let f = if nothing_left { lo.clone() } else { c.clone() };
            gaps.push(Gap { place: format!("below #{i}"), fiber: c.clone(), f, next_point: Some(i) });
        }
        if !is_max(fiber, y)? {
            gaps.push(Gap { place: format!("above #{i}"), fiber: c.clone(), f: c.clone(), next_point: None });
        }
    }

    let mut violations = Vec::new();
    for w in gaps.windows(3) {
        if w[0].f >= w[2].f {
            violations.push(format!("F({}) = {} is not below F({}) = {}", w[0].place, rational::render(&w[0].f), w[2].place, rational::render(&w[2].f)));
        }
    }
    for w in gaps.windows(2) {
        if w[1].f < w[0].f {
            violations.push(format!("F decreases from {} to {}", w[0].place, w[1].place));
        }
        // exactly one skeleton point lies between the two parts of one fiber;
        // between different fibers there are infinitely many
        let one_between = w[0].fiber == w[1].fiber && w[0].next_point.is_some();
        if w[0].f == w[1].f && !one_between {
            violations.push(format!("F({}) = F({}) without exactly one skeleton point between", w[0].place, w[1].place));
        }
    }
    for g in &gaps {
        if g.f <= lo && !labels.is_empty() && g.next_point != Some(0) {
            violations.push(format!("F({}) reaches the first sentinel", g.place));
        }
        if g.f >= hi {
            violations.push(format!("F({}) reaches the last sentinel", g.place));
        }
    }
    Ok(Decomposition { labels, sentinels: (lo, hi), gaps, violations })
}

/// Random increasing skeleton sample of at most `k` points.
pub fn skeleton_sample(ty: &OrderType, seed: u64, k: usize) -> Result<Vec<Element>> {
    let (base, repl) = replacement_parts(ty)?;
    let OrderType::Replace(r) = &repl else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=k.max(1));
    let mut xs: Vec<Element> = match base {
        OrderType::Unit => vec![Element::Point],
        OrderType::Interval | OrderType::Real => {
            let mut qs: Vec<Rational> = (0..n)
                .map(|_| {
                    let den = 1i64 << rng.gen_range(0..=8);
                    let span = if base == OrderType::Real { 4 } else { 1 };
                    let lo = if base == OrderType::Real { -span * den } else { 0 };
                    Rational::new(rng.gen_range(lo..=span * den).into(), den.into())
                })
                .collect();
            qs.sort();
            qs.dedup();
            qs.into_iter().map(Element::Num).collect()
        }
        other => return Err(Error::EngineMismatch(format!("no skeleton for base {other}"))),
    };
    xs.truncate(k.max(1));
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let fiber = r.fiber(&x)?.clone();
        let mut s = Sampler::new(&fiber, rng.gen());
        let y = match rng.gen_range(0..6) {
            0 => ordertype::default(&fiber)?,
            _ => s.element(),
        };
        out.push(match ty {
            OrderType::Dup(_) => match y {
                Element::Dup(_, bit) => Element::dup(x, bit),
                _ => unreachable!(),
            },
            _ => Element::pair(x, y),
        });
    }
    Ok(out)
}
