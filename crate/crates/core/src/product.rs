//! Countable lexicographic products as sums of step functions on `[0,1]`.
//!
//! Each prefix `(x₁, …, x_n)` of a sequence owns a carrier interval `J`
//! inside the carrier of `(x₁, …, x_{n-1})` (the root carrier is `[0,1]`).
//! Siblings are laid out like a binary search tree in the order of their
//! last entry: a node with cell `[a, b]` of width `w` keeps the slot
//! `[a + 3w/8, a + 5w/8]` and hands `[a, a + w/4]` and `[a + 3w/4, b]` to
//! its left and right subtrees.
//!
//! The level function of a prefix with budget `B` is `B` on the part of the
//! parent carrier strictly left of its own slot and 0 elsewhere. The value
//! of a sequence is the sum over its prefixes. Budgets satisfy
//! `B_n ≤ min(2^-(n-1), B_{n-1}/2)`, so truncating after level `n` is off by
//! at most `2^-(n-1)`.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ordertype::{self, Element, OrderType};
use crate::ordinal::Ordinal;
use crate::rational::{self, frac, Rational};

pub type NodeId = usize;

/// Allocation data of one prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDatum {
    pub level: u64,
    pub parent: Option<NodeId>,
    pub element: Element,
    /// Region available to this node's subtree among its siblings.
    pub cell: (Rational, Rational),
    /// The carrier `J` of the prefix.
    pub slot: (Rational, Rational),
    /// Value left of the slot.
    pub budget: Rational,
    /// Level-function value on the slot.
    pub low: Rational,
    /// Room left for the next level.
    pub high: Rational,
    left: Option<NodeId>,
    right: Option<NodeId>,
    children: Option<NodeId>,
}

impl LevelDatum {
    /// `high - low`, the budget ceiling for children.
    pub fn gap(&self) -> Rational {
        &self.high - &self.low
    }

    /// Level-function value at `t`, given `t` in the parent carrier.
    fn value(&self, t: &Rational) -> Rational {
        if *t < self.slot.0 {
            self.budget.clone()
        } else if *t <= self.slot.1 {
            self.low.clone()
        } else {
            Rational::zero()
        }
    }
}

/// `2^-(n-1)`: bound on the levels after `n`.
pub fn tail_bound(n: u64) -> Rational {
    assert!(n >= 1, "levels start at 1");
    rational::pow2_inv((n - 1) as u32)
}

fn contains(iv: &(Rational, Rational), t: &Rational) -> bool {
    iv.0 <= *t && *t <= iv.1
}

enum Probe {
    Found(NodeId),
    /// Node to attach under and on which side; `None` for an empty tree.
    Missing(Option<(NodeId, Ordering)>),
}

/// Lazily allocated carriers for one product type.
#[derive(Clone, Debug)]
pub struct ProductRep {
    ty: OrderType,
    /// Present when elements arrive as `X^ω` sequences.
    source: Option<OrderType>,
    nodes: Vec<LevelDatum>,
    root: Option<NodeId>,
    frozen: bool,
}

impl ProductRep {
    /// Accepts a countable product, or `X^ω` (including `I^ω`).
    pub fn new(ty: &OrderType) -> Result<Self> {
        let (prod, source) = match ty {
            OrderType::Prod(_) => (ty.clone(), None),
            OrderType::Pow(_, a) if *a == Ordinal::omega() => {
                (ordertype::pow_decompose(ty)?, Some(ty.clone()))
            }
            other => return Err(Error::EngineMismatch(format!("{other} is not a countable product"))),
        };
        Ok(ProductRep { ty: prod, source, nodes: Vec::new(), root: None, frozen: false })
    }

    /// The product type levels are drawn from.
    pub fn product_type(&self) -> &OrderType {
        &self.ty
    }

    /// Elements in the product's own form.
    fn normalize(&self, e: &Element) -> Result<Element> {
        match &self.source {
            Some(src) => ordertype::translate(src, e),
            None => ordertype::canonicalize(&self.ty, e),
        }
    }

    fn factor(&self, level: u64) -> Result<OrderType> {
        let OrderType::Prod(p) = &self.ty else { unreachable!() };
        p.factor(level - 1)
            .map(|f| f.into_owned())
            .ok_or_else(|| Error::Unsupported(format!("level {level} is past the last factor of {}", self.ty)))
    }

    /// Number of levels, `None` when infinite.
    pub fn levels(&self) -> Option<u64> {
        let OrderType::Prod(p) = &self.ty else { unreachable!() };
        p.len()
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn datum(&self, id: NodeId) -> &LevelDatum {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn level_of(&self, parent: Option<NodeId>) -> u64 {
        parent.map_or(1, |p| self.nodes[p].level + 1)
    }

    fn subtree_root(&self, parent: Option<NodeId>) -> Option<NodeId> {
        match parent {
            Some(p) => self.nodes[p].children,
            None => self.root,
        }
    }

    /// Finds `x` among the children of `parent`.
    fn search(&self, parent: Option<NodeId>, x: &Element, factor: &OrderType) -> Result<Probe> {
        let mut cur = self.subtree_root(parent);
        let mut last = None;
        while let Some(id) = cur {
            let c = ordertype::compare(factor, x, &self.nodes[id].element)?;
            cur = match c {
                Ordering::Equal => return Ok(Probe::Found(id)),
                Ordering::Less => self.nodes[id].left,
                Ordering::Greater => self.nodes[id].right,
            };
            last = Some((id, c));
        }
        Ok(Probe::Missing(last))
    }

    pub fn lookup(&self, parent: Option<NodeId>, x: &Element) -> Result<Option<NodeId>> {
        let factor = self.factor(self.level_of(parent))?;
        let x = ordertype::canonicalize(&factor, x)?;
        Ok(match self.search(parent, &x, &factor)? {
            Probe::Found(id) => Some(id),
            Probe::Missing(_) => None,
        })
    }

    /// Registers `x` as the next entry after the prefix `parent`
    /// (`None` for level 1). Registering twice returns the same node.
    pub fn register(&mut self, parent: Option<NodeId>, x: &Element) -> Result<NodeId> {
        let level = self.level_of(parent);
        let factor = self.factor(level)?;
        let x = ordertype::canonicalize(&factor, x)?;
        let attach = match self.search(parent, &x, &factor)? {
            Probe::Found(id) => return Ok(id),
            Probe::Missing(attach) => attach,
        };
        if self.frozen {
            return Err(Error::Frozen(ordertype::to_json(&x).to_string()));
        }
        let cell = match attach {
            None => match parent {
                Some(p) => self.nodes[p].slot.clone(),
                None => (Rational::zero(), Rational::one()),
            },
            Some((id, side)) => {
                let (a, b) = &self.nodes[id].cell;
                let w = b - a;
                match side {
                    Ordering::Less => (a.clone(), a + &w / rational::int(4)),
                    _ => (a + &w * frac(3, 4), b.clone()),
                }
            }
        };
        let w = &cell.1 - &cell.0;
        let slot = (&cell.0 + &w * frac(3, 8), &cell.0 + &w * frac(5, 8));
        let ceiling = parent.map_or(Rational::one(), |p| self.nodes[p].gap());
        let budget = std::cmp::min(tail_bound(level), ceiling);
        let (low, high) = (Rational::zero(), &budget / rational::int(2));
        let id = self.nodes.len();
        self.nodes.push(LevelDatum {
            level,
            parent,
            element: x,
            cell,
            slot,
            budget,
            low,
            high,
            left: None,
            right: None,
            children: None,
        });
        match (attach, parent) {
            (Some((at, Ordering::Less)), _) => self.nodes[at].left = Some(id),
            (Some((at, _)), _) => self.nodes[at].right = Some(id),
            (None, Some(p)) => self.nodes[p].children = Some(id),
            (None, None) => self.root = Some(id),
        }
        Ok(id)
    }

    /// Entry of `e` at level `k` (1-based), defaults filled in.
    fn entry(&self, e: &Element, k: u64) -> Result<Element> {
        let Element::Tuple(entries) = e else { unreachable!("normalized product element") };
        match entries.binary_search_by_key(&(k - 1), |(i, _)| *i) {
            Ok(j) => Ok(entries[j].1.clone()),
            Err(_) => ordertype::default(&self.factor(k)?),
        }
    }

    fn depth(&self, n: u64) -> u64 {
        self.levels().map_or(n, |l| n.min(l))
    }

    /// Registers the prefixes of `e` up to level `n`.
    pub fn materialize(&mut self, e: &Element, n: u64) -> Result<Vec<NodeId>> {
        let e = self.normalize(e)?;
        let mut path = Vec::new();
        let mut parent = None;
        for k in 1..=self.depth(n) {
            let id = self.register(parent, &self.entry(&e, k)?)?;
            path.push(id);
            parent = Some(id);
        }
        Ok(path)
    }

    fn path(&self, e: &Element, n: u64) -> Result<Vec<NodeId>> {
        let mut path = Vec::new();
        let mut parent = None;
        for k in 1..=self.depth(n) {
            let x = self.entry(e, k)?;
            let id = self.lookup(parent, &x)?.ok_or_else(|| {
                Error::Unmaterialized(format!("level {k} entry {}", ordertype::to_json(&x)))
            })?;
            path.push(id);
            parent = Some(id);
        }
        Ok(path)
    }

    /// Sum of the first `n` level functions at `t` and the bound on the
    /// rest, on already materialized prefixes.
    pub fn eval(&self, e: &Element, t: &Rational, n: u64) -> Result<(Rational, Rational)> {
        if !rational::in_unit_interval(t) {
            return Err(Error::OutOfUnitInterval(rational::render(t)));
        }
        let e = self.normalize(e)?;
        let mut value = Rational::zero();
        let mut carrier = (Rational::zero(), Rational::one());
        for id in self.path(&e, n)? {
            if !contains(&carrier, t) {
                break;
            }
            let d = &self.nodes[id];
            value += d.value(t);
            carrier = d.slot.clone();
        }
        let bound = match self.levels() {
            Some(l) if l <= n => Rational::zero(),
            _ => tail_bound(n.max(1)),
        };
        Ok((value, bound))
    }

    /// [`Self::materialize`] followed by [`Self::eval`].
    pub fn eval_lazy(&mut self, e: &Element, t: &Rational, n: u64) -> Result<(Rational, Rational)> {
        self.materialize(e, n)?;
        self.eval(e, t, n)
    }

    /// First level where `a` and `b` differ.
    pub fn first_difference(&self, a: &Element, b: &Element) -> Result<Option<u64>> {
        let (a, b) = (self.normalize(a)?, self.normalize(b)?);
        let (Element::Tuple(sa), Element::Tuple(sb)) = (&a, &b) else { unreachable!() };
        let mut idx: Vec<u64> = sa.iter().chain(sb).map(|(i, _)| *i).collect();
        idx.sort_unstable();
        idx.dedup();
        for i in idx {
            let f = self.factor(i + 1)?;
            if !ordertype::compare(&f, &self.entry(&a, i + 1)?, &self.entry(&b, i + 1)?)?.is_eq() {
                return Ok(Some(i + 1));
            }
        }
        Ok(None)
    }

    /// Truncation depth at which the order of `a` and `b` is settled.
    pub fn stable_depth(&self, a: &Element, b: &Element) -> Result<u64> {
        Ok(self.first_difference(a, b)?.unwrap_or(1))
    }

    /// A parameter where the smaller of `a`, `b` has the smaller value:
    /// the middle of its carrier at the first differing level.
    pub fn witness(&mut self, a: &Element, b: &Element) -> Result<Rational> {
        let k = self
            .first_difference(a, b)?
            .ok_or_else(|| Error::Unsupported("equal elements have no witness".into()))?;
        let c = ordertype::compare(&self.ty, &self.normalize(a)?, &self.normalize(b)?)?;
        let lo = if c == Ordering::Less { a } else { b };
        self.materialize(if c == Ordering::Less { b } else { a }, k)?;
        let path = self.materialize(lo, k)?;
        let slot = &self.nodes[path[k as usize - 1]].slot;
        Ok(rational::midpoint(&slot.0, &slot.1))
    }

    /// Prefix elements of node `id`, from level 1.
    pub fn address(&self, id: NodeId) -> Vec<Element> {
        let mut out = Vec::new();
        let mut cur = Some(id);
        while let Some(i) = cur {
            out.push(self.nodes[i].element.clone());
            cur = self.nodes[i].parent;
        }
        out.reverse();
        out
    }

    pub fn to_json(&self) -> Value {
        let iv = |(a, b): &(Rational, Rational)| json!([rational::render(a), rational::render(b)]);
        json!({
            "type": self.ty.to_string(),
            "frozen": self.frozen,
            "nodes": self.nodes.iter().enumerate().map(|(id, d)| json!({
                "id": id,
                "level": d.level,
                "parent": d.parent,
                "path": self.address(id).iter().map(ordertype::to_json).collect::<Vec<_>>(),
                "interval": iv(&d.slot),
                "cell": iv(&d.cell),
                "budget": rational::render(&d.budget),
                "low": rational::render(&d.low),
                "high": rational::render(&d.high),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordertype::Sampler;
    use crate::rational::int;

    fn t(s: &str) -> OrderType {
        s.parse().unwrap()
    }

    fn num(p: i64, q: i64) -> Element {
        Element::Num(frac(p, q))
    }

    #[test]
    fn first_registration_takes_middle_slot() {
        let mut rep = ProductRep::new(&t("Pow(I, w)")).unwrap();
        let a = rep.register(None, &num(1, 2)).unwrap();
        let d = rep.datum(a);
        assert_eq!(d.slot, (frac(3, 8), frac(5, 8)));
        assert_eq!((d.low.clone(), d.high.clone()), (int(0), frac(1, 2)));
        let b = rep.register(Some(a), &num(1, 3)).unwrap();
        let d = rep.datum(b);
        assert_eq!(d.budget, frac(1, 2));
        assert_eq!((d.low.clone(), d.high.clone()), (int(0), frac(1, 4)));
        assert!(d.slot.0 > frac(3, 8) && d.slot.1 < frac(5, 8));
        assert_eq!(rep.register(None, &num(2, 4)).unwrap(), a);
    }

    #[test]
    fn later_siblings_respect_order() {
        let mut rep = ProductRep::new(&t("Pow(I, w)")).unwrap();
        let x = rep.register(None, &num(1, 2)).unwrap();
        let y = rep.register(None, &num(3, 4)).unwrap();
        assert!(rep.datum(y).slot.0 > rep.datum(x).slot.1);
        let z = rep.register(None, &num(1, 8)).unwrap();
        assert!(rep.datum(z).slot.1 < rep.datum(x).slot.0);
    }

    #[test]
    fn random_registrations_are_disjoint_and_ordered() {
        let ty = t("Prod(default=I)");
        let mut rep = ProductRep::new(&ty).unwrap();
        let mut ids = Vec::new();
        for e in crate::ordertype::sample(&OrderType::Interval, 3, 100) {
            ids.push(rep.register(None, &e).unwrap());
        }
        for &i in &ids {
            for &j in &ids {
                let (a, b) = (rep.datum(i), rep.datum(j));
                match ordertype::compare(&OrderType::Interval, &a.element, &b.element).unwrap() {
                    Ordering::Less => assert!(a.slot.1 < b.slot.0),
                    Ordering::Greater => assert!(b.slot.1 < a.slot.0),
                    Ordering::Equal => assert_eq!(i, j),
                }
            }
        }
    }

    #[test]
    fn default_is_zero_right_of_carriers() {
        let mut rep = ProductRep::new(&t("Pow(I, w)")).unwrap();
        let e = Element::Seq(vec![]);
        assert_eq!(rep.eval_lazy(&e, &int(1), 10).unwrap().0, int(0));
        assert_eq!(rep.eval(&e, &frac(7, 8), 10).unwrap().0, int(0));
        assert_eq!(rep.eval(&e, &frac(1, 8), 10).unwrap().0, int(1));
    }

    #[test]
    fn level_bounds() {
        assert_eq!(tail_bound(1), int(1));
        assert_eq!(tail_bound(5), frac(1, 16));
        let ty = t("Pow(Dup(I), w)");
        let mut rep = ProductRep::new(&ty).unwrap();
        let mut s = Sampler::new(&ty, 8);
        for k in 0..300u64 {
            let e = s.element();
            let pos = Rational::new((k * 97 % 1024).into(), 1024u64.into());
            for n in 1..6 {
                let (v, bound) = rep.eval_lazy(&e, &pos, n).unwrap();
                let (deep, _) = rep.eval_lazy(&e, &pos, n + 5).unwrap();
                assert!(&deep - &v <= bound && deep >= v);
            }
        }
        for id in 0..rep.len() {
            let d = rep.datum(id);
            if let Some(p) = d.parent {
                let ps = &rep.datum(p).slot;
                assert!(d.cell.0 >= ps.0 && d.cell.1 <= ps.1);
                assert!(d.budget <= rep.datum(p).gap());
            }
        }
    }

    #[test]
    fn two_point_chain_powers() {
        let ty = t("Pow(Dup(1), w)");
        let mut rep = ProductRep::new(&ty).unwrap();
        let mut s = Sampler::new(&ty, 12);
        let params: Vec<Rational> = (0..64u64).map(|k| Rational::new((2 * k + 1).into(), 128u64.into())).collect();
        for _ in 0..200 {
            let (a, b) = s.pair();
            let want = ordertype::compare(&ty, &a, &b).unwrap();
            let n = rep.stable_depth(&a, &b).unwrap() + 2;
            if want == Ordering::Equal {
                let u = rep.eval_lazy(&a, &params[3], n).unwrap();
                assert_eq!(u, rep.eval_lazy(&b, &params[3], n).unwrap());
                continue;
            }
            let w = rep.witness(&a, &b).unwrap();
            let mut strict = Ordering::Equal;
            for p in params.iter().chain([&w]) {
                let va = rep.eval_lazy(&a, p, n).unwrap().0;
                let vb = rep.eval_lazy(&b, p, n).unwrap().0;
                let c = va.cmp(&vb);
                assert!(c == want || c == Ordering::Equal);
                if p == &w {
                    strict = c;
                }
            }
            assert_eq!(strict, want);
        }
    }

    #[test]
    fn frozen_registry() {
        let mut rep = ProductRep::new(&t("Prod(I, R)")).unwrap();
        let e = Element::Tuple(vec![(0, num(1, 2))]);
        rep.materialize(&e, 2).unwrap();
        rep.freeze();
        assert!(rep.eval(&e, &frac(1, 2), 2).is_ok());
        let other = Element::Tuple(vec![(0, num(1, 4))]);
        assert!(matches!(rep.eval(&other, &frac(1, 2), 2), Err(Error::Unmaterialized(_))));
        assert!(matches!(rep.materialize(&other, 2), Err(Error::Frozen(_))));
        // finite product: no tail
        assert_eq!(rep.eval(&e, &frac(1, 2), 2).unwrap().1, int(0));
    }

    #[test]
    fn deterministic_registries() {
        let ty = t("Pow(I, w)");
        let build = || {
            let mut rep = ProductRep::new(&ty).unwrap();
            for e in crate::ordertype::sample(&ty, 5, 50) {
                rep.materialize(&e, 6).unwrap();
            }
            rep.to_json()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn rejects_other_types() {
        assert!(ProductRep::new(&t("Pow(I, w*2)")).is_err());
        assert!(ProductRep::new(&t("Dup(I)")).is_err());
    }
}
