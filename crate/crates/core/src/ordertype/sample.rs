//! Deterministic pseudo-random elements.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::element::{self, Element};
use super::expr::OrderType;
use crate::ordinal::{self, Ordinal};
use crate::rational::Rational;

const MAX_SUPPORT: usize = 8;
const MAX_DENOM_EXP: u32 = 10;
const POSITION_RANGE: u64 = 64;
const TUPLE_RANGE: u64 = 16;

/// Random element generator for a fixed type.
pub struct Sampler<'t> {
    ty: &'t OrderType,
    rng: ChaCha8Rng,
}

impl<'t> Sampler<'t> {
    pub fn new(ty: &'t OrderType, seed: u64) -> Self {
        Sampler { ty, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn element(&mut self) -> Element {
        let ty = self.ty;
        draw(&mut self.rng, ty)
    }

    /// Two elements that often agree on a prefix, so comparisons reach deep
    /// positions and ties are common.
    pub fn pair(&mut self) -> (Element, Element) {
        let ty = self.ty;
        let a = draw(&mut self.rng, ty);
        let b = if self.rng.gen_ratio(1, 8) { draw(&mut self.rng, ty) } else { perturb(&mut self.rng, ty, &a) };
        (a, b)
    }
}

/// `count` elements of `ty` drawn from `seed`.
pub fn sample(ty: &OrderType, seed: u64, count: usize) -> Vec<Element> {
    let mut s = Sampler::new(ty, seed);
    (0..count).map(|_| s.element()).collect()
}

/// Denominator exponent, biased toward coarse dyadics.
fn denom_exp(rng: &mut ChaCha8Rng) -> u32 {
    rng.gen_range(0..=MAX_DENOM_EXP).min(rng.gen_range(0..=MAX_DENOM_EXP))
}

fn dyadic(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let k = denom_exp(rng);
    let scale = 1i64 << k;
    let n = rng.gen_range(lo * scale..=hi * scale);
    Rational::new(BigInt::from(n), BigInt::from(scale))
}

fn position(rng: &mut ChaCha8Rng, alpha: &Ordinal) -> Option<Ordinal> {
    let range = match alpha.as_finite() {
        Some(0) => return None,
        Some(n) => n.min(POSITION_RANGE),
        None => POSITION_RANGE,
    };
    let n = rng.gen_range(0..range);
    Some(ordinal::enumerate(alpha, n).expect("index below the ordinal"))
}

fn seq_parts(ty: &OrderType) -> Option<(&OrderType, &Ordinal)> {
    match ty {
        OrderType::IPow(alpha) => Some((&OrderType::Interval, alpha)),
        OrderType::Pow(x, alpha) => Some((x, alpha)),
        _ => None,
    }
}

fn tuple_range(ty: &OrderType) -> u64 {
    match ty {
        OrderType::Prod(p) => p.len().unwrap_or(TUPLE_RANGE),
        _ => 0,
    }
}

fn factor_of(ty: &OrderType, key: &Key) -> OrderType {
    match (ty, key) {
        (OrderType::Prod(p), Key::Index(i)) => p.factor(*i).expect("index in range").into_owned(),
        _ => seq_parts(ty).expect("sequence type").0.clone(),
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Pos(Ordinal),
    Index(u64),
}

fn draw_key(rng: &mut ChaCha8Rng, ty: &OrderType) -> Option<Key> {
    match ty {
        OrderType::Prod(_) => {
            let n = tuple_range(ty);
            (n > 0).then(|| Key::Index(rng.gen_range(0..n)))
        }
        _ => position(rng, seq_parts(ty)?.1).map(Key::Pos),
    }
}

fn assemble(ty: &OrderType, mut entries: Vec<(Key, Element)>) -> Element {
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    entries.dedup_by(|later, earlier| later.0 == earlier.0);
    let raw = match ty {
        OrderType::Prod(_) => Element::Tuple(
            entries
                .into_iter()
                .map(|(k, v)| match k {
                    Key::Index(i) => (i, v),
                    Key::Pos(_) => unreachable!(),
                })
                .collect(),
        ),
        _ => Element::Seq(
            entries
                .into_iter()
                .map(|(k, v)| match k {
                    Key::Pos(p) => (p, v),
                    Key::Index(_) => unreachable!(),
                })
                .collect(),
        ),
    };
    element::canonicalize(ty, &raw).expect("sampled element is valid")
}

fn draw_entries(rng: &mut ChaCha8Rng, ty: &OrderType, count: usize) -> Vec<(Key, Element)> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let Some(key) = draw_key(rng, ty) else { break };
        let factor = factor_of(ty, &key);
        out.push((key, draw(rng, &factor)));
    }
    out
}

fn entries_of(e: &Element) -> Vec<(Key, Element)> {
    match e {
        Element::Seq(s) => s.iter().map(|(p, v)| (Key::Pos(p.clone()), v.clone())).collect(),
        Element::Tuple(s) => s.iter().map(|(i, v)| (Key::Index(*i), v.clone())).collect(),
        _ => Vec::new(),
    }
}

fn draw(rng: &mut ChaCha8Rng, ty: &OrderType) -> Element {
    match ty {
        OrderType::Unit => Element::Point,
        OrderType::Real => Element::Num(dyadic(rng, -4, 4)),
        OrderType::Interval => Element::Num(dyadic(rng, 0, 1)),
        OrderType::Dup(x) => Element::dup(draw(rng, x), rng.gen()),
        OrderType::Replace(r) => {
            let x = if !r.overrides.is_empty() && rng.gen_ratio(1, 3) {
                r.overrides[rng.gen_range(0..r.overrides.len())].0.clone()
            } else {
                draw(rng, &r.base)
            };
            let fiber = r.fiber(&x).expect("sampled base element is valid").clone();
            let y = draw(rng, &fiber);
            Element::pair(x, y)
        }
        OrderType::Prod(_) | OrderType::IPow(_) | OrderType::Pow(..) => {
            let size = rng.gen_range(0..=MAX_SUPPORT);
            let entries = draw_entries(rng, ty, size);
            assemble(ty, entries)
        }
    }
}

fn perturb(rng: &mut ChaCha8Rng, ty: &OrderType, a: &Element) -> Element {
    if rng.gen_ratio(1, 6) {
        return a.clone();
    }
    match (ty, a) {
        (OrderType::Unit, _) => Element::Point,
        (OrderType::Real | OrderType::Interval, _) => draw(rng, ty),
        (OrderType::Dup(x), Element::Dup(inner, _)) => {
            let inner = if rng.gen_bool(0.5) { (**inner).clone() } else { perturb(rng, x, inner) };
            Element::dup(inner, rng.gen())
        }
        (OrderType::Replace(r), Element::Pair(x, y)) => {
            if rng.gen_bool(0.5) {
                let fiber = r.fiber(x).expect("valid base element");
                Element::pair((**x).clone(), perturb(rng, fiber, y))
            } else {
                let x = perturb(rng, &r.base, x);
                let fiber = r.fiber(&x).expect("valid base element").clone();
                Element::pair(x, draw(rng, &fiber))
            }
        }
        (OrderType::Prod(_) | OrderType::IPow(_) | OrderType::Pow(..), _) => {
            // keep a prefix of the support, then change one entry and maybe add more
            let mut entries = entries_of(a);
            let keep = rng.gen_range(0..=entries.len());
            entries.truncate(keep);
            if let Some((key, value)) = entries.pop() {
                if rng.gen_bool(0.5) {
                    let factor = factor_of(ty, &key);
                    let v = perturb(rng, &factor, &value);
                    entries.push((key, v));
                } else {
                    entries.push((key, value));
                }
            }
            let extra = rng.gen_range(0..=2);
            entries.extend(draw_entries(rng, ty, extra));
            entries.truncate(MAX_SUPPORT);
            assemble(ty, entries)
        }
        _ => draw(rng, ty),
    }
}
