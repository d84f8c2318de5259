use std::cmp::Ordering;

use anyhow::{bail, Context};
use ordrep_core::hilbert::{self, HPoint};
use ordrep_core::ordertype::{self, Element, OrderType, Sampler};
use ordrep_core::peano::{self, ReplaceRep};
use ordrep_core::product::ProductRep;
use ordrep_core::rational::{self, Rational};
use ordrep_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::Engine;

const SAMPLING_TRIES: usize = 64;

/// `count` pairs `a < b` drawn from `ty`.
pub(crate) fn ordered_pairs(ty: &OrderType, seed: u64, count: usize) -> anyhow::Result<Vec<(Element, Element)>> {
    let mut s = Sampler::new(ty, seed);
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count {
        let (a, b) = s.pair();
        match ordertype::compare(ty, &a, &b)? {
            Ordering::Less => out.push((a, b)),
            Ordering::Greater => out.push((b, a)),
            Ordering::Equal => {
                misses += 1;
                if misses > SAMPLING_TRIES * (count + 1) {
                    bail!("could not sample {count} distinct pairs from {ty}");
                }
            }
        }
    }
    Ok(out)
}

/// Dyadic parameters `k / 2^m` in [0,1].
pub(crate) fn dyadic_params(rng: &mut ChaCha8Rng, count: usize, bits: u32) -> Vec<Rational> {
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=bits);
            Rational::new(rng.gen_range(0..=1u64 << m).into(), (1u64 << m).into())
        })
        .collect()
}

struct Tally {
    evaluations: u64,
    witnesses: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { evaluations: 0, witnesses: 0, failures: Vec::new() }
    }

    /// Records the comparison of `rep(a)` and `rep(b)` at one point.
    fn pointwise(&mut self, pair: usize, at: &str, c: Ordering) {
        self.evaluations += 1;
        if c == Ordering::Greater {
            self.failures.push(format!("pair {pair}: rep(a) > rep(b) at {at}"));
        }
    }

    fn witness(&mut self, pair: usize, at: &str, c: Ordering) {
        self.evaluations += 1;
        if c == Ordering::Less {
            self.witnesses += 1;
        } else {
            self.failures.push(format!("pair {pair}: no strict inequality at witness {at}"));
        }
    }
}

pub(crate) fn check_order(
    expr: &str,
    engine: Engine,
    seed: u64,
    pairs: usize,
    points: usize,
) -> anyhow::Result<(Value, Vec<String>)> {
    let ty: OrderType = expr.parse().with_context(|| format!("parsing {expr:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let tally = match engine {
        Engine::Hilbert => hilbert_engine(&ty, seed, pairs, points, &mut rng)?,
        Engine::Peano => peano_engine(&ty, seed, pairs, points, &mut rng)?,
        Engine::Product => product_engine(&ty, seed, pairs, points, &mut rng)?,
    };
    let body = json!({
        "expr": ty.to_string(),
        "engine": engine.name(),
        "counts": {
            "pairs": pairs,
            "points": points,
            "evaluations": tally.evaluations,
            "witnesses": tally.witnesses,
        },
    });
    Ok((body, tally.failures))
}

fn hilbert_engine(ty: &OrderType, seed: u64, pairs: usize, points: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<Tally> {
    let OrderType::IPow(alpha) = ty else {
        return Err(Error::EngineMismatch(format!("the hilbert engine needs I^α, not {ty}")).into());
    };
    let cube: Vec<HPoint> = ordertype::sample(ty, rng.gen(), points)
        .iter()
        .map(|e| hilbert::hpoint_from_element(alpha, e))
        .collect::<Result<_, _>>()?;
    let mut tally = Tally::new();
    for (i, (a, b)) in ordered_pairs(ty, seed, pairs)?.iter().enumerate() {
        let pa = hilbert::hpoint_from_element(alpha, a)?;
        let pb = hilbert::hpoint_from_element(alpha, b)?;
        let chi = |x: &HPoint, p: &HPoint| -> anyhow::Result<bool> { Ok(hilbert::h_less(alpha, p, x)? == Ordering::Less) };
        for p in &cube {
            tally.pointwise(i, &p.to_string(), chi(&pa, p)?.cmp(&chi(&pb, p)?));
        }
        tally.witness(i, &pa.to_string(), chi(&pa, &pa)?.cmp(&chi(&pb, &pa)?));
    }
    Ok(tally)
}

fn peano_engine(ty: &OrderType, seed: u64, pairs: usize, points: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<Tally> {
    let splice = match ty {
        OrderType::Replace(_) => Some(ReplaceRep::new(ty)?),
        OrderType::Dup(_) => None,
        other => return Err(Error::EngineMismatch(format!("the peano engine needs Replace or Dup, not {other}")).into()),
    };
    let eval = |e: &Element, t: &Rational| -> anyhow::Result<Rational> {
        Ok(match &splice {
            Some(r) => r.eval(e, t)?,
            None => peano::rep_eval(ty, e, t)?,
        })
    };
    let params = dyadic_params(rng, points, 10);
    let mut tally = Tally::new();
    for (i, (a, b)) in ordered_pairs(ty, seed, pairs)?.iter().enumerate() {
        for t in &params {
            tally.pointwise(i, &rational::render(t), eval(a, t)?.cmp(&eval(b, t)?));
        }
        let w = peano::rep_witness(ty, a, b)?;
        tally.witness(i, &rational::render(&w), eval(a, &w)?.cmp(&eval(b, &w)?));
    }
    Ok(tally)
}

fn product_engine(ty: &OrderType, seed: u64, pairs: usize, points: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<Tally> {
    let mut rep = ProductRep::new(ty)?;
    let params = dyadic_params(rng, points, 12);
    let mut tally = Tally::new();
    for (i, (a, b)) in ordered_pairs(ty, seed, pairs)?.iter().enumerate() {
        let n = rep.stable_depth(a, b)? + 2;
        let w = rep.witness(a, b)?;
        for (k, t) in params.iter().chain([&w]).enumerate() {
            let va = rep.eval_lazy(a, t, n)?.0;
            let vb = rep.eval_lazy(b, t, n)?.0;
            if k == params.len() {
                tally.witness(i, &rational::render(t), va.cmp(&vb));
            } else {
                tally.pointwise(i, &rational::render(t), va.cmp(&vb));
            }
        }
    }
    Ok(tally)
}
