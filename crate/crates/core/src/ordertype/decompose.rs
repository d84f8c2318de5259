//! Rewriting `X^α` as a lexicographic product of smaller powers.
//!
//! `[0, α)` is cut into consecutive blocks. A successor `β+1` splits into
//! `[0, β)` and `{β}`; a limit `δ + ω^γ` into `[0, δ)` followed by blocks
//! tiling `[δ, δ + ω^γ)`, each of which is a smaller power of `X`.

use super::element::{self, Element};
use super::expr::{power_block, OrderType, Tail};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// `(X, α)` for `X^α` or `I^α`.
fn pow_parts(ty: &OrderType) -> Result<(&OrderType, &Ordinal)> {
    match ty {
        OrderType::IPow(alpha) => Ok((&OrderType::Interval, alpha)),
        OrderType::Pow(x, alpha) => Ok((x, alpha)),
        other => Err(Error::Unsupported(format!("{other} is not a power"))),
    }
}

/// How positions of the tail below `ω^γ` fall into blocks.
enum Blocks {
    /// Every block is a single position.
    Points,
    /// Blocks of length `ω^γ'`.
    Uniform(Ordinal),
    /// Block `k` is `[ω^γ[k-1], ω^γ[k])`.
    Ladder(Ordinal),
}

struct Layout {
    /// Length of the leading block, if any.
    lead: Option<Ordinal>,
    /// Start of the tail.
    offset: Ordinal,
    tail: TailLayout,
}

enum TailLayout {
    /// A single final position.
    Last,
    Blocks(Blocks),
    /// Finite power: positions are factor indices.
    Finite,
}

fn layout(alpha: &Ordinal) -> Result<Layout> {
    if alpha.is_zero() {
        return Err(Error::ZeroExponent);
    }
    if alpha.is_finite() {
        return Ok(Layout { lead: None, offset: Ordinal::zero(), tail: TailLayout::Finite });
    }
    if let Some(beta) = alpha.predecessor() {
        return Ok(Layout { lead: Some(beta.clone()), offset: beta, tail: TailLayout::Last });
    }
    let (last, head) = alpha.terms().split_last().expect("nonzero");
    let mut delta = Ordinal::from_terms(head.iter().map(|t| (t.exponent.clone(), t.coefficient)));
    if last.coefficient > 1 {
        delta = delta.add(&Ordinal::monomial(last.exponent.clone(), last.coefficient - 1));
    }
    let gamma = last.exponent.clone();
    let blocks = if gamma == Ordinal::one() {
        Blocks::Points
    } else if let Some(g) = gamma.predecessor() {
        Blocks::Uniform(Ordinal::omega_pow(g))
    } else {
        Blocks::Ladder(gamma)
    };
    let lead = (!delta.is_zero()).then(|| delta.clone());
    Ok(Layout { lead, offset: delta, tail: TailLayout::Blocks(blocks) })
}

/// Equivalent product of smaller powers for `X^α` (or `I^α`).
pub fn pow_decompose(ty: &OrderType) -> Result<OrderType> {
    let (x, alpha) = pow_parts(ty)?;
    let lay = layout(alpha)?;
    let mut factors: Vec<OrderType> = lay.lead.iter().map(|d| power_block(x, d.clone())).collect();
    let tail = match lay.tail {
        TailLayout::Finite => {
            let n = alpha.as_finite().expect("finite");
            factors = vec![x.clone(); n as usize];
            Tail::None
        }
        TailLayout::Last => {
            factors.push(x.clone());
            Tail::None
        }
        TailLayout::Blocks(Blocks::Points) => Tail::Uniform(x.clone()),
        TailLayout::Blocks(Blocks::Uniform(len)) => Tail::Uniform(power_block(x, len)),
        TailLayout::Blocks(Blocks::Ladder(gamma)) => Tail::Ladder { base: x.clone(), exponent: gamma },
    };
    Ok(OrderType::prod(factors, tail))
}

/// Block index and local position of a tail position `q`.
fn locate(blocks: &Blocks, q: &Ordinal) -> (u64, Ordinal) {
    match blocks {
        Blocks::Points => (q.as_finite().expect("tail position below w"), Ordinal::zero()),
        Blocks::Uniform(len) => {
            // q = len*k + r with r < len
            let exp = &len.terms()[0].exponent;
            match q.terms().first() {
                Some(t) if t.exponent == *exp => {
                    let rest = Ordinal::from_terms(q.terms()[1..].iter().map(|t| (t.exponent.clone(), t.coefficient)));
                    (t.coefficient, rest)
                }
                _ => (0, q.clone()),
            }
        }
        Blocks::Ladder(gamma) => {
            let mut start = Ordinal::zero();
            let mut k = 0;
            loop {
                let end = Ordinal::omega_pow(gamma.fundamental(k).expect("limit exponent"));
                if *q < end {
                    let local = start.sub_left(q).expect("q is past the block start");
                    return (k, local);
                }
                start = end;
                k += 1;
            }
        }
    }
}

/// Element of the block `X^β` holding the given local entries; a block of
/// length one is `X` itself.
fn block_element(x: &OrderType, beta: &Ordinal, entries: Vec<(Ordinal, Element)>) -> Result<Element> {
    if *beta == Ordinal::one() {
        return match entries.into_iter().next() {
            Some((_, v)) => Ok(v),
            None => element::default(x),
        };
    }
    Ok(Element::Seq(entries))
}

/// Sends an element of `ty = X^α` to the matching element of
/// `pow_decompose(ty)`; the map preserves the order.
pub fn translate(ty: &OrderType, e: &Element) -> Result<Element> {
    let (x, alpha) = pow_parts(ty)?;
    let e = element::canonicalize(ty, e)?;
    let Element::Seq(support) = e else { unreachable!("canonical power element") };
    let lay = layout(alpha)?;
    let target = pow_decompose(ty)?;
    let lead_count = u64::from(lay.lead.is_some());

    // (factor index, local position, value), in increasing index order
    let mut placed: Vec<(u64, Ordinal, Element)> = Vec::with_capacity(support.len());
    for (p, v) in support {
        if let TailLayout::Finite = lay.tail {
            placed.push((p.as_finite().expect("finite power"), Ordinal::zero(), v));
            continue;
        }
        if p < lay.offset {
            placed.push((0, p, v));
            continue;
        }
        let q = lay.offset.sub_left(&p).expect("position past the offset");
        match &lay.tail {
            TailLayout::Last => placed.push((lead_count, Ordinal::zero(), v)),
            TailLayout::Blocks(blocks) => {
                let (k, local) = locate(blocks, &q);
                placed.push((lead_count + k, local, v));
            }
            TailLayout::Finite => unreachable!(),
        }
    }

    let OrderType::Prod(prod) = &target else { unreachable!() };
    let mut entries: Vec<(u64, Element)> = Vec::new();
    let mut it = placed.into_iter().peekable();
    while let Some((idx, local, v)) = it.next() {
        let mut group = vec![(local, v)];
        while let Some((_, local, v)) = it.next_if(|n| n.0 == idx) {
            group.push((local, v));
        }
        let factor = prod.factor(idx).ok_or_else(|| Error::Unsupported(format!("factor {idx} of {target}")))?;
        let value = match factor.as_ref() {
            OrderType::Pow(_, beta) => block_element(x, beta, group)?,
            _ => block_element(x, &Ordinal::one(), group)?,
        };
        entries.push((idx, value));
    }
    element::canonicalize(&target, &Element::Tuple(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordertype::sample::Sampler;

    fn t(s: &str) -> OrderType {
        s.parse().unwrap()
    }

    #[test]
    fn shapes() {
        assert_eq!(pow_decompose(&t("Pow(R, 2)")).unwrap(), t("Prod(R, R)"));
        assert_eq!(pow_decompose(&t("Pow(R, w)")).unwrap(), t("Prod(default=R)"));
        assert_eq!(pow_decompose(&t("Pow(R, w+1)")).unwrap(), t("Prod(Pow(R, w), R)"));
        assert_eq!(pow_decompose(&t("I^(w*2)")).unwrap(), t("Prod(Pow(I, w); default=I)"));
        assert_eq!(pow_decompose(&t("Pow(I, w^2)")).unwrap(), t("Prod(default=Pow(I, w))"));
        assert_eq!(
            pow_decompose(&t("Pow(I, w^(w))")).unwrap(),
            OrderType::prod(vec![], Tail::Ladder { base: OrderType::Interval, exponent: Ordinal::omega() })
        );
        assert_eq!(pow_decompose(&t("Pow(I, 0)")), Err(Error::ZeroExponent));
        assert!(pow_decompose(&t("Dup(I)")).is_err());
    }

    #[test]
    fn translation_examples() {
        let ty = t("Pow(I, w+1)");
        let e = element::parse_json(r#"{"kind":"seq","support":[["3","1/2"],["w","1/4"]]}"#).unwrap();
        let got = translate(&ty, &e).unwrap();
        let want = element::parse_json(
            r#"{"kind":"tuple","entries":[[0,{"kind":"seq","support":[["3","1/2"]]}],[1,"1/4"]]}"#,
        )
        .unwrap();
        assert_eq!(got, want);

        let ty = t("Pow(I, w^(w))");
        let e = element::parse_json(r#"{"kind":"seq","support":[["w^2+3","1/2"]]}"#).unwrap();
        // w^2+3 lies in block [w^2, w^3), at local position 3
        let want = element::parse_json(r#"{"kind":"tuple","entries":[[2,{"kind":"seq","support":[["3","1/2"]]}]]}"#)
            .unwrap();
        assert_eq!(translate(&ty, &e).unwrap(), want);
    }

    #[test]
    fn translation_preserves_order() {
        for s in [
            "Pow(I, 3)",
            "Pow(Dup(1), w)",
            "Pow(I, w+1)",
            "I^(w*2+1)",
            "Pow(R, w^2+w)",
            "Pow(I, w^3*2)",
            "Pow(I, w^(w))",
            "Pow(Dup(I), w^(w+1)+w^2)",
        ] {
            let ty = t(s);
            let target = pow_decompose(&ty).unwrap();
            let mut sampler = Sampler::new(&ty, 17);
            for _ in 0..1000 {
                let (a, b) = sampler.pair();
                let direct = element::compare(&ty, &a, &b).unwrap();
                let ta = translate(&ty, &a).unwrap();
                let tb = translate(&ty, &b).unwrap();
                assert_eq!(element::compare(&target, &ta, &tb).unwrap(), direct, "{s}");
            }
        }
    }
}
