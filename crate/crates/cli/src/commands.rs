use anyhow::{bail, Context};
use ordrep_core::extend::{self, order_from_names, Family};
use ordrep_core::hilbert::{self, stabilization_depth, HPoint};
use ordrep_core::ordertype::{self, Element, OrderType};
use ordrep_core::peano::{self, ReplaceRep};
use ordrep_core::product::{tail_bound, ProductRep};
use ordrep_core::rank::{self, Base};
use ordrep_core::rational::{self, Rational};
use ordrep_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::EvalTarget;

fn parse_type(expr: &str) -> anyhow::Result<OrderType> {
    expr.parse().with_context(|| format!("parsing {expr:?}"))
}

/// Element JSON, or a bare rational for a point of `R` or `I`.
fn parse_element(ty: &OrderType, text: &str) -> anyhow::Result<Element> {
    let e = match rational::parse(text) {
        Ok(v) => Element::Num(v),
        Err(_) => ordertype::parse_json(text).with_context(|| format!("parsing element {text}"))?,
    };
    Ok(ordertype::canonicalize(ty, &e)?)
}

fn parse_rational(text: &str) -> anyhow::Result<Rational> {
    rational::parse(text).with_context(|| format!("parsing rational {text:?}"))
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

/// Points of the cube near `x`: `x` itself, `x` with one coordinate moved,
/// and unrelated samples.
fn probe_points(ty: &OrderType, x: &HPoint, count: usize, seed: u64) -> anyhow::Result<Vec<HPoint>> {
    let OrderType::IPow(alpha) = ty else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![x.clone()];
    let coords: Vec<u64> = x.support().iter().map(|(i, _)| *i).collect();
    let limit = alpha.as_finite().unwrap_or(u64::MAX).min(8);
    while out.len() < count {
        if rng.gen_bool(0.25) {
            let e = ordertype::Sampler::new(ty, rng.gen()).element();
            out.push(hilbert::hpoint_from_element(alpha, &e)?);
            continue;
        }
        let i = match coords.is_empty() || rng.gen_bool(0.3) {
            true => rng.gen_range(0..limit),
            false => coords[rng.gen_range(0..coords.len())],
        };
        let v = Rational::new(rng.gen_range(0..=8).into(), 8.into());
        let entries = x.support().iter().filter(|(j, _)| *j != i).cloned().chain([(i, v)]);
        out.push(HPoint::new(entries)?);
    }
    out.truncate(count);
    Ok(out)
}

pub(crate) fn certify(expr: &str, element: Option<&str>, depth: u64, points: usize, seed: u64) -> anyhow::Result<(Value, Vec<String>)> {
    let ty = parse_type(expr)?;
    let OrderType::IPow(alpha) = &ty else {
        return Err(Error::EngineMismatch(format!("certificates need I^α, not {ty}")).into());
    };
    let x = match element {
        Some(text) => parse_element(&ty, text)?,
        None => ordertype::default(&ty)?,
    };
    let (f, g) = hilbert::ambiguity_certificate(alpha, &x, depth)?;
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for p in probe_points(&ty, &f.point, points, seed)? {
        let chi = hilbert::chi_eval(alpha, &x, &p)?;
        let n0 = stabilization_depth(alpha, &x, &p)?;
        let (fm, gm) = (f.member(&p)?, g.member(&p)?);
        let stable = depth >= n0;
        if stable && fm != chi {
            failures.push(format!("F_sigma membership of {p} is {} at depth {depth}, expected {}", bit(fm), bit(chi)));
        }
        if stable && p != f.point && gm != chi {
            failures.push(format!("G_delta membership of {p} is {} at depth {depth}, expected {}", bit(gm), bit(chi)));
        }
        rows.push(json!({
            "point": p.to_json(),
            "chi": bit(chi),
            "stabilization_depth": n0,
            "F_sigma": bit(fm),
            "G_delta": bit(gm),
            "stable": stable,
        }));
    }
    let body = json!({
        "expr": ty.to_string(),
        "element": ordertype::to_json(&x),
        "depth": depth,
        "certificate": { "F_sigma": f.to_json(), "G_delta": g.to_json() },
        "table": rows,
    });
    Ok((body, failures))
}

pub(crate) fn product_eval(expr: &str, element: &str, param: &str, depth: u64, registry: bool) -> anyhow::Result<Value> {
    let ty = parse_type(expr)?;
    let mut rep = ProductRep::new(&ty)?;
    let e = parse_element(&ty, element)?;
    let t = parse_rational(param)?;
    let (value, bound) = rep.eval_lazy(&e, &t, depth)?;
    let mut body = json!({
        "expr": ty.to_string(),
        "element": ordertype::to_json(&e),
        "param": rational::render(&t),
        "depth": depth,
        "value": rational::render(&value),
        "error_bound": rational::render(&bound),
        "tail_bound": rational::render(&tail_bound(depth.max(1))),
    });
    if registry {
        body["registry"] = rep.to_json();
    }
    Ok(body)
}

fn read_family(arg: &str) -> anyhow::Result<Family> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    let v: Value = serde_json::from_str(&text).context("family is not valid JSON")?;
    Ok(Family::from_json(&v)?)
}

pub(crate) fn extend(family: &str, order: Option<&str>) -> anyhow::Result<(Value, Vec<String>)> {
    let fam = read_family(family)?;
    let rel = extend::strict_order_from_family(&fam);
    let order = match order {
        Some(names) => {
            let names: Vec<&str> = names.split(',').map(str::trim).collect();
            order_from_names(&fam, &names)?
        }
        None => extend::linear_extension(&rel)?,
    };
    let name = |i: usize| fam.ground()[i].clone();
    let violations = extend::verify_initial_segments(&fam, &order)?;
    let mut failures: Vec<String> = violations
        .iter()
        .map(|v| format!("{} is not an initial segment: {} precedes {}", v.label, v.outsider, v.member))
        .collect();
    if !rel.respected_by(&order) {
        failures.push("order does not extend the relation".into());
    }
    let body = json!({
        "family": fam.to_json(),
        "relation": rel.pairs().iter().map(|&(a, b)| json!([name(a), name(b)])).collect::<Vec<_>>(),
        "order": order.iter().map(|&i| name(i)).collect::<Vec<_>>(),
        "violations": violations.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
    });
    Ok((body, failures))
}

pub(crate) fn rank(expr: &str, base: &str, omega: bool, samples: usize, points: usize, seed: u64) -> anyhow::Result<(Value, Vec<String>)> {
    let ty = parse_type(expr)?;
    let base = Base::parse(base)?;
    let membership = rank::s_member_check(&ty, &base, omega);
    let mut failures = Vec::new();
    let mut body = json!({
        "expr": ty.to_string(),
        "base": base.to_string(),
        "omega": omega,
        "membership": membership.to_json(),
    });
    match rank::rank_bound(&ty, &base) {
        Ok(d) => {
            if let Err(e) = rank::replay(&d) {
                failures.push(format!("derivation does not replay: {e}"));
            }
            let stage_zero = membership.stage.as_ref().is_some_and(|s| s.is_zero()) && !membership.via_omega;
            if d.bound.is_zero() != stage_zero {
                failures.push("rank 0 and stage 0 disagree".into());
            }
            body["rank"] = json!(d.bound.to_string());
            body["derivation"] = d.to_json();
        }
        Err(e @ Error::NoRankRule(_)) => {
            body["rank"] = Value::Null;
            body["rank_error"] = json!(e.to_string());
        }
        Err(e) => return Err(e.into()),
    }
    if samples > 0 {
        let mut gaps = 0;
        for k in 0..samples as u64 {
            let sample = rank::skeleton_sample(&ty, seed.wrapping_add(k), points)?;
            let d = rank::rank_decompose(&ty, &sample)?;
            gaps += d.gaps.len();
            failures.extend(d.violations.iter().map(|v| format!("sample {k}: {v}")));
        }
        body["lemma"] = json!({ "samples": samples, "max_points": points, "gaps_checked": gaps });
    }
    Ok((body, failures))
}

pub(crate) fn eval(target: &EvalTarget) -> anyhow::Result<Value> {
    Ok(match target {
        EvalTarget::Curve { t } => {
            let t = parse_rational(t)?;
            let (x, y) = peano::hilbert_eval(&t)?;
            json!({ "t": rational::render(&t), "x": rational::render(&x), "y": rational::render(&y) })
        }
        EvalTarget::Fiber { c, count } => {
            let c = parse_rational(c)?;
            let pts = peano::fiber_points(&c, *count)?;
            json!({
                "c": rational::render(&c),
                "points": pts.iter().map(|p| json!({
                    "t": rational::render(&p.t),
                    "local": rational::render(&p.local),
                })).collect::<Vec<_>>(),
            })
        }
        EvalTarget::Rep { expr, element, params } => {
            let ty = parse_type(expr)?;
            let e = parse_element(&ty, element)?;
            let values = params
                .iter()
                .map(|p| {
                    let t = parse_rational(p)?;
                    let v = peano::rep_eval(&ty, &e, &t)?;
                    Ok(json!({ "t": rational::render(&t), "value": rational::render(&v) }))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            json!({ "expr": ty.to_string(), "element": ordertype::to_json(&e), "values": values })
        }
        EvalTarget::Table { expr, elements } => {
            let ty = parse_type(expr)?;
            let OrderType::Replace(r) = &ty else {
                bail!("fiber tables need a Replace expression, not {ty}");
            };
            let xs = elements.iter().map(|e| parse_element(&r.base, e)).collect::<anyhow::Result<Vec<_>>>()?;
            let mut table = ReplaceRep::new(&ty)?.fiber_table(&xs)?;
            table["expr"] = json!(ty.to_string());
            table
        }
    })
}
