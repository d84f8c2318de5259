//! Acceptance campaign: one PASS/FAIL line per criterion, nonzero exit on
//! any failure.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::Signed;
use ordrep_core::extend::{self, order_from_names, Family};
use ordrep_core::hilbert::{self, stabilization_depth, HPoint};
use ordrep_core::ordertype::{self, Element, OrderType, Sampler};
use ordrep_core::ordinal::{self, Ordinal};
use ordrep_core::peano::{self, curve, ReplaceRep};
use ordrep_core::product::{tail_bound, ProductRep};
use ordrep_core::rank;
use ordrep_core::rational::{self, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn t(s: &str) -> OrderType {
    s.parse().expect("valid expression")
}

fn o(s: &str) -> Ordinal {
    s.parse().expect("valid ordinal")
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn dyadic(rng: &mut ChaCha8Rng, bits: u32) -> Rational {
    let m = rng.gen_range(1..=bits);
    Rational::new(rng.gen_range(0..=1u64 << m).into(), (1u64 << m).into())
}

fn total_order_laws() -> Outcome {
    let shapes = ["I", "I^(w)", "I^(w^2+3)", "Dup(I)", "Replace(R, default=I^(w))", "Pow(2, w)"];
    let mut checked = 0;
    for (k, shape) in shapes.iter().enumerate() {
        let ty = t(shape);
        let mut s = Sampler::new(&ty, 100 + k as u64);
        for i in 0..10_000 {
            let (a, b) = s.pair();
            let c = match i % 3 {
                0 => s.element(),
                1 => a.clone(),
                _ => s.pair().0,
            };
            let xs = [&a, &b, &c];
            let mut m = [[Ordering::Equal; 3]; 3];
            for (p, x) in xs.iter().enumerate() {
                for (q, y) in xs.iter().enumerate() {
                    m[p][q] = e(ordertype::compare(&ty, x, y))?;
                }
            }
            for p in 0..3 {
                ensure!(m[p][p] == Ordering::Equal, "{shape}: irreflexivity fails");
                for q in 0..3 {
                    ensure!(m[p][q] == m[q][p].reverse(), "{shape}: antisymmetry fails");
                    if m[p][q] == Ordering::Equal {
                        let (cp, cq) = (e(ordertype::canonicalize(&ty, xs[p]))?, e(ordertype::canonicalize(&ty, xs[q]))?);
                        ensure!(cp == cq, "{shape}: distinct elements compare equal");
                    }
                    for r in 0..3 {
                        if m[p][q] != Ordering::Greater && m[q][r] != Ordering::Greater {
                            let want = if m[p][q] == Ordering::Less || m[q][r] == Ordering::Less { Ordering::Less } else { Ordering::Equal };
                            ensure!(m[p][r] == want, "{shape}: transitivity fails");
                        }
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} triples over {} shapes", shapes.len()))
}

fn ipow_order_preservation() -> Outcome {
    let mut witnesses = 0;
    for (k, alpha) in ["w", "w*2", "w^2", "w^2+3"].iter().enumerate() {
        let a = o(alpha);
        let ty = OrderType::IPow(a.clone());
        let cube: Vec<HPoint> = ordertype::sample(&ty, 900 + k as u64, 100)
            .iter()
            .map(|x| hilbert::hpoint_from_element(&a, x))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let mut s = Sampler::new(&ty, 700 + k as u64);
        let mut pairs = 0;
        while pairs < 1000 {
            let (x, y) = s.pair();
            let (x, y) = match e(ordertype::compare(&ty, &x, &y))? {
                Ordering::Less => (x, y),
                Ordering::Greater => (y, x),
                Ordering::Equal => continue,
            };
            pairs += 1;
            let (px, py) = (e(hilbert::hpoint_from_element(&a, &x))?, e(hilbert::hpoint_from_element(&a, &y))?);
            let chi = |h: &HPoint, p: &HPoint| -> Result<bool, String> { Ok(e(hilbert::h_less(&a, p, h))? == Ordering::Less) };
            for p in &cube {
                ensure!(chi(&px, p)? <= chi(&py, p)?, "I^({alpha}): chi_x > chi_y at {p}");
            }
            ensure!(!chi(&px, &px)? && chi(&py, &px)?, "I^({alpha}): no strict witness at point(x)");
            ensure!(!e(hilbert::chi_eval(&a, &x, &px))? && e(hilbert::chi_eval(&a, &y, &px))?, "I^({alpha}): chi_eval disagrees");
            witnesses += 1;
        }
    }
    Ok(format!("{witnesses} pairs, 100 cube points each, all witnessed"))
}

fn certificate_stabilization() -> Outcome {
    let mut checked = 0;
    let mut off_diagonal = 0;
    for (k, alpha) in ["w", "w*2", "w^2", "w^2+3", "5"].iter().enumerate() {
        let a = o(alpha);
        let ty = OrderType::IPow(a.clone());
        let mut s = Sampler::new(&ty, 300 + k as u64);
        for _ in 0..200 {
            let (x, y) = s.pair();
            let p = e(hilbert::hpoint_from_element(&a, &y))?;
            let n0 = e(stabilization_depth(&a, &x, &p))?;
            let chi = e(hilbert::chi_eval(&a, &x, &p))?;
            let mut prev = false;
            for n in 1..=n0 + 1 {
                let (f, g) = e(hilbert::ambiguity_certificate(&a, &x, n))?;
                let fm = e(f.member(&p))?;
                ensure!(!prev || fm, "I^({alpha}): F_sigma membership drops at depth {n}");
                prev = fm;
                if n >= n0 {
                    ensure!(fm == chi, "I^({alpha}): F_sigma membership at depth {n} differs from chi");
                    let gm = e(g.member(&p))?;
                    if p == f.point {
                        ensure!(!gm, "I^({alpha}): G_delta contains the point itself");
                    } else {
                        ensure!(gm == chi, "I^({alpha}): G_delta membership is not the complement off the diagonal");
                    }
                }
            }
            if p != e(hilbert::hpoint_from_element(&a, &x))? {
                off_diagonal += 1;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (x, p) pairs, {off_diagonal} off the diagonal"))
}

fn enumeration_bijection() -> Outcome {
    let alphas = ["7", "w", "w+5", "w*2", "w^2", "w^2+3", "w^3*2+w", "w^(w)", "w^(w^2+1)*3"];
    let mut count = 0;
    for alpha in alphas {
        let a = o(alpha);
        let limit = a.as_finite().unwrap_or(10_000);
        let mut seen = HashSet::new();
        for n in 0..limit {
            let b = e(ordinal::enumerate(&a, n))?;
            ensure!(b < a, "{alpha}: enumerate({n}) = {b} is not below");
            ensure!(e(ordinal::index(&a, &b))? == n, "{alpha}: index does not invert enumerate at {n}");
            ensure!(seen.insert(b), "{alpha}: repeated value at {n}");
            count += 1;
        }
    }
    Ok(format!("{count} values over {} ordinals", alphas.len()))
}

fn peano_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..1000 {
        let d = rng.gen_range(1..=16u32);
        let digits: Vec<u8> = (0..d).map(|_| rng.gen_range(0..4)).collect();
        let num = digits.iter().fold(0u64, |acc, &x| acc * 4 + u64::from(x));
        let tt = Rational::new(num.into(), 4u64.pow(d).into());
        let (x, y) = e(peano::hilbert_eval(&tt))?;
        for k in 1..=digits.len() {
            let (x0, y0, side) = curve::cell(&digits[..k]);
            ensure!(x0 <= x && x <= &x0 + &side && y0 <= y && y <= &y0 + &side, "t = {}: value leaves cell at depth {k}", rational::render(&tt));
        }
    }
    let mut cells = HashSet::new();
    for k in 0..4096u64 {
        let digits: Vec<u8> = (0..6).rev().map(|i| ((k >> (2 * i)) & 3) as u8).collect();
        let (x0, y0, side) = curve::cell(&digits);
        let tt = Rational::new((4 * k + 2).into(), 4u64.pow(7).into());
        let (x, y) = e(peano::hilbert_eval(&tt))?;
        ensure!(x0 <= x && x <= &x0 + &side && y0 <= y && y <= &y0 + &side, "depth-6 cell {k} misses its parameter");
        cells.insert(((x0 * rational::int(64)).to_integer(), (y0 * rational::int(64)).to_integer()));
    }
    ensure!(cells.len() == 4096, "only {} of 4096 depth-6 cells hit", cells.len());
    for _ in 0..100 {
        let c = dyadic(&mut rng, 10);
        let pts = e(peano::fiber_points(&c, 2))?;
        ensure!(pts[0].t != pts[1].t, "fiber over {} repeats a parameter", rational::render(&c));
        for p in pts {
            ensure!(e(peano::hilbert_eval(&p.t))?.0 == c, "fiber point off the fiber over {}", rational::render(&c));
        }
    }
    let ty = t("Replace(I, default=I)");
    let rep = e(ReplaceRep::new(&ty))?;
    let mut s = Sampler::new(&ty, 56);
    let mut strict = 0;
    while strict < 50 {
        let (a, b) = s.pair();
        let want = e(ordertype::compare(&ty, &a, &b))?;
        if want == Ordering::Equal {
            continue;
        }
        let Element::Pair(xa, _) = &a else { return Err("pairs expected".into()) };
        let Element::Num(ca) = xa.as_ref() else { return Err("numeric base expected".into()) };
        let mut params: Vec<Rational> = (0..25).map(|_| dyadic(&mut rng, 10)).collect();
        for k in 0..25u64 {
            let local = Rational::new(k.into(), 32.into());
            params.push(e(peano::fiber::fiber_point(ca, &local))?.t);
        }
        for p in &params {
            let c = e(rep.eval(&a, p))?.cmp(&e(rep.eval(&b, p))?);
            ensure!(c == want || c == Ordering::Equal, "Replace(I, I): table disagrees with elem_compare at {}", rational::render(p));
        }
        let (lo, hi) = if want == Ordering::Less { (&a, &b) } else { (&b, &a) };
        let w = e(rep.witness(lo, hi))?;
        ensure!(e(rep.eval(lo, &w))? < e(rep.eval(hi, &w))?, "Replace(I, I): witness is not strict");
        strict += 1;
    }
    Ok(format!("1000 nested-cell checks, 4096 cells, 100 fibers, 50x50 table with {strict} strict witnesses"))
}

fn product_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let types = ["Pow(2, w)", "Prod(I; default=I)", "Prod(I, Dup(I), R; default=Dup(I))"];
    for i in 0..1000 {
        let ty = t(types[i % types.len()]);
        let mut rep = e(ProductRep::new(&ty))?;
        let x = Sampler::new(&ty, rng.gen()).element();
        let n = rng.gen_range(1..=12);
        let tt = dyadic(&mut rng, 14);
        let (v, _) = e(rep.eval_lazy(&x, &tt, n))?;
        let (deep, _) = e(rep.eval_lazy(&x, &tt, n + 5))?;
        ensure!((deep - v).abs() <= tail_bound(n), "{ty}: tail exceeds the bound at level {n}");
    }
    let ty = t("Pow(2, w)");
    let mut rep = e(ProductRep::new(&ty))?;
    let mut s = Sampler::new(&ty, 67);
    let params: Vec<Rational> = (0..32u64).map(|k| Rational::new((2 * k + 1).into(), 64.into())).collect();
    for _ in 0..200 {
        let (a, b) = s.pair();
        let want = e(ordertype::compare(&ty, &a, &b))?;
        let n = e(rep.stable_depth(&a, &b))? + 2;
        let mut got = Ordering::Equal;
        for p in &params {
            let c = e(rep.eval_lazy(&a, p, n))?.0.cmp(&e(rep.eval_lazy(&b, p, n))?.0);
            ensure!(c == want || c == Ordering::Equal, "pointwise order contradicts elem_compare");
        }
        if want != Ordering::Equal {
            let w = e(rep.witness(&a, &b))?;
            got = e(rep.eval_lazy(&a, &w, n))?.0.cmp(&e(rep.eval_lazy(&b, &w, n))?.0);
        }
        ensure!(got == want, "stabilized comparison differs from elem_compare");
    }
    let ty = t("Prod(I, I; default=I)");
    let mut reg = e(ProductRep::new(&ty))?;
    let mut ids = Vec::new();
    for _ in 0..100 {
        let parent = if ids.is_empty() || rng.gen_bool(0.4) { None } else { Some(ids[rng.gen_range(0..ids.len())]) };
        let level = parent.map_or(1, |p| reg.datum(p).level + 1);
        if level > 3 {
            continue;
        }
        let x = Element::Num(dyadic(&mut rng, 6));
        ids.push(e(reg.register(parent, &x))?);
    }
    ids.sort_unstable();
    ids.dedup();
    for &i in &ids {
        let d = reg.datum(i);
        let outer = d.parent.map_or((rational::int(0), rational::int(1)), |p| reg.datum(p).slot.clone());
        ensure!(outer.0 <= d.cell.0 && d.cell.1 <= outer.1, "cell of node {i} leaves its parent carrier");
        ensure!(d.cell.0 < d.slot.0 && d.slot.1 < d.cell.1, "slot of node {i} is not inside its cell");
        for &j in &ids {
            let f = reg.datum(j);
            if i == j || d.parent != f.parent {
                continue;
            }
            let c = e(ordertype::compare(&OrderType::Interval, &d.element, &f.element))?;
            ensure!(c != Ordering::Equal, "duplicate sibling registration");
            if c == Ordering::Less {
                ensure!(d.slot.1 < f.slot.0, "siblings {i} and {j} overlap or are misordered");
            }
        }
    }
    Ok(format!("1000 tail checks, 200 ordered pairs, {} registrations", ids.len()))
}

fn finite_characterization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1000 {
        let fam = Family::random(&mut rng, 8, 10);
        let rel = extend::strict_order_from_family(&fam);
        ensure!(rel.is_strict_partial_order(), "relation is not a strict partial order");
        let order = e(extend::linear_extension(&rel))?;
        ensure!(rel.respected_by(&order), "linear extension breaks the relation");
        ensure!(e(extend::verify_initial_segments(&fam, &order))?.is_empty(), "a set is not an initial segment");
    }
    let fam = e(Family::new(&["a", "b"], &[("A", vec!["a"]), ("B", vec!["a", "b"])]))?;
    let reversed = e(order_from_names(&fam, &["b", "a"]))?;
    let v = e(extend::verify_initial_segments(&fam, &reversed))?;
    ensure!(!v.is_empty(), "reversed order reports no violation");
    Ok(format!("1000 families clean, counterexample reports {} violation(s)", v.len()))
}

fn rank_lemma() -> Outcome {
    let types = ["Replace(R, default=I^(w))", "Replace(I, default=I)", "Replace(I, default=Dup(I), \"1/2\" -> R)", "Dup(R)", "Replace(R, default=Replace(I, default=I))"];
    let mut gaps = 0;
    for k in 0..100u64 {
        let ty = t(types[k as usize % types.len()]);
        let sample = e(rank::skeleton_sample(&ty, 8800 + k, 50))?;
        ensure!(!sample.is_empty() && sample.len() <= 50, "sample size out of range");
        let d = e(rank::rank_decompose(&ty, &sample))?;
        ensure!(d.violations.is_empty(), "{ty}: {}", d.violations.join("; "));
        ensure!(d.labels.windows(2).all(|w| w[0] < w[1]), "labels are not increasing");
        gaps += d.gaps.len();
    }
    Ok(format!("100 samples, {gaps} gaps checked"))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 9] = [
        &["check-order", "I^(w^2)", "--engine", "hilbert", "--pairs", "200", "--seed", "7"],
        &["check-order", "Replace(R, default=I^(w))", "--engine", "peano", "--pairs", "50", "--seed", "8"],
        &["check-order", "Pow(2, w)", "--engine", "product", "--pairs", "100", "--seed", "9"],
        &["certify", "I^(w*2)", "--element", r#"{"kind":"seq","support":[["w","1/4"]]}"#, "--depth", "5", "--seed", "3"],
        &["product-eval", "Prod(I; default=I)", "--element", r#"{"kind":"tuple","entries":[[1,"1/3"]]}"#, "--param", "5/9", "--registry"],
        &["extend", r#"{"ground":["a","b","c"],"sets":[{"label":"A","members":["a"]},{"label":"B","members":["a","b"]}]}"#],
        &["rank", "Replace(R, default=Replace(R, default=I^(w)))", "--samples", "10", "--seed", "4"],
        &["eval", "fiber", "3/8", "--count", "5"],
        &["eval", "rep", "Replace(I, default=I)", "--element", r#"{"kind":"pair","base":"1/2","fiber":"1/3"}"#, "--param", "1/4", "--param", "3/7"],
    ];
    for args in runs {
        let run = || Command::new(env!("CARGO_BIN_EXE_ordrep")).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure!(!a.stdout.is_empty(), "{} printed nothing", args[0]);
        ensure!(a.status.code() == b.status.code(), "{}: exit status differs", args[0]);
        ensure!(a.stdout == b.stdout, "{}: output differs between runs", args[0]);
    }
    Ok(format!("{} commands, run twice each", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("total-order laws", Duration::from_secs(10), total_order_laws),
        ("I^alpha order preservation", Duration::from_secs(30), ipow_order_preservation),
        ("certificate stabilization", Duration::from_secs(30), certificate_stabilization),
        ("enumeration bijection", Duration::from_secs(5), enumeration_bijection),
        ("Peano engine", Duration::from_secs(60), peano_engine),
        ("product engine", Duration::from_secs(30), product_engine),
        ("finite characterization", Duration::from_secs(5), finite_characterization),
        ("rank lemma", Duration::from_secs(5), rank_lemma),
        ("determinism", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *limit => Err(format!("{detail}; took {:.2} s, limit {} s", took.as_secs_f64(), limit.as_secs())),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({:.2} s)", k + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} ({:.2} s)", k + 1, took.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
