//! Finite chains of sets, the order they induce on the ground set, and its
//! linear extensions.
//!
//! For a chain `{H_x}` put `a ≺ b` when some `H_x` contains `a` but not `b`.
//! Every linear extension of `≺` makes each `H_x` an initial segment.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A chain of labelled subsets of a finite ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    ground: Vec<String>,
    sets: Vec<(String, BTreeSet<usize>)>,
}

impl Family {
    pub fn new<S: AsRef<str>>(ground: &[S], sets: &[(S, Vec<S>)]) -> Result<Self> {
        let ground: Vec<String> = ground.iter().map(|g| g.as_ref().to_string()).collect();
        let mut pos = HashMap::new();
        for (i, g) in ground.iter().enumerate() {
            if pos.insert(g.as_str(), i).is_some() {
                return Err(Error::InvalidFamily(format!("atom {g:?} listed twice")));
            }
        }
        let mut out: Vec<(String, BTreeSet<usize>)> = Vec::with_capacity(sets.len());
        for (label, members) in sets {
            let label = label.as_ref().to_string();
            if out.iter().any(|(l, _)| *l == label) {
                return Err(Error::InvalidFamily(format!("label {label:?} used twice")));
            }
            let mut set = BTreeSet::new();
            for m in members {
                let m = m.as_ref();
                let &i = pos.get(m).ok_or_else(|| Error::InvalidFamily(format!("{m:?} is not in the ground set")))?;
                set.insert(i);
            }
            out.push((label, set));
        }
        for (i, (la, a)) in out.iter().enumerate() {
            for (lb, b) in &out[i + 1..] {
                if !a.is_subset(b) && !b.is_subset(a) {
                    return Err(Error::NotAChain(format!("{la:?} and {lb:?} are incomparable")));
                }
            }
        }
        Ok(Family { ground, sets: out })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn sets(&self) -> &[(String, BTreeSet<usize>)] {
        &self.sets
    }

    /// Parses `{"ground": [...], "sets": [{"label": ..., "members": [...]}]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidFamily(m.to_string());
        let strings = |v: &Value, what: &str| -> Result<Vec<String>> {
            v.as_array()
                .ok_or_else(|| bad(&format!("{what} must be an array")))?
                .iter()
                .map(|s| match s {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(bad(&format!("{what} entries must be strings"))),
                })
                .collect()
        };
        let ground = strings(v.get("ground").ok_or_else(|| bad("missing \"ground\""))?, "ground")?;
        let mut sets = Vec::new();
        for s in v.get("sets").and_then(Value::as_array).ok_or_else(|| bad("missing \"sets\" array"))? {
            let label = match s.get("label") {
                Some(Value::String(l)) => l.clone(),
                Some(other) => other.to_string(),
                None => return Err(bad("set without a label")),
            };
            let members = strings(s.get("members").ok_or_else(|| bad("set without members"))?, "members")?;
            sets.push((label, members));
        }
        Family::new(&ground, &sets)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ground": self.ground,
            "sets": self.sets.iter().map(|(l, s)| json!({
                "label": l,
                "members": s.iter().map(|&i| &self.ground[i]).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    /// A random chain: prefixes of a random permutation of the ground set.
    pub fn random(rng: &mut impl Rng, max_sets: usize, max_atoms: usize) -> Self {
        let n = rng.gen_range(1..=max_atoms);
        let ground: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let k = rng.gen_range(1..=max_sets);
        let mut sets = Vec::with_capacity(k);
        for j in 0..k {
            let len = rng.gen_range(0..=n);
            let members: BTreeSet<usize> = perm[..len].iter().copied().collect();
            sets.push((format!("H{j}"), members));
        }
        Family { ground, sets }
    }
}

/// A relation on `0..n` as an adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    m: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, m: vec![false; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.m[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.m[a * self.n + b] = true;
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| (0..self.n).map(move |b| (a, b))).filter(|&(a, b)| self.holds(a, b)).collect()
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|a| !self.holds(a, a))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| (0..n).all(|b| !self.holds(a, b) || (0..n).all(|c| !self.holds(b, c) || self.holds(a, c))))
    }

    pub fn is_strict_partial_order(&self) -> bool {
        self.is_irreflexive() && self.is_transitive()
    }

    /// Every related pair appears in `order` in the same direction.
    pub fn respected_by(&self, order: &[usize]) -> bool {
        let mut rank = vec![usize::MAX; self.n];
        for (k, &a) in order.iter().enumerate() {
            rank[a] = k;
        }
        self.pairs().into_iter().all(|(a, b)| rank[a] < rank[b])
    }
}

/// `a ≺ b` iff some set contains `a` and not `b`.
pub fn strict_order_from_family(fam: &Family) -> Relation {
    let n = fam.ground.len();
    let mut rel = Relation::empty(n);
    for (_, set) in &fam.sets {
        for &a in set {
            for b in (0..n).filter(|b| !set.contains(b)) {
                rel.insert(a, b);
            }
        }
    }
    rel
}

/// Topological order of `rel`, breaking ties by index.
pub fn linear_extension(rel: &Relation) -> Result<Vec<usize>> {
    let n = rel.size();
    let mut indegree = vec![0usize; n];
    for (_, b) in rel.pairs() {
        indegree[b] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&a| indegree[a] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(a) = ready.pop_first() {
        out.push(a);
        for (b, d) in indegree.iter_mut().enumerate() {
            if rel.holds(a, b) {
                *d -= 1;
                if *d == 0 {
                    ready.insert(b);
                }
            }
        }
    }
    if out.len() < n {
        let stuck = (0..n).find(|a| !out.contains(a)).expect("some atom is left");
        return Err(Error::Cycle(format!("atom {stuck}")));
    }
    Ok(out)
}

/// `b` precedes `a ∈ H` in the order but lies outside `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub label: String,
    pub member: String,
    pub outsider: String,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({ "set": self.label, "member": self.member, "outsider": self.outsider })
    }
}

/// Checks that every set is an initial segment of `order`.
pub fn verify_initial_segments(fam: &Family, order: &[usize]) -> Result<Vec<Violation>> {
    let n = fam.ground.len();
    let mut seen = vec![false; n];
    for &a in order {
        if a >= n || std::mem::replace(&mut seen[a], true) {
            return Err(Error::InvalidFamily(format!("order is not a permutation of the {n} atoms")));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidFamily(format!("order is not a permutation of the {n} atoms")));
    }
    let mut out = Vec::new();
    for (label, set) in &fam.sets {
        for (k, &a) in order.iter().enumerate() {
            if !set.contains(&a) {
                continue;
            }
            for &b in &order[..k] {
                if !set.contains(&b) {
                    out.push(Violation {
                        label: label.clone(),
                        member: fam.ground[a].clone(),
                        outsider: fam.ground[b].clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Resolves atom names to indices.
pub fn order_from_names<S: AsRef<str>>(fam: &Family, names: &[S]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|s| {
            let s = s.as_ref();
            fam.ground.iter().position(|g| g == s).ok_or_else(|| Error::InvalidFamily(format!("{s:?} is not an atom")))
        })
        .collect()
}
