//! Countable ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a list of terms `ω^e · c` with strictly decreasing
//! exponents and positive coefficients; the empty list is zero. Because the
//! list is kept in normal form, the derived lexicographic ordering on the
//! term list coincides with the ordinal ordering.
//!
//! [`enumerate`] and [`index`] realize a fixed computable bijection
//! `ℕ → [0, α)` and its inverse. The scheme recurses on the normal form:
//!
//! * finite `α` and `α = ω`: the identity;
//! * `α = ω^γ·c + ρ` with `0 < ρ` finite: the first `ρ` naturals go to the
//!   top block, the rest to `[0, ω^γ·c)`;
//! * `α = ω^γ·c + ρ` with `ρ` infinite: even naturals enumerate
//!   `[0, ω^γ·c)`, odd naturals enumerate `ω^γ·c + [0, ρ)`;
//! * `α = ω^γ·c`, `c > 1`: residues mod `c` pick the block;
//! * `α = ω^m`, finite `m`: coefficient tuples in `ℕ^m` via iterated pairing;
//! * `α = ω^γ`, infinite `γ`: finite term lists whose exponents are
//!   enumerated recursively through `[0, γ)`, encoded as sequences of
//!   `(gap, coefficient - 1)` pairs.
//!
//! Natural-number indices are `u64`; encodings that would overflow report
//! [`Error::IndexOverflow`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single `ω^exponent · coefficient` term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        Self { terms: vec![Term { exponent: Self::zero(), coefficient: n }] }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `ω^e`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Self::monomial(exponent, 1)
    }

    /// `ω^e · c`; zero when `c = 0`.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Self::zero();
        }
        Self { terms: vec![Term { exponent, coefficient }] }
    }

    /// Builds an ordinal from arbitrary `(exponent, coefficient)` pairs read left
    /// to right as an ordinal sum; the result is normalized.
    pub fn from_terms<I: IntoIterator<Item = (Ordinal, u64)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| acc.add(&Self::monomial(e, c)))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// `β` with `β + 1 = self`, for successor ordinals.
    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a finite term");
        last.coefficient -= 1;
        if last.coefficient == 0 {
            terms.pop();
        }
        Some(Self { terms })
    }

    /// Ordinal addition (not commutative): `1 + ω = ω`, `ω + 1 > ω`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if terms.last().is_some_and(|t| t.exponent == lead.exponent) {
            let merged = terms.last_mut().expect("checked above");
            merged.coefficient = merged
                .coefficient
                .checked_add(lead.coefficient)
                .expect("ordinal coefficient overflow");
            rest.next();
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// The unique `q` with `self + q = target`; requires `self ≤ target`.
    pub fn sub_left(&self, target: &Ordinal) -> Option<Ordinal> {
        if self > target {
            return None;
        }
        let common = self
            .terms
            .iter()
            .zip(&target.terms)
            .take_while(|(a, b)| a == b)
            .count();
        let mut rest: Vec<Term> = target.terms[common..].to_vec();
        if let (Some(a), Some(b)) = (self.terms.get(common), rest.first_mut()) {
            if a.exponent == b.exponent {
                b.coefficient -= a.coefficient;
            }
        }
        Some(Ordinal { terms: rest })
    }

    /// Splits `ω^γ·c + ρ` into `(γ, c, ρ)`.
    fn split_leading(&self) -> Option<(&Ordinal, u64, Ordinal)> {
        let (lead, rest) = self.terms.split_first()?;
        Some((&lead.exponent, lead.coefficient, Ordinal { terms: rest.to_vec() }))
    }

    /// Elements `γ[0] < γ[1] < …` of the standard fundamental sequence of a
    /// limit ordinal.
    pub fn fundamental(&self, n: u64) -> Option<Ordinal> {
        if !self.is_limit() {
            return None;
        }
        let mut head = self.terms.clone();
        let last = head.pop().expect("limit is nonzero");
        let mut prefix = Ordinal { terms: head };
        if last.coefficient > 1 {
            prefix = prefix.add(&Ordinal::monomial(last.exponent.clone(), last.coefficient - 1));
        }
        let tail = match last.exponent.predecessor() {
            Some(p) => Ordinal::monomial(p, n + 1),
            None => Ordinal::omega_pow(last.exponent.fundamental(n)?),
        };
        Some(prefix.add(&tail))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match t.exponent.as_finite() {
                Some(0) => write!(f, "{}", t.coefficient)?,
                Some(1) => f.write_str("w")?,
                Some(n) => write!(f, "w^{n}")?,
                None => write!(f, "w^({})", t.exponent)?,
            }
            if t.coefficient > 1 && !t.exponent.is_zero() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parses `ord := term ("+" term)*`, `term := int | "w" ["^" expo] ["*" int]`,
/// `expo := "(" ord ")" | int | "w"`. Whitespace is ignored and non-normal
/// sums are normalized.
pub fn parse(text: &str) -> Result<Ordinal> {
    let mut p = OrdParser::new(text, 0);
    let ord = p.ordinal()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(ord)
}

/// Recursive-descent parser shared with the order-type DSL, which embeds
/// ordinals.
pub(crate) struct OrdParser<'a> {
    src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> OrdParser<'a> {
    pub(crate) fn new(text: &'a str, pos: usize) -> Self {
        Self { src: text.as_bytes(), pos }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "integer too large".into() })
    }

    pub(crate) fn ordinal(&mut self) -> Result<Ordinal> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    /// A single term with no trailing `+`; used after `I^` in the DSL.
    pub(crate) fn atom(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => self.exponent(),
            _ => Ok(Ordinal::nat(self.int()?)),
        }
    }

    fn term(&mut self) -> Result<Ordinal> {
        if self.peek() != Some(b'w') {
            return Ok(Ordinal::nat(self.int()?));
        }
        self.pos += 1;
        let exponent = if self.eat(b'^') { self.exponent()? } else { Ordinal::one() };
        let coefficient = if self.eat(b'*') { self.int()? } else { 1 };
        Ok(Ordinal::monomial(exponent, coefficient))
    }

    fn exponent(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.ordinal()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            _ => Ok(Ordinal::nat(self.int()?)),
        }
    }
}

pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

// ---------------------------------------------------------------------------
// pairing

pub(crate) fn pair(a: u64, b: u64) -> Option<u64> {
    let s = a as u128 + b as u128;
    let z = s * (s + 1) / 2 + b as u128;
    u64::try_from(z).ok()
}

pub(crate) fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let w = ((8 * z + 1).isqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let b = z - t;
    let a = w - b;
    (a as u64, b as u64)
}

fn decode_tuple(mut n: u64, len: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(len as usize);
    for _ in 1..len {
        let (a, rest) = unpair(n);
        out.push(a);
        n = rest;
    }
    out.push(n);
    out
}

fn encode_tuple(values: &[u64]) -> Option<u64> {
    let (last, init) = values.split_last()?;
    init.iter().rev().try_fold(*last, |acc, &v| pair(v, acc))
}

fn decode_seq(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        let (head, rest) = unpair(n - 1);
        out.push(head);
        n = rest;
    }
    out
}

fn encode_seq(values: &[u64]) -> Option<u64> {
    values
        .iter()
        .rev()
        .try_fold(0u64, |acc, &v| pair(v, acc)?.checked_add(1))
}

// ---------------------------------------------------------------------------
// the bijection ℕ → [0, α)

/// `φ_α(n)`: the `n`-th ordinal below `alpha` under the fixed enumeration.
pub fn enumerate(alpha: &Ordinal, n: u64) -> Result<Ordinal> {
    if let Some(k) = alpha.as_finite() {
        return if n < k {
            Ok(Ordinal::nat(n))
        } else {
            Err(Error::IndexOutOfRange { ordinal: alpha.to_string(), index: n })
        };
    }
    let (gamma, c, rest) = alpha.split_leading().expect("infinite ordinal is nonzero");
    if !rest.is_zero() {
        let head = Ordinal::monomial(gamma.clone(), c);
        return match rest.as_finite() {
            Some(k) if n < k => Ok(head.add(&Ordinal::nat(n))),
            Some(k) => enumerate(&head, n - k),
            None if n.is_multiple_of(2) => enumerate(&head, n / 2),
            None => Ok(head.add(&enumerate(&rest, n / 2)?)),
        };
    }
    if c > 1 {
        let block = Ordinal::monomial(gamma.clone(), n % c);
        return Ok(block.add(&enumerate_power(gamma, n / c)?));
    }
    enumerate_power(gamma, n)
}

fn enumerate_power(gamma: &Ordinal, n: u64) -> Result<Ordinal> {
    if let Some(m) = gamma.as_finite() {
        if m == 1 {
            return Ok(Ordinal::nat(n));
        }
        let coeffs = decode_tuple(n, m);
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (Ordinal::nat(m - 1 - i as u64), c));
        return Ok(Ordinal::from_terms(terms));
    }
    let mut terms = Vec::new();
    let mut next = 0u64;
    for code in decode_seq(n) {
        let (gap, coeff_minus_one) = unpair(code);
        let position = next + gap;
        terms.push((enumerate(gamma, position)?, coeff_minus_one + 1));
        next = position + 1;
    }
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(Ordinal::from_terms(terms))
}

/// `φ_α⁻¹(β)`: the natural `n` with `enumerate(alpha, n) = beta`.
pub fn index(alpha: &Ordinal, beta: &Ordinal) -> Result<u64> {
    if beta >= alpha {
        return Err(Error::NotBelow { value: beta.to_string(), bound: alpha.to_string() });
    }
    index_below(alpha, beta)
}

fn overflow(beta: &Ordinal) -> Error {
    Error::IndexOverflow(beta.to_string())
}

fn index_below(alpha: &Ordinal, beta: &Ordinal) -> Result<u64> {
    if alpha.is_finite() {
        return Ok(beta.as_finite().expect("below a finite ordinal"));
    }
    let (gamma, c, rest) = alpha.split_leading().expect("infinite ordinal is nonzero");
    if !rest.is_zero() {
        let head = Ordinal::monomial(gamma.clone(), c);
        let upper = if *beta >= head { head.sub_left(beta) } else { None };
        return match (rest.as_finite(), upper) {
            (Some(_), Some(j)) => Ok(j.as_finite().expect("finite remainder")),
            (Some(k), None) => index_below(&head, beta)?.checked_add(k).ok_or_else(|| overflow(beta)),
            (None, None) => index_below(&head, beta)?.checked_mul(2).ok_or_else(|| overflow(beta)),
            (None, Some(local)) => index_below(&rest, &local)?
                .checked_mul(2)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(|| overflow(beta)),
        };
    }
    if c > 1 {
        let (block, local) = match beta.terms.first() {
            Some(t) if t.exponent == *gamma => {
                (t.coefficient, Ordinal { terms: beta.terms[1..].to_vec() })
            }
            _ => (0, beta.clone()),
        };
        return index_power(gamma, &local)?
            .checked_mul(c)
            .and_then(|v| v.checked_add(block))
            .ok_or_else(|| overflow(beta));
    }
    index_power(gamma, beta)
}

fn index_power(gamma: &Ordinal, beta: &Ordinal) -> Result<u64> {
    if let Some(m) = gamma.as_finite() {
        if m == 1 {
            return Ok(beta.as_finite().expect("below ω"));
        }
        let mut coeffs = vec![0u64; m as usize];
        for t in &beta.terms {
            let e = t.exponent.as_finite().expect("exponent below a finite bound");
            coeffs[(m - 1 - e) as usize] = t.coefficient;
        }
        return encode_tuple(&coeffs).ok_or_else(|| overflow(beta));
    }
    let mut entries = beta
        .terms
        .iter()
        .map(|t| Ok((index_below(gamma, &t.exponent)?, t.coefficient)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_unstable();
    let mut codes = Vec::with_capacity(entries.len());
    let mut next = 0u64;
    for (position, coeff) in entries {
        codes.push(pair(position - next, coeff - 1).ok_or_else(|| overflow(beta))?);
        next = position + 1;
    }
    encode_seq(&codes).ok_or_else(|| overflow(beta))
}
