//! Exact rational helpers.
//!
//! Every value that takes part in a comparison is a [`Rational`]; floating
//! point never appears on those paths. The wire format is always `"p/q"`,
//! including integers (`"0/1"`, `"1/1"`), so consumers need a single parser.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^-k`.
pub fn pow2_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn render(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::Syntax { pos: 0, msg: format!("{msg} in rational {text:?}") };
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad("bad numerator"))?;
    let q: BigInt = q.parse().map_err(|_| bad("bad denominator"))?;
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(p, q))
}

pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

pub fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    // a power of two has a single set bit
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

/// Exponent `k` with denominator `2^k`, if the value is dyadic.
pub fn dyadic_exponent(r: &Rational) -> Option<u64> {
    is_dyadic(r).then(|| r.denom().trailing_zeros().unwrap_or(0))
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Eventually periodic base-`base` expansion of `r ∈ [0, 1)`: returns
/// `(prefix, cycle)` digits with a nonempty cycle. Terminating expansions
/// end in the cycle `[0]`.
pub fn expand(r: &Rational, base: u32) -> (Vec<u8>, Vec<u8>) {
    assert!(!r.is_negative() && *r < Rational::one(), "expand needs a value in [0, 1)");
    if let (Some(k), Some(w)) = (dyadic_exponent(r), [2, 4, 8, 16].iter().position(|&b| b == base)) {
        // terminating: the numerator's digits, left-padded to the denominator's width
        let w = w as u64 + 1;
        let width = k.div_ceil(w);
        let n = r.numer() << (width * w - k) as usize;
        let (_, mut digits) = n.to_radix_be(base);
        if n.is_zero() {
            digits.clear();
        }
        let mut prefix = vec![0u8; width as usize - digits.len()];
        prefix.append(&mut digits);
        return (prefix, vec![0]);
    }
    let base = BigInt::from(base);
    let denom = r.denom().clone();
    let mut rem = r.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits: Vec<u8> = Vec::new();
    loop {
        if let Some(&pos) = seen.get(&rem) {
            let cycle = digits.split_off(pos);
            return (digits, cycle);
        }
        seen.insert(rem.clone(), digits.len());
        let scaled = &rem * &base;
        let (d, m) = scaled.div_rem(&denom);
        digits.push(u8::try_from(d).expect("digit below base"));
        rem = m;
    }
}

/// Inverse of [`expand`]: the value `0.prefix (cycle)*` in base `base`.
pub fn from_expansion(prefix: &[u8], cycle: &[u8], base: u32) -> Rational {
    let b = BigInt::from(base);
    let mut pre = BigInt::zero();
    for &d in prefix {
        pre = pre * &b + BigInt::from(d);
    }
    let mut cyc = BigInt::zero();
    for &d in cycle {
        cyc = cyc * &b + BigInt::from(d);
    }
    let scale = num_traits::pow(b.clone(), prefix.len());
    let period = num_traits::pow(b, cycle.len()) - BigInt::one();
    let head = Rational::new(pre, scale.clone());
    if period.is_zero() {
        return head;
    }
    head + Rational::new(cyc, period * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse() {
        assert_eq!(render(&frac(2, 4)), "1/2");
        assert_eq!(render(&int(0)), "0/1");
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse(" -6/8 ").unwrap(), frac(-3, 4));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn dyadic() {
        assert!(is_dyadic(&frac(3, 8)));
        assert!(is_dyadic(&int(0)));
        assert!(!is_dyadic(&frac(1, 3)));
        assert_eq!(dyadic_exponent(&frac(3, 8)), Some(3));
    }

    #[test]
    fn expansions() {
        assert_eq!(expand(&frac(1, 4), 4), (vec![1], vec![0]));
        assert_eq!(expand(&frac(1, 3), 2), (vec![], vec![0, 1]));
        assert_eq!(expand(&int(0), 3), (vec![], vec![0]));
        for (p, q) in [(1, 7), (5, 12), (3, 8), (0, 1), (63, 64)] {
            for base in [2, 3, 4] {
                let r = frac(p, q);
                let (pre, cyc) = expand(&r, base);
                assert_eq!(from_expansion(&pre, &cyc, base), r);
            }
        }
        // 0.(3) in base 4 is 1
        assert_eq!(from_expansion(&[], &[3], 4), int(1));
    }
}
