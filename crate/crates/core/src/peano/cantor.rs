//! The surjection from the ternary Cantor set onto the Hilbert cube.
//!
//! Ternary digit `i` (each 0 or 2) is bit `m` of coordinate `j`, where
//! `(j, m)` is the unpairing of `i`. Coordinate `j` is the binary number
//! formed by its bits.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hilbert::HPoint;
use crate::ordinal::{pair, unpair};
use crate::rational::{self, Rational};

/// A point of the Cantor set with finitely many nonzero ternary digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CantorPoint {
    digits: Vec<u8>,
}

impl CantorPoint {
    pub fn new(mut digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d != 0 && d != 2) {
            return Err(Error::BadCantorDigit(d));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(CantorPoint { digits })
    }

    /// Digits up to the last nonzero one.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The point whose digit `i` is `2·bits[i]`.
    pub fn from_bits(bits: &[u8]) -> Self {
        CantorPoint::new(bits.iter().map(|b| 2 * b).collect()).expect("bits are 0 or 1")
    }

    /// Digit `i` divided by 2.
    pub fn bits(&self) -> Vec<u8> {
        self.digits.iter().map(|d| d / 2).collect()
    }

    /// The point as a number in `[0,1]`.
    pub fn value(&self) -> Rational {
        rational::from_expansion(&self.digits, &[0], 3)
    }
}

/// Coordinates of the image of `c` determined by its first `depth` digits.
/// With `depth ≥ digits().len()` the result is the exact image.
pub fn cantor_to_hcube(c: &CantorPoint, depth: usize) -> HPoint {
    let mut coords: Vec<(u64, u64)> = Vec::new(); // (coordinate, bit position)
    for (i, &d) in c.digits.iter().take(depth).enumerate() {
        if d == 2 {
            coords.push(unpair(i as u64));
        }
    }
    coords.sort_unstable();
    let mut entries: Vec<(u64, Rational)> = Vec::new();
    for (j, m) in coords {
        let bit = Rational::new(BigInt::one(), BigInt::one() << (m as usize + 1));
        match entries.last_mut() {
            Some((k, v)) if *k == j => *v += bit,
            _ => entries.push((j, bit)),
        }
    }
    HPoint::new(entries).expect("finite bit sums stay below 1")
}

/// Number of leading bits of coordinate `j` fixed by the first `depth`
/// digits: the coordinate is known to within `2^-bits`.
pub fn known_bits(j: u64, depth: usize) -> u64 {
    (0..).take_while(|&m| pair(j, m).is_some_and(|i| i < depth as u64)).count() as u64
}

/// The eventually-zero Cantor point mapping to `p`.
pub fn hcube_preimage(p: &HPoint) -> Result<CantorPoint> {
    let mut set: Vec<u64> = Vec::new();
    for (j, v) in p.support() {
        if *v == Rational::one() {
            return Err(Error::NotTerminating(rational::render(v)));
        }
        let k = rational::dyadic_exponent(v).ok_or_else(|| Error::NotDyadic(rational::render(v)))?;
        // bits of v·2^k, most significant first
        let scaled = (v * Rational::from_integer(BigInt::one() << k as usize)).to_integer();
        for m in 0..k {
            if ((&scaled >> (k - 1 - m) as usize) & BigInt::one()) != BigInt::zero() {
                set.push(pair(*j, m).ok_or_else(|| Error::IndexOverflow(format!("coordinate {j} bit {m}")))?);
            }
        }
    }
    let len = set.iter().max().map_or(0, |m| m + 1);
    let mut digits = vec![0u8; len as usize];
    for i in set {
        digits[i as usize] = 2;
    }
    CantorPoint::new(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_and_first_digit() {
        assert_eq!(cantor_to_hcube(&CantorPoint::default(), 100), HPoint::zero());
        let c = CantorPoint::new(vec![2, 0, 0]).unwrap();
        let p = cantor_to_hcube(&c, 10);
        assert_eq!(p, HPoint::new([(0, frac(1, 2))]).unwrap());
        assert_eq!(hcube_preimage(&p).unwrap(), c);
        assert_eq!(c.value(), frac(2, 3));
    }

    #[test]
    fn bad_digits() {
        assert_eq!(CantorPoint::new(vec![0, 1]), Err(Error::BadCantorDigit(1)));
        assert!(hcube_preimage(&HPoint::new([(2, frac(1, 3))]).unwrap()).is_err());
        assert!(hcube_preimage(&HPoint::new([(2, frac(1, 1))]).unwrap()).is_err());
    }

    #[test]
    fn truncation_depth() {
        let c = CantorPoint::new(vec![2, 2, 2, 2, 2, 2]).unwrap();
        let full = cantor_to_hcube(&c, usize::MAX);
        for j in 0..3 {
            let part = cantor_to_hcube(&c, 3);
            let gap = full.get(j) - part.get(j);
            assert!(gap >= Rational::zero());
            assert!(gap < Rational::new(BigInt::one(), BigInt::one() << known_bits(j, 3) as usize));
        }
    }

    #[test]
    fn roundtrip_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let n = rng.gen_range(0..6);
            let entries = (0..n).map(|_| {
                let k = rng.gen_range(1..8u32);
                (rng.gen_range(0..12u64), Rational::new(rng.gen_range(0..1i64 << k).into(), (1i64 << k).into()))
            });
            let mut seen = std::collections::BTreeMap::new();
            for (j, v) in entries {
                seen.insert(j, v);
            }
            let p = HPoint::new(seen).unwrap();
            let c = hcube_preimage(&p).unwrap();
            assert_eq!(cantor_to_hcube(&c, c.digits().len()), p);
        }
    }
}
