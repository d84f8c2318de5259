//! The Hilbert curve `P: [0,1] → [0,1]²`, evaluated exactly.
//!
//! Base-4 digits of `t` drive an eight-state automaton (the orientation of
//! the current cell). Digit `d` selects quadrant `Q(d)` of the cell in the
//! cell's own frame and contributes one binary digit to each coordinate. An
//! eventually periodic digit string gives eventually periodic coordinate
//! expansions, which are recovered exactly by cycle detection.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Orientation of a cell: optional transpose, then optional reflections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Frame {
    swap: bool,
    flip_x: bool,
    flip_y: bool,
}

impl Frame {
    pub(crate) const IDENTITY: Frame = Frame { swap: false, flip_x: false, flip_y: false };
    const TRANSPOSE: Frame = Frame { swap: true, flip_x: false, flip_y: false };
    const ANTI_TRANSPOSE: Frame = Frame { swap: true, flip_x: true, flip_y: true };

    /// Image of a quadrant bit pair.
    fn bits(self, (x, y): (u8, u8)) -> (u8, u8) {
        let (a, b) = if self.swap { (y, x) } else { (x, y) };
        (a ^ u8::from(self.flip_x), b ^ u8::from(self.flip_y))
    }

    /// `self ∘ inner`.
    fn then(self, inner: Frame) -> Frame {
        let (fx, fy) = if self.swap { (inner.flip_y, inner.flip_x) } else { (inner.flip_x, inner.flip_y) };
        Frame { swap: self.swap ^ inner.swap, flip_x: self.flip_x ^ fx, flip_y: self.flip_y ^ fy }
    }

    /// Global quadrant bits and next frame after digit `d`.
    pub(crate) fn step(self, d: u8) -> ((u8, u8), Frame) {
        let d = d as usize;
        (self.bits(QUADRANT[d]), self.then(SUB[d]))
    }

    /// The two digits whose global x-bit is `x`, in increasing order.
    pub(crate) fn digits_with_x(self, x: u8) -> [u8; 2] {
        let mut out = [0u8; 2];
        let mut k = 0;
        for d in 0..4u8 {
            if self.bits(QUADRANT[d as usize]).0 == x {
                out[k] = d;
                k += 1;
            }
        }
        out
    }
}

/// Lower-left, upper-left, upper-right, lower-right.
const QUADRANT: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 1), (1, 0)];
const SUB: [Frame; 4] = [Frame::TRANSPOSE, Frame::IDENTITY, Frame::IDENTITY, Frame::ANTI_TRANSPOSE];

/// Runs `step` over `prefix` then `cycle` repeated forever, returning the
/// output as `(prefix, cycle)`. The cycle is found once the frame seen at a
/// cycle boundary repeats.
pub(crate) fn run_periodic<I, O: Clone>(
    prefix: &[I],
    cycle: &[I],
    mut step: impl FnMut(Frame, &I) -> (O, Frame),
) -> (Vec<O>, Vec<O>) {
    assert!(!cycle.is_empty(), "periodic input needs a cycle");
    let mut frame = Frame::IDENTITY;
    let mut out = Vec::new();
    for item in prefix {
        let (o, f) = step(frame, item);
        out.push(o);
        frame = f;
    }
    let mut seen: Vec<(Frame, usize)> = Vec::new();
    loop {
        if let Some(&(_, start)) = seen.iter().find(|(f, _)| *f == frame) {
            let cyc = out.split_off(start);
            return (out, cyc);
        }
        seen.push((frame, out.len()));
        for item in cycle {
            let (o, f) = step(frame, item);
            out.push(o);
            frame = f;
        }
    }
}

/// A parameter in `[0,1]` as an eventually periodic base-4 digit string.
/// The canonical form of a rational never ends in repeated 3s, except for
/// `t = 1`, which is `0.333…`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Param {
    pub prefix: Vec<u8>,
    pub cycle: Vec<u8>,
}

impl Param {
    pub fn new(t: &Rational) -> Result<Self> {
        if t.is_negative() || *t > Rational::one() {
            return Err(Error::OutOfUnitInterval(rational::render(t)));
        }
        if t.is_one() {
            return Ok(Param { prefix: vec![], cycle: vec![3] });
        }
        let (prefix, cycle) = rational::expand(t, 4);
        Ok(Param { prefix, cycle })
    }

    pub fn value(&self) -> Rational {
        rational::from_expansion(&self.prefix, &self.cycle, 4)
    }

    /// First `k` digits.
    pub fn digits(&self, k: usize) -> Vec<u8> {
        let mut out: Vec<u8> = self.prefix.iter().copied().take(k).collect();
        while out.len() < k {
            let i = (out.len() - self.prefix.len()) % self.cycle.len();
            out.push(self.cycle[i]);
        }
        out
    }
}

/// Exact `P(t)` for a parameter in digit form.
pub fn eval_param(t: &Param) -> (Rational, Rational) {
    let (pre, cyc) = run_periodic(&t.prefix, &t.cycle, |frame, &d| frame.step(d));
    let split = |v: &[(u8, u8)], pick: fn(&(u8, u8)) -> u8| v.iter().map(pick).collect::<Vec<u8>>();
    let x = rational::from_expansion(&split(&pre, |b| b.0), &split(&cyc, |b| b.0), 2);
    let y = rational::from_expansion(&split(&pre, |b| b.1), &split(&cyc, |b| b.1), 2);
    (x, y)
}

/// Exact value of the Hilbert curve at `t ∈ [0,1]`.
pub fn hilbert_eval(t: &Rational) -> Result<(Rational, Rational)> {
    Ok(eval_param(&Param::new(t)?))
}

/// `P₁(t)`.
pub fn p1(t: &Rational) -> Result<Rational> {
    Ok(hilbert_eval(t)?.0)
}

/// Lower-left corner and side of the closed cell selected by `digits`.
pub fn cell(digits: &[u8]) -> (Rational, Rational, Rational) {
    let mut frame = Frame::IDENTITY;
    let mut x = Rational::from_integer(0.into());
    let mut y = x.clone();
    let mut side = Rational::one();
    for &d in digits {
        let ((bx, by), next) = frame.step(d);
        side /= rational::int(2);
        x += &side * rational::int(bx.into());
        y += &side * rational::int(by.into());
        frame = next;
    }
    (x, y, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    /// Integer cell of index `d` on a `2^k × 2^k` grid, by the usual
    /// rotate-and-reflect loop.
    fn d2xy(k: u32, mut d: u64) -> (u64, u64) {
        let n = 1u64 << k;
        let (mut x, mut y) = (0u64, 0u64);
        let mut s = 1u64;
        while s < n {
            let rx = 1 & (d / 2);
            let ry = 1 & (d ^ rx);
            if ry == 0 {
                if rx == 1 {
                    x = s - 1 - x;
                    y = s - 1 - y;
                }
                std::mem::swap(&mut x, &mut y);
            }
            x += s * rx;
            y += s * ry;
            d /= 4;
            s *= 2;
        }
        (x, y)
    }

    fn in_cell(p: &(Rational, Rational), c: &(Rational, Rational, Rational)) -> bool {
        let (x0, y0, s) = c;
        p.0 >= *x0 && p.0 <= x0 + s && p.1 >= *y0 && p.1 <= y0 + s
    }

    #[test]
    fn endpoints() {
        assert_eq!(hilbert_eval(&int(0)).unwrap(), (int(0), int(0)));
        assert_eq!(hilbert_eval(&int(1)).unwrap(), (int(1), int(0)));
        assert!(hilbert_eval(&frac(5, 4)).is_err());
        assert!(hilbert_eval(&frac(-1, 4)).is_err());
    }

    #[test]
    fn quarter_matches_nested_cells() {
        // digits 1, 0, 0, ...: bisect cell by cell to depth 32
        let p = hilbert_eval(&frac(1, 4)).unwrap();
        let mut digits = vec![1u8];
        digits.resize(32, 0);
        for k in 1..=32 {
            assert!(in_cell(&p, &cell(&digits[..k])), "depth {k}");
        }
        assert_eq!(p, (int(0), frac(1, 2)));
    }

    #[test]
    fn agrees_with_integer_walk() {
        for k in 1..=5u32 {
            let n = 1u64 << k;
            for d in 0..n * n {
                let (cx, cy) = d2xy(k, d);
                let digits = Param::new(&Rational::new(d.into(), (n * n).into())).unwrap().digits(k as usize);
                let (x0, y0, side) = cell(&digits);
                assert_eq!((x0.clone(), y0.clone()), (frac(cx as i64, n as i64), frac(cy as i64, n as i64)));
                // interior parameter of the cell lands inside it
                let mid = Rational::new((2 * d + 1).into(), (2 * n * n).into());
                assert!(in_cell(&hilbert_eval(&mid).unwrap(), &(x0, y0, side)));
            }
        }
    }

    #[test]
    fn periodic_parameters_are_exact() {
        for (p, q) in [(1, 3), (2, 7), (5, 9), (1, 5), (11, 13)] {
            let t = frac(p, q);
            let v = hilbert_eval(&t).unwrap();
            let digits = Param::new(&t).unwrap().digits(40);
            for k in [1, 5, 20, 40] {
                assert!(in_cell(&v, &cell(&digits[..k])), "{p}/{q} depth {k}");
            }
        }
    }

    #[test]
    fn corners_reach_every_cell() {
        for k in 1..=6usize {
            let n = 1u64 << k;
            let mut hit = vec![false; (n * n) as usize];
            for d in 0..n * n {
                let t = Rational::new(d.into(), (n * n).into());
                let digits = Param::new(&t).unwrap().digits(k);
                let c = cell(&digits);
                assert!(in_cell(&hilbert_eval(&t).unwrap(), &c));
                let (x0, y0, _) = c;
                let gx = (x0 * rational::int(n as i64)).to_integer();
                let gy = (y0 * rational::int(n as i64)).to_integer();
                let gx: u64 = gx.try_into().unwrap();
                let gy: u64 = gy.try_into().unwrap();
                hit[(gx * n + gy) as usize] = true;
            }
            assert!(hit.iter().all(|h| *h), "depth {k}");
        }
    }

    #[test]
    fn frame_composition_matches_sequential_application() {
        let frames = [Frame::IDENTITY, Frame::TRANSPOSE, Frame::ANTI_TRANSPOSE, Frame { swap: false, flip_x: true, flip_y: false }];
        for a in frames {
            for b in frames {
                for q in QUADRANT {
                    assert_eq!(a.then(b).bits(q), a.bits(b.bits(q)));
                }
            }
        }
    }
}
