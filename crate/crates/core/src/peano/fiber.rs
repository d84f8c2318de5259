//! Fibers `P₁⁻¹({c})` of the first coordinate of the curve.
//!
//! At every level exactly two of the four digits produce the required
//! x-bit of `c`, so a fiber point is a choice of one of them per level. The
//! choice bits, read as a binary number, are the point's fiber-local
//! coordinate in `[0,1]`.

use num_integer::Integer;
use num_traits::One;

use super::curve::{self, run_periodic, Param};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Eventually periodic binary expansion; `1` is `0.111…`.
pub(crate) fn binary(v: &Rational) -> Result<Periodic<u8>> {
    if !rational::in_unit_interval(v) {
        return Err(Error::OutOfUnitInterval(rational::render(v)));
    }
    if v.is_one() {
        return Ok((vec![], vec![1]));
    }
    Ok(rational::expand(v, 2))
}

fn at(prefix: &[u8], cycle: &[u8], i: usize) -> u8 {
    if i < prefix.len() {
        prefix[i]
    } else {
        cycle[(i - prefix.len()) % cycle.len()]
    }
}

/// Prefix and cycle of an eventually periodic sequence.
type Periodic<T> = (Vec<T>, Vec<T>);

/// Zips two eventually periodic sequences into one.
fn zip_periodic(a: &Periodic<u8>, b: &Periodic<u8>) -> Periodic<(u8, u8)> {
    let pre = a.0.len().max(b.0.len());
    let len = a.1.len().lcm(&b.1.len());
    let item = |i| (at(&a.0, &a.1, i), at(&b.0, &b.1, i));
    ((0..pre).map(item).collect(), (pre..pre + len).map(item).collect())
}

/// The fiber point over `c` whose choice bits are the binary expansion of
/// `local`.
pub fn fiber_param(c: &Rational, local: &Rational) -> Result<Rational> {
    let (pre, cyc) = zip_periodic(&binary(c)?, &binary(local)?);
    let (dp, dc) = run_periodic(&pre, &cyc, |frame, &(x, b)| {
        let d = frame.digits_with_x(x)[b as usize];
        (d, frame.step(d).1)
    });
    Ok(rational::from_expansion(&dp, &dc, 4))
}

/// Choice bits of `t`'s canonical digit string, as a number.
pub fn local_coordinate(t: &Rational) -> Result<Rational> {
    let p = Param::new(t)?;
    let (bp, bc) = run_periodic(&p.prefix, &p.cycle, |frame, &d| {
        let ((x, _), next) = frame.step(d);
        (u8::from(frame.digits_with_x(x)[1] == d), next)
    });
    Ok(rational::from_expansion(&bp, &bc, 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoint {
    pub t: Rational,
    pub local: Rational,
}

/// The fiber point with local coordinate `local`, checked exactly.
pub fn fiber_point(c: &Rational, local: &Rational) -> Result<FiberPoint> {
    let t = fiber_param(c, local)?;
    if curve::p1(&t)? != *c || local_coordinate(&t)? != *local {
        return Err(Error::Undecidable(format!(
            "local coordinate {} over {} has no canonical fiber parameter",
            rational::render(local),
            rational::render(c)
        )));
    }
    Ok(FiberPoint { t, local: local.clone() })
}

/// `m` distinct parameters `t` with `P₁(t) = c`, at local coordinates
/// `k / 2^L` for `k < m`.
pub fn fiber_points(c: &Rational, m: usize) -> Result<Vec<FiberPoint>> {
    let levels = (m.max(1) - 1).checked_ilog2().map_or(0, |l| l + 1);
    (0..m)
        .map(|k| fiber_point(c, &Rational::new(k.into(), (1u64 << levels).into())))
        .collect()
}
