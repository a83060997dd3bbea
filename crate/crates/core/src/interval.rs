//! Interval arithmetic for the optional subsolver lower bound.
//!
//! Intervals here are outward hulls, not tight ranges: every operation
//! returns an interval containing all values reachable by non-error inputs,
//! widening to the whole line whenever floating subtleties (division near
//! zero, overflow, NaN) would make a tight answer unsafe. `AllError` means
//! every input in the box raises a domain error, so any SSE built on it is
//! infinite and an infinite lower bound is sound.

use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Iv<S> {
    pub lo: S,
    pub hi: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct AllError;

pub(crate) type IvResult<S> = Result<Iv<S>, AllError>;

impl<S: Real> Iv<S> {
    pub fn point(v: S) -> Self {
        Iv { lo: v, hi: v }
    }

    pub fn new(lo: S, hi: S) -> Self {
        debug_assert!(!(lo > hi), "inverted interval");
        Iv { lo, hi }
    }

    pub fn entire() -> Self {
        Iv { lo: S::neg_infinity(), hi: S::infinity() }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= S::zero() && self.hi >= S::zero()
    }

    fn has_nan(&self) -> bool {
        self.lo.is_nan() || self.hi.is_nan()
    }

    /// Smallest interval covering both operands.
    pub fn hull(self, other: Iv<S>) -> Self {
        Iv { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn add(self, o: Iv<S>) -> Self {
        Iv::guarded(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Iv<S>) -> Self {
        Iv::guarded(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn mul(self, o: Iv<S>) -> Self {
        let cands = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = S::infinity();
        let mut hi = S::neg_infinity();
        for c in cands {
            if c.is_nan() {
                // inf * 0 at a box corner: the reachable products are finite
                // but unbounded in the limit, so give up tightness.
                return Iv::entire();
            }
            lo = lo.min(c);
            hi = hi.max(c);
        }
        Iv { lo, hi }
    }

    /// Division with the solver's small-denominator guard: denominators with
    /// magnitude below `eps` are domain errors at evaluation time, so a
    /// denominator interval wholly inside the guard band errors everywhere,
    /// and one that merely overlaps it loses tightness instead.
    pub fn div(self, o: Iv<S>, eps: S) -> IvResult<S> {
        if o.hi < eps && o.lo > -eps {
            return Err(AllError);
        }
        if o.lo < eps && o.hi > -eps {
            return Ok(Iv::entire());
        }
        let cands = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let mut lo = S::infinity();
        let mut hi = S::neg_infinity();
        for c in cands {
            if c.is_nan() {
                return Ok(Iv::entire());
            }
            lo = lo.min(c);
            hi = hi.max(c);
        }
        Ok(Iv { lo, hi })
    }

    pub fn sqrt(self) -> IvResult<S> {
        if self.hi < S::zero() {
            return Err(AllError);
        }
        let lo = if self.lo < S::zero() { S::zero() } else { self.lo.sqrt() };
        Ok(Iv::guarded(lo, self.hi.sqrt()))
    }

    pub fn exp(self) -> Self {
        Iv::guarded(self.lo.exp(), self.hi.exp())
    }

    // NaN endpoints (e.g. inf - inf) collapse to the whole line.
    fn guarded(lo: S, hi: S) -> Self {
        let iv = Iv { lo, hi };
        if iv.has_nan() {
            Iv::entire()
        } else {
            iv
        }
    }
}

/// Hull of `{ x^p : p integer, |p| <= delta }` excluding powers that error
/// (zero base with negative exponent). `Err` when every power errors, which
/// cannot happen for delta >= 0 since p = 0 always yields 1.
pub(crate) fn power_hull<S: Real>(x: S, delta: i32) -> Iv<S> {
    let mut hull: Option<Iv<S>> = None;
    for p in -delta..=delta {
        if x == S::zero() && p < 0 {
            continue;
        }
        let v = crate::expr::pow_int(x, p);
        let Ok(v) = v else { continue };
        let pt = Iv::point(v);
        hull = Some(match hull {
            None => pt,
            Some(h) => h.hull(pt),
        });
    }
    // p = 0 is always present and exact.
    hull.expect("power 0 never errors")
}
