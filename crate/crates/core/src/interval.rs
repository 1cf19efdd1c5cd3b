//! Closed-interval arithmetic with outward rounding.
//!
//! Endpoints are plain `f64`s computed in round-to-nearest and then nudged
//! outward whenever the operation was inexact. Inexactness is detected with
//! error-free transformations (TwoSum for addition, an FMA residual for
//! multiplication and division), so exact operations keep exact endpoints
//! and inexact ones pay exactly one ulp. Every operation returns an interval
//! that contains the exact real result of applying the operation to any
//! points of the operands.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Direction-aware result of a scalar operation: a floor and a ceiling for
/// the exact real value.
fn nudge_both(v: f64) -> (f64, f64) {
    if v.is_nan() {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        (v.next_down(), v.next_up())
    }
}

/// Bounds for the exact sum `x + y` (TwoSum residual decides the direction).
fn sum_bounds(x: f64, y: f64) -> (f64, f64) {
    let s = x + y;
    if !s.is_finite() {
        return match s {
            f64::INFINITY => (f64::MAX, f64::INFINITY),
            f64::NEG_INFINITY => (f64::NEG_INFINITY, f64::MIN),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
    }
    let bb = s - x;
    let err = (x - (s - bb)) + (y - bb);
    if err > 0.0 {
        (s, s.next_up())
    } else if err < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

/// Bounds for the exact product `x * y` (FMA residual decides the direction).
fn prod_bounds(x: f64, y: f64) -> (f64, f64) {
    let p = x * y;
    if !p.is_finite() {
        return match p {
            f64::INFINITY => (f64::MAX, f64::INFINITY),
            f64::NEG_INFINITY => (f64::NEG_INFINITY, f64::MIN),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
    }
    // TwoProduct is exact only in the normal range; widen unconditionally in
    // the subnormal range.
    if p != 0.0 && !p.is_normal() {
        return nudge_both(p);
    }
    let err = x.mul_add(y, -p);
    if err > 0.0 {
        (p, p.next_up())
    } else if err < 0.0 {
        (p.next_down(), p)
    } else {
        (p, p)
    }
}

/// Bounds for the exact quotient `x / y`, `y != 0`. A zero FMA residual can
/// mask a sub-ulp remainder, so it always widens.
fn quot_bounds(x: f64, y: f64) -> (f64, f64) {
    let q = x / y;
    if !q.is_finite() {
        return match q {
            f64::INFINITY => (f64::MAX, f64::INFINITY),
            f64::NEG_INFINITY => (f64::NEG_INFINITY, f64::MIN),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
    }
    let r = q.mul_add(y, -x); // sign of q*y - x
    if r == 0.0 {
        nudge_both(q)
    } else if (r > 0.0) == (y > 0.0) {
        // q*y > x  =>  q overestimates x/y
        (q.next_down(), q)
    } else {
        (q, q.next_up())
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Degenerate interval holding a single point.
    pub fn point(x: f64) -> Interval {
        debug_assert!(!x.is_nan());
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    /// Enclosure of `|x|` over the interval.
    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(self) -> f64 {
        self.hi.max(-self.lo).max(0.0)
    }

    /// Smallest absolute value attained on the interval.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.max(-self.hi)
        }
    }

    /// Pointwise minimum of two intervals.
    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Pointwise maximum of two intervals.
    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Convex hull of two intervals.
    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Integer power by repeated squaring on the magnitude structure.
    /// Even powers of sign-crossing intervals are clamped to `[0, ..]`.
    pub fn powi(self, e: u32) -> Interval {
        match e {
            0 => Interval::ONE,
            1 => self,
            _ => {
                let mut acc = Interval::ONE;
                for _ in 0..e {
                    acc = acc * self;
                }
                if e.is_multiple_of(2) {
                    // x^e >= 0 for even e; repeated products of a
                    // sign-crossing interval lose that
                    Interval {
                        lo: acc.lo.max(0.0),
                        hi: acc.hi,
                    }
                } else {
                    acc
                }
            }
        }
    }

    /// Division that fails when the divisor straddles zero.
    pub fn checked_div(self, rhs: Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let (l1, h1) = quot_bounds(self.lo, rhs.lo);
        let (l2, h2) = quot_bounds(self.lo, rhs.hi);
        let (l3, h3) = quot_bounds(self.hi, rhs.lo);
        let (l4, h4) = quot_bounds(self.hi, rhs.hi);
        Some(Interval {
            lo: l1.min(l2).min(l3).min(l4),
            hi: h1.max(h2).max(h3).max(h4),
        })
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: sum_bounds(self.lo, rhs.lo).0,
            hi: sum_bounds(self.hi, rhs.hi).1,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (l1, h1) = prod_bounds(self.lo, rhs.lo);
        let (l2, h2) = prod_bounds(self.lo, rhs.hi);
        let (l3, h3) = prod_bounds(self.hi, rhs.lo);
        let (l4, h4) = prod_bounds(self.hi, rhs.hi);
        Interval {
            lo: l1.min(l2).min(l3).min(l4),
            hi: h1.max(h2).max(h3).max(h4),
        }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs)
            .expect("interval division by an interval containing zero")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_ops_stay_exact() {
        let a = Interval::point(0.25);
        let b = Interval::point(0.5);
        assert_eq!(a + b, Interval::point(0.75));
        assert_eq!(a * b, Interval::point(0.125));
        assert_eq!(-a, Interval::point(-0.25));
        assert_eq!(Interval::ZERO + Interval::ZERO, Interval::ZERO);
    }

    #[test]
    fn inexact_sum_brackets_truth() {
        // 0.1 + 0.2 is inexact in binary64
        let s = Interval::point(0.1) + Interval::point(0.2);
        assert!(s.lo < s.hi);
        assert!(s.contains(0.1 + 0.2));
        assert!(s.width() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn division_direction() {
        let q = Interval::point(1.0) / Interval::point(3.0);
        assert!(q.contains(1.0 / 3.0));
        assert!(q.lo < q.hi);
        // exact quotient still widens by design for div, but stays tiny
        let e = Interval::point(1.0) / Interval::point(4.0);
        assert!(e.contains(0.25));
    }

    #[test]
    fn checked_div_rejects_zero_straddle() {
        let z = Interval::new(-1.0, 1.0);
        assert!(Interval::ONE.checked_div(z).is_none());
        assert!(Interval::ONE.checked_div(Interval::ZERO).is_none());
    }

    #[test]
    fn even_power_clamped() {
        let x = Interval::new(-2.0, 1.0);
        let sq = x.powi(2);
        assert!(sq.lo >= 0.0);
        assert!(sq.contains(4.0));
        assert!(sq.contains(0.0));
    }

    #[test]
    fn abs_and_mag() {
        let x = Interval::new(-3.0, 2.0);
        assert_eq!(x.abs(), Interval::new(0.0, 3.0));
        assert_eq!(x.mag(), 3.0);
        assert_eq!(x.mig(), 0.0);
        assert_eq!(Interval::new(1.0, 2.0).mig(), 1.0);
        assert_eq!(Interval::new(-2.0, -1.0).mig(), 1.0);
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_f64_results(
            a in -1.0e6f64..1.0e6, b in -1.0e6f64..1.0e6,
            c in -1.0e6f64..1.0e6, d in -1.0e6f64..1.0e6,
        ) {
            // the round-to-nearest result of the same expression DAG must
            // lie inside the interval evaluation
            let x = Interval::point(a);
            let y = Interval::point(b);
            let z = Interval::point(c);
            let w = Interval::point(d);
            let iv = (x * y + z) * w - x;
            let fl = (a * b + c) * d - a;
            prop_assert!(iv.contains(fl), "{fl} not in {iv}");
        }

        #[test]
        fn division_encloses(a in -1.0e6f64..1.0e6, b in 1.0e-3f64..1.0e6) {
            let q = Interval::point(a) / Interval::point(b);
            prop_assert!(q.contains(a / b));
            let qn = Interval::point(a) / Interval::point(-b);
            prop_assert!(qn.contains(a / -b));
        }

        #[test]
        fn powi_encloses(a in -100.0f64..100.0, e in 0u32..8) {
            let p = Interval::point(a).powi(e);
            prop_assert!(p.contains(a.powi(e as i32)));
        }
    }
}
