//! The coefficient abstraction shared by every series computation.
//!
//! All series, solver and certificate code is written once against [`Scalar`]
//! and instantiated twice: with `f64` (fast, round-to-nearest) and with
//! [`Interval`] (outward-rounded enclosures). Because both modes execute the
//! same operation DAG, a float-mode result is always contained in the
//! interval-mode counterpart.

use crate::interval::Interval;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Mode tag used in serialised artifacts.
    const MODE: &'static str;
    const IS_INTERVAL: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// Exact injection of a binary64 value.
    fn from_f64(x: f64) -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(self) -> bool;
    /// Division; `None` when the divisor is zero or straddles zero.
    fn checked_div(self, rhs: Self) -> Option<Self>;
    fn powi(self, e: u32) -> Self;
    /// Enclosure of `|x|`.
    fn abs(self) -> Self;
    /// Enclosure of `min(x, y)` (pointwise on endpoints in interval mode).
    fn min(self, other: Self) -> Self;
    /// Upper bound on `|x|` over the enclosure.
    fn abs_upper(self) -> f64;
    /// Lower bound of the enclosure.
    fn lower(self) -> f64;
    /// Upper bound of the enclosure.
    fn upper(self) -> f64;
    /// Representative point (the value itself in float mode, the midpoint in
    /// interval mode).
    fn approx(self) -> f64;
    fn to_interval(self) -> Interval;
}

impl Scalar for f64 {
    const MODE: &'static str = "float";
    const IS_INTERVAL: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
    fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn powi(self, e: u32) -> Self {
        f64::powi(self, e as i32)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn min(self, other: Self) -> Self {
        f64::min(self, other)
    }
    fn abs_upper(self) -> f64 {
        f64::abs(self)
    }
    fn lower(self) -> f64 {
        self
    }
    fn upper(self) -> f64 {
        self
    }
    fn approx(self) -> f64 {
        self
    }
    fn to_interval(self) -> Interval {
        Interval::point(self)
    }
}

impl Scalar for Interval {
    const MODE: &'static str = "interval";
    const IS_INTERVAL: bool = true;

    fn zero() -> Self {
        Interval::ZERO
    }
    fn one() -> Self {
        Interval::ONE
    }
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
    fn from_int(n: i64) -> Self {
        Interval::point(n as f64)
    }
    fn is_zero(self) -> bool {
        self == Interval::ZERO
    }
    fn checked_div(self, rhs: Self) -> Option<Self> {
        Interval::checked_div(self, rhs)
    }
    fn powi(self, e: u32) -> Self {
        Interval::powi(self, e)
    }
    fn abs(self) -> Self {
        Interval::abs(self)
    }
    fn min(self, other: Self) -> Self {
        Interval::min(self, other)
    }
    fn abs_upper(self) -> f64 {
        self.mag()
    }
    fn lower(self) -> f64 {
        self.lo()
    }
    fn upper(self) -> f64 {
        self.hi()
    }
    fn approx(self) -> f64 {
        self.midpoint()
    }
    fn to_interval(self) -> Interval {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_horner<S: Scalar>(x: S) -> S {
        // 3x^3 - x + 0.1 evaluated identically in both modes
        ((S::from_f64(3.0) * x * x - S::one()) * x) + S::from_f64(0.1)
    }

    #[test]
    fn float_result_inside_interval_result() {
        for &x in &[0.3, -1.7, 2.5e3, 1.0 / 3.0] {
            let f = poly_horner(x);
            let iv = poly_horner(Interval::point(x));
            assert!(iv.contains(f), "{f} not in {iv}");
        }
    }

    #[test]
    fn checked_div_zero() {
        assert!(1.0f64.checked_div(0.0).is_none());
        assert!(Interval::ONE
            .checked_div(Interval::new(-0.5, 0.5))
            .is_none());
        assert_eq!(6.0f64.checked_div(3.0), Some(2.0));
    }
}
