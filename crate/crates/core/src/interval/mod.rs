//! Outward-rounded interval arithmetic over binary64.
//!
//! All rounding decisions live in [`round`]; the rest of the crate only sees
//! [`Interval`], [`IntervalBox`] and [`IntervalMatrix`].

mod linalg;
pub mod round;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use linalg::{IntervalBox, IntervalMatrix, Matrix};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with `lo <= hi` and no NaN endpoints.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::hexfloat::HexInterval",
    into = "crate::hexfloat::HexInterval"
)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Binary operations exposed through [`iv_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`, rejecting reversed or non-finite endpoints.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    ///
    /// Panics on NaN; callers feed it computed floats, never user input.
    #[inline]
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "point interval from NaN");
        Interval { lo: x, hi: x }
    }

    /// Internal constructor; only the arithmetic kernels use it.
    #[inline]
    pub(crate) fn from_bounds(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "reversed bounds [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Smallest interval containing both `a` and `b`, in any order.
    pub fn spanning(a: f64, b: f64) -> Self {
        Interval::from_bounds(a.min(b), a.max(b))
    }

    /// `[c - r, c + r]` rounded outward.
    pub fn centered(c: f64, r: f64) -> Self {
        let r = r.abs();
        Interval::from_bounds(round::sub_down(c, r), round::add_up(c, r))
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Midpoint, always a float inside the interval.
    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m.clamp(self.lo, self.hi)
        } else {
            0.0
        }
    }

    /// Upper bound of `hi - lo`.
    #[inline]
    pub fn width(self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// Upper bound of the radius around [`Interval::mid`].
    pub fn rad(self) -> f64 {
        let m = self.mid();
        round::sub_up(m, self.lo).max(round::sub_up(self.hi, m))
    }

    /// `max |x|` over the interval.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `min |x|` over the interval.
    #[inline]
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Strict containment with at least one ulp of clearance at each end.
    #[inline]
    pub fn interior_of(self, other: Interval) -> bool {
        other.lo.next_up() < self.lo && self.hi < other.hi.next_down()
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    #[inline]
    pub fn disjoint(self, other: Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Splits at `lo + ratio * width`; both halves share the cut point.
    pub fn split_at_ratio(self, ratio: f64) -> (Interval, Interval) {
        let mut cut = self.lo + ratio * (self.hi - self.lo);
        if !(cut > self.lo && cut < self.hi) {
            cut = self.mid();
        }
        (
            Interval::from_bounds(self.lo, cut),
            Interval::from_bounds(cut, self.hi),
        )
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval::from_bounds(0.0, self.mag())
        }
    }

    /// `x^2`, tighter than `x * x` when the interval straddles zero.
    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval::from_bounds(
                round::mul_down(self.lo, self.lo),
                round::mul_up(self.hi, self.hi),
            )
        } else if self.hi <= 0.0 {
            Interval::from_bounds(
                round::mul_down(self.hi, self.hi),
                round::mul_up(self.lo, self.lo),
            )
        } else {
            let m = self.mag();
            Interval::from_bounds(0.0, round::mul_up(m, m))
        }
    }

    /// Square root of the non-negative part; errors if entirely negative.
    pub fn sqrt(self) -> Result<Interval> {
        if self.hi < 0.0 {
            return Err(Error::Domain("sqrt of a negative interval"));
        }
        Ok(Interval::from_bounds(
            round::sqrt_down(self.lo.max(0.0)),
            round::sqrt_up(self.hi),
        ))
    }

    pub fn cbrt(self) -> Interval {
        Interval::from_bounds(round::cbrt_down(self.lo), round::cbrt_up(self.hi))
    }

    pub fn cube(self) -> Interval {
        self.sqr() * self
    }

    pub fn recip(self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Interval::from_bounds(
            round::div_down(1.0, self.hi),
            round::div_up(1.0, self.lo),
        ))
    }

    /// Division; a divisor containing zero is a domain error.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = round::div_down(a, c)
            .min(round::div_down(a, d))
            .min(round::div_down(b, c))
            .min(round::div_down(b, d));
        let hi = round::div_up(a, c)
            .max(round::div_up(a, d))
            .max(round::div_up(b, c))
            .max(round::div_up(b, d));
        Ok(Interval::from_bounds(lo, hi))
    }

    /// Division by a nonzero float.
    pub fn div_f64(self, rhs: f64) -> Interval {
        assert!(rhs != 0.0, "division of an interval by 0.0");
        if rhs > 0.0 {
            Interval::from_bounds(round::div_down(self.lo, rhs), round::div_up(self.hi, rhs))
        } else {
            Interval::from_bounds(round::div_down(self.hi, rhs), round::div_up(self.lo, rhs))
        }
    }

    pub fn max_with(self, other: Interval) -> Interval {
        Interval::from_bounds(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn min_with(self, other: Interval) -> Interval {
        Interval::from_bounds(self.lo.min(other.lo), self.hi.min(other.hi))
    }
}

/// `iv_make`: the checked constructor under its operational name.
pub fn iv_make(lo: f64, hi: f64) -> Result<Interval> {
    Interval::new(lo, hi)
}

pub fn iv_arith(op: ArithOp, x: Interval, y: Interval) -> Result<Interval> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

/// Enclosure of `(dx^2 + dy^2)^(-3/2)`.
///
/// Fails with [`Error::PossibleCollision`] (indices left at 0) when the squared
/// distance enclosure reaches zero; callers that know the pair rewrap it.
pub fn inv_cube_dist(dx: Interval, dy: Interval) -> Result<Interval> {
    let r2 = dx.sqr() + dy.sqr();
    inv_cube_from_sq(r2)
}

/// `r2^(-3/2)` for a squared-distance enclosure.
pub(crate) fn inv_cube_from_sq(r2: Interval) -> Result<Interval> {
    if r2.lo <= 0.0 {
        return Err(Error::PossibleCollision { i: 0, j: 0 });
    }
    let r = r2.sqrt()?;
    // r^3 = r2 * r; monotone decreasing reciprocal.
    let lo_cube = round::mul_down(r2.lo, r.lo);
    let hi_cube = round::mul_up(r2.hi, r.hi);
    if lo_cube <= 0.0 {
        return Err(Error::PossibleCollision { i: 0, j: 0 });
    }
    Ok(Interval::from_bounds(
        round::div_down(1.0, hi_cube),
        round::div_up(1.0, lo_cube),
    ))
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::from_bounds(
            round::add_down(self.lo, rhs.lo),
            round::add_up(self.hi, rhs.hi),
        )
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval::from_bounds(
            round::sub_down(self.lo, rhs.hi),
            round::sub_up(self.hi, rhs.lo),
        )
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 {
            if c >= 0.0 {
                return Interval::from_bounds(round::mul_down(a, c), round::mul_up(b, d));
            }
            if d <= 0.0 {
                return Interval::from_bounds(round::mul_down(b, c), round::mul_up(a, d));
            }
            return Interval::from_bounds(round::mul_down(b, c), round::mul_up(b, d));
        }
        if b <= 0.0 {
            if c >= 0.0 {
                return Interval::from_bounds(round::mul_down(a, d), round::mul_up(b, c));
            }
            if d <= 0.0 {
                return Interval::from_bounds(round::mul_down(b, d), round::mul_up(a, c));
            }
            return Interval::from_bounds(round::mul_down(a, d), round::mul_up(a, c));
        }
        if c >= 0.0 {
            return Interval::from_bounds(round::mul_down(a, d), round::mul_up(b, d));
        }
        if d <= 0.0 {
            return Interval::from_bounds(round::mul_down(b, c), round::mul_up(a, c));
        }
        let lo = round::mul_down(a, d).min(round::mul_down(b, c));
        let hi = round::mul_up(a, c).max(round::mul_up(b, d));
        Interval::from_bounds(lo, hi)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::point(self) * rhs
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}
