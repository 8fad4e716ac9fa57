//! Exact arithmetic in ½ℤ.
//!
//! Maslov components live in half-integers and must never touch floating
//! point, so the value is stored as twice itself in an `i64`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// An exact half-integer, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger(0);

    /// Builds the value `twice / 2`.
    pub fn from_twice(twice: i64) -> Self {
        HalfInteger(twice)
    }

    /// Builds a whole number.
    pub fn from_int(n: i64) -> Self {
        HalfInteger(2 * n)
    }

    /// Twice the value; always exact.
    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    /// Reduces modulo 1, landing in {0, ½}.
    pub fn mod_one(self) -> Self {
        HalfInteger(self.0.rem_euclid(2))
    }

    /// True when both values lie in the same coset of ℤ.
    pub fn congruent_mod_one(self, other: Self) -> bool {
        (self.0 - other.0).rem_euclid(2) == 0
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: Self) -> Self {
        HalfInteger(self.0 + rhs.0)
    }
}

impl AddAssign for HalfInteger {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: Self) -> Self {
        HalfInteger(self.0 - rhs.0)
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> Self {
        HalfInteger(-self.0)
    }
}

impl Mul<i64> for HalfInteger {
    type Output = HalfInteger;
    fn mul(self, rhs: i64) -> Self {
        HalfInteger(self.0 * rhs)
    }
}

impl Sum for HalfInteger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        HalfInteger(iter.map(|h| h.0).sum())
    }
}

impl From<i64> for HalfInteger {
    fn from(n: i64) -> Self {
        HalfInteger::from_int(n)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
