//! Exact half-integer arithmetic for surpluses.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

/// A number of the form `k/2` for integer `k`, stored as `k`.
///
/// Surpluses `(forward - backward) / 2` and `m/2 - beta` live here so that
/// every comparison against a bound stays an integer comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt(2 * value)
    }

    /// The numerator over 2.
    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_arithmetic() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(4).to_string(), "4");
        assert_eq!(HalfInt::from_twice(-1).to_string(), "-1/2");
        let x = HalfInt::from_twice(3) - HalfInt::from_int(1);
        assert_eq!(x, HalfInt::from_twice(1));
        assert!(HalfInt::from_twice(1) < HalfInt::from_int(1));
        assert_eq!(HalfInt::from_twice(5).to_f64(), 2.5);
    }
}
