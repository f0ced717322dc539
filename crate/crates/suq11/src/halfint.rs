//! Exact half-integer labels and small exact rationals for q-exponents.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::QError;

/// Exact half-integer stored as twice its value.
///
/// All representation labels (kappa, mu, j, m, ...) are half-integers; keeping
/// the doubled value exact avoids drift like `kappa + j - kappa'` landing on
/// 0.4999... in floating point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub fn from_twice(twice: i64) -> HalfInt {
        HalfInt { twice }
    }

    pub fn from_int(n: i64) -> HalfInt {
        HalfInt { twice: 2 * n }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Integer value if integral.
    pub fn as_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    /// Non-negative integer value if integral and >= 0.
    pub fn as_nonneg_int(self) -> Option<i64> {
        self.as_int().filter(|&n| n >= 0)
    }

    pub fn is_nonneg(self) -> bool {
        self.twice >= 0
    }

    pub fn abs(self) -> HalfInt {
        HalfInt { twice: self.twice.abs() }
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn frac(self) -> Frac {
        Frac::new(self.twice as i128, 2)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: i64) -> HalfInt {
        HalfInt { twice: self.twice + 2 * rhs }
    }
}

impl Sub<i64> for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: i64) -> HalfInt {
        HalfInt { twice: self.twice - 2 * rhs }
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt { twice: self.twice * rhs }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"3"`, `"-2"`, `"3/2"`, `"-1/2"`. Decimal forms like `"1.5"` are
/// rejected so labels stay exact.
impl FromStr for HalfInt {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self, QError> {
        let bad = || QError::Domain(format!("invalid half-integer {s:?}; use p or p/2 form"));
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            Ok(HalfInt::from_twice(n))
        } else {
            let n: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok(HalfInt::from_int(n))
        }
    }
}

/// Small exact rational used for q-exponent bookkeeping.
///
/// Products of half-integer labels produce quarter- and eighth-integers in
/// intermediate steps; completed exponents in every formula reduce back to
/// half-integers, which [`crate::QContext::qpow_frac`] evaluates exactly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Frac {
    num: i128,
    den: i128, // > 0
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };

    pub fn new(num: i128, den: i128) -> Frac {
        assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(n.unsigned_abs(), d.unsigned_abs()) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        Frac { num: n, den: d }
    }

    pub fn from_int(n: i64) -> Frac {
        Frac { num: n as i128, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num as i64
    }

    pub fn den(self) -> i64 {
        self.den as i64
    }

    pub fn as_halfint(self) -> Option<HalfInt> {
        if self.den == 1 {
            Some(HalfInt::from_twice(2 * self.num as i64))
        } else if self.den == 2 {
            Some(HalfInt::from_twice(self.num as i64))
        } else {
            None
        }
    }

    pub fn half(self) -> Frac {
        Frac::new(self.num, self.den * 2)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        Frac::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, rhs: Frac) -> Frac {
        Frac::new(self.num * rhs.den - rhs.num * self.den, self.den * rhs.den)
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, rhs: Frac) -> Frac {
        Frac::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac::new(-self.num, self.den)
    }
}

impl Mul<i64> for Frac {
    type Output = Frac;
    fn mul(self, rhs: i64) -> Frac {
        Frac::new(self.num * rhs as i128, self.den)
    }
}

impl From<HalfInt> for Frac {
    fn from(h: HalfInt) -> Frac {
        h.frac()
    }
}

/// Product of two half-integers as an exact rational.
pub fn hprod(a: HalfInt, b: HalfInt) -> Frac {
    Frac::new(a.twice() as i128 * b.twice() as i128, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("3".parse::<HalfInt>().unwrap(), HalfInt::from_int(3));
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-1));
        assert!("1.5".parse::<HalfInt>().is_err());
        assert!("3/4".parse::<HalfInt>().is_err());
    }

    #[test]
    fn frac_reduces_to_halfint() {
        let e = hprod(HalfInt::from_twice(5), HalfInt::from_twice(3)); // 15/4
        assert_eq!(e.as_halfint(), None);
        let f = e + hprod(HalfInt::from_twice(1), HalfInt::from_twice(1)); // 15/4 + 1/4 = 4
        assert_eq!(f.as_halfint(), Some(HalfInt::from_int(4)));
    }
}
