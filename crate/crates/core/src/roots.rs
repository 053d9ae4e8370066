//! Exact roots of unity, stored as rational angles in `[0, 1)`.
//!
//! A [`RootOfUnity`] with angle `a/b` denotes `exp(2πi·a/b)`. The fraction is
//! kept in lowest terms, so the multiplicative order is exactly `b`.

use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { num: 1, den: 2 };
    pub const I: RootOfUnity = RootOfUnity { num: 1, den: 4 };
    pub const MINUS_I: RootOfUnity = RootOfUnity { num: 3, den: 4 };

    /// `exp(2πi·num/den)`, reduced.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let d = den as i64;
        let r = num.rem_euclid(d) as u64;
        let g = r.gcd(&den);
        RootOfUnity { num: r / g, den: den / g }
    }

    /// The primitive `n`-th root `ω_n = exp(2πi/n)`.
    pub fn omega(n: u64) -> Self {
        Self::new(1, n)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn inv(&self) -> Self {
        if self.num == 0 {
            *self
        } else {
            RootOfUnity { num: self.den - self.num, den: self.den }
        }
    }

    /// Complex conjugate; equal to the inverse on the unit circle.
    pub fn conj(&self) -> Self {
        self.inv()
    }

    pub fn pow(&self, e: i64) -> Self {
        let d = self.den as i128;
        let n = (self.num as i128 * e as i128).rem_euclid(d);
        Self::new(n as i64, self.den)
    }

    /// The square root with angle in `[0, 1/2)`; the other root is its negative.
    pub fn sqrt(&self) -> Self {
        Self::new(self.num as i64, self.den * 2)
    }

    /// `±1` as a sign, if this root is real.
    pub fn as_sign(&self) -> Option<i8> {
        match (self.num, self.den) {
            (0, 1) => Some(1),
            (1, 2) => Some(-1),
            _ => None,
        }
    }

    pub fn from_sign(negative: bool) -> Self {
        if negative {
            Self::MINUS_ONE
        } else {
            Self::ONE
        }
    }

    /// Exponent of this root as a power of `ω_n`, when `order | n`.
    pub fn exponent_in(&self, n: u64) -> Option<u64> {
        if n % self.den == 0 {
            Some(self.num * (n / self.den))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let t = 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64;
        num_complex::Complex64::new(t.cos(), t.sin())
    }
}

impl Default for RootOfUnity {
    fn default() -> Self {
        Self::ONE
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let l = self.den.lcm(&rhs.den);
        let a = self.num * (l / self.den) + rhs.num * (l / rhs.den);
        RootOfUnity::new((a % l) as i64, l)
    }
}

impl MulAssign for RootOfUnity {
    fn mul_assign(&mut self, rhs: RootOfUnity) {
        *self = *self * rhs;
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RootOfUnity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: i64 = a.parse().map_err(|_| Error::Parse(format!("bad phase numerator in {s:?}")))?;
        let den: u64 = b.parse().map_err(|_| Error::Parse(format!("bad phase denominator in {s:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in phase {s:?}")));
        }
        Ok(RootOfUnity::new(num, den))
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RootOfUnity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let r = RootOfUnity::new(6, 8);
        assert_eq!((r.num(), r.den()), (3, 4));
        assert_eq!(RootOfUnity::new(-1, 3), RootOfUnity::new(2, 3));
        assert_eq!(RootOfUnity::new(5, 5), RootOfUnity::ONE);
    }

    #[test]
    fn omega_products() {
        let w3 = RootOfUnity::omega(3);
        assert_eq!(w3 * w3 * w3, RootOfUnity::ONE);
        assert_eq!(w3.inv(), RootOfUnity::new(2, 3));
        assert_eq!(RootOfUnity::I * RootOfUnity::I, RootOfUnity::MINUS_ONE);
        assert_eq!(RootOfUnity::MINUS_ONE.sqrt(), RootOfUnity::I);
    }

    #[test]
    fn parse_and_display() {
        let r: RootOfUnity = "3/12".parse().unwrap();
        assert_eq!(r.to_string(), "1/4");
        assert_eq!("0".parse::<RootOfUnity>().unwrap(), RootOfUnity::ONE);
        assert!("1/0".parse::<RootOfUnity>().is_err());
        assert!("x/2".parse::<RootOfUnity>().is_err());
    }

    fn root() -> impl Strategy<Value = RootOfUnity> {
        (0i64..60, 1u64..60).prop_map(|(a, b)| RootOfUnity::new(a, b))
    }

    proptest! {
        #[test]
        fn order_of_product_divides_lcm(x in root(), y in root()) {
            let l = x.order().lcm(&y.order());
            prop_assert_eq!(l % (x * y).order(), 0);
            prop_assert!((x * x.inv()).is_one());
        }

        #[test]
        fn power_is_repeated_product(x in root(), e in 0i64..12) {
            let mut acc = RootOfUnity::ONE;
            for _ in 0..e {
                acc *= x;
            }
            prop_assert_eq!(x.pow(e), acc);
            prop_assert_eq!(x.pow(-e), acc.inv());
        }
    }
}
