//! Exact non-negative ratios.
//!
//! Every ratio the searches produce or compare goes through [`RatioFraction`];
//! nothing is ever rounded to floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// A reduced fraction `numerator / denominator` with `denominator > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RatioFraction {
    num: u64,
    den: u64,
}

impl RatioFraction {
    pub const ZERO: RatioFraction = RatioFraction { num: 0, den: 1 };

    /// Builds the reduced fraction. Panics on a zero denominator.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        RatioFraction { num: num / g, den: den / g }
    }

    pub fn try_new(num: u64, den: u64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::new(num, den))
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `self * k / m` without leaving the exact domain.
    pub fn scale(&self, k: u64, m: u64) -> Self {
        let num = self.num as u128 * k as u128;
        let den = self.den as u128 * m as u128;
        let g = {
            let (mut a, mut b) = (num, den);
            while b != 0 {
                let r = a % b;
                a = b;
                b = r;
            }
            a.max(1)
        };
        RatioFraction::new((num / g) as u64, (den / g) as u64)
    }

    /// Lossy view for display only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for RatioFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for RatioFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RatioFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RatioFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: u64 = n.parse().map_err(|_| Error::Parse(format!("bad ratio `{s}`")))?;
        let d: u64 = d.parse().map_err(|_| Error::Parse(format!("bad ratio `{s}`")))?;
        RatioFraction::try_new(n, d)
    }
}

impl Serialize for RatioFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatioFraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_on_construction() {
        let r = RatioFraction::new(28, 49);
        assert_eq!((r.numerator(), r.denominator()), (4, 7));
        assert_eq!(RatioFraction::new(0, 5), RatioFraction::ZERO);
        assert_eq!(r.to_string(), "4/7");
    }

    #[test]
    fn table_values_order() {
        let f16: RatioFraction = "31/216".parse().unwrap();
        assert!(f16 > RatioFraction::new(1, 7));
        assert!(f16 < RatioFraction::new(7, 48));
        assert!(RatioFraction::new(17, 52) < RatioFraction::new(1, 3));
        assert!(RatioFraction::new(2, 7) < RatioFraction::new(7, 24));
    }

    #[test]
    fn parse_errors() {
        assert!("1/0".parse::<RatioFraction>().is_err());
        assert!("x/2".parse::<RatioFraction>().is_err());
        assert_eq!("6".parse::<RatioFraction>().unwrap(), RatioFraction::new(6, 1));
    }

    proptest! {
        #[test]
        fn order_matches_cross_multiplication(a in 0u64..500, b in 1u64..500, c in 0u64..500, d in 1u64..500) {
            let x = RatioFraction::new(a, b);
            let y = RatioFraction::new(c, d);
            prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
            prop_assert_eq!(x == y, a * d == c * b);
        }

        #[test]
        fn display_parse_roundtrip(a in 0u64..10_000, b in 1u64..10_000) {
            let x = RatioFraction::new(a, b);
            prop_assert_eq!(x.to_string().parse::<RatioFraction>().unwrap(), x);
        }
    }
}
