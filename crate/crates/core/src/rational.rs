//! Exact rational arithmetic with arbitrary-precision integer parts.
//!
//! `Rational` is the universal number type of this crate: every length,
//! frequency, and coordinate is one. Values are always stored reduced with
//! a positive denominator, and serialize as the string `"p/q"`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact reduced fraction `num/den` with `den > 0` and
/// `gcd(|num|, den) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing and normalizing the sign. Errors on a
    /// zero denominator.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer<N: Into<BigInt>>(n: N) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Internal constructor for fractions already known to be reduced with
    /// a positive denominator (Farey enumeration produces these wholesale;
    /// skipping the gcd there matters).
    pub(crate) fn from_reduced(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        debug_assert!(num.gcd(&den).is_one() || num.is_zero());
        Rational(BigRational::new_raw(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Fractional part `x - floor(x)`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational(&self.0 - BigRational::from_integer(self.0.floor().to_integer()))
    }

    /// True iff the value lies strictly between 0 and 1.
    pub fn is_proper(&self) -> bool {
        self.0.is_positive() && self.0 < BigRational::one()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `1 / 2^bits`, the canonical error bound for named constants.
    pub fn pow2_inv(bits: u32) -> Self {
        Rational::from_reduced(BigInt::one(), BigInt::one() << bits)
    }

    /// Rounds to `digits` decimal places, half away from zero, returning the
    /// exact rounded rational. Used to compare against printed figures.
    pub fn round_decimals(&self, digits: u32) -> Self {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let rounded = if scaled.is_negative() {
            (scaled - half).ceil().to_integer()
        } else {
            (scaled + half).floor().to_integer()
        };
        Rational(BigRational::new(rounded, scale))
    }

    /// Fixed-point decimal rendering with exactly `digits` places, computed
    /// by integer arithmetic (no floating point anywhere).
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let rounded = self.round_decimals(digits);
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = (rounded.0 * BigRational::from_integer(scale.clone())).to_integer();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let mag = scaled.abs();
        let int_part = &mag / &scale;
        let frac_part = &mag % &scale;
        if digits == 0 {
            return format!("{sign}{int_part}");
        }
        format!("{sign}{int_part}.{frac_part:0>width$}", width = digits as usize)
    }

    /// Parses `"p/q"`, a decimal literal (`"0.585"`), or a bare integer.
    /// Decimal literals convert exactly.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            return Rational::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let (sign, int) = match int.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, int.strip_prefix('+').unwrap_or(int)),
            };
            if !int.chars().all(|c| c.is_ascii_digit())
                || frac.is_empty()
                || !frac.chars().all(|c| c.is_ascii_digit())
                || int.is_empty()
            {
                return Err(Error::Parse(format!("bad decimal literal {s:?}")));
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let int: BigInt = int.parse().map_err(|_| Error::Parse(s.into()))?;
            let frac: BigInt = frac.parse().map_err(|_| Error::Parse(s.into()))?;
            let num = BigInt::from(sign) * (int * &scale + frac);
            return Rational::new(num, scale);
        }
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
        Ok(Rational::from_integer(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rational::parse(s)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialEq<u64> for Rational {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<u64> for Rational {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::parse(&s).map_err(de::Error::custom)
    }
}
