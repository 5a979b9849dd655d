//! Exact rationals for bound values and ratios.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Rational {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: i64) -> Rational {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn from_usize(value: usize) -> Rational {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    /// `numer / denom` for counts. Panics if `denom` is zero.
    pub fn ratio(numer: usize, denom: usize) -> Rational {
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        self.numer().div_ceil(self.denom())
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// `ceil` as a count, clamped below at zero. `None` if it does not fit.
    pub fn ceil_usize(&self) -> Option<usize> {
        let c = self.ceil();
        if c.is_negative() {
            Some(0)
        } else {
            usize::try_from(c).ok()
        }
    }

    /// Always `p/q`, including integers (`7/1`).
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    /// Lossy conversion for display and logging only.
    pub fn to_f64(&self) -> f64 {
        let n: f64 = self.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = self.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fraction_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected an integer or p/q with q > 0")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRationalError(s.to_string());
        let (p, q) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if !q.is_positive() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(p, q)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_fraction_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}
