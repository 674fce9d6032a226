//! Exact rational arithmetic and the two circuit-combination rules.
//!
//! [`Rational`] wraps a normalized big rational: the denominator is always
//! positive, numerator and denominator are coprime, and zero is `0/1`.
//! Normalization happens on construction, so structural equality is value
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact fraction of arbitrary-precision integers, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to lowest terms. Fails on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    /// Exact quotient of two integers; panics on a zero divisor, so only use
    /// it where the divisor is known to be nonzero (Fibonacci/Lucas values at
    /// positive indices, for instance).
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(num, den).expect("ratio with zero denominator")
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self(self.0.recip()))
    }

    /// Nearest `f64`; exact values beyond `f64` range saturate to infinity.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Decimal rendering with `digits` significant digits, rounded half away
    /// from zero. The rendering is computed from the exact value; no floating
    /// point is involved.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_owned();
        }
        let negative = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();

        // Decimal exponent e with 10^e <= |x| < 10^(e+1).
        let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
        if pow10_ratio_cmp(&num, &den, exp) == Ordering::Less {
            exp -= 1;
        }

        // Scale so that the integer part carries `digits` digits.
        let shift = digits as i64 - 1 - exp;
        let (mut scaled_num, mut scaled_den) = (num, den);
        if shift >= 0 {
            scaled_num *= pow10(shift as u32);
        } else {
            scaled_den *= pow10((-shift) as u32);
        }
        let (mut q, r) = scaled_num.div_rem(&scaled_den);
        if r * 2u8 >= scaled_den {
            q += 1u8;
        }
        // Rounding up may carry into a new leading digit (9.99 -> 10.0).
        let mut shift = shift;
        if q.to_string().len() > digits {
            q /= 10u8;
            shift -= 1;
        }

        let body = q.to_string();
        let rendered = if shift <= 0 {
            let zeros = "0".repeat((-shift) as usize);
            format!("{body}{zeros}")
        } else {
            let shift = shift as usize;
            if body.len() > shift {
                let (int, frac) = body.split_at(body.len() - shift);
                format!("{int}.{frac}")
            } else {
                format!("0.{}{}", "0".repeat(shift - body.len()), body)
            }
        };
        if negative {
            format!("-{rendered}")
        } else {
            rendered
        }
    }

    /// Integer power with a signed exponent.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self(num_traits::Pow::pow(&self.0, exp)))
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), e as usize)
}

/// Compares `num/den` against `10^exp`.
fn pow10_ratio_cmp(num: &BigInt, den: &BigInt, exp: i64) -> Ordering {
    if exp >= 0 {
        num.cmp(&(den * pow10(exp as u32)))
    } else {
        (num * pow10((-exp) as u32)).cmp(den)
    }
}

/// Series connection: resistances add.
pub fn series_combine(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(!a.is_negative() && !b.is_negative());
    a + b
}

/// Parallel connection: `(1/a + 1/b)^-1 = ab/(a+b)`. Both resistances must be
/// strictly positive.
pub fn parallel_combine(a: &Rational, b: &Rational) -> Result<Rational> {
    for r in [a, b] {
        if !r.is_positive() {
            return Err(Error::NonPositiveResistance(r.to_string()));
        }
    }
    Ok(&(a * b) / &(a + b))
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<&BigInt> for Rational {
    fn from(n: &BigInt) -> Self {
        Self::from_integer(n.clone())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Self::new(n, d)
            }
            None => Ok(Self::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
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
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as with the underlying integer types. Fallible
// division goes through `recip`.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// `(-1)^e` for a signed exponent.
pub fn neg_one_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        BigInt::from_biguint(Sign::Minus, 1u8.into())
    }
}
