//! Exact arbitrary-precision rationals in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericError;

/// An exact fraction `numerator / denominator` with `denominator > 0` and
/// `gcd(|numerator|, denominator) = 1`.
///
/// Serializes as the base-10 string `"num/den"`, or `"num"` when the
/// denominator is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, NumericError> {
        let d: BigInt = denom.into();
        if d.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    /// Exact integer power; `0^e` with `e < 0` is a domain error.
    pub fn pow(&self, e: i64) -> Result<Self, NumericError> {
        if e < 0 && self.is_zero() {
            return Err(NumericError::ZeroToNegativePower);
        }
        let mag = e.unsigned_abs();
        let num = pow_big(self.numer(), mag);
        let den = pow_big(self.denom(), mag);
        // Powers of coprime integers stay coprime, so no gcd is needed.
        let r = if e >= 0 {
            BigRational::new_raw(num, den)
        } else if num.is_negative() {
            BigRational::new_raw(-den, -num)
        } else {
            BigRational::new_raw(den, num)
        };
        Ok(Rational(r))
    }

    /// The exact `k`-th root when this value is a perfect `k`-th power of a
    /// rational; `None` otherwise (including even roots of negatives).
    pub fn exact_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if k == 1 {
            return Some(self.clone());
        }
        if self.is_negative() && k.is_multiple_of(2) {
            return None;
        }
        let rn = exact_int_root(self.numer(), k)?;
        let rd = exact_int_root(self.denom(), k)?;
        Some(Rational(BigRational::new_raw(rn, rd)))
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn pow_big(base: &BigInt, e: u64) -> BigInt {
    let e = u32::try_from(e).expect("exponent exceeds u32");
    num_traits::pow::Pow::pow(base, e)
}

fn exact_int_root(x: &BigInt, k: u32) -> Option<BigInt> {
    let r = x.nth_root(k);
    if num_traits::pow::Pow::pow(&r, k) == *x {
        Some(r)
    } else {
        None
    }
}

/// Least common multiple of a list of positive integers.
pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v))
}

/// `rat_pow_int`: exact `x^e` in canonical form.
pub fn rat_pow_int(x: &Rational, e: i64) -> Result<Rational, NumericError> {
    x.pow(e)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || NumericError::Parse(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt, NumericError> {
            let t = t.trim();
            if t.is_empty() || t.starts_with('+') && t.len() == 1 {
                return Err(bad());
            }
            BigInt::from_str(t).map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Rational::from_integer(parse_int(s)?)),
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.sign() != Sign::Plus {
                    return Err(bad());
                }
                Rational::new(parse_int(n)?, d)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
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

/// Panics on a zero divisor, like integer division. Use
/// [`Rational::checked_div`] where the divisor may be zero.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

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
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// Compare `Π base^exp` against another such product exactly, where every
/// base is a nonnegative rational and every exponent a positive rational.
///
/// Both sides are raised to the lcm of all exponent denominators, which
/// turns every factor into an exact rational power.
pub fn compare_power_products(
    lhs: &[(Rational, Rational)],
    rhs: &[(Rational, Rational)],
) -> Result<(Ordering, Rational, Rational), NumericError> {
    for (b, e) in lhs.iter().chain(rhs) {
        if b.is_negative() {
            return Err(NumericError::NegativeBase);
        }
        if !e.is_positive() {
            return Err(NumericError::NonPositiveExponent);
        }
    }
    let clear = lcm_all(lhs.iter().chain(rhs).map(|(_, e)| e.denom()));
    let raise = |side: &[(Rational, Rational)]| -> Result<Rational, NumericError> {
        let mut acc = Rational::one();
        for (b, e) in side {
            let k = (e.numer() * &clear) / e.denom();
            let k = k.to_i64().ok_or(NumericError::ExponentTooLarge)?;
            acc = acc * b.pow(k)?;
        }
        Ok(acc)
    };
    let l = raise(lhs)?;
    let r = raise(rhs)?;
    Ok((l.cmp(&r), l, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_display_and_parse() {
        assert_eq!(q("2/4").to_string(), "1/2");
        assert_eq!(q("-6/14").to_string(), "-3/7");
        assert_eq!(q("10/5").to_string(), "2");
        assert_eq!(q(" 7 ").to_string(), "7");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn pow_int_examples() {
        assert_eq!(rat_pow_int(&q("2/3"), 2).unwrap(), q("4/9"));
        assert_eq!(rat_pow_int(&q("5"), 0).unwrap(), q("1"));
        assert_eq!(rat_pow_int(&q("3/2"), -2).unwrap(), q("4/9"));
        assert_eq!(rat_pow_int(&q("-2/3"), -3).unwrap(), q("-27/8"));
        assert!(matches!(
            rat_pow_int(&q("0"), -1),
            Err(NumericError::ZeroToNegativePower)
        ));
    }

    #[test]
    fn pow_negative_exponent_matches_bignum_oracle() {
        // (3/2)^-2 evaluated as 2^2 / 3^2 with plain integer arithmetic.
        let num = BigInt::from(2).pow(2u32);
        let den = BigInt::from(3).pow(2u32);
        let r = rat_pow_int(&q("3/2"), -2).unwrap();
        assert_eq!(r.numer(), &num);
        assert_eq!(r.denom(), &den);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(q("4/9").exact_root(2), Some(q("2/3")));
        assert_eq!(q("-8/27").exact_root(3), Some(q("-2/3")));
        assert_eq!(q("2").exact_root(2), None);
        assert_eq!(q("-4").exact_root(2), None);
        assert_eq!(q("0").exact_root(5), Some(q("0")));
    }

    #[test]
    fn power_products_compare_by_clearing() {
        // 11 vs sqrt(125): 121 < 125.
        let (ord, l, r) = compare_power_products(
            &[(q("11"), q("1"))],
            &[(q("125"), q("1/2"))],
        )
        .unwrap();
        assert_eq!(ord, Ordering::Less);
        assert_eq!((l, r), (q("121"), q("125")));

        // 3 vs 5^(1/2) 2^(1/3) 2^(1/6): 729 < 1000 after raising to 6.
        let (ord, l, r) = compare_power_products(
            &[(q("3"), q("1"))],
            &[(q("5"), q("1/2")), (q("2"), q("1/3")), (q("2"), q("1/6"))],
        )
        .unwrap();
        assert_eq!(ord, Ordering::Less);
        assert_eq!((l, r), (q("729"), q("1000")));
    }
}
