//! Outward-rounded intervals over [`Dyadic`] endpoints.

use std::fmt;

use num_bigint::Sign;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};
use super::{NumericError, Rational};

/// A closed interval `[lo, hi]` whose endpoints carry at most
/// `precision_bits` significant bits. Every operation returns an interval
/// containing the exact result for all points of its inputs.
#[derive(Clone, PartialEq, Eq)]
pub struct RigorInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriOrder {
    CertainlyLE,
    CertainlyGT,
    Overlap,
}

impl RigorInterval {
    fn from_parts(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        debug_assert!(lo <= hi);
        RigorInterval {
            lo,
            hi,
            precision_bits,
        }
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(r: &Rational, precision_bits: u32) -> Self {
        assert!(precision_bits >= 2, "precision must be at least 2 bits");
        let lo = Dyadic::from_rational(r, precision_bits, Round::Down);
        let hi = Dyadic::from_rational(r, precision_bits, Round::Up);
        Self::from_parts(lo, hi, precision_bits)
    }

    /// Enclosure of `[lo, hi]` for rationals `lo ≤ hi`.
    pub fn from_bounds(
        lo: &Rational,
        hi: &Rational,
        precision_bits: u32,
    ) -> Result<Self, NumericError> {
        if lo > hi {
            return Err(NumericError::InvertedBounds);
        }
        Ok(Self::from_parts(
            Dyadic::from_rational(lo, precision_bits, Round::Down),
            Dyadic::from_rational(hi, precision_bits, Round::Up),
            precision_bits,
        ))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn lo_rational(&self) -> Rational {
        self.lo.to_rational()
    }

    pub fn hi_rational(&self) -> Rational {
        self.hi.to_rational()
    }

    pub fn width(&self) -> Rational {
        self.hi.sub(&self.lo).to_rational()
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.lo_rational() <= *r && *r <= self.hi_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() != Sign::Plus && self.hi.signum() != Sign::Minus
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// True when `self ⊆ other`.
    pub fn is_subset_of(&self, other: &RigorInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    fn prec_with(&self, other: &RigorInterval) -> u32 {
        self.precision_bits.min(other.precision_bits)
    }

    pub fn add(&self, other: &RigorInterval) -> RigorInterval {
        let p = self.prec_with(other);
        Self::from_parts(
            self.lo.add(&other.lo).round(p, Round::Down),
            self.hi.add(&other.hi).round(p, Round::Up),
            p,
        )
    }

    pub fn sub(&self, other: &RigorInterval) -> RigorInterval {
        let p = self.prec_with(other);
        Self::from_parts(
            self.lo.sub(&other.hi).round(p, Round::Down),
            self.hi.sub(&other.lo).round(p, Round::Up),
            p,
        )
    }

    pub fn neg(&self) -> RigorInterval {
        Self::from_parts(self.hi.neg(), self.lo.neg(), self.precision_bits)
    }

    pub fn mul(&self, other: &RigorInterval) -> RigorInterval {
        let p = self.prec_with(other);
        let corners = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = corners.iter().min().expect("four corners").round(p, Round::Down);
        let hi = corners.iter().max().expect("four corners").round(p, Round::Up);
        Self::from_parts(lo, hi, p)
    }

    /// Division; a divisor enclosure containing zero is a domain error.
    pub fn div(&self, other: &RigorInterval) -> Result<RigorInterval, NumericError> {
        if other.contains_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let p = self.prec_with(other);
        let (a, b) = (self.lo_rational(), self.hi_rational());
        let (c, d) = (other.lo_rational(), other.hi_rational());
        let corners = [&a / &c, &a / &d, &b / &c, &b / &d];
        let lo = corners.iter().min().expect("four corners");
        let hi = corners.iter().max().expect("four corners");
        Ok(Self::from_parts(
            Dyadic::from_rational(lo, p, Round::Down),
            Dyadic::from_rational(hi, p, Round::Up),
            p,
        ))
    }

    /// Integer power. Negative exponents go through [`RigorInterval::div`].
    pub fn pow_int(&self, e: i64) -> Result<RigorInterval, NumericError> {
        let p = self.precision_bits;
        if e == 0 {
            return Ok(RigorInterval::from_rational(&Rational::one(), p));
        }
        if e < 0 {
            let pos = self.pow_int(-e)?;
            return RigorInterval::from_rational(&Rational::one(), p).div(&pos);
        }
        let k = e as u64;
        let up = |x: &Dyadic| x.pow_directed(k, p, Round::Up);
        let down = |x: &Dyadic| x.pow_directed(k, p, Round::Down);
        let out = if !self.lo.is_negative() {
            Self::from_parts(down(&self.lo), up(&self.hi), p)
        } else if !self.hi.is_negative() {
            // lo < 0 ≤ hi
            let m = if self.lo.abs() > self.hi { self.lo.abs() } else { self.hi.clone() };
            if k.is_multiple_of(2) {
                Self::from_parts(Dyadic::zero(), up(&m), p)
            } else {
                Self::from_parts(up(&self.lo.abs()).neg(), up(&self.hi), p)
            }
        } else {
            // hi < 0: mirror through |x|.
            let mirrored = Self::from_parts(self.hi.abs(), self.lo.abs(), p).pow_int(e)?;
            if k.is_multiple_of(2) {
                mirrored
            } else {
                mirrored.neg()
            }
        };
        Ok(out)
    }

    /// Real `k`-th root of a nonnegative enclosure.
    pub fn root(&self, k: u32) -> Result<RigorInterval, NumericError> {
        if self.lo.is_negative() {
            return Err(NumericError::NegativeBase);
        }
        let p = self.precision_bits;
        Ok(Self::from_parts(
            self.lo.root(k, p, Round::Down),
            self.hi.root(k, p, Round::Up),
            p,
        ))
    }

    /// `interval_pow`: encloses `{ t^e : t ∈ self }` for a rational exponent.
    ///
    /// Integer exponents use directed square-and-multiply; a fractional
    /// exponent `a/b` is evaluated as the `b`-th root of `t^a`, each step
    /// rounded outward.
    pub fn pow(&self, e: &Rational) -> Result<RigorInterval, NumericError> {
        if e.is_integer() {
            let k = e.to_i64().ok_or(NumericError::ExponentTooLarge)?;
            return self.pow_int(k);
        }
        if self.lo.is_negative() {
            return Err(NumericError::NegativeBase);
        }
        let a = e.numer().abs();
        let b = u32::try_from(e.denom()).map_err(|_| NumericError::ExponentTooLarge)?;
        let a = i64::try_from(&a).map_err(|_| NumericError::ExponentTooLarge)?;
        let rooted = self.pow_int(a)?.root(b)?;
        if e.is_negative() {
            RigorInterval::from_rational(&Rational::one(), self.precision_bits).div(&rooted)
        } else {
            Ok(rooted)
        }
    }
}

/// `rigorous_compare`: `CertainlyLE` iff `hi(a) ≤ lo(b)`, `CertainlyGT` iff
/// `lo(a) > hi(b)`, `Overlap` otherwise.
pub fn rigorous_compare(a: &RigorInterval, b: &RigorInterval) -> TriOrder {
    if a.hi <= b.lo {
        TriOrder::CertainlyLE
    } else if a.lo > b.hi {
        TriOrder::CertainlyGT
    } else {
        TriOrder::Overlap
    }
}

impl fmt::Display for RigorInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.17e}, {:.17e}]@{}",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.precision_bits
        )
    }
}

impl fmt::Debug for RigorInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RigorInterval[{}, {}]@{}",
            self.lo_rational(),
            self.hi_rational(),
            self.precision_bits
        )
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: Rational,
    hi: Rational,
    precision_bits: u32,
}

impl Serialize for RigorInterval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        IntervalRepr {
            lo: self.lo_rational(),
            hi: self.hi_rational(),
            precision_bits: self.precision_bits,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RigorInterval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(deserializer)?;
        RigorInterval::from_bounds(&r.lo, &r.hi, r.precision_bits).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(a: &str, b: &str) -> RigorInterval {
        RigorInterval::from_bounds(&q(a), &q(b), 64).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(rigorous_compare(&iv("1", "1"), &iv("2", "2")), TriOrder::CertainlyLE);
        assert_eq!(rigorous_compare(&iv("0", "3"), &iv("2", "5")), TriOrder::Overlap);
        assert_eq!(rigorous_compare(&iv("5", "6"), &iv("1", "2")), TriOrder::CertainlyGT);
    }

    #[test]
    fn sqrt_of_four_is_exact() {
        let r = iv("4", "4").pow(&q("1/2")).unwrap();
        assert!(r.contains(&q("2")));
        let bound = Rational::new(4, num_bigint::BigInt::from(1) << 64).unwrap();
        assert!(r.width() <= bound);
        assert!(r.is_point());
    }

    #[test]
    fn sqrt_of_two_against_decimal_oracle() {
        // 1.41421356237309504880168872420969807856967187537694 (50 digits).
        let digits = "141421356237309504880168872420969807856967187537694";
        let lo = Rational::new(
            num_bigint::BigInt::parse_bytes(digits.as_bytes(), 10).unwrap(),
            num_bigint::BigInt::from(10).pow(50u32),
        )
        .unwrap();
        let ulp = Rational::new(1, num_bigint::BigInt::from(10).pow(50u32)).unwrap();
        let hi = &lo + &ulp;
        let r = iv("2", "2").pow(&q("1/2")).unwrap();
        assert!(r.lo_rational() <= hi && lo <= r.hi_rational());
        assert!(!r.contains(&q("3/2")));
        assert!(!r.contains(&q("7/5")));
    }

    #[test]
    fn zero_base_powers() {
        let z = iv("0", "0");
        assert_eq!(z.pow(&q("3")).unwrap(), z);
        assert_eq!(z.pow(&q("1/3")).unwrap(), z);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            iv("-1", "2").pow(&q("1/2")),
            Err(NumericError::NegativeBase)
        ));
        assert!(matches!(
            iv("1", "2").div(&iv("-1", "1")),
            Err(NumericError::DivisionByZero)
        ));
        assert!(matches!(
            iv("1", "2").div(&iv("0", "0")),
            Err(NumericError::DivisionByZero)
        ));
    }

    #[test]
    fn signed_integer_powers() {
        let x = iv("-3", "2");
        let sq = x.pow_int(2).unwrap();
        assert_eq!((sq.lo_rational(), sq.hi_rational()), (q("0"), q("9")));
        let cube = x.pow_int(3).unwrap();
        assert_eq!((cube.lo_rational(), cube.hi_rational()), (q("-27"), q("8")));
        let neg = iv("-3", "-2").pow_int(3).unwrap();
        assert_eq!((neg.lo_rational(), neg.hi_rational()), (q("-27"), q("-8")));
        let inv = iv("2", "4").pow_int(-1).unwrap();
        assert_eq!((inv.lo_rational(), inv.hi_rational()), (q("1/4"), q("1/2")));
    }

    #[test]
    fn serde_round_trip() {
        let r = iv("1/3", "1/2");
        let s = serde_json::to_string(&r).unwrap();
        let back: RigorInterval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
