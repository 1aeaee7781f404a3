//! Binary floating-point values `mantissa · 2^exponent` with arbitrary-size
//! mantissas and explicitly directed rounding.
//!
//! Every rounding primitive here returns the nearest value with at most
//! `prec` significant bits in the requested direction. Because the set of
//! `q`-bit values is contained in the set of `2q`-bit values, an interval
//! built only from these primitives never widens when precision grows.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// A dyadic rational `mant · 2^exp`, kept with an odd mantissa (or zero
/// mantissa and zero exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        let mant = mant >> tz;
        Dyadic {
            mant,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> Sign {
        self.mant.sign()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
                .expect("power of two is nonzero")
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64()
    }

    /// Exact sum.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = shift_round(&self.mant, shift, dir);
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Directed rounding of an exact rational to `prec` bits.
    pub fn from_rational(r: &Rational, prec: u32, dir: Round) -> Dyadic {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = r.numer();
        let den = r.denom();
        if den.is_one() {
            return Dyadic::from_int(num.clone()).round(prec, dir);
        }
        // Scale so the integer quotient carries at least prec + 2 bits; then
        // rounding the floored (or ceiled) quotient equals rounding r itself.
        let k = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64 + 1;
        let (n, d) = if k >= 0 {
            (num << k as usize, den.clone())
        } else {
            (num.clone(), den << (-k) as usize)
        };
        let q = div_round(&n, &d, dir);
        Dyadic::new(q, -k).round(prec, dir)
    }

    /// Directed rounding of the exact quotient `self / other`.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let q = self.to_rational() / other.to_rational();
        Dyadic::from_rational(&q, prec, dir)
    }

    /// Directed rounding of the real `k`-th root of a nonnegative value.
    pub fn root(&self, k: u32, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "root of a negative dyadic");
        assert!(k >= 1);
        if self.is_zero() || k == 1 {
            return self.round(prec, dir);
        }
        let kk = k as i64;
        let m = &self.mant;
        let e = self.exp;
        // Choose t with e + k t >= 0 and a root carrying >= prec + 3 bits.
        let mag = Integer::div_floor(&(m.bits() as i64 + e), &kk);
        let t = Integer::div_ceil(&(-e), &kk).max(prec as i64 + 3 - mag);
        let n = m << (e + kk * t) as usize;
        let r = nth_root_floor(&n, k);
        let exact = num_traits::pow::Pow::pow(&r, k) == n;
        let r = if exact || dir == Round::Down { r } else { r + 1 };
        Dyadic::new(r, -t).round(prec, dir)
    }

    /// Directed rounding of `self^e` for a nonnegative integer exponent,
    /// computed by square-and-multiply with rounding after every step.
    /// Only valid for nonnegative `self`.
    pub fn pow_directed(&self, e: u64, prec: u32, dir: Round) -> Dyadic {
        debug_assert!(!self.is_negative());
        let mut result = Dyadic::from_int(1);
        let mut base = self.round(prec, dir);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).round(prec, dir);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).round(prec, dir);
            }
        }
        result
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

/// `floor(n^(1/k))` for `n ≥ 0`. Newton's iteration descends monotonically
/// from any start above the root, so an f64 estimate nudged upward gets
/// there in a few steps even when `k` is in the thousands.
fn nth_root_floor(n: &BigInt, k: u32) -> BigInt {
    if n.bits() <= 128 || k <= 2 {
        return n.nth_root(k);
    }
    // log2 n from the top 64 bits.
    let shift = n.bits() - 64;
    let top = (n >> shift as usize).to_u64().expect("64 bits") as f64;
    let log2 = (top.log2() + shift as f64) / k as f64;
    let whole = log2.floor();
    let mut x: BigInt = if whole < 52.0 {
        BigInt::from(log2.exp2().ceil() as u64) + 1
    } else {
        let mant = ((log2 - whole).exp2() * (1u64 << 52) as f64).ceil() as u64;
        (BigInt::from(mant + (1 << 22)) << (whole as usize - 52)) + 1
    };
    while x.pow(k) <= *n {
        x <<= 1;
    }
    let kb = BigInt::from(k);
    let km1 = BigInt::from(k - 1);
    loop {
        let y = (&km1 * &x + n / x.pow(k - 1)) / &kb;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn shift_round(m: &BigInt, shift: u64, dir: Round) -> BigInt {
    let d = BigInt::one() << shift as usize;
    div_round(m, &d, dir)
}

fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => n.div_ceil(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_roots_match_the_library() {
        let base = BigInt::from(0x9e37_79b9_7f4a_7c15u64);
        for k in [3u32, 7, 43, 1806] {
            for extra in [0u64, 1, 65, 4000] {
                let n = (base.clone() << (k as usize * 67)) + extra;
                assert_eq!(nth_root_floor(&n, k), n.nth_root(k), "k={k} extra={extra}");
                let p = n.nth_root(k).pow(k);
                assert_eq!(nth_root_floor(&p, k), n.nth_root(k));
                assert_eq!(nth_root_floor(&(p - 1u32), k), n.nth_root(k) - 1u32);
            }
        }
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rounding_brackets_rationals() {
        for s in ["1/3", "-1/3", "22/7", "-1000001/999", "5"] {
            let r = q(s);
            for prec in [2u32, 8, 53, 200] {
                let lo = Dyadic::from_rational(&r, prec, Round::Down);
                let hi = Dyadic::from_rational(&r, prec, Round::Up);
                assert!(lo.to_rational() <= r && r <= hi.to_rational(), "{s} @ {prec}");
                assert!(lo.bits() <= prec as u64 && hi.bits() <= prec as u64);
            }
        }
    }

    #[test]
    fn one_third_at_four_bits() {
        // 1/3 = 0.010101..b; the 4-bit neighbours are 10/32 and 11/32.
        let lo = Dyadic::from_rational(&q("1/3"), 4, Round::Down);
        let hi = Dyadic::from_rational(&q("1/3"), 4, Round::Up);
        assert_eq!(lo.to_rational(), q("5/16"));
        assert_eq!(hi.to_rational(), q("11/32"));
    }

    #[test]
    fn roots() {
        let four = Dyadic::from_int(4);
        assert_eq!(four.root(2, 10, Round::Down), Dyadic::from_int(2));
        assert_eq!(four.root(2, 10, Round::Up), Dyadic::from_int(2));
        let two = Dyadic::from_int(2);
        let lo = two.root(2, 64, Round::Down).to_rational();
        let hi = two.root(2, 64, Round::Up).to_rational();
        assert!(&lo * &lo < q("2") && q("2") < &hi * &hi);
        assert!(&hi - &lo <= Rational::new(1, BigInt::one() << 62).unwrap());
        let quarter = Dyadic::new(BigInt::one(), -2);
        assert_eq!(
            quarter.root(2, 8, Round::Down).to_rational(),
            q("1/2")
        );
    }

    #[test]
    fn ordering() {
        let a = Dyadic::new(BigInt::from(3), -1);
        let b = Dyadic::from_int(1);
        assert!(a > b);
        assert!(a.neg() < b.neg());
        assert!(Dyadic::zero() < b);
        assert_eq!(Dyadic::new(BigInt::from(4), 0), Dyadic::new(BigInt::from(1), 2));
    }
}
