//! Evaluable expressions over exact rationals: sums, products, quotients and
//! rational powers. They evaluate either exactly (when no irrational value
//! appears) or to a rigorous enclosure at a chosen precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::interval::{rigorous_compare, RigorInterval, TriOrder};
use super::{NumericError, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Const(Rational),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quot(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

impl Expr {
    pub fn constant(r: Rational) -> Self {
        Expr::Const(r)
    }

    pub fn pow(self, e: Rational) -> Self {
        if e.is_one() {
            return self;
        }
        Expr::Pow(Box::new(self), e)
    }

    pub fn quot(self, den: Expr) -> Self {
        Expr::Quot(Box::new(self), Box::new(den))
    }

    /// Exact value, when every intermediate is rational. Fractional powers
    /// succeed only on perfect powers.
    pub fn exact(&self) -> Option<Rational> {
        match self {
            Expr::Const(r) => Some(r.clone()),
            Expr::Sum(xs) => xs.iter().map(Expr::exact).sum(),
            Expr::Product(xs) => xs.iter().map(Expr::exact).product(),
            Expr::Quot(a, b) => a.exact()?.checked_div(&b.exact()?).ok(),
            Expr::Pow(b, e) => {
                let base = b.exact()?;
                let k = e.numer().try_into().ok()?;
                let d: u32 = e.denom().try_into().ok()?;
                base.exact_root(d)?.pow(k).ok()
            }
        }
    }

    /// Rigorous enclosure at `precision_bits`.
    pub fn enclose(&self, precision_bits: u32) -> Result<RigorInterval, NumericError> {
        match self {
            Expr::Const(r) => Ok(RigorInterval::from_rational(r, precision_bits)),
            Expr::Sum(xs) => {
                let mut acc = RigorInterval::from_rational(&Rational::zero(), precision_bits);
                for x in xs {
                    acc = acc.add(&x.enclose(precision_bits)?);
                }
                Ok(acc)
            }
            Expr::Product(xs) => {
                let mut acc = RigorInterval::from_rational(&Rational::one(), precision_bits);
                for x in xs {
                    acc = acc.mul(&x.enclose(precision_bits)?);
                }
                Ok(acc)
            }
            Expr::Quot(a, b) => a.enclose(precision_bits)?.div(&b.enclose(precision_bits)?),
            Expr::Pow(b, e) => {
                // Rational bases are powered exactly before the single
                // outward rounding when the exponent is a small integer.
                if let (Expr::Const(r), Some(k)) = (b.as_ref(), e.to_i64()) {
                    if k.unsigned_abs() <= 64 && !(r.is_zero() && k < 0) {
                        return Ok(RigorInterval::from_rational(&r.pow(k)?, precision_bits));
                    }
                }
                b.enclose(precision_bits)?.pow(e)
            }
        }
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::Const(r)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, xs: &[Expr], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Const(r) => write!(f, "{r}"),
            Expr::Sum(xs) => join(f, xs, " + "),
            Expr::Product(xs) => join(f, xs, " * "),
            Expr::Quot(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(b, e) => write!(f, "{b}^({e})"),
        }
    }
}

/// Adaptive comparison result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refined {
    pub order: TriOrder,
    /// Upper bound on `|lhs − rhs|` at the last precision evaluated.
    pub gap_bound: Rational,
    pub lhs: RigorInterval,
    pub rhs: RigorInterval,
}

/// The default precision schedule in bits.
pub const DEFAULT_SCHEDULE: [u32; 5] = [64, 128, 256, 512, 1024];

/// `refine_until_ordered`: evaluate both sides at each precision of the
/// schedule and stop at the first strict separation.
///
/// Touching enclosures (`hi(lhs) = lo(rhs)`) are reported as `Overlap`:
/// they cannot tell `<` from `=`, so two equal exact values never separate.
pub fn refine_until_ordered(
    lhs: &Expr,
    rhs: &Expr,
    schedule: &[u32],
) -> Result<Refined, NumericError> {
    validate_schedule(schedule)?;
    let mut last = None;
    for &bits in schedule {
        let l = lhs.enclose(bits)?;
        let r = rhs.enclose(bits)?;
        let order = strict_order(&l, &r);
        let gap_bound = gap_bound(&l, &r);
        let done = order != TriOrder::Overlap;
        last = Some(Refined {
            order,
            gap_bound,
            lhs: l,
            rhs: r,
        });
        if done {
            break;
        }
    }
    Ok(last.expect("schedule is non-empty"))
}

pub fn validate_schedule(schedule: &[u32]) -> Result<(), NumericError> {
    if schedule.is_empty() {
        return Err(NumericError::BadSchedule("empty precision schedule".into()));
    }
    if schedule[0] < 2 {
        return Err(NumericError::BadSchedule("precision below 2 bits".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(NumericError::BadSchedule(
            "precision schedule must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn strict_order(l: &RigorInterval, r: &RigorInterval) -> TriOrder {
    match rigorous_compare(l, r) {
        TriOrder::CertainlyLE if l.hi() < r.lo() => TriOrder::CertainlyLE,
        TriOrder::CertainlyGT => TriOrder::CertainlyGT,
        _ => TriOrder::Overlap,
    }
}

fn gap_bound(l: &RigorInterval, r: &RigorInterval) -> Rational {
    let a = l.hi_rational() - r.lo_rational();
    let b = r.hi_rational() - l.lo_rational();
    a.max(b).max(Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Expr {
        Expr::Const(q(s))
    }

    #[test]
    fn sqrt_125_exceeds_11() {
        let lhs = c("125").pow(q("1/2"));
        let out = refine_until_ordered(&lhs, &c("11"), &[64]).unwrap();
        assert_eq!(out.order, TriOrder::CertainlyGT);
        // 125 > 121 confirms the direction independently.
        assert!(q("125") > q("11").pow(2).unwrap());
    }

    #[test]
    fn equal_exact_values_never_separate() {
        let out = refine_until_ordered(&c("2"), &c("2"), &[64, 128]).unwrap();
        assert_eq!(out.order, TriOrder::Overlap);
        assert!(out.gap_bound <= Rational::new(1, num_bigint::BigInt::from(1) << 60).unwrap());
    }

    #[test]
    fn nested_radical_identity_stays_overlapping() {
        // (√2 + √3)² = 5 + 2√6, both sides positive.
        let lhs = Expr::Sum(vec![c("2").pow(q("1/2")), c("3").pow(q("1/2"))]);
        let rhs = Expr::Sum(vec![c("5"), Expr::Product(vec![c("2"), c("6").pow(q("1/2"))])])
            .pow(q("1/2"));
        let out = refine_until_ordered(&lhs, &rhs, &DEFAULT_SCHEDULE).unwrap();
        assert_eq!(out.order, TriOrder::Overlap);
        assert_eq!(out.lhs.precision_bits(), 1024);
        assert!(out.gap_bound < Rational::new(1, num_bigint::BigInt::from(1) << 1000).unwrap());
    }

    #[test]
    fn schedule_validation() {
        assert!(refine_until_ordered(&c("1"), &c("2"), &[]).is_err());
        assert!(refine_until_ordered(&c("1"), &c("2"), &[128, 64]).is_err());
        assert!(refine_until_ordered(&c("1"), &c("2"), &[64, 64]).is_err());
    }

    #[test]
    fn domain_errors_propagate() {
        let bad = c("-2").pow(q("1/2"));
        assert!(matches!(
            refine_until_ordered(&bad, &c("1"), &[64]),
            Err(NumericError::NegativeBase)
        ));
    }

    #[test]
    fn exact_evaluation() {
        assert_eq!(c("4/9").pow(q("3/2")).exact(), Some(q("8/27")));
        assert_eq!(c("2").pow(q("1/2")).exact(), None);
        let e = Expr::Sum(vec![c("1/2"), Expr::Product(vec![c("2"), c("3")])]);
        assert_eq!(e.exact(), Some(q("13/2")));
        assert_eq!(c("1").quot(c("0")).exact(), None);
    }
}
