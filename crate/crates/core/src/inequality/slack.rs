use serde::{Deserialize, Serialize};

use super::verdict::{Relation, Sides};
use crate::error::{Error, Result};
use crate::numeric::{compare_power_products, lcm_all, Rational, RigorInterval};

/// `value = ratio^power` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSlack {
    pub power: Rational,
    pub value: Rational,
}

/// How close a claim is to equality: the smaller side divided by the side
/// the claim says dominates, so valid instances give a ratio in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slack {
    pub enclosure: RigorInterval,
    pub exact: Option<ExactSlack>,
}

impl Slack {
    pub fn midpoint(&self) -> f64 {
        self.enclosure.midpoint_f64()
    }
}

/// Slack ratio of a claim, enclosed at `precision_bits`.
pub fn slack_of_sides(sides: &Sides, precision_bits: u32) -> Result<Slack> {
    if let Some((l, r)) = &sides.exact {
        let power = lcm_all(l.iter().chain(r).map(|(_, e)| e.denom()));
        let (_, lv, rv) = compare_power_products(l, r)?;
        let (small, big) = match sides.relation {
            Relation::Le => (lv, rv),
            Relation::Ge => (rv, lv),
        };
        if big.is_zero() {
            return Err(Error::ZeroDominantSide);
        }
        let value = small / big;
        let k = u32::try_from(&power).map_err(|_| crate::numeric::NumericError::ExponentTooLarge)?;
        let enclosure = RigorInterval::from_rational(&value, precision_bits).root(k)?;
        return Ok(Slack {
            enclosure,
            exact: Some(ExactSlack {
                power: power.into(),
                value,
            }),
        });
    }
    let l = sides.lhs.enclose(precision_bits)?;
    let r = sides.rhs.enclose(precision_bits)?;
    let (small, big) = match sides.relation {
        Relation::Le => (l, r),
        Relation::Ge => (r, l),
    };
    if big.contains_zero() {
        return Err(Error::ZeroDominantSide);
    }
    Ok(Slack {
        enclosure: small.div(&big)?,
        exact: None,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{cbs_sides, chebyshev_sides, holder_sides, minkowski_sides};
    use super::*;
    use crate::inequality::{ExponentVector, NonNegMatrix};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn holder_all_ones_is_exactly_one() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 1], &[1, 1]]).unwrap();
        let s = slack_of_sides(&holder_sides(&m, &ExponentVector::from_ints(&[2, 2]).unwrap()).unwrap(), 64).unwrap();
        assert_eq!(s.exact.unwrap().value, q("1"));
        assert!(s.enclosure.contains(&q("1")));
    }

    #[test]
    fn holder_squared_ratio() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[3, 4]]).unwrap();
        let s = slack_of_sides(&holder_sides(&m, &ExponentVector::from_ints(&[2, 2]).unwrap()).unwrap(), 64).unwrap();
        let e = s.exact.unwrap();
        assert_eq!((e.power, e.value), (q("2"), q("121/125")));
        let (lo, hi) = (s.enclosure.lo_rational(), s.enclosure.hi_rational());
        assert!(&lo * &lo <= q("121/125") && q("121/125") <= &hi * &hi);
    }

    #[test]
    fn chebyshev_ratio_is_rhs_over_lhs() {
        let m = NonNegMatrix::from_int_columns(&[&[2, 1], &[2, 1]]).unwrap();
        let s = slack_of_sides(&chebyshev_sides(&m).unwrap(), 64).unwrap();
        assert_eq!(s.exact.unwrap().value, q("9/10"));
    }

    #[test]
    fn interval_slack_for_minkowski() {
        let m = NonNegMatrix::from_int_columns(&[&[3, 0], &[0, 4]]).unwrap();
        let s = slack_of_sides(&minkowski_sides(&m, &q("2")).unwrap(), 64).unwrap();
        assert!(s.exact.is_none());
        assert!(s.enclosure.contains(&q("5/7")));
    }

    #[test]
    fn zero_dominant_side_is_an_error() {
        let m = NonNegMatrix::from_int_columns(&[&[0, 0], &[1, 1]]).unwrap();
        assert_eq!(slack_of_sides(&cbs_sides(&m).unwrap(), 64), Err(Error::ZeroDominantSide));
    }
}
