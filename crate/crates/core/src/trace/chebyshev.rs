use serde::{Deserialize, Serialize};

use super::{is_nonincreasing, pair_matrix, ProofTrace, StepCheck, TraceBase, TraceStep};
use crate::error::Result;
use crate::inequality::{
    chebyshev_sides, check_chebyshev, CheckConfig, SortedMatrix, Verdict,
};
use crate::instance::Instance;
use crate::numeric::{Expr, Rational};

/// Two-sequence Chebyshev applied to the running product
/// `P_i = Π_{k<level} a_i^(k)` and the column `a^(level)`.
/// `prefix_products` must itself be nonincreasing for the step to be a
/// legitimate application; that is checked as bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebyshevPeelStep {
    pub level: usize,
    pub prefix_products: Vec<Rational>,
    pub column: Vec<Rational>,
    pub lhs_bound: Expr,
    pub rhs_bound: Expr,
}

impl ChebyshevPeelStep {
    pub fn prefix_sorted(&self) -> bool {
        is_nonincreasing(&self.prefix_products)
    }
}

impl StepCheck for ChebyshevPeelStep {
    fn claim_verdict(&self, cfg: &CheckConfig) -> Result<Verdict> {
        let m = pair_matrix(&self.prefix_products, &self.column)?;
        match SortedMatrix::new(m.clone()) {
            Ok(s) => check_chebyshev(&s, cfg),
            Err(_) => chebyshev_sides(&m)?.decide(cfg, || Ok(false)),
        }
    }

    fn bookkeeping_ok(&self) -> bool {
        let claims_ok = pair_matrix(&self.prefix_products, &self.column)
            .and_then(|m| chebyshev_sides(&m))
            .map(|s| s.lhs == self.lhs_bound && s.rhs == self.rhs_bound)
            .unwrap_or(false);
        claims_ok
            && self.prefix_products.len() == self.column.len()
            && self.prefix_sorted()
            && is_nonincreasing(&self.column)
    }
}

/// `chebyshev_trace`: peel the last column `m − 2` times, each time
/// applying the two-sequence form to the product of the earlier columns.
pub fn chebyshev_trace(s: &SortedMatrix) -> Result<ProofTrace> {
    let m = s.matrix();
    let cols = m.columns();
    let k = cols.len();
    let instance = Instance::Chebyshev { matrix: m.clone() };
    if k == 1 {
        return Ok(ProofTrace::new(instance, Vec::new(), TraceBase::Identity));
    }
    // prefix[j] = a^(0) ⊙ … ⊙ a^(j)
    let mut prefix = vec![cols[0].clone()];
    for c in &cols[1..] {
        let last = prefix.last().expect("non-empty");
        prefix.push(last.iter().zip(c).map(|(a, b)| a * b).collect());
    }
    let mut steps = Vec::with_capacity(k - 2);
    for level in (3..=k).rev() {
        let pp = prefix[level - 2].clone();
        let column = cols[level - 1].clone();
        let sides = chebyshev_sides(&pair_matrix(&pp, &column)?)?;
        steps.push(TraceStep::ChebyshevPeel(ChebyshevPeelStep {
            level,
            prefix_products: pp,
            column,
            lhs_bound: sides.lhs,
            rhs_bound: sides.rhs,
        }));
    }
    let base = TraceBase::Chebyshev {
        first: cols[0].clone(),
        second: cols[1].clone(),
    };
    Ok(ProofTrace::new(instance, steps, base))
}

#[cfg(test)]
mod tests {
    use super::super::verify_trace;
    use super::*;
    use crate::inequality::NonNegMatrix;

    #[test]
    fn three_columns_product_sequence() {
        let m = NonNegMatrix::from_int_columns(&[&[2, 1], &[3, 1], &[5, 4]]).unwrap();
        let t = chebyshev_trace(&SortedMatrix::new(m).unwrap()).unwrap();
        assert_eq!(t.steps.len(), 1);
        match &t.steps[0] {
            TraceStep::ChebyshevPeel(s) => {
                assert_eq!(s.prefix_products, vec![Rational::from(6), Rational::from(1)]);
                assert!(s.prefix_sorted());
            }
            other => panic!("unexpected step {other:?}"),
        }
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(v.bookkeeping_ok);
        assert_eq!(v.overall, Verdict::Holds);
    }

    #[test]
    fn small_cases() {
        let one = NonNegMatrix::from_int_columns(&[&[2, 1]]).unwrap();
        let t = chebyshev_trace(&SortedMatrix::new(one).unwrap()).unwrap();
        assert!(t.steps.is_empty() && t.base == TraceBase::Identity);
        let two = NonNegMatrix::from_int_columns(&[&[2, 1], &[2, 1]]).unwrap();
        let t = chebyshev_trace(&SortedMatrix::new(two).unwrap()).unwrap();
        assert!(t.steps.is_empty() && t.base_case_count == 1);
    }

    #[test]
    fn constant_columns_give_equality() {
        let m = NonNegMatrix::from_int_columns(&[&[2, 2, 2], &[3, 3, 3], &[1, 1, 1], &[5, 5, 5]]).unwrap();
        let t = chebyshev_trace(&SortedMatrix::new(m).unwrap()).unwrap();
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert_eq!(v.overall, Verdict::HoldsWithEquality);
    }

    #[test]
    fn zero_column_makes_strict_links_collapse() {
        // The base on (3,1),(2,1) is strict but the last column vanishes.
        let m = NonNegMatrix::from_int_columns(&[&[3, 1], &[2, 1], &[0, 0]]).unwrap();
        let t = chebyshev_trace(&SortedMatrix::new(m.clone()).unwrap()).unwrap();
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert_eq!(v.base, Verdict::Holds);
        assert_eq!(v.overall, Verdict::HoldsWithEquality);
        let direct = check_chebyshev(&SortedMatrix::new(m).unwrap(), &CheckConfig::default()).unwrap();
        assert_eq!(direct, v.overall);
    }
}
