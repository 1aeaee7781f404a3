use serde::{Deserialize, Serialize};

use super::{pair_matrix, ProofTrace, StepCheck, TraceBase, TraceStep};
use crate::error::Result;
use crate::inequality::{check_minkowski, minkowski_sides, CheckConfig, NonNegMatrix, Verdict};
use crate::instance::Instance;
use crate::numeric::{Expr, Rational};

/// Peel column `index` off the running sum:
/// `‖head + tail‖_p ≤ ‖head‖_p + ‖tail‖_p` with `head = a^(index)` and
/// `tail` the sum of all later columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiPeelStep {
    pub index: usize,
    pub p: Rational,
    pub head: Vec<Rational>,
    pub tail: Vec<Rational>,
    pub total: Vec<Rational>,
    pub lhs_bound: Expr,
    pub rhs_bound: Expr,
}

impl StepCheck for MinkowskiPeelStep {
    fn claim_verdict(&self, cfg: &CheckConfig) -> Result<Verdict> {
        check_minkowski(&pair_matrix(&self.head, &self.tail)?, &self.p, cfg)
    }

    fn bookkeeping_ok(&self) -> bool {
        let sums_ok = self.head.len() == self.tail.len()
            && self.total.len() == self.head.len()
            && self
                .head
                .iter()
                .zip(&self.tail)
                .zip(&self.total)
                .all(|((a, b), c)| &(a + b) == c);
        let claims_ok = pair_matrix(&self.head, &self.tail)
            .and_then(|m| minkowski_sides(&m, &self.p))
            .map(|s| s.lhs == self.lhs_bound && s.rhs == self.rhs_bound)
            .unwrap_or(false);
        sums_ok && claims_ok
    }
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `minkowski_trace`: `m − 2` peel steps ending at the two-term inequality
/// on the last two columns; a single column is its own (trivial) base.
pub fn minkowski_trace(m: &NonNegMatrix, p: &Rational) -> Result<ProofTrace> {
    minkowski_sides(m, p)?;
    let cols = m.columns();
    let k = cols.len();
    let instance = Instance::Minkowski {
        matrix: m.clone(),
        p: p.clone(),
    };
    if k == 1 {
        return Ok(ProofTrace::new(instance, Vec::new(), TraceBase::Identity));
    }
    // suffix[j] = a^(j) + … + a^(m−1)
    let mut suffix = vec![cols[k - 1].clone(); k];
    for j in (0..k - 1).rev() {
        suffix[j] = add(&cols[j], &suffix[j + 1]);
    }
    let mut steps = Vec::with_capacity(k - 2);
    for j in 0..k - 2 {
        let head = cols[j].clone();
        let tail = suffix[j + 1].clone();
        let sides = minkowski_sides(&pair_matrix(&head, &tail)?, p)?;
        steps.push(TraceStep::MinkowskiPeel(MinkowskiPeelStep {
            index: j,
            p: p.clone(),
            total: suffix[j].clone(),
            head,
            tail,
            lhs_bound: sides.lhs,
            rhs_bound: sides.rhs,
        }));
    }
    let base = TraceBase::Minkowski {
        head: cols[k - 2].clone(),
        tail: cols[k - 1].clone(),
        p: p.clone(),
    };
    Ok(ProofTrace::new(instance, steps, base))
}

#[cfg(test)]
mod tests {
    use super::super::verify_trace;
    use super::*;

    #[test]
    fn step_counts() {
        let one = NonNegMatrix::from_int_columns(&[&[1, 2]]).unwrap();
        let t = minkowski_trace(&one, &Rational::from(2)).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.base, TraceBase::Identity);
        assert_eq!(t.base_case_count, 0);

        let two = NonNegMatrix::from_int_columns(&[&[3, 0], &[0, 4]]).unwrap();
        let t = minkowski_trace(&two, &Rational::from(2)).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.base_case_count, 1);

        let four = NonNegMatrix::from_int_columns(&[&[1, 2], &[0, 3], &[5, 1], &[2, 2]]).unwrap();
        let t = minkowski_trace(&four, &"3/2".parse().unwrap()).unwrap();
        assert_eq!(t.steps.len(), 2);
        let v = verify_trace(&t, &CheckConfig::interval_only()).unwrap();
        assert!(v.bookkeeping_ok);
        assert!(v.steps.iter().all(|s| *s == Verdict::Holds));
        assert_eq!(v.overall, Verdict::Holds);
    }

    #[test]
    fn proportional_columns_compose_to_equality() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[2, 4], &[3, 6]]).unwrap();
        let t = minkowski_trace(&m, &Rational::from(2)).unwrap();
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert_eq!(v.overall, Verdict::HoldsWithEquality);
    }

    #[test]
    fn tampered_tail_breaks_bookkeeping() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[0, 3], &[5, 1]]).unwrap();
        let mut t = minkowski_trace(&m, &Rational::from(2)).unwrap();
        if let TraceStep::MinkowskiPeel(s) = &mut t.steps[0] {
            s.tail[0] = Rational::from(7);
        }
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(!v.bookkeeping_ok);
    }
}
