use serde::{Deserialize, Serialize};

use super::{pair_matrix, ProofTrace, StepCheck, TraceBase, TraceStep};
use crate::error::Result;
use crate::inequality::{
    holder_equality_by_powers, holder_sides, power_sum, CheckConfig, ExponentVector,
    NonNegMatrix, Relation, Sides, Verdict,
};
use crate::instance::Instance;
use crate::numeric::{Expr, Rational};

/// Merge of the last two columns `u = a^(m−1)`, `v = a^(m)` of a level-m
/// claim into the single column `u·v` with exponent `p`, where
/// `1/p = 1/p_{m−1} + 1/p_m`. The step's own inequality is
/// `Σ (u v)^p ≤ (Σ u^{p t1})^{1/t1} (Σ v^{p t2})^{1/t2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolderSplitStep {
    pub level: usize,
    /// `p_1 … p_{m−2}`, the exponents left untouched at this level.
    pub prefix: Vec<Rational>,
    pub p_prev: Rational,
    pub p_last: Rational,
    pub derived_p: Rational,
    pub t1: Rational,
    pub t2: Rational,
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
    pub merged: Vec<Rational>,
    pub lhs_bound: Expr,
    pub rhs_bound: Expr,
}

fn step_sides(
    u: &[Rational],
    v: &[Rational],
    p: &Rational,
    t1: &Rational,
    t2: &Rational,
) -> Result<Sides> {
    let merged: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a * b).collect();
    let lhs = power_sum(&merged, p);
    let su = power_sum(u, &(p * t1));
    let sv = power_sum(v, &(p * t2));
    let (i1, i2) = (t1.recip()?, t2.recip()?);
    let exact = match (&lhs, &su, &sv) {
        (Expr::Const(l), Expr::Const(a), Expr::Const(b)) => Some((
            vec![(l.clone(), Rational::one())],
            vec![(a.clone(), i1.clone()), (b.clone(), i2.clone())],
        )),
        _ => None,
    };
    Ok(Sides {
        lhs,
        rhs: Expr::Product(vec![su.pow(i1), sv.pow(i2)]),
        relation: Relation::Le,
        exact,
    })
}

impl HolderSplitStep {
    fn new(
        level: usize,
        prefix: Vec<Rational>,
        p_prev: Rational,
        p_last: Rational,
        u: Vec<Rational>,
        v: Vec<Rational>,
    ) -> Result<Self> {
        let derived_p = (p_prev.recip()? + p_last.recip()?).recip()?;
        let t1 = p_prev.checked_div(&derived_p)?;
        let t2 = p_last.checked_div(&derived_p)?;
        let sides = step_sides(&u, &v, &derived_p, &t1, &t2)?;
        let merged = u.iter().zip(&v).map(|(a, b)| a * b).collect();
        Ok(HolderSplitStep {
            level,
            prefix,
            p_prev,
            p_last,
            derived_p,
            t1,
            t2,
            u,
            v,
            merged,
            lhs_bound: sides.lhs,
            rhs_bound: sides.rhs,
        })
    }

    fn sides(&self) -> Result<Sides> {
        step_sides(&self.u, &self.v, &self.derived_p, &self.t1, &self.t2)
    }

    /// `1/t1 + 1/t2 = 1`, `t1 > 1`, `t2 > 1`.
    pub fn conjugate_split_ok(&self) -> bool {
        let one = Rational::one();
        match (self.t1.recip(), self.t2.recip()) {
            (Ok(a), Ok(b)) => a + b == one && self.t1 > one && self.t2 > one,
            _ => false,
        }
    }

    /// `derived_p · t1 = p_prev` and `derived_p · t2 = p_last`.
    pub fn exponent_products_ok(&self) -> bool {
        &self.derived_p * &self.t1 == self.p_prev && &self.derived_p * &self.t2 == self.p_last
    }

    /// `1/p_1 + … + 1/p_{m−2} + 1/derived_p = 1`.
    pub fn reduced_conjugacy_ok(&self) -> bool {
        let mut total = Rational::zero();
        for p in self.prefix.iter().chain(std::iter::once(&self.derived_p)) {
            match p.recip() {
                Ok(r) => total = total + r,
                Err(_) => return false,
            }
        }
        total.is_one()
    }
}

impl StepCheck for HolderSplitStep {
    fn claim_verdict(&self, cfg: &CheckConfig) -> Result<Verdict> {
        let sides = self.sides()?;
        sides.decide(cfg, || {
            holder_equality_by_powers(
                &pair_matrix(&self.u, &self.v)?,
                &[self.p_prev.clone(), self.p_last.clone()],
            )
        })
    }

    fn bookkeeping_ok(&self) -> bool {
        let data_ok = self.u.len() == self.v.len()
            && self.merged.len() == self.u.len()
            && self.u.iter().zip(&self.v).zip(&self.merged).all(|((a, b), c)| &(a * b) == c)
            && self.level == self.prefix.len() + 2;
        let claims_ok = match self.sides() {
            Ok(s) => s.lhs == self.lhs_bound && s.rhs == self.rhs_bound,
            Err(_) => false,
        };
        data_ok
            && claims_ok
            && self.conjugate_split_ok()
            && self.exponent_products_ok()
            && self.reduced_conjugacy_ok()
    }
}

/// `holder_trace`: `m − 2` split steps, each merging the last pair of
/// columns, ending in the two-fold inequality on `a^(1)` and the product
/// of all remaining columns.
pub fn holder_trace(m: &NonNegMatrix, p: &ExponentVector) -> Result<ProofTrace> {
    holder_sides(m, p)?;
    let cols = m.columns();
    let ps = p.values();
    let k = cols.len();
    let mut v = cols[k - 1].clone();
    let mut q = ps[k - 1].clone();
    let mut steps = Vec::with_capacity(k - 2);
    for level in (3..=k).rev() {
        let step = HolderSplitStep::new(
            level,
            ps[..level - 2].to_vec(),
            ps[level - 2].clone(),
            q,
            cols[level - 2].clone(),
            v,
        )?;
        v = step.merged.clone();
        q = step.derived_p.clone();
        steps.push(TraceStep::HolderSplit(step));
    }
    let base = TraceBase::Holder {
        u: cols[0].clone(),
        v,
        p: ps[0].clone(),
        q,
    };
    Ok(ProofTrace::new(
        Instance::Holder {
            matrix: m.clone(),
            exponents: p.clone(),
        },
        steps,
        base,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::verify_trace;
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn split(t: &ProofTrace, i: usize) -> &HolderSplitStep {
        match &t.steps[i] {
            TraceStep::HolderSplit(s) => s,
            other => panic!("unexpected step {other:?}"),
        }
    }

    #[test]
    fn two_columns_is_base_only() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[3, 4]]).unwrap();
        let t = holder_trace(&m, &ExponentVector::from_ints(&[2, 2]).unwrap()).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.base_case_count, 1);
    }

    #[test]
    fn three_columns_2_3_6() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[1, 1], &[1, 1]]).unwrap();
        let t = holder_trace(&m, &ExponentVector::from_ints(&[2, 3, 6]).unwrap()).unwrap();
        assert_eq!(t.steps.len(), 1);
        let s = split(&t, 0);
        assert_eq!((&s.derived_p, &s.t1, &s.t2), (&q("2"), &q("3/2"), &q("3")));
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(v.bookkeeping_ok);
        assert_eq!(v.overall, Verdict::Holds);
    }

    #[test]
    fn four_columns_first_step() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[2, 1], &[1, 3], &[2, 2]]).unwrap();
        let t = holder_trace(&m, &ExponentVector::from_ints(&[2, 4, 8, 8]).unwrap()).unwrap();
        assert_eq!(t.steps.len(), 2);
        let s = split(&t, 0);
        assert_eq!((&s.derived_p, &s.t1, &s.t2), (&q("4"), &q("2"), &q("2")));
        let s = split(&t, 1);
        assert_eq!((&s.p_prev, &s.p_last, &s.derived_p), (&q("4"), &q("4"), &q("2")));
        assert_eq!(t.base_case_count, 3);
    }

    #[test]
    fn all_ones_is_equality_everywhere() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]).unwrap();
        let t = holder_trace(&m, &ExponentVector::from_ints(&[2, 3, 6]).unwrap()).unwrap();
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(v.steps.iter().all(|s| *s == Verdict::HoldsWithEquality));
        assert_eq!(v.base, Verdict::HoldsWithEquality);
        assert_eq!(v.overall, Verdict::HoldsWithEquality);
    }

    #[test]
    fn tampered_t2_breaks_bookkeeping() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[1, 1], &[1, 1]]).unwrap();
        let mut t = holder_trace(&m, &ExponentVector::from_ints(&[2, 3, 6]).unwrap()).unwrap();
        if let TraceStep::HolderSplit(s) = &mut t.steps[0] {
            s.t2 = q("4");
            assert!(!s.conjugate_split_ok());
        }
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(!v.bookkeeping_ok);
        assert!(v.overall.is_undetermined());
    }

    #[test]
    fn rational_exponents_trace() {
        // p = G/g for g = (1, 2, 3): (6, 3, 2).
        let m = NonNegMatrix::from_int_columns(&[&[1, 2, 3], &[2, 1, 1], &[1, 1, 4]]).unwrap();
        let p = ExponentVector::new(vec![q("6"), q("3"), q("2")]).unwrap();
        let t = holder_trace(&m, &p).unwrap();
        let s = split(&t, 0);
        assert_eq!((&s.derived_p, &s.t1, &s.t2), (&q("6/5"), &q("5/2"), &q("5/3")));
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(v.bookkeeping_ok);
        assert_eq!(v.overall, Verdict::Holds);
    }
}
