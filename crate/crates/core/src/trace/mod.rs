//! Proof traces: each m-fold claim unrolled into a linear chain of
//! two-fold (or triangle) applications, with the exponent and data
//! bookkeeping needed to re-check the chain from its serialized form.

mod chebyshev;
mod holder;
mod menelaus;
mod minkowski;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use chebyshev::{chebyshev_trace, ChebyshevPeelStep};
pub use holder::{holder_trace, HolderSplitStep};
pub use minkowski::{minkowski_trace, MinkowskiPeelStep};

use crate::error::{Error, Result};
use crate::geometry::{menelaus_decompose, MenelausCutStep, Transversal};
use crate::inequality::{
    check_chebyshev, check_holder, check_minkowski, CheckConfig, ExponentVector, NonNegMatrix,
    SortedMatrix, Verdict,
};
use crate::instance::{Instance, StatementKind};
use crate::numeric::{refine_until_ordered, Rational};

/// The interface every step record and base case shares with
/// [`verify_trace`].
pub trait StepCheck {
    /// Verdict on the step's own inequality (or identity).
    fn claim_verdict(&self, cfg: &CheckConfig) -> Result<Verdict>;
    /// Exact internal identities of the step record.
    fn bookkeeping_ok(&self) -> bool;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceStep {
    HolderSplit(HolderSplitStep),
    MinkowskiPeel(MinkowskiPeelStep),
    ChebyshevPeel(ChebyshevPeelStep),
    MenelausCut(MenelausCutStep),
}

impl TraceStep {
    fn statement(&self) -> StatementKind {
        match self {
            TraceStep::HolderSplit(_) => StatementKind::Holder,
            TraceStep::MinkowskiPeel(_) => StatementKind::Minkowski,
            TraceStep::ChebyshevPeel(_) => StatementKind::Chebyshev,
            TraceStep::MenelausCut(_) => StatementKind::Menelaus,
        }
    }

    fn as_check(&self) -> &(dyn StepCheck + Sync) {
        match self {
            TraceStep::HolderSplit(s) => s,
            TraceStep::MinkowskiPeel(s) => s,
            TraceStep::ChebyshevPeel(s) => s,
            TraceStep::MenelausCut(s) => s,
        }
    }
}

/// Where the chain bottoms out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceBase {
    /// One column: both sides are the same expression.
    Identity,
    /// Two-fold Hölder `Σ u v ≤ (Σ u^p)^{1/p} (Σ v^q)^{1/q}`.
    Holder {
        u: Vec<Rational>,
        v: Vec<Rational>,
        p: Rational,
        q: Rational,
    },
    /// Two-term Minkowski.
    Minkowski {
        head: Vec<Rational>,
        tail: Vec<Rational>,
        p: Rational,
    },
    /// Two-column Chebyshev.
    Chebyshev {
        first: Vec<Rational>,
        second: Vec<Rational>,
    },
    /// Menelaus for a triangle.
    MenelausTriangle(Transversal),
}

impl TraceBase {
    fn statement(&self) -> Option<StatementKind> {
        match self {
            TraceBase::Identity => None,
            TraceBase::Holder { .. } => Some(StatementKind::Holder),
            TraceBase::Minkowski { .. } => Some(StatementKind::Minkowski),
            TraceBase::Chebyshev { .. } => Some(StatementKind::Chebyshev),
            TraceBase::MenelausTriangle(_) => Some(StatementKind::Menelaus),
        }
    }

    pub fn note(&self) -> &'static str {
        match self {
            TraceBase::Identity => "single column: both sides coincide",
            TraceBase::Holder { .. } => "two-fold Hölder inequality",
            TraceBase::Minkowski { .. } => "two-term Minkowski inequality",
            TraceBase::Chebyshev { .. } => "two-sequence Chebyshev inequality",
            TraceBase::MenelausTriangle(_) => "Menelaus theorem for a triangle",
        }
    }
}

pub(crate) fn pair_matrix(a: &[Rational], b: &[Rational]) -> Result<NonNegMatrix> {
    NonNegMatrix::from_columns(vec![a.to_vec(), b.to_vec()])
}

pub(crate) fn is_nonincreasing(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

impl StepCheck for TraceBase {
    fn claim_verdict(&self, cfg: &CheckConfig) -> Result<Verdict> {
        match self {
            TraceBase::Identity => {
                cfg.validate()?;
                Ok(Verdict::HoldsWithEquality)
            }
            TraceBase::Holder { u, v, p, q } => check_holder(
                &pair_matrix(u, v)?,
                &ExponentVector::new(vec![p.clone(), q.clone()])?,
                cfg,
            ),
            TraceBase::Minkowski { head, tail, p } => {
                check_minkowski(&pair_matrix(head, tail)?, p, cfg)
            }
            TraceBase::Chebyshev { first, second } => {
                check_chebyshev(&SortedMatrix::new(pair_matrix(first, second)?)?, cfg)
            }
            TraceBase::MenelausTriangle(t) => menelaus::triangle_verdict(t, cfg),
        }
    }

    fn bookkeeping_ok(&self) -> bool {
        match self {
            TraceBase::Identity => true,
            TraceBase::Holder { u, v, p, q } => {
                u.len() == v.len()
                    && ExponentVector::new(vec![p.clone(), q.clone()])
                        .map(|e| e.is_conjugate())
                        .unwrap_or(false)
            }
            TraceBase::Minkowski { head, tail, p } => {
                head.len() == tail.len() && *p >= Rational::one()
            }
            TraceBase::Chebyshev { first, second } => {
                first.len() == second.len() && is_nonincreasing(first) && is_nonincreasing(second)
            }
            TraceBase::MenelausTriangle(t) => menelaus::transversal_consistent(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub statement: StatementKind,
    pub instance: Instance,
    pub steps: Vec<TraceStep>,
    pub base: TraceBase,
    /// Number of base-case applications the chain makes.
    pub base_case_count: usize,
    pub note: String,
}

impl ProofTrace {
    pub(crate) fn new(instance: Instance, steps: Vec<TraceStep>, base: TraceBase) -> Self {
        let base_case_count = match base {
            TraceBase::Identity => 0,
            _ => steps.len() + 1,
        };
        ProofTrace {
            statement: instance.kind(),
            note: base.note().to_string(),
            instance,
            steps,
            base,
            base_case_count,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Build the trace for any instance that has one. CBS is traced through
/// its Hölder specialization `p = (m, …, m)`; the application inequality
/// is a fixed three-column claim and has no recurrence.
pub fn trace_instance(inst: &Instance) -> Result<ProofTrace> {
    match inst {
        Instance::Holder { matrix, exponents } => holder_trace(matrix, exponents),
        Instance::Cbs { matrix } => {
            let m = matrix.cols() as i64;
            holder_trace(matrix, &ExponentVector::new(vec![Rational::from(m); matrix.cols()])?)
        }
        Instance::Minkowski { matrix, p } => minkowski_trace(matrix, p),
        Instance::Chebyshev { matrix } => chebyshev_trace(&SortedMatrix::new(matrix.clone())?),
        Instance::Menelaus(g) => {
            if g.points.is_some() {
                return Err(Error::Unsupported(
                    "explicit intersection points have no decomposition".into(),
                ));
            }
            menelaus_decompose(&g.vertices, &g.line)
        }
        Instance::Application(_) => Err(Error::Unsupported(
            "the application inequality has no recurrence trace".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceVerdict {
    pub steps: Vec<Verdict>,
    pub base: Verdict,
    pub overall: Verdict,
    pub bookkeeping_ok: bool,
}

/// Verify every step and the base, re-derive the chain from the embedded
/// instance and compose the overall verdict.
pub fn verify_trace(t: &ProofTrace, cfg: &CheckConfig) -> Result<TraceVerdict> {
    cfg.validate()?;
    let statement = t.instance.kind();
    if t.steps.iter().any(|s| s.statement() != statement)
        || t.base.statement().is_some_and(|b| b != statement)
    {
        return Err(Error::MalformedTrace(format!(
            "step kinds do not match a {statement} instance"
        )));
    }
    let rebuilt =
        trace_instance(&t.instance).map_err(|e| Error::MalformedTrace(e.to_string()))?;

    let intrinsic = t.steps.iter().all(|s| s.as_check().bookkeeping_ok()) && t.base.bookkeeping_ok();
    let structural = t.statement == statement
        && rebuilt.steps == t.steps
        && rebuilt.base == t.base
        && rebuilt.base_case_count == t.base_case_count;
    let bookkeeping_ok = intrinsic && structural;

    let steps = t
        .steps
        .par_iter()
        .map(|s| s.as_check().claim_verdict(cfg))
        .collect::<Result<Vec<_>>>()?;
    let base = t.base.claim_verdict(cfg)?;

    let links = || steps.iter().chain(std::iter::once(&base));
    let overall = if !bookkeeping_ok || !links().all(Verdict::is_certified_true) {
        Verdict::Undetermined {
            gap_bound: direct_gap(&t.instance, cfg)?,
        }
    } else if links().all(|v| *v == Verdict::HoldsWithEquality) || collapses_to_zero(&t.instance) {
        Verdict::HoldsWithEquality
    } else {
        Verdict::Holds
    };
    Ok(TraceVerdict {
        steps,
        base,
        overall,
        bookkeeping_ok,
    })
}

/// For the multiplicative chains (Hölder, Chebyshev) a zero column makes
/// both sides of the full claim vanish, so strict links cannot make the
/// composed claim strict.
fn collapses_to_zero(inst: &Instance) -> bool {
    match inst {
        Instance::Holder { matrix, .. } | Instance::Cbs { matrix } | Instance::Chebyshev { matrix } => {
            (0..matrix.cols()).any(|k| matrix.column_is_zero(k))
        }
        _ => false,
    }
}

fn direct_gap(inst: &Instance, cfg: &CheckConfig) -> Result<Rational> {
    match inst.claim_sides()? {
        Some(sides) => Ok(refine_until_ordered(&sides.lhs, &sides.rhs, &cfg.precision_schedule)?.gap_bound),
        None => match inst {
            Instance::Menelaus(g) => Ok((g.product()? - Rational::one()).abs()),
            _ => unreachable!("only Menelaus has no sides"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Line, Polygon};

    #[test]
    fn serde_round_trip_is_lossless() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[1, 1], &[3, 1], &[2, 5]]).unwrap();
        let p = ExponentVector::from_ints(&[2, 4, 8, 8]).unwrap();
        for t in [
            holder_trace(&m, &p).unwrap(),
            minkowski_trace(&m, &"3/2".parse().unwrap()).unwrap(),
            chebyshev_trace(&SortedMatrix::sorting(&m)).unwrap(),
            menelaus_decompose(
                &Polygon::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap(),
                &Line::from_ints(1, -2, -2).unwrap(),
            )
            .unwrap(),
        ] {
            let back = ProofTrace::from_json(&t.to_json()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn mismatched_step_kind_is_malformed() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[1, 1], &[3, 1]]).unwrap();
        let mut t = holder_trace(&m, &ExponentVector::from_ints(&[2, 3, 6]).unwrap()).unwrap();
        let other = minkowski_trace(&m, &Rational::from(2)).unwrap();
        t.steps.push(other.steps[0].clone());
        assert!(matches!(
            verify_trace(&t, &CheckConfig::default()),
            Err(Error::MalformedTrace(_))
        ));
    }

    #[test]
    fn menelaus_triangle_trace_is_base_only() {
        let tri = Polygon::from_ints(&[(0, 0), (4, 0), (0, 4)]).unwrap();
        let t = menelaus_decompose(&tri, &Line::from_ints(1, -2, -2).unwrap()).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.base_case_count, 1);
        assert_eq!(t.note, "Menelaus theorem for a triangle");
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert!(v.bookkeeping_ok);
        assert_eq!(v.overall, Verdict::HoldsWithEquality);
    }

    #[test]
    fn menelaus_square_trace() {
        let sq = Polygon::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap();
        let t = menelaus_decompose(&sq, &Line::from_ints(1, -2, -2).unwrap()).unwrap();
        assert_eq!(t.steps.len(), 1);
        let v = verify_trace(&t, &CheckConfig::default()).unwrap();
        assert_eq!(v.steps, vec![Verdict::HoldsWithEquality]);
        assert!(v.bookkeeping_ok);
        assert_eq!(v.overall, Verdict::HoldsWithEquality);
    }

    #[test]
    fn application_has_no_trace() {
        let a = crate::inequality::ApplicationInstance::from_ints([1, 1], [1, 1], [1, 1]).unwrap();
        assert!(matches!(
            trace_instance(&Instance::Application(a)),
            Err(Error::Unsupported(_))
        ));
    }
}
