use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    compare_power_products, refine_until_ordered, validate_schedule, Expr, RigorInterval,
    Rational, TriOrder, DEFAULT_SCHEDULE,
};

/// Outcome of checking one claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Strict inequality, certified.
    Holds,
    /// Exact equality, certified.
    HoldsWithEquality,
    /// The claimed direction is certifiably false.
    Violated { evidence: Evidence },
    /// Interval evaluation could not separate the sides.
    Undetermined { gap_bound: Rational },
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, Verdict::Undetermined { .. })
    }

    /// `Holds` or `HoldsWithEquality`.
    pub fn is_certified_true(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsWithEquality)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithEquality => "holds_with_equality",
            Verdict::Violated { .. } => "violated",
            Verdict::Undetermined { .. } => "undetermined",
        }
    }

    /// Same outcome class, ignoring evidence and gap bounds.
    pub fn same_class(&self, other: &Verdict) -> bool {
        self.label() == other.label()
    }
}

/// Re-checkable evidence attached to a violation. Together with the
/// instance it forms the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Both sides raised to `raised_to`, compared as exact rationals.
    Exact {
        lhs: Rational,
        rhs: Rational,
        raised_to: Rational,
    },
    /// Disjoint enclosures of the two sides.
    Interval {
        lhs: RigorInterval,
        rhs: RigorInterval,
    },
    /// A closed-form value that differs from the claimed one.
    Value { computed: Rational, expected: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    ExactIfPossible,
    IntervalOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub mode: CheckMode,
    pub precision_schedule: Vec<u32>,
    /// Apply the closed-form equality characterizations (proportional
    /// columns, zero columns) before interval refinement.
    pub equality_detection: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: CheckMode::ExactIfPossible,
            precision_schedule: DEFAULT_SCHEDULE.to_vec(),
            equality_detection: true,
        }
    }
}

impl CheckConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    /// Interval evaluation only, without equality shortcuts.
    pub fn interval_only() -> Self {
        CheckConfig {
            mode: CheckMode::IntervalOnly,
            equality_detection: false,
            ..Self::default()
        }
    }

    pub fn with_equality_detection(mut self, on: bool) -> Self {
        self.equality_detection = on;
        self
    }

    pub fn with_schedule(mut self, schedule: Vec<u32>) -> Self {
        self.precision_schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_schedule(&self.precision_schedule)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs`
    Le,
    /// `lhs ≥ rhs`
    Ge,
}

impl Relation {
    pub fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
        }
    }
}

/// `Π base^exp` with nonnegative rational bases and positive rational
/// exponents; compared exactly by exponent clearing.
pub type PowerProduct = Vec<(Rational, Rational)>;

/// Both sides of a claim, with an optional exact power-product form.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: Expr,
    pub rhs: Expr,
    pub relation: Relation,
    pub exact: Option<(PowerProduct, PowerProduct)>,
}

impl Sides {
    pub fn flipped(mut self) -> Self {
        self.relation = self.relation.flipped();
        self
    }

    /// Decide the claim. `equality_shortcut` is consulted only when
    /// `cfg.equality_detection` is on and the exact path is unavailable.
    pub fn decide(
        &self,
        cfg: &CheckConfig,
        equality_shortcut: impl FnOnce() -> Result<bool>,
    ) -> Result<Verdict> {
        cfg.validate()?;
        // A cheap enclosure at the first precision settles most strict
        // instances before exact powers or the equality test are formed.
        let screen = refine_until_ordered(&self.lhs, &self.rhs, &cfg.precision_schedule[..1])?;
        if screen.order != TriOrder::Overlap {
            return Ok(self.verdict_for(screen.order, screen.lhs, screen.rhs, screen.gap_bound));
        }
        if cfg.mode == CheckMode::ExactIfPossible {
            if let Some((l, r)) = &self.exact {
                let (ord, lv, rv) = compare_power_products(l, r)?;
                let raised_to = crate::numeric::lcm_all(l.iter().chain(r).map(|(_, e)| e.denom()));
                return Ok(match (ord, self.relation) {
                    (Ordering::Equal, _) => Verdict::HoldsWithEquality,
                    (Ordering::Less, Relation::Le) | (Ordering::Greater, Relation::Ge) => {
                        Verdict::Holds
                    }
                    _ => Verdict::Violated {
                        evidence: Evidence::Exact {
                            lhs: lv,
                            rhs: rv,
                            raised_to: raised_to.into(),
                        },
                    },
                });
            }
        }
        if cfg.equality_detection && equality_shortcut()? {
            return Ok(Verdict::HoldsWithEquality);
        }
        let out = match &cfg.precision_schedule[1..] {
            [] => screen,
            rest => refine_until_ordered(&self.lhs, &self.rhs, rest)?,
        };
        Ok(self.verdict_for(out.order, out.lhs, out.rhs, out.gap_bound))
    }

    fn verdict_for(
        &self,
        order: TriOrder,
        lhs: RigorInterval,
        rhs: RigorInterval,
        gap_bound: Rational,
    ) -> Verdict {
        match (order, self.relation) {
            (TriOrder::Overlap, _) => Verdict::Undetermined { gap_bound },
            (TriOrder::CertainlyLE, Relation::Le) | (TriOrder::CertainlyGT, Relation::Ge) => {
                Verdict::Holds
            }
            _ => Verdict::Violated {
                evidence: Evidence::Interval { lhs, rhs },
            },
        }
    }
}

/// Re-check a violation certificate against the claim it refutes.
pub fn recheck_evidence(sides: &Sides, evidence: &Evidence) -> Result<bool> {
    match evidence {
        Evidence::Exact { lhs, rhs, .. } => {
            let (l, r) = sides
                .exact
                .as_ref()
                .ok_or_else(|| Error::Unsupported("claim has no exact form".into()))?;
            let (ord, lv, rv) = compare_power_products(l, r)?;
            let wrong = match sides.relation {
                Relation::Le => ord == Ordering::Greater,
                Relation::Ge => ord == Ordering::Less,
            };
            Ok(wrong && &lv == lhs && &rv == rhs)
        }
        Evidence::Interval { lhs, rhs } => {
            let p = lhs.precision_bits();
            let l = sides.lhs.enclose(p)?;
            let r = sides.rhs.enclose(p)?;
            let separated = match sides.relation {
                Relation::Le => l.lo() > r.hi(),
                Relation::Ge => l.hi() < r.lo(),
            };
            Ok(separated && l.is_subset_of(lhs) && r.is_subset_of(rhs))
        }
        Evidence::Value { computed, expected } => Ok(computed != expected),
    }
}
