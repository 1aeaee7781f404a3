use serde::{Deserialize, Serialize};

use super::enumerate::MAX_ENUMERATION_M;
use crate::error::{Error, Result};
use crate::instance::StatementKind;
use crate::numeric::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMode {
    /// Uniform over the enumerated integer conjugate tuples, randomly
    /// permuted; keeps Hölder on the exact path.
    IntegerTuples,
    /// `p_k = G / g_k` from random positive weights; exercises intervals.
    RationalWeights,
}

/// Parameters of an instance stream. Field names double as CLI flags and
/// JSON config keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenSpec {
    pub statement: StatementKind,
    pub n_min: usize,
    pub n_max: usize,
    pub m_min: usize,
    pub m_max: usize,
    /// Numerators are drawn below `2^num_bits`.
    pub num_bits: u32,
    /// Denominators are drawn from `1..=2^den_bits`.
    pub den_bits: u32,
    pub exponent_mode: ExponentMode,
    /// Minkowski exponents to choose from.
    pub minkowski_p: Vec<Rational>,
    /// Share of instances built from the statement's equality family.
    pub equality_percent: u32,
    /// Share of entries forced into `{0, 1}`.
    pub small_percent: u32,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec::for_statement(StatementKind::Holder)
    }
}

impl GenSpec {
    pub fn for_statement(statement: StatementKind) -> Self {
        let (n_min, n_max, m_min, m_max) = match statement {
            StatementKind::Holder => (1, 8, 2, 5),
            StatementKind::Cbs => (1, 8, 2, 4),
            StatementKind::Minkowski | StatementKind::Chebyshev => (1, 8, 1, 5),
            StatementKind::Application => (2, 2, 3, 3),
            StatementKind::Menelaus => (3, 12, 0, 0),
        };
        GenSpec {
            statement,
            n_min,
            n_max,
            m_min,
            m_max,
            num_bits: 16,
            den_bits: 8,
            exponent_mode: ExponentMode::IntegerTuples,
            minkowski_p: ["1", "3/2", "2", "3"]
                .iter()
                .map(|s| s.parse().expect("literal"))
                .collect(),
            equality_percent: 5,
            small_percent: 10,
        }
    }

    pub fn with_n(mut self, lo: usize, hi: usize) -> Self {
        self.n_min = lo;
        self.n_max = hi;
        self
    }

    pub fn with_m(mut self, lo: usize, hi: usize) -> Self {
        self.m_min = lo;
        self.m_max = hi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadGenSpec(msg));
        if self.n_min > self.n_max {
            return bad(format!("empty n range {}..={}", self.n_min, self.n_max));
        }
        if self.m_min > self.m_max {
            return bad(format!("empty m range {}..={}", self.m_min, self.m_max));
        }
        if self.num_bits == 0 || self.num_bits > 62 {
            return bad(format!("num_bits must be in 1..=62, got {}", self.num_bits));
        }
        if self.den_bits > 62 {
            return bad(format!("den_bits must be at most 62, got {}", self.den_bits));
        }
        if self.equality_percent > 100 || self.small_percent > 100 {
            return bad("percentages must be at most 100".into());
        }
        match self.statement {
            StatementKind::Holder | StatementKind::Cbs => {
                if self.m_min < 2 {
                    return Err(Error::TooFewColumns {
                        need: 2,
                        got: self.m_min,
                    });
                }
            }
            StatementKind::Minkowski | StatementKind::Chebyshev => {
                if self.m_min < 1 {
                    return Err(Error::TooFewColumns {
                        need: 1,
                        got: self.m_min,
                    });
                }
            }
            StatementKind::Application => {}
            StatementKind::Menelaus => {
                if self.n_min < 3 {
                    return bad(format!("a polygon needs n >= 3, got {}", self.n_min));
                }
            }
        }
        if matches!(self.statement, StatementKind::Holder | StatementKind::Cbs | StatementKind::Minkowski | StatementKind::Chebyshev)
            && self.n_min < 1
        {
            return bad("n must be at least 1".into());
        }
        if self.statement == StatementKind::Holder
            && self.exponent_mode == ExponentMode::IntegerTuples
            && self.m_max > MAX_ENUMERATION_M
        {
            return bad(format!(
                "integer exponent tuples are enumerated only up to m = {MAX_ENUMERATION_M}"
            ));
        }
        if self.statement == StatementKind::Minkowski {
            if self.minkowski_p.is_empty() {
                return bad("minkowski_p must not be empty".into());
            }
            if let Some(p) = self.minkowski_p.iter().find(|p| **p < Rational::one()) {
                return Err(Error::ExponentBelowOne(p.clone()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_uses_field_names_and_defaults() {
        let s: GenSpec = serde_json::from_str(r#"{"statement":"cbs","m_max":3}"#).unwrap();
        assert_eq!(s.statement, StatementKind::Cbs);
        assert_eq!(s.m_max, 3);
        assert_eq!(s.num_bits, 16);
        let text = serde_json::to_string(&GenSpec::for_statement(StatementKind::Minkowski)).unwrap();
        assert!(text.contains(r#""minkowski_p":["1","3/2","2","3"]"#));
    }

    #[test]
    fn invalid_specs() {
        let s = GenSpec::for_statement(StatementKind::Holder).with_m(1, 3);
        assert!(matches!(s.validate(), Err(Error::TooFewColumns { .. })));
        let s = GenSpec::for_statement(StatementKind::Holder).with_n(4, 2);
        assert!(matches!(s.validate(), Err(Error::BadGenSpec(_))));
        let s = GenSpec::for_statement(StatementKind::Menelaus).with_n(2, 5);
        assert!(s.validate().is_err());
        for k in StatementKind::ALL {
            GenSpec::for_statement(k).validate().unwrap();
        }
    }
}
