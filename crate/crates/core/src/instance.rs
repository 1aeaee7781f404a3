//! A single claim instance of any supported statement, with one entry
//! point for validation, checking and slack measurement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{menelaus_product, menelaus_product_from_points, Line, Point, Polygon};
use crate::inequality::{
    application_sides, cbs_sides, chebyshev_sides, check_application, check_cbs, check_chebyshev,
    check_holder, check_minkowski, holder_sides_unchecked, minkowski_sides, slack_of_sides,
    ApplicationInstance, CheckConfig, Evidence, ExponentVector, NonNegMatrix, Sides, Slack,
    SortedMatrix, Verdict,
};
use crate::numeric::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatementKind {
    Holder,
    Cbs,
    Minkowski,
    Chebyshev,
    Application,
    Menelaus,
}

impl StatementKind {
    pub const ALL: [StatementKind; 6] = [
        StatementKind::Holder,
        StatementKind::Cbs,
        StatementKind::Minkowski,
        StatementKind::Chebyshev,
        StatementKind::Application,
        StatementKind::Menelaus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatementKind::Holder => "holder",
            StatementKind::Cbs => "cbs",
            StatementKind::Minkowski => "minkowski",
            StatementKind::Chebyshev => "chebyshev",
            StatementKind::Application => "application",
            StatementKind::Menelaus => "menelaus",
        }
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatementKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatementKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown statement {s:?}")))
    }
}

/// A polygon cut by a line. When `points` is present the ratios are taken
/// from those points instead of the line's intersections, which is how
/// displaced (non-transversal) configurations are represented.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MenelausInstance {
    pub vertices: Polygon,
    pub line: Line,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Point>>,
}

impl MenelausInstance {
    pub fn new(vertices: Polygon, line: Line) -> Self {
        MenelausInstance {
            vertices,
            line,
            points: None,
        }
    }

    pub fn product(&self) -> Result<Rational> {
        Ok(match &self.points {
            None => menelaus_product(&self.vertices, &self.line)?,
            Some(p) => menelaus_product_from_points(&self.vertices, p)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "statement", rename_all = "snake_case")]
pub enum Instance {
    Holder {
        #[serde(flatten)]
        matrix: NonNegMatrix,
        exponents: ExponentVector,
    },
    Cbs {
        #[serde(flatten)]
        matrix: NonNegMatrix,
    },
    Minkowski {
        #[serde(flatten)]
        matrix: NonNegMatrix,
        p: Rational,
    },
    /// Stored unsorted-capable so that sort-breaking mutations can be
    /// represented; sortedness is enforced by [`Instance::validate`].
    Chebyshev {
        #[serde(flatten)]
        matrix: NonNegMatrix,
    },
    Application(ApplicationInstance),
    Menelaus(MenelausInstance),
}

impl Instance {
    pub fn kind(&self) -> StatementKind {
        match self {
            Instance::Holder { .. } => StatementKind::Holder,
            Instance::Cbs { .. } => StatementKind::Cbs,
            Instance::Minkowski { .. } => StatementKind::Minkowski,
            Instance::Chebyshev { .. } => StatementKind::Chebyshev,
            Instance::Application(_) => StatementKind::Application,
            Instance::Menelaus(_) => StatementKind::Menelaus,
        }
    }

    /// `(n, m)`: rows and columns, or vertex count and 0 for Menelaus.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Instance::Holder { matrix, .. }
            | Instance::Cbs { matrix }
            | Instance::Minkowski { matrix, .. }
            | Instance::Chebyshev { matrix } => (matrix.rows(), matrix.cols()),
            Instance::Application(_) => (2, 3),
            Instance::Menelaus(g) => (g.vertices.len(), 0),
        }
    }

    pub fn matrix(&self) -> Option<&NonNegMatrix> {
        match self {
            Instance::Holder { matrix, .. }
            | Instance::Cbs { matrix }
            | Instance::Minkowski { matrix, .. }
            | Instance::Chebyshev { matrix } => Some(matrix),
            _ => None,
        }
    }

    /// Parse an instance file for a known statement. The `"statement"` tag
    /// may be omitted from the file.
    pub fn from_json_for(kind: StatementKind, text: &str) -> Result<Self> {
        let mut v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object_mut()
            .ok_or_else(|| Error::Parse("instance must be a JSON object".into()))?;
        match obj.get("statement").and_then(|s| s.as_str()) {
            Some(s) if s != kind.name() => {
                return Err(Error::Parse(format!(
                    "file declares statement {s:?}, expected {:?}",
                    kind.name()
                )))
            }
            Some(_) => {}
            None => {
                obj.insert("statement".into(), kind.name().into());
            }
        }
        let inst: Instance = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    /// Check every hypothesis of the statement.
    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Holder { matrix, exponents } => {
                crate::inequality::holder_sides(matrix, exponents).map(drop)
            }
            Instance::Cbs { matrix } => cbs_sides(matrix).map(drop),
            Instance::Minkowski { matrix, p } => minkowski_sides(matrix, p).map(drop),
            Instance::Chebyshev { matrix } => SortedMatrix::new(matrix.clone()).map(drop),
            Instance::Application(a) => a.validate(),
            Instance::Menelaus(g) => {
                if let Some(p) = &g.points {
                    menelaus_product_from_points(&g.vertices, p)?;
                } else {
                    menelaus_product(&g.vertices, &g.line)?;
                }
                Ok(())
            }
        }
    }

    /// Run the statement's checker, rejecting instances that break a
    /// hypothesis.
    pub fn check(&self, cfg: &CheckConfig) -> Result<Verdict> {
        match self {
            Instance::Holder { matrix, exponents } => check_holder(matrix, exponents, cfg),
            Instance::Cbs { matrix } => check_cbs(matrix, cfg),
            Instance::Minkowski { matrix, p } => check_minkowski(matrix, p, cfg),
            Instance::Chebyshev { matrix } => {
                check_chebyshev(&SortedMatrix::new(matrix.clone())?, cfg)
            }
            Instance::Application(a) => check_application(a, cfg),
            Instance::Menelaus(g) => {
                cfg.validate()?;
                menelaus_verdict(g.product()?)
            }
        }
    }

    /// Both sides of the claim without hypothesis checks (only shape and
    /// sign constraints are enforced). `None` for Menelaus, which is an
    /// identity rather than an inequality.
    pub fn claim_sides(&self) -> Result<Option<Sides>> {
        Ok(Some(match self {
            Instance::Holder { matrix, exponents } => holder_sides_unchecked(matrix, exponents)?,
            Instance::Cbs { matrix } => cbs_sides(matrix)?,
            Instance::Minkowski { matrix, p } => minkowski_sides(matrix, p)?,
            Instance::Chebyshev { matrix } => chebyshev_sides(matrix)?,
            Instance::Application(a) => {
                a.validate()?;
                application_sides(a)
            }
            Instance::Menelaus(_) => return Ok(None),
        }))
    }

    /// Evaluate the claim as written, possibly with its direction reversed,
    /// without assuming any hypothesis. This is what negative controls run:
    /// no equality characterization is consulted since those depend on the
    /// hypotheses.
    pub fn evaluate_claim(&self, flipped: bool, cfg: &CheckConfig) -> Result<Verdict> {
        match self.claim_sides()? {
            Some(sides) => {
                let sides = if flipped { sides.flipped() } else { sides };
                sides.decide(cfg, || Ok(false))
            }
            None => match self {
                Instance::Menelaus(g) => {
                    cfg.validate()?;
                    menelaus_verdict(g.product()?)
                }
                _ => unreachable!("only Menelaus has no sides"),
            },
        }
    }

    /// Slack ratio of a valid instance, in `[0, 1]` up to enclosure width.
    pub fn slack_ratio(&self, precision_bits: u32) -> Result<Slack> {
        self.validate()?;
        match self.claim_sides()? {
            Some(sides) => slack_of_sides(&sides, precision_bits),
            None => Err(Error::Unsupported(
                "slack is undefined for an identity".into(),
            )),
        }
    }
}

fn menelaus_verdict(product: Rational) -> Result<Verdict> {
    Ok(if product.is_one() {
        Verdict::HoldsWithEquality
    } else {
        Verdict::Violated {
            evidence: Evidence::Value {
                computed: product,
                expected: Rational::one(),
            },
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_format_without_statement_tag() {
        let text = r#"{"n":2,"m":3,"entries":[["1","1","1"],["2","1","1"]],"exponents":["2","3","6"]}"#;
        let inst = Instance::from_json_for(StatementKind::Holder, text).unwrap();
        assert_eq!(inst.dims(), (2, 3));
        assert_eq!(inst.check(&CheckConfig::default()).unwrap(), Verdict::Holds);
        let back: Instance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn mismatched_statement_tag_is_rejected() {
        let text = r#"{"statement":"cbs","n":1,"m":2,"entries":[["1","1"]]}"#;
        assert!(Instance::from_json_for(StatementKind::Holder, text).is_err());
    }

    #[test]
    fn geometry_file_format() {
        let text = r#"{"vertices":[["0","0"],["4","0"],["0","4"]],"line":["1","-2","-2"]}"#;
        let inst = Instance::from_json_for(StatementKind::Menelaus, text).unwrap();
        assert_eq!(inst.check(&CheckConfig::default()).unwrap(), Verdict::HoldsWithEquality);
    }

    #[test]
    fn unsorted_chebyshev_is_rejected_but_evaluable() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[2, 1]]).unwrap();
        let inst = Instance::Chebyshev { matrix: m };
        assert!(matches!(
            inst.check(&CheckConfig::default()),
            Err(Error::Unsorted { .. })
        ));
        let v = inst.evaluate_claim(false, &CheckConfig::default()).unwrap();
        match v {
            Verdict::Violated {
                evidence: Evidence::Interval { .. } | Evidence::Exact { .. },
            } => {}
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn flipped_strict_claim_is_violated() {
        let m = NonNegMatrix::from_int_columns(&[&[1, 2], &[3, 4]]).unwrap();
        let inst = Instance::Cbs { matrix: m };
        assert!(inst.evaluate_claim(true, &CheckConfig::default()).unwrap().is_violated());
        assert_eq!(inst.evaluate_claim(false, &CheckConfig::default()).unwrap(), Verdict::Holds);
    }

    #[test]
    fn statement_names_round_trip() {
        for k in StatementKind::ALL {
            assert_eq!(k.name().parse::<StatementKind>().unwrap(), k);
        }
    }
}
