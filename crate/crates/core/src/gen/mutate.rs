use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::geometry::{collinear_ratio, transversal_points, Point};
use crate::inequality::{CheckConfig, ExponentVector, Verdict};
use crate::instance::{Instance, StatementKind};
use crate::numeric::Rational;

/// The one hypothesis a negative control breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// Scale every Hölder exponent by 10/9, so `Σ 1/p_k = 9/10`.
    BreakConjugacy,
    /// Claim the reverse inequality.
    FlipDirection,
    /// Reverse one Chebyshev column.
    BreakSort,
    /// Move one Menelaus point `M_i` along its side line.
    DisplaceTransversalPoint,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [
        MutationKind::BreakConjugacy,
        MutationKind::FlipDirection,
        MutationKind::BreakSort,
        MutationKind::DisplaceTransversalPoint,
    ];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            MutationKind::BreakConjugacy => "conjugacy",
            MutationKind::FlipDirection => "direction",
            MutationKind::BreakSort => "sort",
            MutationKind::DisplaceTransversalPoint => "transversal",
        }
    }

    pub fn applies_to(self, kind: StatementKind) -> bool {
        match self {
            MutationKind::BreakConjugacy => kind == StatementKind::Holder,
            MutationKind::FlipDirection => kind != StatementKind::Menelaus,
            MutationKind::BreakSort => kind == StatementKind::Chebyshev,
            MutationKind::DisplaceTransversalPoint => kind == StatementKind::Menelaus,
        }
    }

    /// The statement a negative control for this mutation runs on by
    /// default.
    pub fn default_statement(self) -> StatementKind {
        match self {
            MutationKind::BreakConjugacy => StatementKind::Holder,
            MutationKind::FlipDirection => StatementKind::Chebyshev,
            MutationKind::BreakSort => StatementKind::Chebyshev,
            MutationKind::DisplaceTransversalPoint => StatementKind::Menelaus,
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MutationKind::ALL
            .into_iter()
            .find(|k| {
                k.name() == s || serde_json::to_value(k).is_ok_and(|v| v.as_str() == Some(s))
            })
            .ok_or_else(|| Error::Parse(format!("unknown mutation {s:?}")))
    }
}

/// An instance with one hypothesis broken. `flipped` means the claim is
/// evaluated in the reverse direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutatedInstance {
    pub mutation: MutationKind,
    pub instance: Instance,
    #[serde(default)]
    pub flipped: bool,
}

impl MutatedInstance {
    /// The claim as written, with no hypothesis assumed.
    pub fn evaluate(&self, cfg: &CheckConfig) -> Result<Verdict> {
        self.instance.evaluate_claim(self.flipped, cfg)
    }

    pub fn with_instance(&self, instance: Instance) -> Self {
        MutatedInstance {
            instance,
            ..self.clone()
        }
    }
}

fn not_applicable(mutation: MutationKind, kind: StatementKind) -> Error {
    Error::Unsupported(format!("mutation {mutation} does not apply to {kind}"))
}

/// `mutate_to_false`: break exactly the hypothesis named by `mutation`.
pub fn mutate_to_false(
    mutation: MutationKind,
    instance: &Instance,
    rng: &mut SplitMix64,
) -> Result<MutatedInstance> {
    if !mutation.applies_to(instance.kind()) {
        return Err(not_applicable(mutation, instance.kind()));
    }
    let mut flipped = false;
    let mutated = match (mutation, instance) {
        (MutationKind::BreakConjugacy, Instance::Holder { matrix, exponents }) => {
            let scale = Rational::new(10, 9).expect("literal");
            let p = exponents.values().iter().map(|p| p * &scale).collect();
            Instance::Holder {
                matrix: matrix.clone(),
                exponents: ExponentVector::new(p)?,
            }
        }
        (MutationKind::FlipDirection, inst) => {
            flipped = true;
            inst.clone()
        }
        (MutationKind::BreakSort, Instance::Chebyshev { matrix }) => {
            let col = rng.below(matrix.cols() as u64) as usize;
            let mut rows = matrix.clone().into_rows();
            let mut column: Vec<Rational> = rows.iter().map(|r| r[col].clone()).collect();
            column.reverse();
            for (r, v) in rows.iter_mut().zip(column) {
                r[col] = v;
            }
            Instance::Chebyshev {
                matrix: crate::inequality::NonNegMatrix::from_rows(rows)?,
            }
        }
        (MutationKind::DisplaceTransversalPoint, Instance::Menelaus(g)) => {
            let mut points = match &g.points {
                Some(p) => p.clone(),
                None => transversal_points(&g.vertices, &g.line)?.points,
            };
            let side = rng.below(points.len() as u64) as usize;
            points[side] = displaced_point(&g.vertices, side, &points[side], rng)?;
            let mut g = g.clone();
            g.points = Some(points);
            Instance::Menelaus(g)
        }
        _ => return Err(not_applicable(mutation, instance.kind())),
    };
    Ok(MutatedInstance {
        mutation,
        instance: mutated,
        flipped,
    })
}

/// A point `A + t(B − A)` on side `side`, off both endpoints, whose ratio
/// differs from that of `current`.
pub(crate) fn displaced_point(
    poly: &crate::geometry::Polygon,
    side: usize,
    current: &Point,
    rng: &mut SplitMix64,
) -> Result<Point> {
    let (a, b) = poly.side(side);
    let old = collinear_ratio(current, a, b)?;
    let (dx, dy) = b.sub(a);
    loop {
        let t = Rational::new(rng.range_i64(-16, 16), rng.range(1, 8)).expect("den >= 1");
        if t.is_zero() || t.is_one() {
            continue;
        }
        let p = Point::new(&a.x + &t * &dx, &a.y + &t * &dy);
        if collinear_ratio(&p, a, b)? != old {
            return Ok(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Line, Polygon};
    use crate::inequality::{Evidence, NonNegMatrix};
    use crate::instance::MenelausInstance;

    #[test]
    fn names_round_trip() {
        for k in MutationKind::ALL {
            assert_eq!(k.name().parse::<MutationKind>().unwrap(), k);
        }
        assert_eq!("break_sort".parse::<MutationKind>().unwrap(), MutationKind::BreakSort);
        assert!("nope".parse::<MutationKind>().is_err());
    }

    #[test]
    fn conjugacy_defect_is_one_tenth() {
        let inst = Instance::Holder {
            matrix: NonNegMatrix::from_int_columns(&[&[1, 1], &[1, 1], &[1, 1]]).unwrap(),
            exponents: ExponentVector::from_ints(&[2, 3, 6]).unwrap(),
        };
        let m = mutate_to_false(MutationKind::BreakConjugacy, &inst, &mut SplitMix64::new(0)).unwrap();
        let Instance::Holder { exponents, .. } = &m.instance else { panic!() };
        assert_eq!(exponents.sum_of_reciprocals(), Rational::new(9, 10).unwrap());
        // All-ones rows: 2 against 2^{9/10}.
        assert!(m.evaluate(&CheckConfig::default()).unwrap().is_violated());
    }

    #[test]
    fn anti_sorted_chebyshev_is_violated() {
        let sorted = Instance::Chebyshev {
            matrix: NonNegMatrix::from_int_columns(&[&[2, 1], &[2, 1]]).unwrap(),
        };
        let m = mutate_to_false(MutationKind::BreakSort, &sorted, &mut SplitMix64::new(0)).unwrap();
        let expected = [
            NonNegMatrix::from_int_columns(&[&[1, 2], &[2, 1]]).unwrap(),
            NonNegMatrix::from_int_columns(&[&[2, 1], &[1, 2]]).unwrap(),
        ];
        assert!(expected.contains(m.instance.matrix().unwrap()));
        // 2 < 9/4
        match m.evaluate(&CheckConfig::default()).unwrap() {
            Verdict::Violated { evidence: Evidence::Interval { lhs, rhs } } => {
                assert!(lhs.contains(&Rational::from(2)));
                assert!(rhs.contains(&Rational::new(9, 4).unwrap()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn displaced_square_point() {
        let sq = Polygon::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap();
        let line = Line::from_ints(1, -2, -2).unwrap();
        let mut g = MenelausInstance::new(sq.clone(), line);
        let mut pts = transversal_points(&sq, &g.line).unwrap().points;
        pts[1] = Point::from_ints(4, 2);
        g.points = Some(pts);
        assert_eq!(g.product().unwrap(), Rational::from(3));

        let mut rng = SplitMix64::new(4);
        for _ in 0..20 {
            let inst = Instance::Menelaus(MenelausInstance::new(sq.clone(), g.line.clone()));
            let m = mutate_to_false(MutationKind::DisplaceTransversalPoint, &inst, &mut rng).unwrap();
            assert!(m.evaluate(&CheckConfig::default()).unwrap().is_violated());
        }
    }

    #[test]
    fn wrong_statement_is_rejected() {
        let inst = Instance::Cbs {
            matrix: NonNegMatrix::from_int_columns(&[&[1], &[1]]).unwrap(),
        };
        for k in [MutationKind::BreakConjugacy, MutationKind::BreakSort, MutationKind::DisplaceTransversalPoint] {
            assert!(matches!(
                mutate_to_false(k, &inst, &mut SplitMix64::new(0)),
                Err(Error::Unsupported(_))
            ));
        }
    }
}
