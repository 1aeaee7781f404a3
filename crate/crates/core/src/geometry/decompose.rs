use serde::{Deserialize, Serialize};

use super::{line_line_intersection, transversal_points, GeometryError, Line, Point, Polygon, Transversal};
use crate::instance::{Instance, MenelausInstance};
use crate::numeric::Rational;
use crate::trace::{ProofTrace, TraceBase, TraceStep};

/// One cut of a polygon `A_1 … A_n` along the diagonal `A_2 A_n` into the
/// triangle `A_1 A_2 A_n` and the polygon `A_n A_2 A_3 … A_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MenelausCutStep {
    /// The polygon being cut.
    pub polygon: Polygon,
    pub line: Line,
    pub diagonal: [Point; 2],
    pub cut_point: Point,
    pub triangle: Transversal,
    pub remainder: Transversal,
}

impl MenelausCutStep {
    /// `dist(M, A_2) / dist(M, A_n)` as seen from the triangle.
    pub fn triangle_cut_factor(&self) -> &Rational {
        &self.triangle.ratios[1]
    }

    /// `dist(M, A_n) / dist(M, A_2)` as seen from the remainder.
    pub fn remainder_cut_factor(&self) -> &Rational {
        &self.remainder.ratios[0]
    }

    pub fn triangle_product(&self) -> Rational {
        self.triangle.product()
    }

    pub fn remainder_product(&self) -> Rational {
        self.remainder.product()
    }
}

/// The final triangle reached by repeated cuts.
pub type MenelausBase = Transversal;

/// Cut once along `A_2 A_n` (0-based: vertices 1 and n−1).
pub(crate) fn cut_once(poly: &Polygon, d: &Line) -> Result<MenelausCutStep, GeometryError> {
    let n = poly.len();
    debug_assert!(n >= 4);
    let v = poly.vertices();
    let (a2, an) = (&v[1], &v[n - 1]);
    if a2 == an {
        return Err(GeometryError::DegenerateDiagonal);
    }
    let diag = Line::through(a2, an)?;
    let cut_point = match line_line_intersection(d, &diag) {
        Ok(p) => p,
        Err(GeometryError::Parallel | GeometryError::Coincident) => {
            return Err(GeometryError::DiagonalParallel)
        }
        Err(e) => return Err(e),
    };
    if &cut_point == a2 || &cut_point == an {
        return Err(GeometryError::DiagonalThroughCutVertex);
    }
    let tri = Polygon::new(vec![v[0].clone(), a2.clone(), an.clone()])?;
    let mut rest = Vec::with_capacity(n - 1);
    rest.push(an.clone());
    rest.extend(v[1..n - 1].iter().cloned());
    let rest = Polygon::new(rest)?;
    Ok(MenelausCutStep {
        polygon: poly.clone(),
        line: d.clone(),
        diagonal: [a2.clone(), an.clone()],
        cut_point,
        triangle: transversal_points(&tri, d)?,
        remainder: transversal_points(&rest, d)?,
    })
}

/// The full chain of cuts down to a triangle.
pub(crate) fn cut_chain(
    poly: &Polygon,
    d: &Line,
) -> Result<(Vec<MenelausCutStep>, MenelausBase), GeometryError> {
    let mut steps = Vec::with_capacity(poly.len().saturating_sub(3));
    let mut current = poly.clone();
    while current.len() > 3 {
        let step = cut_once(&current, d)?;
        current = step.remainder.polygon.clone();
        steps.push(step);
    }
    let base = transversal_points(&current, d)?;
    Ok((steps, base))
}

/// `menelaus_decompose`: the n-gon identity as a chain of `n − 3` diagonal
/// cuts ending at a triangle.
pub fn menelaus_decompose(poly: &Polygon, d: &Line) -> crate::Result<ProofTrace> {
    transversal_points(poly, d)?;
    let (steps, base) = cut_chain(poly, d)?;
    Ok(ProofTrace::new(
        Instance::Menelaus(MenelausInstance::new(poly.clone(), d.clone())),
        steps.into_iter().map(TraceStep::MenelausCut).collect(),
        TraceBase::MenelausTriangle(base),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn line() -> Line {
        Line::from_ints(1, -2, -2).unwrap()
    }

    #[test]
    fn square_single_cut() {
        let sq = Polygon::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap();
        let (steps, base) = cut_chain(&sq, &line()).unwrap();
        assert_eq!(steps.len(), 1);
        let s = &steps[0];
        assert_eq!(s.cut_point, Point::new(q("10/3"), q("2/3")));
        assert_eq!(s.triangle.ratios, vec![q("1"), q("1/5"), q("5")]);
        assert_eq!(s.remainder.ratios, vec![q("5"), q("1/3"), q("3/5")]);
        assert!(s.triangle_product().is_one() && s.remainder_product().is_one());
        assert!((s.triangle_cut_factor() * s.remainder_cut_factor()).is_one());
        assert_eq!(base, s.remainder);
    }

    #[test]
    fn triangle_has_no_cuts() {
        let tri = Polygon::from_ints(&[(0, 0), (4, 0), (0, 4)]).unwrap();
        let (steps, base) = cut_chain(&tri, &line()).unwrap();
        assert!(steps.is_empty());
        assert!(base.product().is_one());
    }

    #[test]
    fn hexagon_three_cuts() {
        let hex = Polygon::from_ints(&[(0, 0), (5, -1), (9, 2), (8, 7), (3, 9), (-2, 4)]).unwrap();
        let d = Line::from_ints(3, 7, -20).unwrap();
        let (steps, base) = cut_chain(&hex, &d).unwrap();
        assert_eq!(steps.len(), 3);
        for s in &steps {
            assert!(s.triangle_product().is_one());
            assert!(s.remainder_product().is_one());
        }
        assert!(base.product().is_one());
    }

    #[test]
    fn diagonal_parallel_to_line() {
        // Diagonal A_2 A_4 runs from (4,0) to (0,4); the line x + y = 1 is parallel.
        let sq = Polygon::from_ints(&[(0, 0), (4, 0), (5, 5), (0, 4)]).unwrap();
        let d = Line::from_ints(1, 1, -1).unwrap();
        assert!(transversal_points(&sq, &d).is_ok());
        assert_eq!(cut_chain(&sq, &d).unwrap_err(), GeometryError::DiagonalParallel);
    }
}
