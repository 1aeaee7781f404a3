use serde::{Deserialize, Serialize};

use super::{collinear_ratio, line_line_intersection, GeometryError, Line, Point, Polygon};
use crate::numeric::Rational;

/// A line cutting every side line of a polygon away from the vertices,
/// with the cut points `M_i` and unsigned ratios `M_iA_i / M_iA_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    pub polygon: Polygon,
    pub line: Line,
    pub points: Vec<Point>,
    pub ratios: Vec<Rational>,
}

impl Transversal {
    pub fn product(&self) -> Rational {
        self.ratios.iter().product()
    }
}

pub fn transversal_points(poly: &Polygon, d: &Line) -> Result<Transversal, GeometryError> {
    let n = poly.len();
    let mut points = Vec::with_capacity(n);
    let mut ratios = Vec::with_capacity(n);
    for i in 0..n {
        let m = match line_line_intersection(d, &poly.side_line(i)) {
            Ok(m) => m,
            Err(GeometryError::Parallel | GeometryError::Coincident) => {
                return Err(GeometryError::ParallelSide(i))
            }
            Err(e) => return Err(e),
        };
        let (a, b) = poly.side(i);
        if &m == a {
            return Err(GeometryError::ThroughVertex(i));
        }
        if &m == b {
            return Err(GeometryError::ThroughVertex((i + 1) % n));
        }
        ratios.push(collinear_ratio(&m, a, b)?);
        points.push(m);
    }
    Ok(Transversal {
        polygon: poly.clone(),
        line: d.clone(),
        points,
        ratios,
    })
}

pub fn menelaus_product(poly: &Polygon, d: &Line) -> Result<Rational, GeometryError> {
    Ok(transversal_points(poly, d)?.product())
}

/// The ratio product for arbitrary points `M_i`, each required to lie on
/// side line `i` and off its endpoints. Used to evaluate perturbed
/// configurations that are no longer cut by a single line.
pub fn menelaus_product_from_points(
    poly: &Polygon,
    points: &[Point],
) -> Result<Rational, GeometryError> {
    if points.len() != poly.len() {
        return Err(GeometryError::PointCount {
            expected: poly.len(),
            got: points.len(),
        });
    }
    let mut prod = Rational::one();
    for (i, m) in points.iter().enumerate() {
        let (a, b) = poly.side(i);
        let r = collinear_ratio(m, a, b).map_err(|e| match e {
            GeometryError::NonCollinear => GeometryError::PointOffSide(i),
            other => other,
        })?;
        prod = prod * r;
    }
    Ok(prod)
}
