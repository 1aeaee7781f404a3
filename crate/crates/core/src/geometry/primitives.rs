use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::numeric::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[Rational; 2]", into = "[Rational; 2]")]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl From<[Rational; 2]> for Point {
    fn from([x, y]: [Rational; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [Rational; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(x.into(), y.into())
    }

    pub fn sub(&self, o: &Point) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

/// `a·x + b·y + c = 0`, scaled so the first nonzero of `a`, `b` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Rational; 3]", into = "[Rational; 3]")]
pub struct Line {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl TryFrom<[Rational; 3]> for Line {
    type Error = GeometryError;
    fn try_from([a, b, c]: [Rational; 3]) -> Result<Self, GeometryError> {
        Line::new(a, b, c)
    }
}

impl From<Line> for [Rational; 3] {
    fn from(l: Line) -> Self {
        [l.a, l.b, l.c]
    }
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, GeometryError> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return Err(GeometryError::DegenerateLine);
        };
        Ok(Line {
            a: &a / &lead,
            b: &b / &lead,
            c: &c / &lead,
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self, GeometryError> {
        Line::new(a.into(), b.into(), c.into())
    }

    /// The supporting line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Result<Self, GeometryError> {
        if p == q {
            return Err(GeometryError::DegenerateSegment);
        }
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = -(&a * &p.x + &b * &p.y);
        Line::new(a, b, c)
    }

    pub fn coefficients(&self) -> (&Rational, &Rational, &Rational) {
        (&self.a, &self.b, &self.c)
    }

    /// Signed residual `a·x + b·y + c`.
    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }
}

/// `line_line_intersection`: the exact intersection point by Cramer's rule.
pub fn line_line_intersection(l1: &Line, l2: &Line) -> Result<Point, GeometryError> {
    let det = &l1.a * &l2.b - &l2.a * &l1.b;
    if det.is_zero() {
        // Canonical scaling makes identical lines compare equal.
        return Err(if l1 == l2 {
            GeometryError::Coincident
        } else {
            GeometryError::Parallel
        });
    }
    let x = (&l1.b * &l2.c - &l2.b * &l1.c) / det.clone();
    let y = (&l1.c * &l2.a - &l2.c * &l1.a) / det;
    Ok(Point { x, y })
}

/// `collinear_ratio`: `dist(M, A) / dist(M, B)` for collinear `M`, `A`, `B`.
///
/// With `M = A + t(B − A)` the two distances are `|t|·|AB|` and
/// `|1 − t|·|AB|`, so the ratio `|t| / |1 − t|` is rational even when the
/// lengths are not.
pub fn collinear_ratio(m: &Point, a: &Point, b: &Point) -> Result<Rational, GeometryError> {
    if a == b {
        return Err(GeometryError::DegenerateSegment);
    }
    let (dx, dy) = b.sub(a);
    let (mx, my) = m.sub(a);
    if !(&dx * &my - &dy * &mx).is_zero() {
        return Err(GeometryError::NonCollinear);
    }
    if m == a || m == b {
        return Err(GeometryError::CoincidentWithEndpoint);
    }
    let t = if dx.abs() >= dy.abs() { mx / dx } else { my / dy };
    let one_minus_t = Rational::one() - &t;
    Ok(t.abs() / one_minus_t.abs())
}

/// Vertices `A_1 … A_n`, `n ≥ 3`, indexed cyclically; consecutive vertices
/// are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for Polygon {
    type Error = GeometryError;
    fn try_from(v: Vec<Point>) -> Result<Self, GeometryError> {
        Polygon::new(v)
    }
}

impl From<Polygon> for Vec<Point> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeometryError::RepeatedVertex(i));
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn from_ints(v: &[(i64, i64)]) -> Result<Self, GeometryError> {
        Polygon::new(v.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex `A_i` for a 0-based cyclic index.
    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    /// Side `i` runs from `A_i` to `A_{i+1}` (0-based, cyclic).
    pub fn side(&self, i: usize) -> (&Point, &Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn side_line(&self, i: usize) -> Line {
        let (p, q) = self.side(i);
        Line::through(p, q).expect("consecutive vertices are distinct")
    }
}
