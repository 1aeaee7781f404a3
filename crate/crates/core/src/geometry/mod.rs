//! Exact rational plane geometry for transversals of n-gons: side-line
//! intersections, unsigned collinear ratios, the n-gon Menelaus product and
//! its diagonal-cut decomposition into triangles.

mod decompose;
mod primitives;
mod transversal;

pub use decompose::{menelaus_decompose, MenelausBase, MenelausCutStep};
pub use primitives::{collinear_ratio, line_line_intersection, Line, Point, Polygon};
pub use transversal::{
    menelaus_product, menelaus_product_from_points, transversal_points, Transversal,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("line coefficients a and b are both zero")]
    DegenerateLine,
    #[error("lines are parallel")]
    Parallel,
    #[error("lines coincide")]
    Coincident,
    #[error("points are not collinear")]
    NonCollinear,
    #[error("point coincides with a segment endpoint")]
    CoincidentWithEndpoint,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and its successor coincide")]
    RepeatedVertex(usize),
    #[error("transversal is parallel to (or contains) side {0}")]
    ParallelSide(usize),
    #[error("transversal passes through vertex {0}")]
    ThroughVertex(usize),
    #[error("transversal is parallel to the cutting diagonal")]
    DiagonalParallel,
    #[error("cutting diagonal meets the transversal at one of its endpoints")]
    DiagonalThroughCutVertex,
    #[error("cutting diagonal has coincident endpoints")]
    DegenerateDiagonal,
    #[error("expected {expected} points, got {got}")]
    PointCount { expected: usize, got: usize },
    #[error("point for side {0} is not on that side's supporting line")]
    PointOffSide(usize),
}
