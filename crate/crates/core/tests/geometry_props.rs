use ineqrec::gen::{gen_polygon_and_transversal, SplitMix64};
use ineqrec::geometry::{collinear_ratio, menelaus_decompose, menelaus_product, transversal_points, Line, Point, Polygon};
use ineqrec::instance::MenelausInstance;
use ineqrec::numeric::Rational;
use ineqrec::trace::TraceStep;
use proptest::prelude::*;

fn configuration() -> impl Strategy<Value = (Polygon, Line)> {
    (3usize..=9, any::<u64>()).prop_map(|(n, seed)| {
        gen_polygon_and_transversal(n, &mut SplitMix64::new(seed)).unwrap()
    })
}

/// `x ↦ s·x + t`, applied to the polygon and to the line.
fn similar(poly: &Polygon, line: &Line, s: &Rational, tx: &Rational, ty: &Rational) -> (Polygon, Line) {
    let vertices = poly
        .vertices()
        .iter()
        .map(|v| Point::new(s * &v.x + tx, s * &v.y + ty))
        .collect();
    let (a, b, c) = line.coefficients();
    let c = c * s - a * tx - b * ty;
    (Polygon::new(vertices).unwrap(), Line::new(a.clone(), b.clone(), c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_is_exactly_one((poly, line) in configuration()) {
        prop_assert!(menelaus_product(&poly, &line).unwrap().is_one());
    }

    #[test]
    fn ratios_survive_similarity(
        (poly, line) in configuration(),
        s in (1i64..=20, 1i64..=5), tx in -50i64..50, ty in -50i64..50,
    ) {
        let s = Rational::new(s.0, s.1).unwrap();
        let (p2, l2) = similar(&poly, &line, &s, &Rational::from(tx), &Rational::from(ty));
        let before = transversal_points(&poly, &line).unwrap().ratios;
        let after = transversal_points(&p2, &l2).unwrap().ratios;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn every_cut_closes((poly, line) in configuration()) {
        let trace = menelaus_decompose(&poly, &line).unwrap();
        prop_assert_eq!(trace.steps.len(), poly.len() - 3);
        for step in &trace.steps {
            let TraceStep::MenelausCut(cut) = step else {
                panic!("unexpected step {step:?}");
            };
            prop_assert!(cut.triangle_product().is_one());
            prop_assert!(cut.remainder_product().is_one());
            prop_assert!((cut.triangle_cut_factor() * cut.remainder_cut_factor()).is_one());
        }
    }

    #[test]
    fn moving_one_point_breaks_the_product((poly, line) in configuration(), side in 0usize..9, t in (-8i64..8, 1i64..5)) {
        let side = side % poly.len();
        let t = Rational::new(t.0, t.1).unwrap();
        let mut points = transversal_points(&poly, &line).unwrap().points;
        let (a, b) = poly.side(side);
        let (dx, dy) = b.sub(a);
        let moved = Point::new(&a.x + &t * &dx, &a.y + &t * &dy);
        prop_assume!(!t.is_zero() && !t.is_one());
        prop_assume!(collinear_ratio(&moved, a, b).unwrap() != collinear_ratio(&points[side], a, b).unwrap());
        points[side] = moved;
        let mut g = MenelausInstance::new(poly, line);
        g.points = Some(points);
        prop_assert!(!g.product().unwrap().is_one());
    }
}
