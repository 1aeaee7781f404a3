use super::StepCheck;
use crate::error::Result;
use crate::geometry::{transversal_points, MenelausCutStep, Transversal};
use crate::inequality::{CheckConfig, Evidence, Verdict};
use crate::numeric::Rational;

fn unit_verdict(product: Rational) -> Verdict {
    if product.is_one() {
        Verdict::HoldsWithEquality
    } else {
        Verdict::Violated {
            evidence: Evidence::Value {
                computed: product,
                expected: Rational::one(),
            },
        }
    }
}

/// The stored points and ratios are exactly the ones the line produces.
pub(super) fn transversal_consistent(t: &Transversal) -> bool {
    transversal_points(&t.polygon, &t.line).is_ok_and(|fresh| &fresh == t)
}

pub(super) fn triangle_verdict(t: &Transversal, cfg: &CheckConfig) -> Result<Verdict> {
    cfg.validate()?;
    Ok(unit_verdict(t.product()))
}

impl StepCheck for MenelausCutStep {
    /// Both sub-products must equal 1.
    fn claim_verdict(&self, cfg: &CheckConfig) -> Result<Verdict> {
        cfg.validate()?;
        let tri = self.triangle_product();
        if !tri.is_one() {
            return Ok(unit_verdict(tri));
        }
        Ok(unit_verdict(self.remainder_product()))
    }

    fn bookkeeping_ok(&self) -> bool {
        let v = self.polygon.vertices();
        let n = v.len();
        if n < 4 || !transversal_consistent(&self.triangle) || !transversal_consistent(&self.remainder) {
            return false;
        }
        let shape_ok = self.diagonal == [v[1].clone(), v[n - 1].clone()]
            && self.triangle.polygon.vertices() == [v[0].clone(), v[1].clone(), v[n - 1].clone()]
            && self.remainder.polygon.vertices()[0] == v[n - 1]
            && self.remainder.polygon.vertices()[1..] == v[1..n - 1]
            && self.triangle.line == self.line
            && self.remainder.line == self.line;
        let cut_ok = self.triangle.points.get(1) == Some(&self.cut_point)
            && self.remainder.points.first() == Some(&self.cut_point)
            && (self.triangle_cut_factor() * self.remainder_cut_factor()).is_one();
        // The two sub-products multiply to the full product of the polygon
        // being cut, because the cut-point factors cancel.
        let telescoping_ok = transversal_points(&self.polygon, &self.line)
            .is_ok_and(|full| full.product() == self.triangle_product() * self.remainder_product());
        shape_ok && cut_ok && telescoping_ok
    }
}
