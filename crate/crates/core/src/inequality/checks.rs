//! Checkers for the m-fold Hölder, Cauchy–Buniakovski–Schwarz, Minkowski
//! and Chebyshev inequalities and the three-pair application inequality.

use serde::{Deserialize, Serialize};

use super::matrix::{NonNegMatrix, SortedMatrix};
use super::verdict::{CheckConfig, Relation, Sides, Verdict};
use super::ExponentVector;
use crate::error::{Error, Result};
use crate::numeric::{lcm_all, Expr, Rational};

/// Exponents up to this size are expanded to exact rational powers; larger
/// ones stay symbolic and are enclosed by intervals.
const EXACT_POWER_LIMIT: i64 = 1 << 16;

/// `Σ_i v_i^p`, exact when `p` is a modest integer.
pub(crate) fn power_sum(values: &[Rational], p: &Rational) -> Expr {
    match p.to_i64() {
        Some(k) if (0..=EXACT_POWER_LIMIT).contains(&k) => Expr::Const(
            values
                .iter()
                .map(|v| v.pow(k).expect("nonnegative exponent"))
                .sum(),
        ),
        _ => Expr::Sum(
            values
                .iter()
                .map(|v| Expr::Const(v.clone()).pow(p.clone()))
                .collect(),
        ),
    }
}

fn const_of(e: &Expr) -> Option<&Rational> {
    match e {
        Expr::Const(r) => Some(r),
        _ => None,
    }
}

/// True when all columns are pairwise proportional, i.e. every 2×2 minor
/// of the matrix vanishes.
pub(crate) fn columns_rank_at_most_one(cols: &[Vec<Rational>]) -> bool {
    let n = cols.first().map_or(0, Vec::len);
    for k in 0..cols.len() {
        for l in (k + 1)..cols.len() {
            for i in 0..n {
                for j in (i + 1)..n {
                    if &cols[k][i] * &cols[l][j] != &cols[k][j] * &cols[l][i] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Hölder equality characterization for arbitrary rational exponents: some
/// column vanishes, or the vectors `(a_ik^{p_k})_i` are pairwise
/// proportional. Fractional powers are cleared by raising every column to
/// the lcm of the exponent denominators.
pub(crate) fn holder_equality_by_powers(m: &NonNegMatrix, p: &[Rational]) -> Result<bool> {
    if (0..m.cols()).any(|k| m.column_is_zero(k)) {
        return Ok(true);
    }
    let clear = lcm_all(p.iter().map(Rational::denom));
    let mut powered = Vec::with_capacity(m.cols());
    for (k, pk) in p.iter().enumerate() {
        let e = (pk.numer() * &clear) / pk.denom();
        let e = i64::try_from(&e).map_err(|_| crate::numeric::NumericError::ExponentTooLarge)?;
        powered.push(
            m.column(k)
                .iter()
                .map(|a| a.pow(e))
                .collect::<std::result::Result<Vec<_>, _>>()?,
        );
    }
    Ok(columns_rank_at_most_one(&powered))
}

fn validate_holder(m: &NonNegMatrix, p: &ExponentVector) -> Result<()> {
    if m.cols() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has m = {} columns but {} exponents were given",
            m.cols(),
            p.len()
        )));
    }
    if m.cols() < 2 {
        return Err(Error::TooFewColumns {
            need: 2,
            got: m.cols(),
        });
    }
    if !p.is_conjugate() {
        return Err(Error::ConjugacyViolated {
            defect: p.conjugacy_defect().clone(),
        });
    }
    Ok(())
}

/// Sides of `Σ_i Π_k a_ik ≤ Π_k (Σ_i a_ik^{p_k})^{1/p_k}` without checking
/// the hypotheses. Used directly for mutated (hypothesis-breaking) inputs.
pub(crate) fn holder_sides_unchecked(m: &NonNegMatrix, p: &ExponentVector) -> Result<Sides> {
    if m.cols() != p.len() {
        return Err(Error::DimensionMismatch("exponent count".into()));
    }
    let lhs = m.sum_of_row_products();
    let mut factors = Vec::with_capacity(m.cols());
    let mut exact_rhs = Some(Vec::with_capacity(m.cols()));
    for (k, pk) in p.values().iter().enumerate() {
        let s = power_sum(&m.column(k), pk);
        let inv = pk.recip()?;
        match (const_of(&s), exact_rhs.as_mut()) {
            (Some(v), Some(acc)) => acc.push((v.clone(), inv.clone())),
            _ => exact_rhs = None,
        }
        factors.push(s.pow(inv));
    }
    Ok(Sides {
        exact: exact_rhs.map(|r| (vec![(lhs.clone(), Rational::one())], r)),
        lhs: Expr::Const(lhs),
        rhs: Expr::Product(factors),
        relation: Relation::Le,
    })
}

/// `holder_sides`: the two sides of the m-fold Hölder inequality. The
/// right side has an exact power-product form when every `p_k` is an
/// integer.
pub fn holder_sides(m: &NonNegMatrix, p: &ExponentVector) -> Result<Sides> {
    validate_holder(m, p)?;
    holder_sides_unchecked(m, p)
}

pub fn check_holder(m: &NonNegMatrix, p: &ExponentVector, cfg: &CheckConfig) -> Result<Verdict> {
    let sides = holder_sides(m, p)?;
    sides.decide(cfg, || holder_equality_by_powers(m, p.values()))
}

/// `is_holder_equality_case`: exact prediction of Hölder equality for
/// integer exponents.
pub fn is_holder_equality_case(m: &NonNegMatrix, p: &ExponentVector) -> Result<bool> {
    validate_holder(m, p)?;
    if !p.all_integer() {
        return Err(Error::Unsupported(
            "equality prediction needs integer exponents".into(),
        ));
    }
    holder_equality_by_powers(m, p.values())
}

pub(crate) fn cbs_sides(m: &NonNegMatrix) -> Result<Sides> {
    if m.cols() < 2 {
        return Err(Error::TooFewColumns {
            need: 2,
            got: m.cols(),
        });
    }
    let mm = m.cols() as i64;
    let base = m.sum_of_row_products();
    let lhs = base.pow(mm)?;
    let sums: Vec<Rational> = (0..m.cols())
        .map(|k| m.column(k).iter().map(|a| a.pow(mm).expect("m > 0")).sum())
        .collect();
    let rhs: Rational = sums.iter().product();
    Ok(Sides {
        lhs: Expr::Const(lhs),
        rhs: Expr::Const(rhs),
        relation: Relation::Le,
        exact: Some((
            vec![(base, Rational::from(mm))],
            sums.into_iter().map(|s| (s, Rational::one())).collect(),
        )),
    })
}

/// `check_cbs`: `(Σ_i Π_k a_ik)^m ≤ Π_k Σ_i a_ik^m`.
pub fn check_cbs(m: &NonNegMatrix, cfg: &CheckConfig) -> Result<Verdict> {
    let sides = cbs_sides(m)?;
    sides.decide(cfg, || exact_sides_equal(&sides))
}

fn exact_sides_equal(sides: &Sides) -> Result<bool> {
    Ok(matches!(
        (sides.lhs.exact(), sides.rhs.exact()),
        (Some(a), Some(b)) if a == b
    ))
}

/// The standard m-fold reading: `‖Σ_k a_k‖_p ≤ Σ_k ‖a_k‖_p` over columns.
pub(crate) fn minkowski_sides(m: &NonNegMatrix, p: &Rational) -> Result<Sides> {
    if *p < Rational::one() {
        return Err(Error::ExponentBelowOne(p.clone()));
    }
    let inv = p.recip()?;
    let row_sums: Vec<Rational> = m.rows_iter().map(|r| r.iter().sum()).collect();
    let lhs = power_sum(&row_sums, p).pow(inv.clone());
    let rhs = Expr::Sum(
        (0..m.cols())
            .map(|k| power_sum(&m.column(k), p).pow(inv.clone()))
            .collect(),
    );
    Ok(Sides {
        lhs,
        rhs,
        relation: Relation::Le,
        exact: None,
    })
}

pub fn check_minkowski(m: &NonNegMatrix, p: &Rational, cfg: &CheckConfig) -> Result<Verdict> {
    let sides = minkowski_sides(m, p)?;
    cfg.validate()?;
    // m = 1 and p = 1 make both sides the same expression.
    if m.cols() == 1 || p.is_one() {
        return Ok(Verdict::HoldsWithEquality);
    }
    sides.decide(cfg, || Ok(columns_rank_at_most_one(&m.columns())))
}

pub(crate) fn chebyshev_sides(m: &NonNegMatrix) -> Result<Sides> {
    let n = Rational::from(m.rows() as i64);
    let lhs = m.sum_of_row_products() / n.clone();
    let col_sums: Rational = (0..m.cols()).map(|k| m.column_sum(k)).product();
    let rhs = col_sums / n.pow(m.cols() as i64)?;
    Ok(Sides {
        lhs: Expr::Const(lhs.clone()),
        rhs: Expr::Const(rhs.clone()),
        relation: Relation::Ge,
        exact: Some((vec![(lhs, Rational::one())], vec![(rhs, Rational::one())])),
    })
}

/// `check_chebyshev`: `(1/n) Σ_i Π_k a_ik ≥ (1/n^m) Π_k Σ_i a_ik` for
/// columns that are all nonincreasing.
pub fn check_chebyshev(s: &SortedMatrix, cfg: &CheckConfig) -> Result<Verdict> {
    let sides = chebyshev_sides(s.matrix())?;
    sides.decide(cfg, || exact_sides_equal(&sides))
}

/// Three pairs of nonnegative values for
/// `(a₁b₁c₁ + a₂b₂c₂)⁶ ≤ 8(a₁⁶ + a₂⁶)(b₁⁶ + b₂⁶)(c₁⁶ + c₂⁶)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApplicationInstance {
    pub a: [Rational; 2],
    pub b: [Rational; 2],
    pub c: [Rational; 2],
}

impl ApplicationInstance {
    pub fn new(a: [Rational; 2], b: [Rational; 2], c: [Rational; 2]) -> Result<Self> {
        let inst = ApplicationInstance { a, b, c };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_ints(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> Result<Self> {
        let r = |x: [i64; 2]| [Rational::from(x[0]), Rational::from(x[1])];
        Self::new(r(a), r(b), r(c))
    }

    pub fn validate(&self) -> Result<()> {
        if self.values().any(Rational::is_negative) {
            return Err(Error::NegativeInput);
        }
        Ok(())
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.a.iter().chain(&self.b).chain(&self.c)
    }

    /// The instance as a 2×3 Hölder matrix with columns a, b, c.
    pub fn as_matrix(&self) -> NonNegMatrix {
        NonNegMatrix::from_columns(vec![self.a.to_vec(), self.b.to_vec(), self.c.to_vec()])
            .expect("validated nonnegative pairs")
    }
}

fn sixth_power_sum(x: &[Rational; 2]) -> Rational {
    x.iter().map(|v| v.pow(6).expect("positive exponent")).sum()
}

pub(crate) fn application_sides(inst: &ApplicationInstance) -> Sides {
    let [a1, a2] = &inst.a;
    let [b1, b2] = &inst.b;
    let [c1, c2] = &inst.c;
    let base = a1 * b1 * c1 + a2 * b2 * c2;
    let rhs = Rational::from(8)
        * sixth_power_sum(&inst.a)
        * sixth_power_sum(&inst.b)
        * sixth_power_sum(&inst.c);
    let lhs = base.pow(6).expect("positive exponent");
    Sides {
        lhs: Expr::Const(lhs),
        rhs: Expr::Const(rhs.clone()),
        relation: Relation::Le,
        exact: Some((vec![(base, Rational::from(6))], vec![(rhs, Rational::one())])),
    }
}

pub fn check_application(inst: &ApplicationInstance, cfg: &CheckConfig) -> Result<Verdict> {
    inst.validate()?;
    let sides = application_sides(inst);
    sides.decide(cfg, || exact_sides_equal(&sides))
}

/// `(b₁³ + b₂³)² ≤ 2(b₁⁶ + b₂⁶)`, returned as exact (lhs, rhs).
pub fn application_cube_bound(b: &[Rational; 2]) -> (Rational, Rational) {
    let s: Rational = b.iter().map(|v| v.pow(3).expect("positive")).sum();
    (s.pow(2).expect("positive"), Rational::from(2) * sixth_power_sum(b))
}

/// `(a₁² + a₂²)³ ≤ 4(a₁⁶ + a₂⁶)`, returned as exact (lhs, rhs).
pub fn application_square_bound(a: &[Rational; 2]) -> (Rational, Rational) {
    let s: Rational = a.iter().map(|v| v.pow(2).expect("positive")).sum();
    (s.pow(3).expect("positive"), Rational::from(4) * sixth_power_sum(a))
}

/// The cross terms of the square bound: `a₁⁴a₂² + a₁²a₂⁴` and `a₁⁶ + a₂⁶`,
/// whose difference is `(a₂² − a₁²)²(a₁² + a₂²)`.
pub fn application_cross_terms(a: &[Rational; 2]) -> (Rational, Rational) {
    let [x, y] = a;
    let x2 = x * x;
    let y2 = y * y;
    let cross = &x2 * &x2 * &y2 + &x2 * &y2 * &y2;
    (cross, sixth_power_sum(a))
}
