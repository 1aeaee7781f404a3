use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;

use super::enumerate::{enumerate_integer_conjugate_tuples, exponents_from_weights, MAX_ENUMERATION_M};
use super::rng::{instance_seed, Seed, SplitMix64};
use super::spec::{ExponentMode, GenSpec};
use crate::error::{Error, Result};
use crate::geometry::{transversal_points, Line, Point, Polygon};
use crate::inequality::{ApplicationInstance, ExponentVector, NonNegMatrix, SortedMatrix};
use crate::instance::{Instance, MenelausInstance, StatementKind};
use crate::numeric::{lcm_all, NumericError, Rational};

/// Rejection budget for random polygon/line configurations.
pub const GEOMETRY_ATTEMPTS: usize = 10_000;

fn tuples(m: usize) -> &'static [Vec<u64>] {
    static CACHE: OnceLock<Vec<Vec<Vec<u64>>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=MAX_ENUMERATION_M.min(5))
            .map(|k| {
                if k < 2 {
                    Vec::new()
                } else {
                    enumerate_integer_conjugate_tuples(k).expect("small m")
                }
            })
            .collect()
    });
    &all[m]
}

fn integer_tuple(m: usize, rng: &mut SplitMix64) -> Result<Vec<u64>> {
    let list;
    let choices: &[Vec<u64>] = if m <= 5 {
        tuples(m)
    } else {
        list = enumerate_integer_conjugate_tuples(m)?;
        &list
    };
    let mut t = rng.pick(choices).clone();
    rng.shuffle(&mut t);
    Ok(t)
}

/// One nonnegative entry: with probability `small_percent` it is 0 or 1,
/// otherwise `num / den` with `num < 2^num_bits`, `den ≤ 2^den_bits`.
pub fn gen_entry(rng: &mut SplitMix64, spec: &GenSpec) -> Rational {
    if rng.percent(spec.small_percent) {
        return Rational::from(rng.below(2) as i64);
    }
    let num = rng.below(1u64 << spec.num_bits);
    let den = rng.range(1, 1u64 << spec.den_bits);
    Rational::new(num, den).expect("den >= 1")
}

pub fn gen_matrix(n: usize, m: usize, rng: &mut SplitMix64, spec: &GenSpec) -> Result<NonNegMatrix> {
    NonNegMatrix::from_rows(
        (0..n)
            .map(|_| (0..m).map(|_| gen_entry(rng, spec)).collect())
            .collect(),
    )
}

pub fn gen_sorted_matrix(n: usize, m: usize, rng: &mut SplitMix64, spec: &GenSpec) -> Result<SortedMatrix> {
    Ok(SortedMatrix::sorting(&gen_matrix(n, m, rng, spec)?))
}

/// `gen_conjugate_exponents_rational`: weights `g_k ∈ 1..=6`, `p_k = G/g_k`.
pub fn gen_conjugate_exponents_rational(m: usize, rng: &mut SplitMix64) -> Result<ExponentVector> {
    let g: Vec<u64> = (0..m).map(|_| rng.range(1, 6)).collect();
    ExponentVector::new(exponents_from_weights(&g)?)
}

pub fn gen_exponents(m: usize, rng: &mut SplitMix64, spec: &GenSpec) -> Result<ExponentVector> {
    match spec.exponent_mode {
        ExponentMode::IntegerTuples => {
            let t = integer_tuple(m, rng)?;
            ExponentVector::new(t.into_iter().map(|p| Rational::from(p as i64)).collect())
        }
        ExponentMode::RationalWeights => gen_conjugate_exponents_rational(m, rng),
    }
}

fn small_positive(rng: &mut SplitMix64) -> Rational {
    Rational::from(rng.range(1, 3) as i64)
}

/// Hölder equality: `a_ik = λ_k · w_i^{c/p_k}` with `c` a common multiple
/// of the exponent numerators, so `a_ik^{p_k} = λ_k^{p_k} w_i^c` and the
/// powered columns are proportional.
fn holder_equality_matrix(n: usize, p: &ExponentVector, rng: &mut SplitMix64) -> Result<NonNegMatrix> {
    let c = lcm_all(p.values().iter().map(Rational::numer));
    let powers: Vec<BigInt> = p
        .values()
        .iter()
        .map(|pk| (&c * pk.denom()).div_floor(pk.numer()))
        .collect();
    let max_power = powers.iter().max().cloned().unwrap_or_default();
    let w_max = if max_power <= BigInt::from(8) { 3 } else { 1 };
    let w: Vec<u64> = (0..n).map(|_| rng.range(0, w_max)).collect();
    let scale: Vec<Rational> = p.values().iter().map(|_| small_positive(rng)).collect();
    let mut rows = Vec::with_capacity(n);
    for &wi in &w {
        let mut row = Vec::with_capacity(p.len());
        for (k, e) in powers.iter().enumerate() {
            let e = i64::try_from(e).map_err(|_| NumericError::ExponentTooLarge)?;
            row.push(&scale[k] * &Rational::from(wi as i64).pow(e)?);
        }
        rows.push(row);
    }
    NonNegMatrix::from_rows(rows)
}

/// Rank-one matrix `a_ik = w_i λ_k`.
fn proportional_matrix(n: usize, m: usize, rng: &mut SplitMix64, spec: &GenSpec) -> Result<NonNegMatrix> {
    let w: Vec<Rational> = (0..n).map(|_| gen_entry(rng, spec)).collect();
    let l: Vec<Rational> = (0..m).map(|_| small_positive(rng)).collect();
    NonNegMatrix::from_rows(w.iter().map(|wi| l.iter().map(|lk| wi * lk).collect()).collect())
}

fn constant_columns(n: usize, m: usize, rng: &mut SplitMix64, spec: &GenSpec) -> Result<NonNegMatrix> {
    let c: Vec<Rational> = (0..m).map(|_| gen_entry(rng, spec)).collect();
    NonNegMatrix::from_rows(vec![c; n])
}

fn gen_signed(rng: &mut SplitMix64, bound: i64, max_den: u64) -> Rational {
    let num = rng.range_i64(-bound, bound);
    let den = rng.range(1, max_den);
    Rational::new(num, den).expect("den >= 1")
}

/// `gen_polygon_and_transversal`: rejection sampling of rational vertices
/// and a rational line until the line is a valid transversal.
pub fn gen_polygon_and_transversal(n: usize, rng: &mut SplitMix64) -> Result<(Polygon, Line)> {
    if n < 3 {
        return Err(Error::BadGenSpec(format!("a polygon needs n >= 3, got {n}")));
    }
    for _ in 0..GEOMETRY_ATTEMPTS {
        let vertices: Vec<Point> = (0..n)
            .map(|_| Point::new(gen_signed(rng, 256, 4), gen_signed(rng, 256, 4)))
            .collect();
        let Ok(poly) = Polygon::new(vertices) else { continue };
        let a = gen_signed(rng, 64, 3);
        let b = gen_signed(rng, 64, 3);
        let c = gen_signed(rng, 4096, 3);
        let Ok(line) = Line::new(a, b, c) else { continue };
        if transversal_points(&poly, &line).is_ok() {
            return Ok((poly, line));
        }
    }
    Err(Error::BudgetExhausted {
        attempts: GEOMETRY_ATTEMPTS,
    })
}

/// One instance drawn from `spec`.
pub fn gen_instance(spec: &GenSpec, rng: &mut SplitMix64) -> Result<Instance> {
    spec.validate()?;
    let n = rng.range_usize(spec.n_min, spec.n_max);
    let m = rng.range_usize(spec.m_min, spec.m_max);
    let equality = rng.percent(spec.equality_percent);
    Ok(match spec.statement {
        StatementKind::Holder => {
            let exponents = gen_exponents(m, rng, spec)?;
            let matrix = if equality {
                holder_equality_matrix(n, &exponents, rng)?
            } else {
                gen_matrix(n, m, rng, spec)?
            };
            Instance::Holder { matrix, exponents }
        }
        StatementKind::Cbs => Instance::Cbs {
            matrix: if equality {
                proportional_matrix(n, m, rng, spec)?
            } else {
                gen_matrix(n, m, rng, spec)?
            },
        },
        StatementKind::Minkowski => {
            let p = rng.pick(&spec.minkowski_p).clone();
            let matrix = if equality {
                proportional_matrix(n, m, rng, spec)?
            } else {
                gen_matrix(n, m, rng, spec)?
            };
            Instance::Minkowski { matrix, p }
        }
        StatementKind::Chebyshev => Instance::Chebyshev {
            matrix: if equality {
                constant_columns(n, m, rng, spec)?
            } else {
                gen_sorted_matrix(n, m, rng, spec)?.into_matrix()
            },
        },
        StatementKind::Application => {
            let mut pair = |eq: bool| {
                let x = gen_entry(rng, spec);
                let y = if eq { x.clone() } else { gen_entry(rng, spec) };
                [x, y]
            };
            Instance::Application(ApplicationInstance::new(pair(equality), pair(equality), pair(equality))?)
        }
        StatementKind::Menelaus => {
            let (poly, line) = gen_polygon_and_transversal(n, rng)?;
            Instance::Menelaus(MenelausInstance::new(poly, line))
        }
    })
}

/// The `index`-th instance of the stream for `(spec, seed)`.
pub fn gen_indexed(spec: &GenSpec, seed: Seed, index: u64) -> Result<Instance> {
    gen_instance(spec, &mut SplitMix64::new(instance_seed(seed, index)))
}

pub fn gen_stream(spec: &GenSpec, seed: Seed, count: usize) -> Result<Vec<Instance>> {
    (0..count as u64).map(|i| gen_indexed(spec, seed, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{CheckConfig, Verdict};

    #[test]
    fn deterministic_streams() {
        for k in StatementKind::ALL {
            let spec = GenSpec::for_statement(k);
            assert_eq!(gen_stream(&spec, 9, 20).unwrap(), gen_stream(&spec, 9, 20).unwrap());
        }
    }

    #[test]
    fn zero_one_bounds_appear() {
        let spec = GenSpec {
            num_bits: 1,
            den_bits: 0,
            ..GenSpec::for_statement(StatementKind::Holder)
        };
        let mut rng = SplitMix64::new(3);
        let mut saw_zero_col = false;
        for _ in 0..200 {
            let m = gen_matrix(3, 2, &mut rng, &spec).unwrap();
            assert!(m.rows_iter().flatten().all(|v| v.is_zero() || v.is_one()));
            saw_zero_col |= m.column_is_zero(0);
        }
        assert!(saw_zero_col);
    }

    #[test]
    fn rational_exponents_are_conjugate() {
        let mut rng = SplitMix64::new(5);
        for m in 2..=6 {
            let p = gen_conjugate_exponents_rational(m, &mut rng).unwrap();
            assert!(p.is_conjugate());
        }
    }

    #[test]
    fn equality_families_are_equalities() {
        for k in [StatementKind::Holder, StatementKind::Cbs, StatementKind::Chebyshev, StatementKind::Application] {
            let spec = GenSpec {
                equality_percent: 100,
                ..GenSpec::for_statement(k)
            };
            for inst in gen_stream(&spec, 11, 50).unwrap() {
                assert_eq!(
                    inst.check(&CheckConfig::default()).unwrap(),
                    Verdict::HoldsWithEquality,
                    "{inst:?}"
                );
            }
        }
    }

    #[test]
    fn generated_instances_validate() {
        for k in StatementKind::ALL {
            for inst in gen_stream(&GenSpec::for_statement(k), 1, 50).unwrap() {
                inst.validate().unwrap();
            }
        }
    }
}
