use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::instances::{gen_indexed, gen_instance};
use super::mutate::{mutate_to_false, MutatedInstance, MutationKind};
use super::rng::{instance_seed, Seed, SplitMix64};
use super::spec::GenSpec;
use crate::error::{Error, Result};
use crate::geometry::{transversal_points, Polygon};
use crate::inequality::{ApplicationInstance, CheckConfig, NonNegMatrix, SortedMatrix, Slack, Verdict};
use crate::instance::{Instance, MenelausInstance, StatementKind};
use crate::numeric::Rational;

/// Upper bound on accepted shrink steps, a guard against cycling.
pub const MAX_SHRINK_STEPS: usize = 1_000;

/// Stream offset separating mutation randomness from generation.
const MUTATION_STREAM: u64 = 0x6d75_7461_7465;

/// One accepted shrink move, re-checked before it was accepted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkStep {
    pub action: String,
    pub candidate: MutatedInstance,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Index of the stream instance that first failed.
    pub index: u64,
    pub original: MutatedInstance,
    pub original_verdict: Verdict,
    pub shrunk: MutatedInstance,
    pub shrunk_verdict: Verdict,
    pub steps: Vec<ShrinkStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub tried: u64,
    /// Trials whose claim could not be evaluated for the drawn instance.
    pub skipped: u64,
    pub found: Option<Counterexample>,
}

/// Row-major entries of the statements that have a matrix.
fn rows_of(inst: &Instance) -> Option<Vec<Vec<Rational>>> {
    match inst {
        Instance::Application(a) => Some(a.as_matrix().into_rows()),
        other => other.matrix().map(|m| m.clone().into_rows()),
    }
}

fn with_rows(inst: &Instance, rows: Vec<Vec<Rational>>) -> Result<Instance> {
    Ok(match inst {
        Instance::Holder { exponents, .. } => Instance::Holder {
            matrix: NonNegMatrix::from_rows(rows)?,
            exponents: exponents.clone(),
        },
        Instance::Cbs { .. } => Instance::Cbs {
            matrix: NonNegMatrix::from_rows(rows)?,
        },
        Instance::Minkowski { p, .. } => Instance::Minkowski {
            matrix: NonNegMatrix::from_rows(rows)?,
            p: p.clone(),
        },
        Instance::Chebyshev { .. } => Instance::Chebyshev {
            matrix: NonNegMatrix::from_rows(rows)?,
        },
        Instance::Application(_) => {
            if rows.len() != 2 || rows.iter().any(|r| r.len() != 3) {
                return Err(Error::DimensionMismatch("application is 2×3".into()));
            }
            let col = |k: usize| [rows[0][k].clone(), rows[1][k].clone()];
            Instance::Application(ApplicationInstance::new(col(0), col(1), col(2))?)
        }
        Instance::Menelaus(_) => return Err(Error::Unsupported("menelaus has no matrix".into())),
    })
}

fn min_columns(kind: StatementKind) -> usize {
    match kind {
        StatementKind::Cbs => 2,
        _ => 1,
    }
}

/// Simpler values to try for one entry, most aggressive first.
fn simpler_values(v: &Rational) -> Vec<(&'static str, Rational)> {
    let mut out = vec![("zero", Rational::zero()), ("one", Rational::one())];
    let floor = Rational::from(v.numer().div_floor(v.denom()));
    out.push(("floor", floor));
    let half: BigInt = v.numer() / 2;
    out.push((
        "halve numerator",
        Rational::new(half, v.denom().clone()).expect("nonzero denominator"),
    ));
    out.push(("drop denominator", Rational::from(v.numer().clone())));
    // Only strictly simpler candidates, ordered by (denominator, |numerator|),
    // so repeated entry moves cannot cycle.
    let key = |r: &Rational| (r.denom().clone(), r.numer().abs());
    out.retain(|(_, c)| !c.is_negative() && key(c) < key(v));
    let mut seen = Vec::new();
    out.retain(|(_, c)| {
        let fresh = !seen.contains(c);
        seen.push(c.clone());
        fresh
    });
    out
}

fn matrix_moves(m: &MutatedInstance) -> Vec<(String, Instance)> {
    let inst = &m.instance;
    let Some(rows) = rows_of(inst) else { return Vec::new() };
    let kind = inst.kind();
    let (n, cols) = (rows.len(), rows[0].len());
    let mut out = Vec::new();
    if kind != StatementKind::Application {
        if n > 1 {
            for r in 0..n {
                let mut rr = rows.clone();
                rr.remove(r);
                out.push((format!("remove row {r}"), rr));
            }
        }
        // Hölder columns are tied to the exponents and cannot be dropped
        // without changing the broken hypothesis.
        if kind != StatementKind::Holder && cols > min_columns(kind) {
            for k in 0..cols {
                let rr = rows
                    .iter()
                    .map(|row| {
                        let mut row = row.clone();
                        row.remove(k);
                        row
                    })
                    .collect();
                out.push((format!("remove column {k}"), rr));
            }
        }
    }
    for r in 0..n {
        for k in 0..cols {
            for (name, v) in simpler_values(&rows[r][k]) {
                let mut rr = rows.clone();
                rr[r][k] = v;
                out.push((format!("entry ({r}, {k}): {name}"), rr));
            }
        }
    }
    out.into_iter()
        .filter_map(|(d, rr)| with_rows(inst, rr).ok().map(|i| (d, i)))
        .collect()
}

/// Remove a vertex away from every displaced side; the remaining points
/// are recomputed from the line except on displaced sides.
fn menelaus_moves(m: &MutatedInstance) -> Vec<(String, Instance)> {
    let Instance::Menelaus(g) = &m.instance else { return Vec::new() };
    let Some(points) = &g.points else { return Vec::new() };
    let n = g.vertices.len();
    if n <= 3 {
        return Vec::new();
    }
    let Ok(on_line) = transversal_points(&g.vertices, &g.line) else { return Vec::new() };
    let displaced: Vec<bool> = points.iter().zip(&on_line.points).map(|(p, q)| p != q).collect();
    let mut out = Vec::new();
    for j in 0..n {
        // Removing A_j merges sides j−1 and j.
        let prev = (j + n - 1) % n;
        if displaced[prev] || displaced[j] {
            continue;
        }
        let mut verts = g.vertices.vertices().to_vec();
        verts.remove(j);
        let Ok(poly) = Polygon::new(verts) else { continue };
        let Ok(fresh) = transversal_points(&poly, &g.line) else { continue };
        // Old side i (i ≠ prev, j) becomes side i or i−1.
        let mut new_points = fresh.points;
        for (i, p) in points.iter().enumerate() {
            if displaced[i] {
                let ni = if i > j { i - 1 } else { i };
                new_points[ni] = p.clone();
            }
        }
        let mut h = MenelausInstance::new(poly, g.line.clone());
        h.points = Some(new_points);
        out.push((format!("remove vertex {j}"), Instance::Menelaus(h)));
    }
    out
}

/// Greedy shrinking: take the first move that is still Violated, repeat
/// until no move applies. Every accepted step is re-evaluated and logged.
pub fn shrink(
    start: &MutatedInstance,
    cfg: &CheckConfig,
) -> Result<(MutatedInstance, Verdict, Vec<ShrinkStep>)> {
    let mut current = start.clone();
    let mut verdict = current.evaluate(cfg)?;
    if !verdict.is_violated() {
        return Err(Error::Unsupported("shrink needs a violated start".into()));
    }
    let mut steps = Vec::new();
    'outer: while steps.len() < MAX_SHRINK_STEPS {
        let moves = if matches!(current.instance, Instance::Menelaus(_)) {
            menelaus_moves(&current)
        } else {
            matrix_moves(&current)
        };
        for (action, inst) in moves {
            let candidate = current.with_instance(inst);
            let Ok(v) = candidate.evaluate(cfg) else { continue };
            if v.is_violated() {
                steps.push(ShrinkStep {
                    action,
                    candidate: candidate.clone(),
                    verdict: v.clone(),
                });
                current = candidate;
                verdict = v;
                continue 'outer;
            }
        }
        break;
    }
    Ok((current, verdict, steps))
}

/// `counterexample_search`: walk the stream for `(spec, seed)`, optionally
/// mutating each instance, until a claim is Violated; then shrink it.
pub fn counterexample_search(
    spec: &GenSpec,
    mutation: Option<MutationKind>,
    budget: u64,
    seed: Seed,
    cfg: &CheckConfig,
) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::BadGenSpec("budget must be at least 1".into()));
    }
    spec.validate()?;
    if let Some(k) = mutation {
        if !k.applies_to(spec.statement) {
            return Err(Error::Unsupported(format!(
                "mutation {k} does not apply to {}",
                spec.statement
            )));
        }
    }
    let mut skipped = 0;
    for index in 0..budget {
        let inst = gen_indexed(spec, seed, index)?;
        let candidate = match mutation {
            Some(k) => {
                let mut rng = SplitMix64::new(instance_seed(seed ^ MUTATION_STREAM, index));
                mutate_to_false(k, &inst, &mut rng)?
            }
            None => MutatedInstance {
                mutation: MutationKind::FlipDirection,
                instance: inst,
                flipped: false,
            },
        };
        let verdict = match candidate.evaluate(cfg) {
            Ok(v) => v,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        if verdict.is_violated() {
            let (shrunk, shrunk_verdict, steps) = shrink(&candidate, cfg)?;
            return Ok(SearchOutcome {
                tried: index + 1,
                skipped,
                found: Some(Counterexample {
                    index,
                    original: candidate,
                    original_verdict: verdict,
                    shrunk,
                    shrunk_verdict,
                    steps,
                }),
            });
        }
    }
    Ok(SearchOutcome {
        tried: budget,
        skipped,
        found: None,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TightnessResult {
    pub instance: Instance,
    pub slack: Slack,
    pub evaluations: u64,
    pub improvements: u64,
}

const SLACK_PRECISION: u32 = 64;

/// Entries live on this grid during hill-climbing so their size stays
/// bounded.
const GRID_BITS: u32 = 20;

fn on_grid(x: &Rational) -> Rational {
    let scale = BigInt::from(1u64 << GRID_BITS);
    let scaled = x * &Rational::from(scale.clone());
    let twice: BigInt = scaled.numer() * 2 + scaled.denom();
    let num = twice.div_floor(&(scaled.denom() * 2));
    Rational::new(num, scale).expect("nonzero scale")
}

fn slack_of(inst: &Instance) -> Option<Slack> {
    inst.slack_ratio(SLACK_PRECISION).ok()
}

fn perturb(inst: &Instance, rng: &mut SplitMix64, delta: f64) -> Option<Instance> {
    let mut rows = rows_of(inst)?;
    let r = rng.below(rows.len() as u64) as usize;
    let k = rng.below(rows[0].len() as u64) as usize;
    let up = rng.below(2) == 0;
    let f = if up { 1.0 + delta } else { 1.0 / (1.0 + delta) };
    let f = Rational::from_big(num_rational::BigRational::from_float(f)?);
    let x = &rows[r][k];
    let base = if x.is_zero() { Rational::one() } else { x.clone() };
    let v = on_grid(&(&base * &f));
    if v.is_zero() || &v == x {
        return None;
    }
    rows[r][k] = v;
    let next = with_rows(inst, rows).ok()?;
    Some(match next {
        Instance::Chebyshev { matrix } => Instance::Chebyshev {
            matrix: SortedMatrix::sorting(&matrix).into_matrix(),
        },
        other => other,
    })
}

/// `tightness_search`: random restarts, then coordinate-wise
/// multiplicative hill-climbing on the slack ratio. `budget` counts slack
/// evaluations; with `budget = 1` the single sample is returned as drawn.
pub fn tightness_search(
    kind: StatementKind,
    dims: (usize, usize),
    budget: u64,
    seed: Seed,
) -> Result<TightnessResult> {
    if budget == 0 {
        return Err(Error::BadGenSpec("budget must be at least 1".into()));
    }
    if kind == StatementKind::Menelaus {
        return Err(Error::Unsupported("menelaus is an identity; slack is always 1".into()));
    }
    let mut spec = GenSpec::for_statement(kind);
    if kind != StatementKind::Application {
        spec = spec.with_n(dims.0, dims.0).with_m(dims.1, dims.1);
    }
    spec.num_bits = 8;
    spec.den_bits = 0;
    spec.small_percent = 0;
    spec.equality_percent = 0;
    spec.validate()?;

    let mut rng = SplitMix64::new(seed);
    let restarts = (budget / 10).max(1);
    let mut best: Option<(Instance, Slack)> = None;
    let mut evaluations = 0;
    for _ in 0..restarts {
        // Draws with a zero dominant side have no slack; redraw those.
        let mut drawn = None;
        for _ in 0..100 {
            let inst = gen_instance(&spec, &mut rng)?;
            if let Some(s) = slack_of(&inst) {
                drawn = Some((inst, s));
                break;
            }
        }
        evaluations += 1;
        let Some((inst, s)) = drawn else { continue };
        if best.as_ref().is_none_or(|(_, b)| s.midpoint() > b.midpoint()) {
            best = Some((inst, s));
        }
    }
    let (mut inst, mut slack) = best.ok_or(Error::BudgetExhausted {
        attempts: restarts as usize,
    })?;
    let mut delta = 0.5;
    let mut improvements = 0;
    let mut failures = 0;
    while evaluations < budget {
        evaluations += 1;
        let improved = match perturb(&inst, &mut rng, delta) {
            Some(next) => match slack_of(&next) {
                Some(s) if s.midpoint() > slack.midpoint() => {
                    inst = next;
                    slack = s;
                    true
                }
                _ => false,
            },
            None => false,
        };
        if improved {
            improvements += 1;
            failures = 0;
        } else {
            failures += 1;
            // Shrink the step once the current scale stops paying off.
            if failures > 8 * inst.dims().0.max(1) * inst.dims().1.max(1) {
                delta = (delta / 2.0).max(1e-4);
                failures = 0;
            }
        }
    }
    Ok(TightnessResult {
        instance: inst,
        slack,
        evaluations,
        improvements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpler_values_are_simpler() {
        let v = Rational::new(7, 3).unwrap();
        let names: Vec<_> = simpler_values(&v).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["zero", "one", "floor", "drop denominator"]);
        let halves: Vec<_> = simpler_values(&Rational::new(9, 5).unwrap()).into_iter().map(|(n, _)| n).collect();
        assert_eq!(halves, ["zero", "one", "halve numerator", "drop denominator"]);
        assert!(simpler_values(&Rational::zero()).is_empty());
        let one: Vec<_> = simpler_values(&Rational::one()).into_iter().map(|(n, _)| n).collect();
        assert_eq!(one, ["zero"]);
    }

    #[test]
    fn valid_generator_finds_nothing() {
        let spec = GenSpec::for_statement(StatementKind::Cbs);
        let out = counterexample_search(&spec, None, 200, 3, &CheckConfig::default()).unwrap();
        assert!(out.found.is_none());
        assert_eq!(out.tried, 200);
    }

    #[test]
    fn flipped_chebyshev_is_found_and_shrunk() {
        let spec = GenSpec::for_statement(StatementKind::Chebyshev);
        let cfg = CheckConfig::default();
        let out = counterexample_search(&spec, Some(MutationKind::FlipDirection), 100, 1, &cfg).unwrap();
        let ce = out.found.expect("strict instances are common");
        for step in &ce.steps {
            assert!(step.candidate.evaluate(&cfg).unwrap().is_violated());
        }
        assert!(ce.shrunk.evaluate(&cfg).unwrap().is_violated());
        assert!(ce.shrunk.instance.dims().0 <= ce.original.instance.dims().0);
    }

    #[test]
    fn shrink_rejects_non_violated_start() {
        let m = MutatedInstance {
            mutation: MutationKind::FlipDirection,
            instance: Instance::Cbs {
                matrix: NonNegMatrix::from_int_columns(&[&[1], &[1]]).unwrap(),
            },
            flipped: false,
        };
        assert!(shrink(&m, &CheckConfig::default()).is_err());
    }

    #[test]
    fn budget_one_returns_the_sample() {
        let a = tightness_search(StatementKind::Holder, (3, 2), 1, 8).unwrap();
        let b = tightness_search(StatementKind::Holder, (3, 2), 1, 8).unwrap();
        assert_eq!(a.instance, b.instance);
        assert_eq!(a.evaluations, 1);
        assert_eq!(a.improvements, 0);
    }

    #[test]
    fn grid_rounding() {
        assert_eq!(on_grid(&Rational::new(1, 3).unwrap()), Rational::new(349525, 1 << 20).unwrap());
        assert_eq!(on_grid(&Rational::from(5)), Rational::from(5));
    }
}
