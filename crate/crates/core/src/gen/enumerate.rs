use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Largest `m` accepted by [`enumerate_integer_conjugate_tuples`]; the
/// number of solutions grows doubly exponentially (`m = 7` has 294,314).
pub const MAX_ENUMERATION_M: usize = 6;

/// All nondecreasing integer tuples `p_1 ≤ … ≤ p_m`, each `≥ 2`, with
/// `Σ 1/p_k = 1`, in lexicographic order.
///
/// At depth `j` with `r` still to cover by `m − j` unit fractions, `p_j` is
/// the smallest remaining denominator, so `1/p_j < r` (unless it is the
/// last) and `(m − j)/p_j ≥ r`.
pub fn enumerate_integer_conjugate_tuples(m: usize) -> Result<Vec<Vec<u64>>> {
    if m < 2 {
        return Err(Error::TooFewColumns { need: 2, got: m });
    }
    if m > MAX_ENUMERATION_M {
        return Err(Error::Unsupported(format!(
            "enumeration is limited to m <= {MAX_ENUMERATION_M}"
        )));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    recurse(m, Rational::one(), 2, &mut prefix, &mut out);
    Ok(out)
}

fn recurse(m: usize, rest: Rational, lo: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let left = (m - prefix.len()) as i64;
    if left == 1 {
        // The last denominator is forced to 1/rest.
        let r = rest.recip().expect("rest > 0");
        if r.is_integer() {
            if let Some(p) = r.to_i64().map(|p| p as u64) {
                if p >= lo {
                    prefix.push(p);
                    out.push(prefix.clone());
                    prefix.pop();
                }
            }
        }
        return;
    }
    // 1/p < rest  ⇔  p > 1/rest
    let inv = rest.recip().expect("rest > 0");
    let strict_lo = floor_u64(&inv) + 1;
    // left/p ≥ rest  ⇔  p ≤ left/rest
    let hi = floor_u64(&(Rational::from(left) * inv));
    for p in lo.max(strict_lo)..=hi {
        let next = &rest - &Rational::new(1, p).expect("p >= 2");
        prefix.push(p);
        recurse(m, next, p, prefix, out);
        prefix.pop();
    }
}

fn floor_u64(r: &Rational) -> u64 {
    let q = r.numer() / r.denom();
    u64::try_from(&q).expect("bounded by Sylvester's sequence")
}

/// Exponents `p_k = G / g_k` with `G = Σ g_k`, which are conjugate by
/// construction and each exceed 1 when `m ≥ 2`.
pub fn exponents_from_weights(g: &[u64]) -> Result<Vec<Rational>> {
    if g.len() < 2 {
        return Err(Error::TooFewColumns { need: 2, got: g.len() });
    }
    if g.contains(&0) {
        return Err(Error::BadGenSpec("weights must be positive".into()));
    }
    let total: u64 = g.iter().sum();
    g.iter()
        .map(|&w| Ok(Rational::new(total, w)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_m() {
        assert_eq!(enumerate_integer_conjugate_tuples(2).unwrap(), vec![vec![2, 2]]);
        assert_eq!(
            enumerate_integer_conjugate_tuples(3).unwrap(),
            vec![vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]
        );
        assert!(enumerate_integer_conjugate_tuples(1).is_err());
    }

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (2..=6)
            .map(|m| enumerate_integer_conjugate_tuples(m).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 14, 147, 3462]);
    }

    #[test]
    fn largest_denominator_follows_sylvester() {
        let t = enumerate_integer_conjugate_tuples(5).unwrap();
        let max = t.iter().map(|v| *v.last().unwrap()).max().unwrap();
        assert_eq!(max, 1806);
    }

    #[test]
    fn weights_to_exponents() {
        let q = |s: &str| s.parse::<Rational>().unwrap();
        assert_eq!(exponents_from_weights(&[1, 1]).unwrap(), vec![q("2"), q("2")]);
        assert_eq!(exponents_from_weights(&[1, 2, 3]).unwrap(), vec![q("6"), q("3"), q("2")]);
    }
}
