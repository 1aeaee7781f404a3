use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// An `n × m` grid of nonnegative rationals. Row `i` is an index of the
/// sums, column `k` one of the sequences being combined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct NonNegMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    m: usize,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixRepr> for NonNegMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let mat = NonNegMatrix::from_rows(r.entries)?;
        if mat.rows != r.n {
            return Err(Error::DeclaredSize {
                what: "n",
                declared: r.n,
                actual: mat.rows,
            });
        }
        if mat.cols != r.m {
            return Err(Error::DeclaredSize {
                what: "m",
                declared: r.m,
                actual: mat.cols,
            });
        }
        Ok(mat)
    }
}

impl From<NonNegMatrix> for MatrixRepr {
    fn from(m: NonNegMatrix) -> Self {
        MatrixRepr {
            n: m.rows,
            m: m.cols,
            entries: m.entries,
        }
    }
}

impl NonNegMatrix {
    pub fn from_rows(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedRow {
                    row: i,
                    got: row.len(),
                    expected: cols,
                });
            }
            if let Some(k) = row.iter().position(Rational::is_negative) {
                return Err(Error::NegativeEntry { row: i, col: k });
            }
        }
        Ok(NonNegMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Build from column vectors, each of the same length.
    pub fn from_columns(columns: Vec<Vec<Rational>>) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if let Some(k) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "column {k} has {} entries, expected {n}",
                columns[k].len()
            )));
        }
        let rows = (0..n)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Convenience constructor from small integer columns.
    pub fn from_int_columns(columns: &[&[i64]]) -> Result<Self> {
        Self::from_columns(
            columns
                .iter()
                .map(|c| c.iter().map(|&v| Rational::from(v)).collect())
                .collect(),
        )
    }

    /// `n`, the number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `m`, the number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.iter().map(Vec::as_slice)
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        self.entries.iter().map(|r| r[col].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|k| self.column(k)).collect()
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.entries
    }

    /// `Σ_i Π_k a[i][k]`.
    pub fn sum_of_row_products(&self) -> Rational {
        self.entries
            .iter()
            .map(|r| r.iter().product::<Rational>())
            .sum()
    }

    pub fn column_sum(&self, col: usize) -> Rational {
        self.entries.iter().map(|r| &r[col]).sum()
    }

    pub fn column_is_zero(&self, col: usize) -> bool {
        self.entries.iter().all(|r| r[col].is_zero())
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.rows {
            return Err(Error::DimensionMismatch("row permutation length".into()));
        }
        Self::from_rows(perm.iter().map(|&i| self.entries[i].clone()).collect())
    }

    pub fn scale_column(&self, col: usize, factor: &Rational) -> Result<Self> {
        let mut rows = self.entries.clone();
        for r in &mut rows {
            r[col] = &r[col] * factor;
        }
        Self::from_rows(rows)
    }

    pub fn map_entries(&self, f: impl Fn(&Rational) -> Rational) -> Result<Self> {
        Self::from_rows(
            self.entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        )
    }
}

/// Exponents `p_1 … p_m`, each `> 1`, with the cached conjugacy defect
/// `|Σ 1/p_k − 1|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct ExponentVector {
    p: Vec<Rational>,
    conjugacy_defect: Rational,
}

impl TryFrom<Vec<Rational>> for ExponentVector {
    type Error = Error;
    fn try_from(p: Vec<Rational>) -> Result<Self> {
        ExponentVector::new(p)
    }
}

impl From<ExponentVector> for Vec<Rational> {
    fn from(e: ExponentVector) -> Self {
        e.p
    }
}

impl ExponentVector {
    pub fn new(p: Vec<Rational>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::DimensionMismatch("empty exponent vector".into()));
        }
        let one = Rational::one();
        if let Some(k) = p.iter().position(|x| *x <= one) {
            return Err(Error::ExponentNotAboveOne {
                index: k,
                value: p[k].clone(),
            });
        }
        let total: Rational = p.iter().map(|x| x.recip().expect("p > 1")).sum();
        let conjugacy_defect = (total - one).abs();
        Ok(ExponentVector {
            p,
            conjugacy_defect,
        })
    }

    pub fn from_ints(p: &[i64]) -> Result<Self> {
        Self::new(p.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn conjugacy_defect(&self) -> &Rational {
        &self.conjugacy_defect
    }

    pub fn is_conjugate(&self) -> bool {
        self.conjugacy_defect.is_zero()
    }

    pub fn all_integer(&self) -> bool {
        self.p.iter().all(Rational::is_integer)
    }

    pub fn sum_of_reciprocals(&self) -> Rational {
        self.p.iter().map(|x| x.recip().expect("p > 1")).sum()
    }
}

/// A [`NonNegMatrix`] whose columns are each nonincreasing down the rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NonNegMatrix", into = "NonNegMatrix")]
pub struct SortedMatrix(NonNegMatrix);

impl TryFrom<NonNegMatrix> for SortedMatrix {
    type Error = Error;
    fn try_from(m: NonNegMatrix) -> Result<Self> {
        SortedMatrix::new(m)
    }
}

impl From<SortedMatrix> for NonNegMatrix {
    fn from(s: SortedMatrix) -> Self {
        s.0
    }
}

impl SortedMatrix {
    /// Rejects the first `(row, col)` where `a[row][col] < a[row+1][col]`.
    pub fn new(m: NonNegMatrix) -> Result<Self> {
        if let Some((row, col)) = first_unsorted(&m) {
            return Err(Error::Unsorted { row, col });
        }
        Ok(SortedMatrix(m))
    }

    /// Sort every column nonincreasing.
    pub fn sorting(m: &NonNegMatrix) -> Self {
        let mut cols = m.columns();
        for c in &mut cols {
            c.sort_by(|a, b| b.cmp(a));
        }
        SortedMatrix(NonNegMatrix::from_columns(cols).expect("same shape"))
    }

    pub fn matrix(&self) -> &NonNegMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> NonNegMatrix {
        self.0
    }
}

pub(crate) fn first_unsorted(m: &NonNegMatrix) -> Option<(usize, usize)> {
    for i in 0..m.rows().saturating_sub(1) {
        for k in 0..m.cols() {
            if m.get(i, k) < m.get(i + 1, k) {
                return Some((i, k));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_validation() {
        assert_eq!(NonNegMatrix::from_rows(vec![]), Err(Error::EmptyMatrix));
        let r = NonNegMatrix::from_rows(vec![vec![1.into(), 2.into()], vec![1.into()]]);
        assert!(matches!(r, Err(Error::RaggedRow { row: 1, .. })));
        let r = NonNegMatrix::from_int_columns(&[&[1, 2], &[0, -1]]);
        assert_eq!(r, Err(Error::NegativeEntry { row: 1, col: 1 }));
    }

    #[test]
    fn matrix_json_shape() {
        let m = NonNegMatrix::from_rows(vec![
            vec!["1/2".parse().unwrap(), 3.into()],
            vec![0.into(), 1.into()],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":2,"m":2,"entries":[["1/2","3"],["0","1"]]}"#);
        assert_eq!(serde_json::from_str::<NonNegMatrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<NonNegMatrix>(r#"{"n":3,"m":2,"entries":[["1","2"]]}"#).is_err());
        assert!(serde_json::from_str::<NonNegMatrix>(r#"{"n":1,"m":1,"entries":[["-1"]]}"#).is_err());
    }

    #[test]
    fn exponent_vector_defect() {
        let p = ExponentVector::from_ints(&[2, 3, 6]).unwrap();
        assert!(p.is_conjugate());
        let p = ExponentVector::from_ints(&[2, 4]).unwrap();
        assert_eq!(p.conjugacy_defect().to_string(), "1/4");
        assert!(matches!(
            ExponentVector::from_ints(&[1, 2]),
            Err(Error::ExponentNotAboveOne { index: 0, .. })
        ));
    }

    #[test]
    fn sorted_matrix_reports_offender() {
        let m = NonNegMatrix::from_int_columns(&[&[3, 2, 1], &[5, 5, 6]]).unwrap();
        assert_eq!(SortedMatrix::new(m.clone()), Err(Error::Unsorted { row: 1, col: 1 }));
        let s = SortedMatrix::sorting(&m);
        assert_eq!(s.matrix().column(1), vec![6.into(), 5.into(), 5.into()]);
    }
}
