//! Dense matrices of series.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::series::{Series, Valuation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, field: FieldConfig, entries: Vec<Series>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, field: FieldConfig, mut f: impl FnMut(usize, usize) -> Series) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SeriesMatrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldConfig) -> Self {
        Self::from_fn(rows, cols, field, |_, _| Series::zero(field))
    }

    pub fn identity(n: usize, field: FieldConfig) -> Self {
        Self::from_fn(n, n, field, |i, j| if i == j { Series::one(field) } else { Series::zero(field) })
    }

    pub fn diagonal(field: FieldConfig, d: &[Series]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, field, |i, j| if i == j { d[i].clone() } else { Series::zero(field) })
    }

    /// diag(t^e_1, ..., t^e_n).
    pub fn t_diagonal(field: FieldConfig, exps: &[i64]) -> Self {
        let d: Vec<Series> = exps.iter().map(|&e| Series::t_pow(field, e)).collect();
        Self::diagonal(field, &d)
    }

    pub fn from_columns(field: FieldConfig, cols: &[Vec<Series>]) -> Result<Self> {
        let n = cols.first().map(|c| c.len()).unwrap_or(0);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        Ok(Self::from_fn(n, cols.len(), field, |i, j| cols[j][i].clone()))
    }

    /// Random exact matrix with entries of exponents in `lo..=hi`.
    pub fn random<R: Rng + ?Sized>(field: FieldConfig, n: usize, m: usize, rng: &mut R, lo: i64, hi: i64) -> Self {
        Self::from_fn(n, m, field, |_, _| Series::random(field, rng, lo, hi))
    }

    /// Random matrix whose entries lie in O with an invertible constant part.
    pub fn random_unimodular<R: Rng + ?Sized>(field: FieldConfig, n: usize, rng: &mut R, degree: i64) -> Self {
        loop {
            let m = Self::random(field, n, n, rng, 0, degree);
            if m.residue().rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Series) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Series> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Series>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Series> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.field, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &SeriesMatrix) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Self::from_fn(self.rows, o.cols, self.field, |i, j| {
            let mut acc = Series::zero(self.field);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), o.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Series]) -> Result<Vec<Series>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Series::zero(self.field);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, o: &SeriesMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, self.field, |i, j| self.get(i, j).add(o.get(i, j))))
    }

    /// Multiplies every entry by t^k.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_fn(self.rows, self.cols, self.field, |i, j| self.get(i, j).shift(k))
    }

    pub fn hstack(&self, o: &SeriesMatrix) -> Result<Self> {
        if self.rows != o.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + o.cols, self.field, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Smallest entry valuation, `Infinite` for the zero matrix.
    pub fn min_valuation(&self) -> Result<Valuation> {
        let mut best = Valuation::Infinite;
        for e in &self.entries {
            best = best.min(e.valuation()?);
        }
        Ok(best)
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Series::is_exact)
    }

    /// Constant terms, for matrices over O.
    pub fn residue(&self) -> crate::linalg::residue::ScalarMatrix {
        crate::linalg::residue::ScalarMatrix::from_fn(self.rows, self.cols, self.field, |i, j| {
            self.get(i, j).coeff(0).unwrap_or_else(|_| Scalar::zero(self.field))
        })
    }

    /// Entrywise agreement below the common horizons.
    pub fn agrees_with(&self, o: &SeriesMatrix) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols) && self.entries.iter().zip(&o.entries).all(|(a, b)| a.agrees_with(b))
    }

    /// Exact determinant by expansion over column subsets; O(2^n n) products.
    pub fn determinant(&self) -> Result<Series> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Series::one(self.field));
        }
        if n > 20 {
            return Err(Error::SizeLimit(format!("determinant of size {n}")));
        }
        // minors[S] = det of rows 0..|S| and the columns in S.
        let mut minors: Vec<Option<Series>> = vec![None; 1 << n];
        minors[0] = Some(Series::one(self.field));
        for mask in 1usize..(1 << n) {
            let k = mask.count_ones() as usize - 1;
            let mut acc = Series::zero(self.field);
            let mut sign_pos = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let sub = minors[mask ^ (1 << j)].as_ref().unwrap();
                let e = self.get(k, j);
                if !e.is_zero() && !sub.is_zero() {
                    let term = e.mul(sub);
                    // expansion along row k; j is at position sign_pos within S
                    acc = if (k + sign_pos) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                sign_pos += 1;
            }
            minors[mask] = Some(acc);
        }
        Ok(minors[(1 << n) - 1].take().unwrap())
    }

    /// Adjugate, exact.
    pub fn adjugate(&self) -> Result<Self> {
        let n = self.rows;
        if !self.is_square() {
            return Err(Error::DimensionMismatch("adjugate of a non-square matrix".into()));
        }
        if n == 1 {
            return Ok(Self::identity(1, self.field));
        }
        let mut out = Self::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                let minor = Self::from_fn(n - 1, n - 1, self.field, |a, b| {
                    let r = if a < j { a } else { a + 1 };
                    let c = if b < i { b } else { b + 1 };
                    self.get(r, c).clone()
                });
                let d = minor.determinant()?;
                out.set(i, j, if (i + j) % 2 == 0 { d } else { d.neg() });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_series;

    const Q: FieldConfig = FieldConfig::Rationals;

    fn m(rows: &[&[&str]]) -> SeriesMatrix {
        let n = rows.len();
        let c = rows[0].len();
        SeriesMatrix::from_fn(n, c, Q, |i, j| parse_series(rows[i][j], Q, 64).unwrap())
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&["1", "1"], &["1", "1 + t"]]).determinant().unwrap().to_string(), "t");
        let a = m(&[&["2", "0", "1"], &["1", "3", "0"], &["0", "1", "4"]]);
        assert_eq!(a.determinant().unwrap().to_string(), "25");
        let p = m(&[&["0", "1", "0"], &["0", "0", "1"], &["1", "0", "0"]]);
        assert_eq!(p.determinant().unwrap().to_string(), "1");
        let s = m(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(s.determinant().unwrap().to_string(), "-1");
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let a = m(&[&["1 + t", "t^-1", "2"], &["3", "t", "1"], &["0", "1", "t^2 - 1"]]);
        let d = a.determinant().unwrap();
        let prod = a.adjugate().unwrap().mul(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d.clone() } else { Series::zero(Q) };
                assert_eq!(prod.get(i, j), &want);
            }
        }
    }
}
