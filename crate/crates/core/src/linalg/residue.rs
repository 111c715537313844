//! Plain linear algebra over the coefficient field: residues `L/tL`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn from_fn(rows: usize, cols: usize, field: FieldConfig, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ScalarMatrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn from_rows(field: FieldConfig, rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, field, |i, j| rows[i][j].clone()))
    }

    pub fn from_columns(field: FieldConfig, n: usize, cols: &[Vec<Scalar>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        Ok(Self::from_fn(n, cols.len(), field, |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for (j, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(x));
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let pivots = rref_in_place(&mut rows, self.cols);
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel of `x -> M x`, a subspace of F^cols.
    pub fn kernel(&self) -> SubspaceBasis {
        let (rows, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(self.field); self.cols];
                v[f] = Scalar::one(self.field);
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = rows[r][f].neg();
                }
                v
            })
            .collect();
        SubspaceBasis::span(self.field, self.cols, &vectors).expect("kernel vectors have the right length")
    }

    /// Some solution of `M x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side".into()));
        }
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut r = self.entries[i * self.cols..(i + 1) * self.cols].to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref_in_place(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<ScalarMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.entries[i * n..(i + 1) * n].to_vec();
                r.extend((0..n).map(|j| if i == j { Scalar::one(self.field) } else { Scalar::zero(self.field) }));
                r
            })
            .collect();
        let pivots = rref_in_place(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, self.field, |i, j| rows[i][n + j].clone()))
    }
}

// Gauss-Jordan on the first `width` columns; returns the pivot columns.
fn rref_in_place(rows: &mut [Vec<Scalar>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of F^n held in reduced row echelon form, so equal subspaces
/// have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    ambient: usize,
    field: FieldConfig,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn span(field: FieldConfig, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("vectors outside F^{ambient}")));
        }
        let mut rows = vectors.to_vec();
        let pivots = rref_in_place(&mut rows, ambient);
        rows.truncate(pivots.len());
        Ok(SubspaceBasis {
            ambient,
            field,
            basis: rows,
            pivots,
        })
    }

    pub fn zero(field: FieldConfig, ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            field,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldConfig, ambient: usize) -> Self {
        let vectors: Vec<Vec<Scalar>> = (0..ambient).map(|i| unit(field, ambient, i)).collect();
        Self::span(field, ambient, &vectors).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates with respect to the echelon basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient {
            return None;
        }
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![Scalar::zero(self.field); self.ambient];
        for (k, b) in c.iter().zip(&self.basis) {
            for (x, y) in rebuilt.iter_mut().zip(b) {
                *x = x.add(&k.mul(y));
            }
        }
        (rebuilt.as_slice() == v).then_some(c)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, o: &SubspaceBasis) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, o: &SubspaceBasis) -> Result<SubspaceBasis> {
        if self.ambient != o.ambient {
            return Err(Error::DimensionMismatch("subspace sum".into()));
        }
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Self::span(self.field, self.ambient, &all)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(self.field); self.ambient];
        for b in &self.basis {
            let c = Scalar::random(self.field, rng);
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.add(&c.mul(y));
            }
        }
        v
    }

    /// Every vector of the subspace whose first nonzero echelon coordinate
    /// is 1, i.e. one representative per projective point. Prime fields only.
    pub fn projective_points(&self, limit: usize) -> Result<Vec<Vec<Scalar>>> {
        let q = self
            .field
            .size()
            .ok_or_else(|| Error::SizeLimit("cannot enumerate points over Q".into()))?;
        let d = self.dim() as u32;
        let total = (0..d).try_fold(0u128, |acc, k| acc.checked_add((q as u128).pow(k)));
        match total {
            Some(t) if t <= limit as u128 => {}
            _ => return Err(Error::SizeLimit(format!("{d}-dimensional subspace over F_{q}"))),
        }
        let mut out = Vec::new();
        for lead in 0..self.dim() {
            // coordinates: 0 before `lead`, 1 at `lead`, anything after
            let free = self.dim() - lead - 1;
            let count = (q as usize).pow(free as u32);
            for idx in 0..count {
                let mut v = self.basis[lead].clone();
                let mut rest = idx;
                for k in lead + 1..self.dim() {
                    let c = Scalar::from_i64(self.field, (rest % q as usize) as i64);
                    rest /= q as usize;
                    for (x, y) in v.iter_mut().zip(&self.basis[k]) {
                        *x = x.add(&c.mul(y));
                    }
                }
                out.push(v);
            }
        }
        Ok(out)
    }
}

pub fn unit(field: FieldConfig, n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| if k == i { Scalar::one(field) } else { Scalar::zero(field) }).collect()
}

/// Rank of a list of vectors.
pub fn rank_of(field: FieldConfig, n: usize, vectors: &[Vec<Scalar>]) -> usize {
    SubspaceBasis::span(field, n, vectors).map(|s| s.dim()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: FieldConfig = FieldConfig::Prime(7);

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_i64(F, x)).collect()
    }

    #[test]
    fn examples() {
        let id = ScalarMatrix::from_rows(F, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(id.rank(), 3);
        let a = SubspaceBasis::span(F, 2, &[v(&[1, 0])]).unwrap();
        let b = SubspaceBasis::span(F, 2, &[v(&[1, 1])]).unwrap();
        assert_eq!(a.sum(&b).unwrap(), SubspaceBasis::full(F, 2));
        let k = ScalarMatrix::from_rows(F, &[v(&[1, 1])]).unwrap().kernel();
        assert_eq!(k, SubspaceBasis::span(F, 2, &[v(&[1, -1])]).unwrap());
    }

    #[test]
    fn echelon_is_canonical() {
        let a = SubspaceBasis::span(F, 3, &[v(&[1, 2, 3]), v(&[0, 1, 1])]).unwrap();
        let b = SubspaceBasis::span(F, 3, &[v(&[1, 3, 4]), v(&[2, 4, 6]), v(&[1, 2, 3])]).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&v(&[2, 5, 7])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn solve_and_inverse() {
        let m = ScalarMatrix::from_rows(F, &[v(&[1, 1]), v(&[0, 2])]).unwrap();
        let x = m.solve(&v(&[3, 4])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), v(&[3, 4]));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul_vec(&m.mul_vec(&v(&[5, 6]))), v(&[5, 6]));
        let sing = ScalarMatrix::from_rows(F, &[v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&v(&[1, 0])).unwrap().is_none());
    }

    #[test]
    fn projective_point_count() {
        let plane = SubspaceBasis::span(F, 3, &[v(&[1, 0, 2]), v(&[0, 1, 5])]).unwrap();
        let pts = plane.projective_points(1000).unwrap();
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|p| plane.contains(p)));
        assert!(SubspaceBasis::full(F, 9).projective_points(1000).is_err());
    }
}
