//! Fraction-free Smith normal form over O = F[[t]].
//!
//! Pivot on an entry of minimal valuation (ties: smallest row, then column),
//! then clear its row and column with `row_i <- u*row_i - (e/t^v)*row_k`,
//! where the pivot is `u t^v`. Every multiplier lies in O and `u` is a unit,
//! so all steps are invertible over O and exact on polynomial input.
//! The result is `P X Q = diag(u_k t^{a_k})` with `a` ascending.

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::series::{Series, Valuation};

#[derive(Clone, Debug)]
pub struct FfSnf {
    /// Pivots `u_k t^{a_k}` as found.
    pub pivots: Vec<Series>,
    pub exponents: Vec<i64>,
    pub p: Option<SeriesMatrix>,
    pub q: Option<SeriesMatrix>,
}

pub fn ff_snf(m: &SeriesMatrix, track_p: bool, track_q: bool) -> Result<FfSnf> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("Smith form of a non-square matrix".into()));
    }
    let n = m.rows();
    let field = m.field();
    let mut w = m.clone();
    let mut p = track_p.then(|| SeriesMatrix::identity(n, field));
    let mut q = track_q.then(|| SeriesMatrix::identity(n, field));
    let mut pivots = Vec::with_capacity(n);
    let mut exponents = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Valuation::Finite(v) = w.get(i, j).valuation()? {
                    if best.map_or(true, |b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, r, c) = best.ok_or(Error::SingularMatrix)?;
        w.swap_rows(k, r);
        w.swap_cols(k, c);
        if let Some(p) = p.as_mut() {
            p.swap_rows(k, r);
        }
        if let Some(q) = q.as_mut() {
            q.swap_cols(k, c);
        }
        let pivot = w.get(k, k).clone();
        let u = pivot.shift(-v);
        for i in k + 1..n {
            let e = w.get(i, k).clone();
            if e.is_zero() {
                continue;
            }
            let f = e.shift(-v);
            for j in k + 1..n {
                let x = u.mul(w.get(i, j)).sub(&f.mul(w.get(k, j)));
                w.set(i, j, x);
            }
            w.set(i, k, Series::zero(field));
            if let Some(p) = p.as_mut() {
                for j in 0..n {
                    let x = u.mul(p.get(i, j)).sub(&f.mul(p.get(k, j)));
                    p.set(i, j, x);
                }
            }
        }
        for j in k + 1..n {
            let e = w.get(k, j).clone();
            if e.is_zero() {
                continue;
            }
            let f = e.shift(-v);
            // column k is zero below the pivot now, so only row k changes
            w.set(k, j, Series::zero(field));
            for i in k + 1..n {
                let x = w.get(i, j).mul(&u);
                w.set(i, j, x);
            }
            if let Some(q) = q.as_mut() {
                for i in 0..n {
                    let x = q.get(i, j).mul(&u).sub(&q.get(i, k).mul(&f));
                    q.set(i, j, x);
                }
            }
        }
        pivots.push(pivot);
        exponents.push(v);
    }
    Ok(FfSnf {
        pivots,
        exponents,
        p,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;
    use crate::series::parse_series;

    const Q: FieldConfig = FieldConfig::Rationals;

    fn m(rows: &[&[&str]]) -> SeriesMatrix {
        let n = rows.len();
        SeriesMatrix::from_fn(n, n, Q, |i, j| parse_series(rows[i][j], Q, 64).unwrap())
    }

    #[test]
    fn transforms_reproduce_the_diagonal() {
        let x = m(&[&["t^2 + t", "1 - t", "t^-1"], &["3", "t", "t^2"], &["1 + t^3", "2*t^-1", "5"]]);
        let s = ff_snf(&x, true, true).unwrap();
        let d = s.p.as_ref().unwrap().mul(&x).unwrap().mul(s.q.as_ref().unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.pivots[i].clone() } else { Series::zero(Q) };
                assert_eq!(d.get(i, j), &want, "({i},{j})");
            }
        }
        assert!(s.exponents.windows(2).all(|w| w[0] <= w[1]));
        for m in [s.p.unwrap(), s.q.unwrap()] {
            assert_eq!(m.determinant().unwrap().val().unwrap(), 0);
            assert!(m.min_valuation().unwrap() >= Valuation::Finite(0));
        }
    }

    #[test]
    fn singular_is_reported() {
        let x = m(&[&["1", "t"], &["t^-1", "1"]]);
        assert!(matches!(ff_snf(&x, false, false), Err(Error::SingularMatrix)));
    }
}
