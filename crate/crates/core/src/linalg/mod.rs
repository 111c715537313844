//! Matrix algebra over series and over the residue field.

pub mod residue;
pub mod snf;

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::series::{Series, Valuation};

pub use residue::{ScalarMatrix, SubspaceBasis};
pub use snf::{ff_snf, FfSnf};

/// `M = U diag(t^a) V` with `U`, `V` invertible over O and `a` ascending.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: SeriesMatrix,
    pub exponents: Vec<i64>,
    pub v: SeriesMatrix,
}

pub fn snf_over_o(m: &SeriesMatrix, horizon: i64) -> Result<SnfResult> {
    let s = ff_snf(m, true, true)?;
    let field = m.field();
    let n = m.rows();
    let p_inv = invert_over_o(s.p.as_ref().unwrap(), horizon)?;
    let units: Vec<Series> = s.pivots.iter().zip(&s.exponents).map(|(p, &a)| p.shift(-a)).collect();
    let u = p_inv.mul(&SeriesMatrix::diagonal(field, &units))?;
    let v = invert_over_o(s.q.as_ref().unwrap(), horizon)?;
    debug_assert_eq!(u.rows(), n);
    Ok(SnfResult {
        u,
        exponents: s.exponents,
        v,
    })
}

/// Sum of the Smith exponents; `Infinite` exactly when singular.
pub fn det_valuation(m: &SeriesMatrix) -> Result<Valuation> {
    match ff_snf(m, false, false) {
        Ok(s) => Ok(Valuation::Finite(s.exponents.iter().sum())),
        Err(Error::SingularMatrix) => Ok(Valuation::Infinite),
        Err(e) => Err(e),
    }
}

/// Inverse of a matrix whose determinant is a unit of O, via the adjugate.
/// Entries carry `horizon` correct coefficients past their leading term
/// unless the determinant is a monomial, in which case the result is exact.
pub fn invert_over_o(m: &SeriesMatrix, horizon: i64) -> Result<SeriesMatrix> {
    if m.min_valuation()? < Valuation::Finite(0) || m.determinant()?.valuation()? != Valuation::Finite(0) {
        return Err(Error::InvalidArgument("matrix is not invertible over O".into()));
    }
    invert_in_k(m, horizon)
}

/// Inverse over K.
pub fn invert_in_k(m: &SeriesMatrix, horizon: i64) -> Result<SeriesMatrix> {
    let det = m.determinant()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let inv = det.invert(horizon)?;
    let adj = m.adjugate()?;
    Ok(SeriesMatrix::from_fn(m.rows(), m.cols(), m.field(), |i, j| adj.get(i, j).mul(&inv)))
}

/// Solves `M x = w` as `x = Q D^-1 P w` from the fraction-free Smith form.
pub fn solve_in_k(m: &SeriesMatrix, w: &[Series], horizon: i64) -> Result<Vec<Series>> {
    if !m.is_square() || w.len() != m.rows() {
        return Err(Error::DimensionMismatch("solve_in_k".into()));
    }
    let s = ff_snf(m, true, true)?;
    let pw = s.p.as_ref().unwrap().mul_vec(w)?;
    let mut y = Vec::with_capacity(pw.len());
    for (x, d) in pw.iter().zip(&s.pivots) {
        y.push(x.mul(&d.invert(horizon)?));
    }
    s.q.as_ref().unwrap().mul_vec(&y)
}
