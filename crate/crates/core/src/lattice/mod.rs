//! Lattices in K^n, their relative position, sums, duals and the vector
//! distance of the affine building.
//!
//! A lattice is stored through its canonical basis: upper triangular,
//! pivot `t^{d_j}` in column j, and every entry of row i reduced to
//! exponents below `d_i`. Two lattices are equal iff these bases are.
//! Because the diagonal is monomial, the canonical basis inverts exactly and
//! every relative-position question reduces to a fraction-free Smith form
//! of an exact Laurent-polynomial matrix.

pub mod coweight;

use std::hash::{Hash, Hasher};

use num_rational::Rational64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::linalg::{ff_snf, ScalarMatrix, SubspaceBasis};
use crate::matrix::SeriesMatrix;
use crate::series::{Series, Valuation};

pub use coweight::{Coweight, Flavor};

#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    field: FieldConfig,
    canonical: SeriesMatrix,
    inverse: SeriesMatrix,
    diag: Vec<i64>,
    det_val: i64,
    lower: i64,
    upper: i64,
}

impl PartialEq for Lattice {
    fn eq(&self, o: &Self) -> bool {
        self.canonical == o.canonical
    }
}

impl Eq for Lattice {}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

/// Relative position of `L` with respect to `M`: `P X Q = diag(u t^a)` for
/// `X = C_M^{-1} C_L`, with `a` ascending.
#[derive(Clone, Debug)]
pub struct Relative {
    pub exponents: Vec<i64>,
    pub q: SeriesMatrix,
    pub q_bar: ScalarMatrix,
}

impl Relative {
    pub fn a_max(&self) -> i64 {
        *self.exponents.last().unwrap()
    }

    /// Residues of the tight generators, in the coordinates of `L/tL`
    /// given by the canonical basis of `L`.
    pub fn tight_subspace(&self, field: FieldConfig) -> SubspaceBasis {
        let n = self.exponents.len();
        let top = self.a_max();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .filter(|&j| self.exponents[j] == top)
            .map(|j| self.q_bar.column(j))
            .collect();
        SubspaceBasis::span(field, n, &cols).unwrap()
    }
}

impl Lattice {
    /// The lattice spanned by the columns of a square nonsingular matrix.
    pub fn from_basis(m: &SeriesMatrix) -> Result<Lattice> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} basis", m.rows(), m.cols())));
        }
        let snf = ff_snf(m, false, false)?;
        let upper = *snf.exponents.last().unwrap_or(&0);
        Lattice::from_generators_with_bound(m, upper)
    }

    /// The O-span of the columns of `gens`, which must contain `t^bound O^n`.
    pub fn from_generators_with_bound(gens: &SeriesMatrix, bound: i64) -> Result<Lattice> {
        let n = gens.rows();
        let field = gens.field();
        let (canonical, diag) = hermite(gens, bound)?;
        Ok(Lattice::from_canonical(n, field, canonical, diag))
    }

    fn from_canonical(n: usize, field: FieldConfig, canonical: SeriesMatrix, diag: Vec<i64>) -> Lattice {
        let inverse = triangular_inverse(&canonical, &diag);
        let det_val = diag.iter().sum();
        let lower = match canonical.min_valuation().expect("canonical bases are exact") {
            Valuation::Finite(v) => v,
            Valuation::Infinite => 0,
        };
        // the largest Smith exponent is the least u with t^u O^n inside L
        let upper = if n == 0 {
            0
        } else {
            *ff_snf(&canonical, false, false).expect("canonical bases are nonsingular").exponents.last().unwrap()
        };
        Lattice {
            n,
            field,
            canonical,
            inverse,
            diag,
            det_val,
            lower,
            upper,
        }
    }

    pub fn standard(field: FieldConfig, n: usize) -> Lattice {
        Lattice::diagonal(field, &vec![0; n])
    }

    /// diag(t^{e_1}, ..., t^{e_n}).
    pub fn diagonal(field: FieldConfig, exps: &[i64]) -> Lattice {
        let n = exps.len();
        Lattice::from_canonical(n, field, SeriesMatrix::t_diagonal(field, exps), exps.to_vec())
    }

    /// The point `t^mu`, the lattice with basis diag(t^{-mu_i}); with this
    /// convention `distance(O^n, t^mu) = mu`.
    pub fn t_mu(field: FieldConfig, mu: &[i64]) -> Lattice {
        let e: Vec<i64> = mu.iter().map(|x| -x).collect();
        Lattice::diagonal(field, &e)
    }

    /// Random lattice with basis entries of exponents in `lo..=hi`.
    pub fn random<R: Rng + ?Sized>(field: FieldConfig, n: usize, rng: &mut R, lo: i64, hi: i64) -> Lattice {
        loop {
            let m = SeriesMatrix::random(field, n, n, rng, lo, hi);
            if let Ok(l) = Lattice::from_basis(&m) {
                return l;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    /// The canonical basis, columns are generators.
    pub fn basis(&self) -> &SeriesMatrix {
        &self.canonical
    }

    pub fn pivot_exponents(&self) -> &[i64] {
        &self.diag
    }

    pub fn det_val(&self) -> i64 {
        self.det_val
    }

    /// Largest `k` with `L` inside `t^k O^n`.
    pub fn lower(&self) -> i64 {
        self.lower
    }

    /// Smallest `k` with `t^k O^n` inside `L`.
    pub fn upper(&self) -> i64 {
        self.upper
    }

    fn check_vector(&self, w: &[Series]) -> Result<()> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {}", w.len(), self.n)));
        }
        Ok(())
    }

    fn check_same(&self, o: &Lattice) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("dimensions {} and {}", self.n, o.n)));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Coordinates of `w` in the canonical basis (exact back-substitution).
    pub fn coordinates(&self, w: &[Series]) -> Result<Vec<Series>> {
        self.check_vector(w)?;
        self.inverse.mul_vec(w)
    }

    pub fn contains(&self, w: &[Series]) -> Result<bool> {
        for y in self.coordinates(w)? {
            if let Valuation::Finite(v) = y.valuation()? {
                if v < 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `min { k : t^k w in L }` for nonzero `w`.
    pub fn c_vector(&self, w: &[Series]) -> Result<i64> {
        let mut best: Option<i64> = None;
        for y in self.coordinates(w)? {
            if let Valuation::Finite(v) = y.valuation()? {
                best = Some(best.map_or(-v, |b| b.max(-v)));
            }
        }
        best.ok_or_else(|| Error::InvalidArgument("c(w, L) of the zero vector".into()))
    }

    /// Relative position of `self` with respect to `m`.
    pub fn relative(&self, m: &Lattice) -> Result<Relative> {
        self.check_same(m)?;
        let x = m.inverse.mul(&self.canonical)?;
        let s = ff_snf(&x, false, true)?;
        let q = s.q.unwrap();
        let q_bar = q.residue();
        Ok(Relative {
            exponents: s.exponents,
            q,
            q_bar,
        })
    }

    /// `c(L, M)`: the least `c(w, M)` over generators `w` of `L`.
    pub fn c_lattice(&self, m: &Lattice) -> Result<i64> {
        self.check_same(m)?;
        let x = m.inverse.mul(&self.canonical)?;
        Ok(-*ff_snf(&x, false, false)?.exponents.last().unwrap())
    }

    pub fn tight_subspace(&self, m: &Lattice) -> Result<SubspaceBasis> {
        Ok(self.relative(m)?.tight_subspace(self.field))
    }

    /// A generator of `L` with residue `x_bar` attaining `c(w, M) = c(L, M)`.
    pub fn tight_lift(&self, x_bar: &[Scalar], m: &Lattice) -> Result<Vec<Series>> {
        let rel = self.relative(m)?;
        self.tight_lift_with(x_bar, m, &rel)
    }

    pub fn tight_lift_with(&self, x_bar: &[Scalar], m: &Lattice, rel: &Relative) -> Result<Vec<Series>> {
        if x_bar.len() != self.n {
            return Err(Error::DimensionMismatch("residue vector".into()));
        }
        if x_bar.iter().all(Scalar::is_zero) {
            return Err(Error::NotInTightSubspace);
        }
        let y_bar = rel
            .q_bar
            .solve(x_bar)?
            .ok_or_else(|| Error::VerificationFailed("residue of Q is singular".into()))?;
        let top = rel.a_max();
        for (j, y) in y_bar.iter().enumerate() {
            if rel.exponents[j] < top && !y.is_zero() {
                return Err(Error::NotInTightSubspace);
            }
        }
        let y: Vec<Series> = y_bar.into_iter().map(Series::constant).collect();
        let w = self.canonical.mul_vec(&rel.q.mul_vec(&y)?)?;
        let c = m.c_vector(&w)?;
        if c != -top {
            return Err(Error::VerificationFailed(format!("lift has c = {c}, expected {}", -top)));
        }
        Ok(w)
    }

    /// Residue of a lattice vector in `L/tL`, in canonical coordinates.
    pub fn residue(&self, w: &[Series]) -> Result<Vec<Scalar>> {
        self.coordinates(w)?
            .iter()
            .map(|y| match y.valuation()? {
                Valuation::Finite(v) if v < 0 => Err(Error::InvalidArgument("vector is not in the lattice".into())),
                _ => y.coeff(0),
            })
            .collect()
    }

    pub fn sum(&self, o: &Lattice) -> Result<Lattice> {
        self.check_same(o)?;
        let gens = self.canonical.hstack(&o.canonical)?;
        Lattice::from_generators_with_bound(&gens, self.upper.min(o.upper))
    }

    /// `t^k L`.
    pub fn scale(&self, k: i64) -> Lattice {
        Lattice {
            n: self.n,
            field: self.field,
            canonical: self.canonical.shift(k),
            inverse: self.inverse.shift(-k),
            diag: self.diag.iter().map(|d| d + k).collect(),
            det_val: self.det_val + self.n as i64 * k,
            lower: self.lower + k,
            upper: self.upper + k,
        }
    }

    /// `{ x : <x, L> inside O }`, with basis the inverse transpose.
    pub fn dual(&self) -> Lattice {
        Lattice::from_generators_with_bound(&self.inverse.transpose(), -self.lower)
            .expect("dual of a lattice is a lattice")
    }

    /// The vector distance from `self` to `m`.
    pub fn distance(&self, m: &Lattice) -> Result<Coweight> {
        self.check_same(m)?;
        let x = self.inverse.mul(&m.canonical)?;
        let a = ff_snf(&x, false, false)?.exponents;
        Ok(Coweight::dominant(a.iter().map(|x| -x).collect(), Flavor::GL))
    }

    /// `<omega_i, d(self, m)>`, trace removed.
    pub fn d_i(&self, m: &Lattice, i: usize) -> Result<Rational64> {
        if i > self.n {
            return Err(Error::IndexOutOfRange(format!("d_{i} in dimension {}", self.n)));
        }
        Ok(self.distance(m)?.pair_fundamental(i))
    }
}

// Inverse of an upper-triangular matrix with monomial diagonal, exact.
fn triangular_inverse(c: &SeriesMatrix, diag: &[i64]) -> SeriesMatrix {
    let n = c.rows();
    let field = c.field();
    let mut inv = SeriesMatrix::zeros(n, n, field);
    for j in 0..n {
        // solve C x = e_j from the bottom
        let mut x: Vec<Series> = vec![Series::zero(field); n];
        for i in (0..n).rev() {
            let mut r = if i == j { Series::one(field) } else { Series::zero(field) };
            for k in i + 1..n {
                if !x[k].is_zero() && !c.get(i, k).is_zero() {
                    r = r.sub(&c.get(i, k).mul(&x[k]));
                }
            }
            x[i] = r.shift(-diag[i]);
        }
        for i in 0..n {
            inv.set(i, j, x[i].clone());
        }
    }
    inv
}

/// Hermite form of the module spanned by `gens` plus `t^bound O^n`, computed
/// exactly on polynomial lifts modulo `t^bound`.
fn hermite(gens: &SeriesMatrix, bound: i64) -> Result<(SeriesMatrix, Vec<i64>)> {
    let n = gens.rows();
    let field = gens.field();
    let mut pool: Vec<Vec<Series>> = Vec::with_capacity(gens.cols() + n);
    for col in gens.columns() {
        let mut v = Vec::with_capacity(n);
        for e in col {
            if !e.is_exact() && e.horizon() < bound {
                return Err(Error::IndeterminateValuation { horizon: e.horizon() });
            }
            v.push(e.head(bound));
        }
        pool.push(v);
    }
    for i in 0..n {
        let mut v = vec![Series::zero(field); n];
        v[i] = Series::t_pow(field, bound);
        pool.push(v);
    }
    let lo = pool
        .iter()
        .flatten()
        .filter(|e| !e.is_zero())
        .map(Series::lead)
        .min()
        .unwrap_or(bound)
        .min(bound);
    let precision = bound - lo;
    let reduce = |v: &mut Vec<Series>| {
        for e in v.iter_mut() {
            *e = e.head(bound);
        }
    };
    let mut columns: Vec<Vec<Series>> = vec![Vec::new(); n];
    let mut diag = vec![0i64; n];
    for i in (0..n).rev() {
        let (g, v) = pool
            .iter()
            .enumerate()
            .filter(|(_, col)| !col[i].is_zero())
            .map(|(k, col)| (k, col[i].lead()))
            .min_by_key(|&(k, v)| (v, k))
            .expect("t^bound e_i is always available");
        let mut pivot = pool.swap_remove(g);
        let u = pivot[i].shift(-v);
        if !(u.coeffs().len() == 1 && u.coeffs()[0].is_one()) {
            let u_inv = u.invert(precision.max(1))?.into_exact();
            for e in pivot.iter_mut() {
                *e = e.mul(&u_inv);
            }
            reduce(&mut pivot);
        }
        pivot[i] = Series::t_pow(field, v);
        for col in pool.iter_mut() {
            if col[i].is_zero() {
                continue;
            }
            let f = col[i].shift(-v);
            for r in 0..i {
                if !pivot[r].is_zero() {
                    col[r] = col[r].sub(&f.mul(&pivot[r]));
                }
            }
            col[i] = Series::zero(field);
            reduce(col);
        }
        pool.retain(|col| col.iter().any(|e| !e.is_zero()));
        columns[i] = pivot;
        diag[i] = v;
    }
    // reduce row i of later columns modulo t^{d_i}, bottom row first
    for j in 0..n {
        for i in (0..j).rev() {
            let e = columns[j][i].clone();
            let q = e.tail(diag[i]);
            if q.is_zero() {
                continue;
            }
            let q = q.shift(-diag[i]);
            for r in 0..=i {
                let x = columns[j][r].sub(&q.mul(&columns[i][r]));
                columns[j][r] = x.head(bound);
            }
        }
    }
    let canonical = SeriesMatrix::from_columns(field, &columns)?;
    Ok((canonical, diag))
}

pub fn member(w: &[Series], l: &Lattice) -> Result<bool> {
    l.contains(w)
}

pub fn c_vector(w: &[Series], l: &Lattice) -> Result<i64> {
    l.c_vector(w)
}

pub fn c_lattice(l: &Lattice, m: &Lattice) -> Result<i64> {
    l.c_lattice(m)
}

pub fn lattice_sum(l: &Lattice, m: &Lattice) -> Result<Lattice> {
    l.sum(m)
}

pub fn distance(l: &Lattice, m: &Lattice) -> Result<Coweight> {
    l.distance(m)
}
