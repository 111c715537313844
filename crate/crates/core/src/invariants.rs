//! Tropical invariants of configurations of points in the affine building.
//!
//! `f_t(i_1, ..., i_k)` is the largest `-val det` with `i_s` columns taken
//! from the s-th lattice, shifted by `(1/n) sum_s i_s det_val(L_s)` so that
//! rescaling a representative leaves it unchanged. It equals the weighted
//! distance sum `sum_s d_{i_s}(p, x_s)` minimised over points `p`, and the
//! witness lattice of the assignment algorithm is a minimiser.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::lattice::Lattice;
use crate::matrix::SeriesMatrix;
use crate::series::{Series, Valuation};
use crate::tropkm::{witness_with, WitnessCertificate, WitnessOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    SL,
    PGL,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::SL => write!(f, "SL"),
            Group::PGL => write!(f, "PGL"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    group: Group,
    points: Vec<Lattice>,
}

impl Configuration {
    pub fn new(group: Group, points: Vec<Lattice>) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::InvalidArgument("empty configuration".into()))?;
        if points.iter().any(|p| p.n() != first.n()) {
            return Err(Error::DimensionMismatch("points of different dimensions".into()));
        }
        if points.iter().any(|p| p.field() != first.field()) {
            return Err(Error::FieldMismatch);
        }
        if group == Group::SL {
            if let Some(k) = points.iter().position(|p| p.det_val() != 0) {
                return Err(Error::InvalidArgument(format!("SL point {k} has det_val {}", points[k].det_val())));
            }
        }
        Ok(Configuration { group, points })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn points(&self) -> &[Lattice] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points[0].n()
    }

    pub fn field(&self) -> FieldConfig {
        self.points[0].field()
    }

    /// The configuration of dual lattices.
    pub fn dual(&self) -> Configuration {
        Configuration {
            group: self.group,
            points: self.points.iter().map(Lattice::dual).collect(),
        }
    }

    /// Sum of all points, used as a starting lattice and as a ball centre.
    pub fn lattice_sum(&self) -> Result<Lattice> {
        let mut s = self.points[0].clone();
        for p in &self.points[1..] {
            if *p != s {
                s = s.sum(p)?;
            }
        }
        Ok(s)
    }
}

/// A value in (1/n)Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TropicalValue(pub Rational64);

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_indices(indices: &[usize], conf: &Configuration, total: usize) -> Result<()> {
    if indices.len() != conf.points.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} indices for {} points",
            indices.len(),
            conf.points.len()
        )));
    }
    let n = conf.n();
    if let Some(&i) = indices.iter().find(|&&i| i > n) {
        return Err(Error::IndexOutOfRange(format!("index {i} exceeds n = {n}")));
    }
    let got: usize = indices.iter().sum();
    if got != total {
        return Err(Error::IndexSum { expected: total, got });
    }
    Ok(())
}

/// `(1/n) sum_s i_s det_val(L_s)`.
pub fn normalization(indices: &[usize], conf: &Configuration) -> Rational64 {
    let n = conf.n() as i64;
    let s: i64 = indices.iter().zip(&conf.points).map(|(&i, p)| i as i64 * p.det_val()).sum();
    Rational64::new(s, n)
}

pub fn f_t(indices: &[usize], conf: &Configuration) -> Result<(TropicalValue, WitnessCertificate)> {
    f_t_with(indices, conf, 0)
}

pub fn f_t_with(indices: &[usize], conf: &Configuration, seed: u64) -> Result<(TropicalValue, WitnessCertificate)> {
    check_indices(indices, conf, conf.n())?;
    let mut inputs = Vec::with_capacity(conf.n());
    for (&i, p) in indices.iter().zip(&conf.points) {
        inputs.extend(std::iter::repeat(p.clone()).take(i));
    }
    let cert = witness_with(
        &inputs,
        &WitnessOptions {
            seed,
            ..Default::default()
        },
    )?;
    let value = Rational64::from_integer(-cert.optimum) + normalization(indices, conf);
    Ok((TropicalValue(value), cert))
}

/// `sum_s d_{i_s}(p, x_s)`.
pub fn metric_sum(indices: &[usize], conf: &Configuration, p: &Lattice) -> Result<Rational64> {
    if indices.len() != conf.points.len() {
        return Err(Error::DimensionMismatch("indices and points".into()));
    }
    let mut total = Rational64::zero();
    for (&i, x) in indices.iter().zip(&conf.points) {
        if i != 0 && i != conf.n() {
            total += p.d_i(x, i)?;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct MetricMin {
    pub value: TropicalValue,
    pub minimizer: Lattice,
}

/// The weighted distance sum at the witness lattice.
pub fn metric_min(indices: &[usize], conf: &Configuration) -> Result<MetricMin> {
    let (_, cert) = f_t(indices, conf)?;
    let value = metric_sum(indices, conf, &cert.lattice)?;
    Ok(MetricMin {
        value: TropicalValue(value),
        minimizer: cert.lattice,
    })
}

/// The function dual to `f_t`, for indices summing to `(k-1)n`; computed as
/// `f_t` with indices `n - i_s` on the dual configuration. Its witness,
/// dualised back, minimises `sum_s d_{i_s}(p, x_s)`.
pub fn dual_f_t(indices: &[usize], conf: &Configuration) -> Result<(TropicalValue, WitnessCertificate)> {
    let n = conf.n();
    let k = conf.points.len();
    check_indices(indices, conf, (k - 1) * n)?;
    let flipped: Vec<usize> = indices.iter().map(|&i| n - i).collect();
    f_t(&flipped, &conf.dual())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeReport {
    pub sums: [Rational64; 3],
    pub holds: bool,
}

/// The tropical three-term exchange relation for indices `(i, j, k, l)`.
pub fn exchange_identity_check(idx: [usize; 4], conf: &Configuration) -> Result<ExchangeReport> {
    if conf.points.len() != 4 {
        return Err(Error::DimensionMismatch("the exchange identity needs four points".into()));
    }
    let n = conf.n() as i64;
    let [i, j, k, l] = idx.map(|x| x as i64);
    if i + j + k + l != n {
        return Err(Error::IndexSum {
            expected: n as usize,
            got: (i + j + k + l) as usize,
        });
    }
    let f = |v: [i64; 4]| -> Result<Rational64> {
        if v.iter().any(|&x| x < 0 || x > n) {
            return Err(Error::IndexOutOfRange(format!("{v:?} leaves [0, {n}]")));
        }
        let u: Vec<usize> = v.iter().map(|&x| x as usize).collect();
        Ok(f_t(&u, conf)?.0 .0)
    };
    let sums = [
        f([i, j, k, l])? + f([i + 1, j - 1, k + 1, l - 1])?,
        f([i, j, k + 1, l - 1])? + f([i + 1, j - 1, k, l])?,
        f([i + 1, j, k, l - 1])? + f([i, j - 1, k + 1, l])?,
    ];
    let mut sorted = sums;
    sorted.sort();
    Ok(ExchangeReport {
        sums,
        holds: sorted[1] == sorted[2],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub positive: bool,
    pub checked: usize,
    pub first_violation: Option<String>,
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Checks that the given ordered bases realise every `f_t` on the chosen
/// triangles with positive leading coefficients. Values are compared before
/// the determinant normalisation since the bases live in the representatives.
/// Without a triangulation every triple is checked, and with two points every
/// pair.
pub fn positivity_check(
    conf: &Configuration,
    bases: &[Vec<Vec<Series>>],
    triangulation: Option<&[[usize; 3]]>,
) -> Result<PositivityReport> {
    if !conf.field().is_ordered() {
        return Err(Error::FieldNotOrdered);
    }
    let n = conf.n();
    let m = conf.points.len();
    if bases.len() != m {
        return Err(Error::DimensionMismatch(format!("{} bases for {m} points", bases.len())));
    }
    for (s, (basis, p)) in bases.iter().zip(&conf.points).enumerate() {
        if basis.len() != n || basis.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("basis {s} is not n x n")));
        }
        for (k, v) in basis.iter().enumerate() {
            if !p.contains(v)? {
                return Err(Error::BasisNotInLattice(format!("vector {k} of point {s}")));
            }
        }
        let d = SeriesMatrix::from_columns(conf.field(), basis)?.determinant()?;
        if d.valuation()? != Valuation::Finite(p.det_val()) {
            return Err(Error::BasisNotInLattice(format!("basis of point {s} does not span its lattice")));
        }
    }
    let groups: Vec<Vec<usize>> = match triangulation {
        Some(tris) => {
            for t in tris {
                if t.iter().any(|&x| x >= m) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                    return Err(Error::InvalidArgument(format!("bad triangle {t:?}")));
                }
            }
            tris.iter().map(|t| t.to_vec()).collect()
        }
        None if m >= 3 => {
            let mut all = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        all.push(vec![a, b, c]);
                    }
                }
            }
            all
        }
        None => vec![(0..m).collect()],
    };
    let mut checked = 0;
    for g in &groups {
        let sub = Configuration::new(Group::PGL, g.iter().map(|&s| conf.points[s].clone()).collect())?;
        for idx in compositions(n, g.len()) {
            let mut cols = Vec::with_capacity(n);
            for (&s, &i) in g.iter().zip(&idx) {
                cols.extend(bases[s][..i].iter().cloned());
            }
            let det = SeriesMatrix::from_columns(conf.field(), &cols)?.determinant()?;
            let (_, cert) = f_t(&idx, &sub)?;
            checked += 1;
            let violation = match det.valuation()? {
                Valuation::Infinite => Some("determinant vanishes".to_string()),
                Valuation::Finite(v) if v != cert.optimum => {
                    Some(format!("-val det = {} but the maximum is {}", -v, -cert.optimum))
                }
                Valuation::Finite(_) => match det.leading_coeff().unwrap().signum()? {
                    1 => None,
                    _ => Some(format!("leading coefficient {} is not positive", det.leading_coeff().unwrap())),
                },
            };
            if let Some(why) = violation {
                return Ok(PositivityReport {
                    positive: false,
                    checked,
                    first_violation: Some(format!("points {g:?}, indices {idx:?}: {why}")),
                });
            }
        }
    }
    Ok(PositivityReport {
        positive: true,
        checked,
        first_violation: None,
    })
}

fn fract(x: Rational64) -> Rational64 {
    x - x.floor()
}

/// The fractional part shared by `sum_s d_{i_s}(p, x_s)` for all `p`,
/// evaluated at the witness and at the standard lattice.
pub fn mod1_class(indices: &[usize], conf: &Configuration) -> Result<Rational64> {
    let (_, cert) = f_t(indices, conf)?;
    let at_witness = fract(metric_sum(indices, conf, &cert.lattice)?);
    let at_standard = fract(metric_sum(indices, conf, &Lattice::standard(conf.field(), conf.n()))?);
    if at_witness != at_standard {
        return Err(Error::AssertionFailed(format!(
            "fractional parts {at_witness} and {at_standard} differ"
        )));
    }
    Ok(at_witness)
}
