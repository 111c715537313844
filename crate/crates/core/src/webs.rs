//! The four-point web function `F` and a checker for its conjectured
//! tropicalisation. Experimental: everything here is reported, never gated.
//!
//! For `1 <= a, b, c, d < n` with `a + b > n` and `a + b + c + d = 2n`,
//! `F(T, U, V, W)` comultiplies `U` into degrees `(a+b-n, n-a)`, wedges
//! the first factor between `W` and `V`, the second after `T`, and
//! multiplies the two volumes.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::invariants::Configuration;
use crate::lattice::Lattice;
use crate::oracle::StandardBall;
use crate::series::{Series, Valuation};

pub const CONJECTURE_LABEL: &str = "conjecture - report only";

// Sign of e_A ^ e_B against e_{A|B} for disjoint masks.
fn shuffle_sign(a: u32, b: u32) -> bool {
    let mut inversions = 0;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inversions += (a >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

fn subsets_of(mask: u32, size: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        if s.count_ones() == size {
            out.push(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out
}

/// An element of the a-th exterior power of K^n, keyed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorVector {
    n: usize,
    degree: usize,
    field: FieldConfig,
    comps: BTreeMap<u32, Series>,
}

impl ExteriorVector {
    pub fn zero(field: FieldConfig, n: usize, degree: usize) -> Self {
        ExteriorVector {
            n,
            degree,
            field,
            comps: BTreeMap::new(),
        }
    }

    /// `e_{s_1} ^ ... ^ e_{s_k}` for increasing 0-based indices.
    pub fn basis(field: FieldConfig, n: usize, subset: &[usize]) -> Result<Self> {
        if subset.windows(2).any(|w| w[0] >= w[1]) || subset.last().is_some_and(|&x| x >= n) {
            return Err(Error::InvalidArgument(format!("{subset:?} is not an increasing subset of 0..{n}")));
        }
        let mask = subset.iter().fold(0u32, |m, &i| m | 1 << i);
        let mut v = ExteriorVector::zero(field, n, subset.len());
        v.comps.insert(mask, Series::one(field));
        Ok(v)
    }

    pub fn from_vector(field: FieldConfig, v: &[Series]) -> Self {
        let mut out = ExteriorVector::zero(field, v.len(), 1);
        for (i, x) in v.iter().enumerate() {
            out.insert(1 << i, x.clone());
        }
        out
    }

    /// `v_1 ^ ... ^ v_k`.
    pub fn wedge_all(field: FieldConfig, n: usize, vectors: &[Vec<Series>]) -> Self {
        let mut acc = ExteriorVector::zero(field, n, 0);
        acc.comps.insert(0, Series::one(field));
        for v in vectors {
            acc = acc.wedge(&ExteriorVector::from_vector(field, v)).expect("same ambient space");
        }
        acc
    }

    fn insert(&mut self, mask: u32, c: Series) {
        let sum = match self.comps.remove(&mask) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.comps.insert(mask, sum);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<u32, Series> {
        &self.comps
    }

    pub fn add(&self, o: &ExteriorVector) -> Result<Self> {
        if self.n != o.n || self.degree != o.degree {
            return Err(Error::DimensionMismatch("exterior degrees differ".into()));
        }
        let mut out = self.clone();
        for (&m, c) in &o.comps {
            out.insert(m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Series) -> Self {
        let mut out = ExteriorVector::zero(self.field, self.n, self.degree);
        for (&m, x) in &self.comps {
            out.insert(m, x.mul(c));
        }
        out
    }

    pub fn wedge(&self, o: &ExteriorVector) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch("exterior ambient dimensions differ".into()));
        }
        if self.degree + o.degree > self.n {
            return Ok(ExteriorVector::zero(self.field, self.n, self.degree + o.degree));
        }
        let mut out = ExteriorVector::zero(self.field, self.n, self.degree + o.degree);
        for (&a, x) in &self.comps {
            for (&b, y) in &o.comps {
                if a & b != 0 {
                    continue;
                }
                let p = x.mul(y);
                out.insert(a | b, if shuffle_sign(a, b) { p.neg() } else { p });
            }
        }
        Ok(out)
    }

    /// The coefficient of `e_1 ^ ... ^ e_n`.
    pub fn volume(&self) -> Result<Series> {
        if self.degree != self.n {
            return Err(Error::DimensionMismatch(format!("volume of a degree {} form in dimension {}", self.degree, self.n)));
        }
        Ok(self.comps.get(&((1u32 << self.n) - 1)).cloned().unwrap_or_else(|| Series::zero(self.field)))
    }
}

/// `phi(e_S) = sum over S = S_1 | S_2, |S_1| = p, of sign * e_{S_1} (x) e_{S_2}`.
pub fn comultiply(u: &ExteriorVector, split: (usize, usize)) -> Result<BTreeMap<(u32, u32), Series>> {
    let (p, q) = split;
    if p + q != u.degree {
        return Err(Error::DimensionMismatch(format!("split {split:?} of a degree {} vector", u.degree)));
    }
    let mut out: BTreeMap<(u32, u32), Series> = BTreeMap::new();
    for (&s, c) in &u.comps {
        for s1 in subsets_of(s, p as u32) {
            let s2 = s & !s1;
            let term = if shuffle_sign(s1, s2) { c.neg() } else { c.clone() };
            let sum = match out.remove(&(s1, s2)) {
                Some(old) => old.add(&term),
                None => term,
            };
            if !sum.is_zero() {
                out.insert((s1, s2), sum);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WebParams {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl WebParams {
    pub fn new(n: usize, a: usize, b: usize, c: usize, d: usize) -> Result<Self> {
        if [a, b, c, d].iter().any(|&x| x == 0 || x >= n) {
            return Err(Error::InvalidArgument(format!("web degrees must lie in 1..{n}")));
        }
        if a + b <= n {
            return Err(Error::InvalidArgument(format!("a + b = {} must exceed n = {n}", a + b)));
        }
        if a + b + c + d != 2 * n {
            return Err(Error::InvalidArgument(format!("a + b + c + d = {} must be 2n", a + b + c + d)));
        }
        Ok(WebParams { n, a, b, c, d })
    }

    pub fn degrees(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Degree of the inner edge, `a + b - n`.
    pub fn inner(&self) -> usize {
        self.a + self.b - self.n
    }
}

impl fmt::Display for WebParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} (a,b,c,d)=({},{},{},{})", self.n, self.a, self.b, self.c, self.d)
    }
}

fn check_args(params: &WebParams, args: [&ExteriorVector; 4]) -> Result<()> {
    for (x, want) in args.iter().zip(params.degrees()) {
        if x.n != params.n || x.degree != want {
            return Err(Error::DimensionMismatch(format!(
                "argument of degree {} in dimension {}, expected degree {want} in dimension {}",
                x.degree, x.n, params.n
            )));
        }
    }
    Ok(())
}

#[allow(non_snake_case)]
pub fn web_F(params: &WebParams, t: &ExteriorVector, u: &ExteriorVector, v: &ExteriorVector, w: &ExteriorVector) -> Result<Series> {
    check_args(params, [t, u, v, w])?;
    let n = params.n;
    let mut total = Series::zero(t.field);
    for ((s1, s2), c) in comultiply(u, (params.inner(), n - params.a))? {
        let first = ExteriorVector {
            n,
            degree: params.inner(),
            field: t.field,
            comps: BTreeMap::from([(s1, Series::one(t.field))]),
        };
        let second = ExteriorVector {
            n,
            degree: n - params.a,
            field: t.field,
            comps: BTreeMap::from([(s2, Series::one(t.field))]),
        };
        let left = w.wedge(&first)?.wedge(v)?.volume()?;
        if left.is_zero() {
            continue;
        }
        let right = t.wedge(&second)?.volume()?;
        total = total.add(&c.mul(&left).mul(&right));
    }
    Ok(total)
}

/// Direct expansion of `F` over all index lists, signs from explicit
/// permutation parities.
#[allow(non_snake_case)]
pub fn web_F_brute(params: &WebParams, t: &ExteriorVector, u: &ExteriorVector, v: &ExteriorVector, w: &ExteriorVector) -> Result<Series> {
    check_args(params, [t, u, v, w])?;
    let n = params.n;
    let field = t.field;
    let list = |m: u32| -> Vec<usize> { (0..n).filter(|i| m & (1 << i) != 0).collect() };
    let parity = |seq: &[usize]| -> Option<bool> {
        let mut s = seq.to_vec();
        let mut odd = false;
        for i in 0..s.len() {
            for j in 0..s.len() - 1 - i {
                if s[j] == s[j + 1] {
                    return None;
                }
                if s[j] > s[j + 1] {
                    s.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        if s.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        Some(odd)
    };
    let signed = |x: Series, odd: bool| if odd { x.neg() } else { x };
    let mut total = Series::zero(field);
    for (&su, cu) in &u.comps {
        let idx = list(su);
        let k = params.inner();
        for pick in 0u32..(1 << idx.len()) {
            if pick.count_ones() as usize != k {
                continue;
            }
            let s1: Vec<usize> = (0..idx.len()).filter(|&j| pick & (1 << j) != 0).map(|j| idx[j]).collect();
            let s2: Vec<usize> = (0..idx.len()).filter(|&j| pick & (1 << j) == 0).map(|j| idx[j]).collect();
            let split_odd = parity(&[s1.clone(), s2.clone()].concat()).expect("disjoint");
            let mut left = Series::zero(field);
            for (&sw, cw) in &w.comps {
                for (&sv, cv) in &v.comps {
                    let seq = [list(sw), s1.clone(), list(sv)].concat();
                    if let Some(odd) = parity(&seq) {
                        left = left.add(&signed(cw.mul(cv), odd));
                    }
                }
            }
            let mut right = Series::zero(field);
            for (&st, ct) in &t.comps {
                let seq = [list(st), s2.clone()].concat();
                if let Some(odd) = parity(&seq) {
                    right = right.add(&signed(ct.clone(), odd));
                }
            }
            total = total.add(&signed(cu.mul(&left).mul(&right), split_odd));
        }
    }
    Ok(total)
}

/// A random O-combination of the wedges of `degree` canonical basis vectors.
pub fn random_wedge<R: rand::Rng + ?Sized>(l: &Lattice, degree: usize, rng: &mut R) -> ExteriorVector {
    let n = l.n();
    let field = l.field();
    let cols = l.basis().columns();
    let mut acc = ExteriorVector::zero(field, n, degree);
    for s in subsets_of((1u32 << n) - 1, degree as u32) {
        let picked: Vec<Vec<Series>> = (0..n).filter(|i| s & (1 << i) != 0).map(|i| cols[i].clone()).collect();
        let coef = Series::random(field, rng, 0, 2);
        acc = acc.add(&ExteriorVector::wedge_all(field, n, &picked).scale(&coef)).expect("same degree");
    }
    acc
}

fn check_conf(params: &WebParams, conf: &Configuration) -> Result<()> {
    if conf.points().len() != 4 {
        return Err(Error::DimensionMismatch("the web function takes four points".into()));
    }
    if conf.n() != params.n {
        return Err(Error::DimensionMismatch(format!("params for n = {}, points in dimension {}", params.n, conf.n())));
    }
    Ok(())
}

/// Sampled lower estimate of `F^t`: the best `-val F` over random lattice
/// elements, plus `(a dv_1 + b dv_2 + c dv_3 + d dv_4) / n`.
#[allow(non_snake_case)]
pub fn web_F_tropical(params: &WebParams, conf: &Configuration, trials: usize, seed: u64) -> Result<Rational64> {
    check_conf(params, conf)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degs = params.degrees();
    let pts = conf.points();
    let mut best: Option<i64> = None;
    for _ in 0..trials {
        let args: Vec<ExteriorVector> = (0..4).map(|s| random_wedge(&pts[s], degs[s], &mut rng)).collect();
        if let Valuation::Finite(v) = web_F(params, &args[0], &args[1], &args[2], &args[3])?.valuation()? {
            best = Some(best.map_or(-v, |b| b.max(-v)));
        }
    }
    let best = best.ok_or(Error::SingularMatrix)?;
    let norm: i64 = (0..4).map(|s| degs[s] as i64 * pts[s].det_val()).sum();
    Ok(Rational64::from_integer(best) + Rational64::new(norm, params.n as i64))
}

/// Largest ball whose pairs are searched.
pub const PAIR_BALL_LIMIT: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub params: WebParams,
    pub lhs: Rational64,
    pub rhs: Rational64,
    pub radius: usize,
    pub trials: usize,
    pub ball_size: usize,
    pub agree: bool,
    pub lhs_le_rhs: bool,
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{CONJECTURE_LABEL}]")?;
        writeln!(f, "params: {}", self.params)?;
        writeln!(f, "sampled estimate (lhs): {}", self.lhs)?;
        writeln!(f, "enumerated minimum (rhs): {}", self.rhs)?;
        writeln!(f, "radius: {}  trials: {}  ball size: {}", self.radius, self.trials, self.ball_size)?;
        writeln!(f, "lhs <= rhs: {}", self.lhs_le_rhs)?;
        write!(f, "agreement: {}", self.agree)
    }
}

/// Compares the sampled `F^t` with the least value of
/// `d_a(p,x1) + d_b(p,x2) + d_{a+b-n}(q,p) + d_c(q,x3) + d_d(q,x4)` over
/// pairs of lattices in the ball around the sum of the points.
pub fn conjecture_check(params: &WebParams, conf: &Configuration, radius: usize, trials: usize, seed: u64) -> Result<ConjectureReport> {
    check_conf(params, conf)?;
    let ball = StandardBall::new(conf.field(), conf.n(), radius)?;
    if ball.len() > PAIR_BALL_LIMIT {
        return Err(Error::SizeLimit(format!("{} lattices, pairs would be searched", ball.len())));
    }
    let lhs = web_F_tropical(params, conf, trials, seed)?;
    let center = conf.lattice_sum()?;
    let frame = ball.frame(&center, conf.points())?;
    let m = ball.len();
    // all values scaled by n; every d_i is nonnegative, which prunes pairs
    let mut left: Vec<(i64, usize)> = (0..m).map(|k| (frame.d_scaled(k, 0, params.a) + frame.d_scaled(k, 1, params.b), k)).collect();
    let mut right: Vec<(i64, usize)> = (0..m).map(|k| (frame.d_scaled(k, 2, params.c) + frame.d_scaled(k, 3, params.d), k)).collect();
    left.sort_unstable();
    right.sort_unstable();
    let mut best = i64::MAX;
    for &(lp, p) in &left {
        if lp + right[0].0 >= best {
            break;
        }
        for &(rq, q) in &right {
            if lp + rq >= best {
                break;
            }
            best = best.min(lp + rq + ball.pair_d_scaled(q, p, params.inner()));
        }
    }
    let rhs = Rational64::new(best, params.n as i64);
    Ok(ConjectureReport {
        params: *params,
        lhs,
        rhs,
        radius,
        trials,
        ball_size: m,
        agree: lhs == rhs,
        lhs_le_rhs: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::invariants::Group;
    use crate::matrix::SeriesMatrix;
    use rand::Rng;

    const P: FieldConfig = FieldConfig::Prime(DEFAULT_PRIME);

    fn e(n: usize, s: &[usize]) -> ExteriorVector {
        ExteriorVector::basis(P, n, s).unwrap()
    }

    fn one() -> Series {
        Series::one(P)
    }

    #[test]
    fn comultiply_examples() {
        let phi = comultiply(&e(3, &[0, 1]), (1, 1)).unwrap();
        assert_eq!(phi.len(), 2);
        assert_eq!(phi[&(0b01, 0b10)], one());
        assert_eq!(phi[&(0b10, 0b01)], one().neg());
        let phi = comultiply(&e(3, &[0, 2]), (1, 1)).unwrap();
        assert_eq!(phi[&(0b001, 0b100)], one());
        assert_eq!(phi[&(0b100, 0b001)], one().neg());
        assert!(comultiply(&ExteriorVector::zero(P, 3, 2), (1, 1)).unwrap().is_empty());
        assert!(comultiply(&e(3, &[0, 1]), (1, 2)).is_err());
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, deg: usize) -> ExteriorVector {
        let mut v = ExteriorVector::zero(P, n, deg);
        for s in subsets_of((1 << n) - 1, deg as u32) {
            v.insert(s, Series::random(P, rng, -1, 2));
        }
        v
    }

    #[test]
    fn recombining_gives_a_binomial_multiple() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, p, q) in [(4, 1, 2), (4, 2, 2), (5, 2, 1), (3, 1, 1)] {
            let u = random_vec(&mut rng, n, p + q);
            let mut back = ExteriorVector::zero(P, n, p + q);
            for ((s1, s2), c) in comultiply(&u, (p, q)).unwrap() {
                let x = ExteriorVector::basis(P, n, &(0..n).filter(|i| s1 & (1 << i) != 0).collect::<Vec<_>>()).unwrap();
                let y = ExteriorVector::basis(P, n, &(0..n).filter(|i| s2 & (1 << i) != 0).collect::<Vec<_>>()).unwrap();
                back = back.add(&x.wedge(&y).unwrap().scale(&c)).unwrap();
            }
            let binom = [1, 1, 2, 6, 24][p + q] / ([1, 1, 2, 6, 24][p] * [1, 1, 2, 6, 24][q]);
            assert_eq!(back, u.scale(&Series::from_i64(P, binom)));
        }
    }

    #[test]
    fn comultiply_is_coassociative() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = random_vec(&mut rng, 4, 3);
        // (phi (x) 1) phi versus (1 (x) phi) phi, into degrees (1, 1, 1)
        let mut lhs: BTreeMap<(u32, u32, u32), Series> = BTreeMap::new();
        let mut rhs = lhs.clone();
        let put = |m: &mut BTreeMap<(u32, u32, u32), Series>, k, c: Series| {
            let s = m.remove(&k).map_or(c.clone(), |o| o.add(&c));
            m.insert(k, s);
        };
        for ((a, b), c) in comultiply(&u, (2, 1)).unwrap() {
            let inner = ExteriorVector { n: 4, degree: 2, field: P, comps: BTreeMap::from([(a, one())]) };
            for ((x, y), d) in comultiply(&inner, (1, 1)).unwrap() {
                put(&mut lhs, (x, y, b), c.mul(&d));
            }
        }
        for ((a, b), c) in comultiply(&u, (1, 2)).unwrap() {
            let inner = ExteriorVector { n: 4, degree: 2, field: P, comps: BTreeMap::from([(b, one())]) };
            for ((x, y), d) in comultiply(&inner, (1, 1)).unwrap() {
                put(&mut rhs, (a, x, y), c.mul(&d));
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn web_examples() {
        let params = WebParams::new(3, 2, 2, 1, 1).unwrap();
        let f = web_F(&params, &e(3, &[0, 1]), &e(3, &[0, 1]), &e(3, &[0]), &e(3, &[0])).unwrap();
        assert!(f.is_zero());
        assert!(WebParams::new(3, 1, 2, 2, 1).is_err());
        assert!(WebParams::new(3, 2, 2, 2, 1).is_err());
        assert!(WebParams::new(3, 3, 1, 1, 1).is_err());
        assert!(web_F(&params, &e(3, &[0]), &e(3, &[0, 1]), &e(3, &[0]), &e(3, &[0])).is_err());
    }

    #[test]
    fn web_matches_brute_and_is_multilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (n, a, b, c, d) in [(3, 2, 2, 1, 1), (4, 3, 2, 2, 1), (4, 2, 3, 1, 2), (4, 3, 3, 1, 1)] {
            let params = WebParams::new(n, a, b, c, d).unwrap();
            let args: Vec<ExteriorVector> = params.degrees().iter().map(|&k| random_vec(&mut rng, n, k)).collect();
            let f = web_F(&params, &args[0], &args[1], &args[2], &args[3]).unwrap();
            assert_eq!(f, web_F_brute(&params, &args[0], &args[1], &args[2], &args[3]).unwrap());
            let t = Series::t_pow(P, 1);
            let scaled = web_F(&params, &args[0], &args[1].scale(&t), &args[2], &args[3]).unwrap();
            assert_eq!(scaled, f.mul(&t));
            let other = random_vec(&mut rng, n, c);
            let sum = web_F(&params, &args[0], &args[1], &args[2].add(&other).unwrap(), &args[3]).unwrap();
            let split = f.add(&web_F(&params, &args[0], &args[1], &other, &args[3]).unwrap());
            assert_eq!(sum, split);
        }
    }

    #[test]
    fn unimodular_changes_keep_the_valuation() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let params = WebParams::new(3, 2, 2, 1, 1).unwrap();
        for _ in 0..4 {
            let vecs: Vec<Vec<Vec<Series>>> = params
                .degrees()
                .iter()
                .map(|&k| (0..k).map(|_| (0..3).map(|_| Series::random(P, &mut rng, -1, 1)).collect()).collect())
                .collect();
            let g = SeriesMatrix::random_unimodular(P, 3, &mut rng, 2);
            let wedge = |vs: &[Vec<Series>], g: Option<&SeriesMatrix>| {
                let moved: Vec<Vec<Series>> = vs.iter().map(|v| g.map_or(v.clone(), |g| g.mul_vec(v).unwrap())).collect();
                ExteriorVector::wedge_all(P, 3, &moved)
            };
            let plain: Vec<_> = vecs.iter().map(|v| wedge(v, None)).collect();
            let moved: Vec<_> = vecs.iter().map(|v| wedge(v, Some(&g))).collect();
            let f0 = web_F(&params, &plain[0], &plain[1], &plain[2], &plain[3]).unwrap();
            let f1 = web_F(&params, &moved[0], &moved[1], &moved[2], &moved[3]).unwrap();
            assert_eq!(f0.valuation().unwrap(), f1.valuation().unwrap());
        }
    }

    #[test]
    fn tropical_estimates() {
        let params = WebParams::new(3, 2, 2, 1, 1).unwrap();
        let o = Lattice::standard(P, 3);
        let conf = Configuration::new(Group::PGL, vec![o.clone(), o.clone(), o.clone(), o.clone()]).unwrap();
        assert_eq!(web_F_tropical(&params, &conf, 5, 0).unwrap(), Rational64::from_integer(0));
        let moved = Configuration::new(Group::PGL, vec![o.clone(), o.scale(1), o.clone(), o.clone()]).unwrap();
        assert_eq!(web_F_tropical(&params, &moved, 5, 0).unwrap(), Rational64::from_integer(0));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<Lattice> = (0..4).map(|_| Lattice::random(P, 3, &mut rng, -1, 1)).collect();
        let conf = Configuration::new(Group::PGL, pts.clone()).unwrap();
        let base = web_F_tropical(&params, &conf, 10, 1).unwrap();
        let mut shifted = pts;
        let m = rng.gen_range(1..3);
        shifted[2] = shifted[2].scale(m);
        let again = web_F_tropical(&params, &Configuration::new(Group::PGL, shifted).unwrap(), 10, 1).unwrap();
        assert_eq!(base, again);
    }

    #[test]
    fn conjecture_reports() {
        let f = FieldConfig::Prime(3);
        let params = WebParams::new(3, 2, 2, 1, 1).unwrap();
        let o = Lattice::standard(f, 3);
        let conf = Configuration::new(Group::PGL, vec![o.clone(), o.clone(), o.clone(), o]).unwrap();
        let rep = conjecture_check(&params, &conf, 1, 20, 0).unwrap();
        assert_eq!(rep.rhs, Rational64::from_integer(0));
        assert_eq!(rep.lhs, Rational64::from_integer(0));
        assert!(rep.agree && rep.to_string().contains(CONJECTURE_LABEL));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Lattice> = (0..4).map(|_| Lattice::random(f, 3, &mut rng, -1, 1)).collect();
        let rep = conjecture_check(&params, &Configuration::new(Group::PGL, pts).unwrap(), 1, 30, 0).unwrap();
        assert!(rep.lhs_le_rhs, "{rep}");
    }
}
