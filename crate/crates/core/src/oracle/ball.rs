//! Exhaustive enumeration of lattices in a ball, and fast evaluation of
//! distance sums over it.
//!
//! In coordinates of a centre `C` the ball of radius `r` is the set of
//! lattices `t^-r P` with `t^2r O^n <= P <= O^n`. Each `P` is stored by its
//! Hermite form: pivots `t^{e_i}` and off-diagonal polynomials of degree
//! below the pivot of their row, as coefficient arrays over F_q.
//!
//! Distances only need the two containment numbers `m(A -> B)`, the least
//! `l` with `t^l A <= B`:
//!
//!   d_1(L, M)     = m(M -> L) - (det L - det M) / n
//!   d_{n-1}(L, M) = m(L -> M) + (det L - det M) / n
//!
//! which cover every index for `n <= 3`. Containment is tested modulo
//! `t^2r` by Hermite back-substitution on tiny arrays.

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::lattice::Lattice;
use crate::matrix::SeriesMatrix;
use crate::series::Series;

pub const MAX_N: usize = 3;
pub const MAX_RADIUS: usize = 2;
pub const MAX_Q: u64 = 7;

const W: usize = 2 * MAX_RADIUS;
const FULL: usize = 8;

type Res = [[u8; W]; MAX_N];
type Full = [[u8; FULL]; MAX_N];

/// Hermite form of a module between `t^N O^n` and `O^n`. `off` holds the
/// entries (0,1), (0,2), (1,2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hermite {
    pub e: [u8; MAX_N],
    pub off: [[u8; W]; MAX_N],
}

fn off_idx(row: usize, col: usize) -> usize {
    row + col - 1
}

struct Tables {
    q: u8,
    mul: [[u8; 8]; 8],
    sub: [[u8; 8]; 8],
}

impl Tables {
    fn new(q: u8) -> Self {
        let mut mul = [[0u8; 8]; 8];
        let mut sub = [[0u8; 8]; 8];
        for a in 0..q {
            for b in 0..q {
                mul[a as usize][b as usize] = (a as u16 * b as u16 % q as u16) as u8;
                sub[a as usize][b as usize] = ((a + q - b) % q) as u8;
            }
        }
        Tables { q, mul, sub }
    }
}

pub struct StandardBall {
    n: usize,
    r: usize,
    field: FieldConfig,
    tab: Tables,
    points: Vec<Hermite>,
}

// Small exact polynomials for the containment condition during enumeration.
fn pmul(t: &Tables, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; (a.len() + b.len()).saturating_sub(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = t.mul[x as usize][y as usize];
            out[i + j] = (out[i + j] + p) % t.q;
        }
    }
    out
}

fn val_at_least(p: &[u8], k: i64) -> bool {
    p.iter().enumerate().all(|(i, &c)| c == 0 || i as i64 >= k)
}

fn digits(mut code: usize, q: usize, len: usize) -> [u8; W] {
    let mut out = [0u8; W];
    for d in out.iter_mut().take(len) {
        *d = (code % q) as u8;
        code /= q;
    }
    out
}

impl StandardBall {
    /// All modules `t^2r O^n <= P <= O^n` over F_q, in Hermite form.
    pub fn new(field: FieldConfig, n: usize, r: usize) -> Result<Self> {
        let q = match field.size() {
            Some(q) if q <= MAX_Q => q,
            _ => return Err(Error::SizeLimit(format!("ball enumeration needs a field of size <= {MAX_Q}"))),
        };
        if n == 0 || n > MAX_N || r > MAX_RADIUS {
            return Err(Error::SizeLimit(format!("ball enumeration needs n <= {MAX_N} and r <= {MAX_RADIUS}")));
        }
        let tab = Tables::new(q as u8);
        let big = 2 * r;
        let qs = q as usize;
        let mut points = Vec::new();
        let blank = Hermite {
            e: [0; MAX_N],
            off: [[0; W]; MAX_N],
        };
        match n {
            1 => {
                for e0 in 0..=big {
                    points.push(Hermite {
                        e: [e0 as u8, 0, 0],
                        ..blank
                    });
                }
            }
            2 => {
                for e0 in 0..=big {
                    for e1 in 0..=big {
                        for code in 0..qs.pow(e0 as u32) {
                            let a = digits(code, qs, e0);
                            if !val_at_least(&a[..e0], (e0 + e1) as i64 - big as i64) {
                                continue;
                            }
                            let mut h = blank;
                            h.e = [e0 as u8, e1 as u8, 0];
                            h.off[0] = a;
                            points.push(h);
                        }
                    }
                }
            }
            _ => {
                for e0 in 0..=big {
                    for e1 in 0..=big {
                        for e2 in 0..=big {
                            let lim_e = (e0 + e1 + e2) as i64 - big as i64;
                            for ca in 0..qs.pow(e0 as u32) {
                                let a = digits(ca, qs, e0);
                                if !val_at_least(&a[..e0], (e0 + e1) as i64 - big as i64) {
                                    continue;
                                }
                                for cc in 0..qs.pow(e1 as u32) {
                                    let c = digits(cc, qs, e1);
                                    if !val_at_least(&c[..e1], (e1 + e2) as i64 - big as i64) {
                                        continue;
                                    }
                                    let ac = pmul(&tab, &a[..e0], &c[..e1]);
                                    let coef = |k: i64| -> u8 {
                                        if k >= 0 && (k as usize) < ac.len() {
                                            ac[k as usize]
                                        } else {
                                            0
                                        }
                                    };
                                    // val(ac - b t^{e1}) >= lim_e fixes the low part of b
                                    let mut fixed = [0u8; W];
                                    let mut ok = true;
                                    for k in 0..lim_e.max(0) {
                                        let j = k - e1 as i64;
                                        if j < 0 || j >= e0 as i64 {
                                            if coef(k) != 0 {
                                                ok = false;
                                                break;
                                            }
                                        } else {
                                            fixed[j as usize] = coef(k);
                                        }
                                    }
                                    if !ok {
                                        continue;
                                    }
                                    let nfixed = (lim_e - e1 as i64).clamp(0, e0 as i64) as usize;
                                    let free = e0 - nfixed;
                                    for cb in 0..qs.pow(free as u32) {
                                        let mut b = fixed;
                                        let d = digits(cb, qs, free);
                                        b[nfixed..e0].copy_from_slice(&d[..free]);
                                        let mut h = blank;
                                        h.e = [e0 as u8, e1 as u8, e2 as u8];
                                        h.off = [a, b, c];
                                        points.push(h);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(StandardBall {
            n,
            r,
            field,
            tab,
            points,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Hermite] {
        &self.points
    }

    fn big(&self) -> usize {
        2 * self.r
    }

    /// `det_val(t^-r P)` relative to the centre.
    pub fn det_val(&self, k: usize) -> i64 {
        let h = &self.points[k];
        h.e[..self.n].iter().map(|&e| e as i64).sum::<i64>() - (self.n * self.r) as i64
    }

    /// The polynomial matrix of a Hermite form.
    pub fn hermite_matrix(&self, h: &Hermite) -> SeriesMatrix {
        let f = self.field;
        let poly = |c: &[u8]| -> Series {
            Series::polynomial(f, 0, c.iter().map(|&x| Scalar::from_i64(f, x as i64)).collect())
        };
        SeriesMatrix::from_fn(self.n, self.n, f, |i, j| {
            if i == j {
                Series::t_pow(f, h.e[i] as i64)
            } else if i < j {
                poly(&h.off[off_idx(i, j)][..h.e[i] as usize])
            } else {
                Series::zero(f)
            }
        })
    }

    /// The `k`-th ball element around `center` as a lattice.
    pub fn lattice(&self, k: usize, center: &Lattice) -> Result<Lattice> {
        let h = self.hermite_matrix(&self.points[k]).shift(-(self.r as i64));
        Lattice::from_basis(&center.basis().mul(&h)?)
    }

    fn columns(&self, h: &Hermite) -> [Full; MAX_N] {
        let mut cols = [[[0u8; FULL]; MAX_N]; MAX_N];
        for (j, col) in cols.iter_mut().enumerate().take(self.n) {
            col[j][h.e[j] as usize] = 1;
            for (i, row) in col.iter_mut().enumerate().take(j) {
                let len = h.e[i] as usize;
                row[..len].copy_from_slice(&h.off[off_idx(i, j)][..len]);
            }
        }
        cols
    }

    // Is `u` (reduced modulo t^N) in the module with Hermite form `h`?
    fn member(&self, h: &Hermite, mut u: Res) -> bool {
        let big = self.big();
        let t = &self.tab;
        for i in (0..self.n).rev() {
            let e = h.e[i] as usize;
            if u[i][..e.min(big)].iter().any(|&c| c != 0) {
                return false;
            }
            if e >= big {
                continue;
            }
            let mut y = [0u8; W];
            y[..big - e].copy_from_slice(&u[i][e..big]);
            for k in 0..i {
                let hk = &h.off[off_idx(k, i)];
                let lk = h.e[k] as usize;
                for (a, &ya) in y.iter().enumerate().take(big - e) {
                    if ya == 0 {
                        continue;
                    }
                    for (b, &hb) in hk.iter().enumerate().take(lk) {
                        if a + b >= big {
                            break;
                        }
                        let p = t.mul[ya as usize][hb as usize];
                        u[k][a + b] = t.sub[u[k][a + b] as usize][p as usize];
                    }
                }
            }
        }
        true
    }

    // t^mu v modulo t^N, or None if it leaves O^n.
    fn shifted(&self, v: &Full, mu: i64) -> Option<Res> {
        let big = self.big() as i64;
        let mut out = [[0u8; W]; MAX_N];
        for i in 0..self.n {
            for (k, &c) in v[i].iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let x = k as i64 + mu;
                if x < 0 {
                    return None;
                }
                if x < big {
                    out[i][x as usize] = c;
                }
            }
        }
        Some(out)
    }

    // Least mu in lo..=hi with t^mu v in `target` for every column; the
    // answer is at most hi by construction.
    fn least_shift(&self, target: &Hermite, cols: &[Full], lo: i64, hi: i64) -> i64 {
        let mut mu = lo;
        for v in cols {
            while mu < hi {
                match self.shifted(v, mu) {
                    Some(u) if self.member(target, u) => break,
                    _ => mu += 1,
                }
            }
        }
        mu
    }

    /// `m(P_a -> P_b)` between two elements.
    pub fn containment(&self, a: usize, b: usize) -> i64 {
        let cols = self.columns(&self.points[a]);
        let big = self.big() as i64;
        self.least_shift(&self.points[b], &cols[..self.n], -big, big)
    }

    /// Precomputes what is needed to evaluate distances from every element
    /// to the given points. The points are taken in the coordinates of
    /// `center`.
    pub fn frame(&self, center: &Lattice, points: &[Lattice]) -> Result<Frame<'_>> {
        if center.field() != self.field || center.n() != self.n {
            return Err(Error::DimensionMismatch("centre does not match the ball".into()));
        }
        let big = self.big() as i64;
        let mut data = Vec::with_capacity(points.len());
        for x in points {
            if x.field() != self.field {
                return Err(Error::FieldMismatch);
            }
            let cols: Vec<Vec<Series>> = x.basis().columns().iter().map(|c| center.coordinates(c)).collect::<Result<_>>()?;
            let lx = Lattice::from_basis(&SeriesMatrix::from_columns(self.field, &cols)?)?;
            let lower = lx.lower();
            let mut base = [[[0u8; FULL]; MAX_N]; MAX_N];
            for (j, col) in lx.basis().columns().iter().enumerate() {
                for (i, e) in col.iter().enumerate() {
                    for k in 0..FULL {
                        base[j][i][k] = residue_u8(&e.coeff(lower + k as i64)?);
                    }
                }
            }
            // (t^{N - upper} X) meet O^n, a module between t^N O^n and O^n
            let upper = lx.upper();
            let moved = lx.scale(big - upper);
            let meet = moved.dual().sum(&Lattice::standard(self.field, self.n))?.dual();
            let target = self.to_hermite(&meet)?;
            data.push(PointData {
                det_val: lx.det_val(),
                lower,
                upper,
                base,
                target,
            });
        }
        Ok(Frame { ball: self, data })
    }

    fn to_hermite(&self, l: &Lattice) -> Result<Hermite> {
        let mut h = Hermite {
            e: [0; MAX_N],
            off: [[0; W]; MAX_N],
        };
        let big = self.big() as i64;
        if l.lower() < 0 || l.upper() > big {
            return Err(Error::AssertionFailed("module outside the ball window".into()));
        }
        for (i, &d) in l.pivot_exponents().iter().enumerate() {
            h.e[i] = d as u8;
        }
        for j in 0..self.n {
            for i in 0..j {
                let e = l.basis().get(i, j);
                for k in 0..h.e[i] as usize {
                    h.off[off_idx(i, j)][k] = residue_u8(&e.coeff(k as i64)?);
                }
            }
        }
        Ok(h)
    }
}

fn residue_u8(s: &Scalar) -> u8 {
    s.residue().expect("ball fields are finite") as u8
}

struct PointData {
    det_val: i64,
    lower: i64,
    upper: i64,
    base: [Full; MAX_N],
    target: Hermite,
}

/// A ball together with fixed points, in centre coordinates.
pub struct Frame<'a> {
    ball: &'a StandardBall,
    data: Vec<PointData>,
}

impl Frame<'_> {
    /// `m(x_s -> p_k)`.
    pub fn into_element(&self, s: usize, k: usize) -> i64 {
        let b = self.ball;
        let d = &self.data[s];
        let big = b.big() as i64;
        -d.lower + b.least_shift(&b.points[k], &d.base[..b.n], 0, big) - b.r as i64
    }

    /// `m(p_k -> x_s)`.
    pub fn from_element(&self, k: usize, s: usize) -> i64 {
        let b = self.ball;
        let d = &self.data[s];
        let big = b.big() as i64;
        let cols = b.columns(&b.points[k]);
        d.upper - big + b.least_shift(&d.target, &cols[..b.n], 0, big) + b.r as i64
    }

    /// `n d_i(p_k, x_s)`.
    pub fn d_scaled(&self, k: usize, s: usize, i: usize) -> i64 {
        let n = self.ball.n;
        if i == 0 || i >= n {
            return 0;
        }
        let diff = self.ball.det_val(k) - self.data[s].det_val;
        if i == 1 {
            n as i64 * self.into_element(s, k) - diff
        } else {
            n as i64 * self.from_element(k, s) + diff
        }
    }

    /// `n sum_s d_{i_s}(p_k, x_s)`.
    pub fn weighted_scaled(&self, k: usize, indices: &[usize]) -> i64 {
        indices.iter().enumerate().map(|(s, &i)| self.d_scaled(k, s, i)).sum()
    }
}

impl StandardBall {
    /// `n d_i(p_a, p_b)` between two elements.
    pub fn pair_d_scaled(&self, a: usize, b: usize, i: usize) -> i64 {
        let n = self.n;
        if i == 0 || i >= n {
            return 0;
        }
        let diff = self.det_val(a) - self.det_val(b);
        if i == 1 {
            n as i64 * self.containment(b, a) - diff
        } else {
            n as i64 * self.containment(a, b) + diff
        }
    }
}
