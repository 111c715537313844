//! Brute-force verifiers, independent of the algorithmic path: sampled
//! determinants, permutation enumeration, exhaustive representative search
//! and ball enumeration.

pub mod ball;

use std::collections::HashMap;

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::invariants::Configuration;
use crate::lattice::Lattice;
use crate::linalg::SubspaceBasis;
use crate::matrix::SeriesMatrix;
use crate::series::{Series, Valuation};

pub use ball::{Frame, Hermite, StandardBall};

/// Cap on materialised balls.
pub const BALL_LIMIT: usize = 100_000;

/// Least `val det(v_1, ..., v_n)` over `trials` random choices of
/// `v_i in L_i`, with coefficients random polynomials of degree <= 2.
pub fn sample_a(inputs: &[Lattice], trials: usize, seed: u64) -> Result<i64> {
    let first = inputs.first().ok_or_else(|| Error::InvalidArgument("no inputs".into()))?;
    let n = first.n();
    let field = first.field();
    if inputs.len() != n || inputs.iter().any(|l| l.n() != n) {
        return Err(Error::DimensionMismatch(format!("{} lattices in dimension {n}", inputs.len())));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<i64> = None;
    for _ in 0..trials {
        let mut cols = Vec::with_capacity(n);
        for l in inputs {
            let coef: Vec<Series> = (0..n).map(|_| Series::random(field, &mut rng, 0, 2)).collect();
            cols.push(l.basis().mul_vec(&coef)?);
        }
        if let Valuation::Finite(v) = SeriesMatrix::from_columns(field, &cols)?.determinant()?.valuation()? {
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best.ok_or(Error::SingularMatrix)
}

/// Least transversal sum over all permutations, `n <= 9`.
pub fn brute_transversal(cost: &[Vec<i64>]) -> Result<i64> {
    let n = cost.len();
    if cost.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("cost matrix is not square".into()));
    }
    if n > 9 {
        return Err(Error::SizeLimit(format!("{n}! permutations")));
    }
    fn go(cost: &[Vec<i64>], row: usize, used: &mut [bool], acc: i64, best: &mut i64) {
        if row == cost.len() {
            *best = (*best).min(acc);
            return;
        }
        for j in 0..cost.len() {
            if !used[j] {
                used[j] = true;
                go(cost, row + 1, used, acc + cost[row][j], best);
                used[j] = false;
            }
        }
    }
    let mut best = i64::MAX;
    go(cost, 0, &mut vec![false; n], 0, &mut best);
    Ok(if n == 0 { 0 } else { best })
}

/// Largest number of subspaces admitting independent representatives, by
/// search over the spans reachable one subspace at a time.
pub fn brute_slir_size(subspaces: &[SubspaceBasis]) -> Result<usize> {
    let first = subspaces.first().ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
    let (field, n) = (first.field(), first.ambient());
    let total: usize = subspaces.iter().map(|v| v.projective_points(1 << 14).map(|p| p.len())).sum::<Result<usize>>()?;
    if total > 1 << 14 {
        return Err(Error::SizeLimit("too many representatives".into()));
    }
    let points: Vec<Vec<Vec<Scalar>>> = subspaces.iter().map(|v| v.projective_points(1 << 14)).collect::<Result<_>>()?;
    // best[span] after processing a prefix; spans keyed by their RREF basis
    let mut layer: HashMap<Vec<Vec<Scalar>>, SubspaceBasis> = HashMap::new();
    let zero = SubspaceBasis::zero(field, n);
    layer.insert(zero.basis().to_vec(), zero);
    for pts in &points {
        let mut next = layer.clone();
        for span in layer.values() {
            for p in pts {
                if span.contains(p) {
                    continue;
                }
                let grown = span.sum(&SubspaceBasis::span(field, n, std::slice::from_ref(p))?)?;
                next.entry(grown.basis().to_vec()).or_insert(grown);
            }
        }
        layer = next;
    }
    Ok(layer.values().map(SubspaceBasis::dim).max().unwrap_or(0))
}

/// A materialised ball of lattices `t^r C <= p <= t^-r C`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: Lattice,
    pub radius: usize,
    pub elements: Vec<Lattice>,
}

pub fn enumerate_ball(center: &Lattice, r: usize) -> Result<Ball> {
    let std_ball = StandardBall::new(center.field(), center.n(), r)?;
    if std_ball.len() > BALL_LIMIT {
        return Err(Error::SizeLimit(format!("{} lattices in the ball", std_ball.len())));
    }
    let elements = (0..std_ball.len()).map(|k| std_ball.lattice(k, center)).collect::<Result<_>>()?;
    Ok(Ball {
        center: center.clone(),
        radius: r,
        elements,
    })
}

#[derive(Clone, Debug)]
pub struct BruteMin {
    pub value: Rational64,
    pub argmin: Lattice,
    pub count: usize,
}

/// Least `sum_s d_{i_s}(p, x_s)` over the ball of radius `r` around the sum
/// of the points.
pub fn metric_min_brute(indices: &[usize], conf: &Configuration, r: usize) -> Result<BruteMin> {
    let ball = StandardBall::new(conf.field(), conf.n(), r)?;
    metric_min_brute_in(&ball, indices, conf)
}

pub fn metric_min_brute_in(ball: &StandardBall, indices: &[usize], conf: &Configuration) -> Result<BruteMin> {
    if indices.len() != conf.points().len() {
        return Err(Error::DimensionMismatch("indices and points".into()));
    }
    if let Some(&i) = indices.iter().find(|&&i| i > conf.n()) {
        return Err(Error::IndexOutOfRange(format!("index {i}")));
    }
    let center = conf.lattice_sum()?;
    let frame = ball.frame(&center, conf.points())?;
    let (mut best, mut arg) = (i64::MAX, 0);
    for k in 0..ball.len() {
        let v = frame.weighted_scaled(k, indices);
        if v < best {
            best = v;
            arg = k;
        }
    }
    Ok(BruteMin {
        value: Rational64::new(best, conf.n() as i64),
        argmin: ball.lattice(arg, &center)?,
        count: ball.len(),
    })
}

/// Whether some `t^k w` lies in the ball of radius `r` around `center`.
pub fn in_ball_up_to_scale(center: &Lattice, w: &Lattice, r: usize) -> Result<bool> {
    let mu = center.distance(w)?;
    let e = mu.entries();
    Ok(e.first().zip(e.last()).map_or(true, |(a, b)| a - b <= 2 * r as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldConfig, DEFAULT_PRIME};
    use crate::invariants::{f_t, Group};
    use crate::slir::max_slir;
    use rand::Rng;

    const P: FieldConfig = FieldConfig::Prime(DEFAULT_PRIME);

    #[test]
    fn sample_a_examples() {
        let o = Lattice::standard(P, 3);
        assert_eq!(sample_a(&[o.clone(), o.clone(), o], 5, 1).unwrap(), 0);
        let l1 = Lattice::diagonal(P, &[0, 2]);
        let l2 = Lattice::diagonal(P, &[3, 4]);
        assert_eq!(sample_a(&[l1, l2], 1, 0).unwrap(), 4);
    }

    #[test]
    fn transversal_examples() {
        assert_eq!(brute_transversal(&[vec![0, 2], vec![3, 4]]).unwrap(), 4);
        assert_eq!(brute_transversal(&vec![vec![0; 3]; 3]).unwrap(), 0);
        let perm = [2, 0, 1];
        let cost: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| if perm[i] == j { -(i as i64) - 1 } else { 0 }).collect()).collect();
        assert_eq!(brute_transversal(&cost).unwrap(), -6);
        assert!(matches!(brute_transversal(&vec![vec![0; 10]; 10]), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn brute_slir_agrees_on_small_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2u64, 3] {
            let f = FieldConfig::Prime(q);
            for _ in 0..15 {
                let n = rng.gen_range(2..=4);
                let r = rng.gen_range(1..=5);
                let subs: Vec<SubspaceBasis> = (0..r)
                    .map(|_| {
                        let k = rng.gen_range(0..=2);
                        let vs: Vec<Vec<Scalar>> = (0..k).map(|_| (0..n).map(|_| Scalar::random(f, &mut rng)).collect()).collect();
                        SubspaceBasis::span(f, n, &vs).unwrap()
                    })
                    .collect();
                assert_eq!(brute_slir_size(&subs).unwrap(), max_slir(&subs, 0).unwrap().size);
            }
        }
    }

    #[test]
    fn enumerate_ball_examples() {
        let f = FieldConfig::Prime(5);
        let c = Lattice::diagonal(f, &[2, -1]);
        assert_eq!(enumerate_ball(&c, 0).unwrap().elements, vec![c.clone()]);
        let l = Lattice::diagonal(f, &[3]);
        let b = enumerate_ball(&l, 1).unwrap();
        let want: Vec<Lattice> = vec![l.scale(-1), l.clone(), l.scale(1)];
        assert_eq!(b.elements.len(), 3);
        assert!(want.iter().all(|w| b.elements.contains(w)));
        assert_eq!(enumerate_ball(&Lattice::standard(FieldConfig::Prime(2), 2), 1).unwrap().elements.len(), 15);
        assert!(matches!(enumerate_ball(&Lattice::standard(f, 3), 2), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn brute_metric_matches_witness() {
        let f = FieldConfig::Prime(5);
        let o = Lattice::standard(f, 3);
        let same = Configuration::new(Group::PGL, vec![o.clone(), o.clone(), o.clone()]).unwrap();
        let ball = StandardBall::new(f, 3, 1).unwrap();
        assert_eq!(metric_min_brute_in(&ball, &[1, 1, 1], &same).unwrap().value, Rational64::from_integer(0));
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let ball2 = StandardBall::new(f, 2, 2).unwrap();
        for _ in 0..8 {
            let pts: Vec<Lattice> = (0..3).map(|_| Lattice::random(f, 2, &mut rng, -1, 1)).collect();
            let conf = Configuration::new(Group::PGL, pts).unwrap();
            let idx = [1, 1, 0];
            let (v, cert) = f_t(&idx, &conf).unwrap();
            let brute = metric_min_brute_in(&ball2, &idx, &conf).unwrap();
            assert!(brute.value >= v.0);
            if in_ball_up_to_scale(&conf.lattice_sum().unwrap(), &cert.lattice, 2).unwrap() {
                assert_eq!(brute.value, v.0);
            }
        }
    }

    #[test]
    fn smaller_balls_give_larger_minima() {
        let f = FieldConfig::Prime(3);
        let conf = Configuration::new(
            Group::PGL,
            vec![Lattice::t_mu(f, &[2, 0, 0]), Lattice::t_mu(f, &[0, 0, -2]), Lattice::standard(f, 3)],
        )
        .unwrap();
        let small = metric_min_brute(&[1, 1, 1], &conf, 0).unwrap().value;
        let big = metric_min_brute(&[1, 1, 1], &conf, 1).unwrap().value;
        assert!(small >= big);
    }
}
