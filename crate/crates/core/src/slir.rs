//! Systems of linearly independent representatives (SLIR) and the linear
//! Konig bound `min_I dim(sum_{i in I} V_i) + r - |I|`.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::linalg::SubspaceBasis;

const MAX_SUBSPACES: usize = 16;
const RANDOM_ATTEMPTS: u64 = 32;
const POINT_LIMIT: usize = 1 << 16;
const NODE_LIMIT: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlirResult {
    /// Representative for every index in J.
    pub assigned: BTreeMap<usize, Vec<Scalar>>,
    /// The deficiency set I attaining the bound.
    pub deficiency: BTreeSet<usize>,
    pub size: usize,
}

impl SlirResult {
    pub fn indices(&self) -> BTreeSet<usize> {
        self.assigned.keys().copied().collect()
    }
}

fn check_family(subspaces: &[SubspaceBasis]) -> Result<(FieldConfig, usize)> {
    let first = subspaces
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty subspace family".into()))?;
    let n = first.ambient();
    if subspaces.iter().any(|v| v.ambient() != n) {
        return Err(Error::DimensionMismatch("subspaces of different ambient spaces".into()));
    }
    Ok((first.field(), n))
}

/// `dim(sum_{i in I} V_i) + r - |I|`.
pub fn rado_bound(subspaces: &[SubspaceBasis], set: &BTreeSet<usize>) -> Result<usize> {
    let (field, n) = check_family(subspaces)?;
    let mut sum = SubspaceBasis::zero(field, n);
    for &i in set {
        let v = subspaces
            .get(i)
            .ok_or_else(|| Error::IndexOutOfRange(format!("subspace {i} of {}", subspaces.len())))?;
        sum = sum.sum(v)?;
    }
    Ok(sum.dim() + subspaces.len() - set.len())
}

fn mask_to_set(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Exhaustive minimisation of the bound over all subsets. Returns the
/// minimum and the inclusion-maximal minimiser.
pub fn konig_minimum(subspaces: &[SubspaceBasis]) -> Result<(usize, BTreeSet<usize>)> {
    let (field, n) = check_family(subspaces)?;
    let r = subspaces.len();
    if r > MAX_SUBSPACES {
        return Err(Error::SizeLimit(format!("{r} subspaces, at most {MAX_SUBSPACES} supported")));
    }
    let full = 1u32 << r;
    let mut sums: Vec<SubspaceBasis> = Vec::with_capacity(full as usize);
    sums.push(SubspaceBasis::zero(field, n));
    let mut dims = vec![0usize; full as usize];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let s = sums[(mask & (mask - 1)) as usize].sum(&subspaces[low])?;
        dims[mask as usize] = s.dim();
        sums.push(s);
    }
    let value = |m: u32| dims[m as usize] + r - m.count_ones() as usize;
    let best = (0..full).map(value).min().unwrap();
    let minimisers: Vec<u32> = (0..full).filter(|&m| value(m) == best).collect();
    let union = minimisers.iter().fold(0u32, |a, &m| a | m);
    // submodularity makes the union a minimiser; check rather than assume
    let chosen = if value(union) == best { union } else { minimisers[0] };
    Ok((best, mask_to_set(chosen)))
}

fn try_insert(basis: &mut Vec<(usize, Vec<Scalar>)>, v: &[Scalar]) -> bool {
    // basis holds (pivot, reduced vector) pairs with unit pivots
    let mut w = v.to_vec();
    for (p, b) in basis.iter() {
        if !w[*p].is_zero() {
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
    }
    match w.iter().position(|x| !x.is_zero()) {
        None => false,
        Some(p) => {
            let inv = w[p].inv().unwrap();
            for x in w.iter_mut() {
                *x = x.mul(&inv);
            }
            basis.push((p, w));
            true
        }
    }
}

fn ordered_indices(r: usize, deficiency: &BTreeSet<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = deficiency.iter().copied().collect();
    order.extend((0..r).filter(|i| !deficiency.contains(i)));
    order
}

fn random_attempt(subspaces: &[SubspaceBasis], order: &[usize], seed: u64) -> BTreeMap<usize, Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<Scalar>> = subspaces.iter().map(|v| v.random_element(&mut rng)).collect();
    let mut basis = Vec::new();
    let mut assigned = BTreeMap::new();
    for &i in order {
        if try_insert(&mut basis, &samples[i]) {
            assigned.insert(i, samples[i].clone());
        }
    }
    assigned
}

// Depth-first search over projective points for an SLIR of size `target`.
fn exhaustive_search(
    subspaces: &[SubspaceBasis],
    order: &[usize],
    target: usize,
) -> Result<Option<BTreeMap<usize, Vec<Scalar>>>> {
    let mut points = Vec::with_capacity(subspaces.len());
    let mut total = 0usize;
    for v in subspaces {
        let p = v.projective_points(POINT_LIMIT)?;
        total += p.len();
        if total > POINT_LIMIT {
            return Err(Error::SizeLimit("too many points for exhaustive representatives".into()));
        }
        points.push(p);
    }
    struct Dfs<'a> {
        points: &'a [Vec<Vec<Scalar>>],
        order: &'a [usize],
        target: usize,
        nodes: usize,
    }
    impl Dfs<'_> {
        fn go(
            &mut self,
            k: usize,
            basis: &mut Vec<(usize, Vec<Scalar>)>,
            chosen: &mut BTreeMap<usize, Vec<Scalar>>,
        ) -> Result<bool> {
            self.nodes += 1;
            if self.nodes > NODE_LIMIT {
                return Err(Error::VerificationFailed("exhaustive representative search budget exhausted".into()));
            }
            if chosen.len() == self.target {
                return Ok(true);
            }
            if k == self.order.len() || chosen.len() + (self.order.len() - k) < self.target {
                return Ok(false);
            }
            let i = self.order[k];
            for p in &self.points[i] {
                let saved = basis.len();
                if try_insert(basis, p) {
                    chosen.insert(i, p.clone());
                    if self.go(k + 1, basis, chosen)? {
                        return Ok(true);
                    }
                    chosen.remove(&i);
                    basis.truncate(saved);
                }
            }
            self.go(k + 1, basis, chosen)
        }
    }
    let mut dfs = Dfs {
        points: &points,
        order,
        target,
        nodes: 0,
    };
    let mut chosen = BTreeMap::new();
    Ok(dfs.go(0, &mut Vec::new(), &mut chosen)?.then_some(chosen))
}

fn certify(subspaces: &[SubspaceBasis], res: &SlirResult, bound: usize) -> Result<()> {
    let (field, n) = check_family(subspaces)?;
    let mut basis = Vec::new();
    for (&i, w) in &res.assigned {
        if !subspaces[i].contains(w) || !try_insert(&mut basis, w) {
            return Err(Error::VerificationFailed(format!("representative {i} is dependent or misplaced")));
        }
    }
    if res.size != bound || res.assigned.len() != bound {
        return Err(Error::VerificationFailed(format!("{} representatives, bound {bound}", res.assigned.len())));
    }
    let mut sum = SubspaceBasis::zero(field, n);
    for &i in &res.deficiency {
        sum = sum.sum(&subspaces[i])?;
    }
    let inside: Vec<Vec<Scalar>> = res
        .assigned
        .iter()
        .filter(|(i, _)| res.deficiency.contains(i))
        .map(|(_, w)| w.clone())
        .collect();
    if SubspaceBasis::span(field, n, &inside)? != sum {
        return Err(Error::VerificationFailed("representatives in I do not span the sum over I".into()));
    }
    Ok(())
}

/// A maximum SLIR, certified against the exhaustive Konig bound.
///
/// Representatives are drawn at random (seeds `seed`, `seed + 1`, ...),
/// indices of the deficiency set first. When that fails, which happens
/// over small fields, a depth-first search over all projective points
/// of the subspaces takes over.
pub fn max_slir(subspaces: &[SubspaceBasis], seed: u64) -> Result<SlirResult> {
    let (bound, deficiency) = konig_minimum(subspaces)?;
    let order = ordered_indices(subspaces.len(), &deficiency);
    for attempt in 0..RANDOM_ATTEMPTS {
        let assigned = random_attempt(subspaces, &order, seed.wrapping_add(attempt));
        if assigned.len() == bound {
            let res = SlirResult {
                size: assigned.len(),
                assigned,
                deficiency: deficiency.clone(),
            };
            if certify(subspaces, &res, bound).is_ok() {
                return Ok(res);
            }
        }
    }
    let small = subspaces[0].field().size().is_some_and(|q| q <= (subspaces.len() as u64).pow(2).max(64));
    if small {
        if let Some(assigned) = exhaustive_search(subspaces, &order, bound)? {
            let res = SlirResult {
                size: assigned.len(),
                assigned,
                deficiency,
            };
            certify(subspaces, &res, bound)?;
            return Ok(res);
        }
    }
    Err(Error::VerificationFailed(format!(
        "no SLIR of size {bound} found after {RANDOM_ATTEMPTS} random attempts"
    )))
}

/// Whether all `r` subspaces admit independent representatives; otherwise
/// a set `I` with `dim(sum_{i in I} V_i) < |I|`.
pub fn has_full_slir(subspaces: &[SubspaceBasis]) -> Result<(bool, Option<BTreeSet<usize>>)> {
    let (bound, deficiency) = konig_minimum(subspaces)?;
    if bound == subspaces.len() {
        Ok((true, None))
    } else {
        Ok((false, Some(deficiency)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::linalg::residue::unit;
    use proptest::prelude::*;
    use rand::Rng;

    const P: FieldConfig = FieldConfig::Prime(DEFAULT_PRIME);

    fn span(f: FieldConfig, n: usize, vs: &[Vec<i64>]) -> SubspaceBasis {
        let vs: Vec<Vec<Scalar>> = vs.iter().map(|v| v.iter().map(|&x| Scalar::from_i64(f, x)).collect()).collect();
        SubspaceBasis::span(f, n, &vs).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn rado_bound_examples() {
        let e1 = span(P, 2, &[vec![1, 0]]);
        let e2 = span(P, 2, &[vec![0, 1]]);
        assert_eq!(rado_bound(&[e1.clone(), e1.clone()], &set(&[0, 1])).unwrap(), 1);
        assert_eq!(rado_bound(&[e1.clone(), e2.clone()], &set(&[])).unwrap(), 2);
        assert_eq!(rado_bound(&[e1.clone(), e2], &set(&[0, 1])).unwrap(), 2);
        assert!(rado_bound(&[e1], &set(&[3])).is_err());
    }

    #[test]
    fn max_slir_examples() {
        let e1 = span(P, 2, &[vec![1, 0]]);
        let r = max_slir(&[e1.clone(), e1.clone()], 0).unwrap();
        assert_eq!(r.size, 1);
        assert_eq!(r.deficiency, set(&[0, 1]));
        let r = max_slir(&[e1, span(P, 2, &[vec![1, 1]])], 0).unwrap();
        assert_eq!(r.size, 2);
    }

    #[test]
    fn has_full_slir_examples() {
        let plane = span(P, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(
            has_full_slir(&[plane.clone(), plane.clone(), plane]).unwrap(),
            (false, Some(set(&[0, 1, 2])))
        );
        let coords: Vec<SubspaceBasis> = (0..3).map(|i| SubspaceBasis::span(P, 3, &[unit(P, 3, i)]).unwrap()).collect();
        assert_eq!(has_full_slir(&coords).unwrap(), (true, None));
        let full = SubspaceBasis::full(P, 2);
        assert_eq!(has_full_slir(&[full.clone(), full]).unwrap(), (true, None));
    }

    #[test]
    fn tiny_fields_fall_back_to_search() {
        // over F_2 a random pick from span(e1, e2) is often e1 + e2 or zero
        let f = FieldConfig::Prime(2);
        let subspaces = vec![
            span(f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]),
            span(f, 3, &[vec![1, 1, 0], vec![0, 0, 1]]),
            span(f, 3, &[vec![1, 0, 1]]),
        ];
        for seed in 0..20 {
            assert_eq!(max_slir(&subspaces, seed).unwrap().size, 3);
        }
    }

    // maximum bipartite matching by brute force over edge subsets
    fn brute_matching(edges: &[(usize, usize)]) -> usize {
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<_> = (0..edges.len()).filter(|k| mask & (1 << k) != 0).map(|k| edges[k]).collect();
            let lefts: BTreeSet<_> = chosen.iter().map(|e| e.0).collect();
            let rights: BTreeSet<_> = chosen.iter().map(|e| e.1).collect();
            if lefts.len() == chosen.len() && rights.len() == chosen.len() {
                best = best.max(chosen.len());
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn coordinate_subspaces_give_matchings(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (r, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let mut edges = Vec::new();
            let mut subspaces = Vec::new();
            for i in 0..r {
                let cols: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                edges.extend(cols.iter().map(|&j| (i, j)));
                let vs: Vec<Vec<Scalar>> = cols.iter().map(|&j| unit(P, n, j)).collect();
                subspaces.push(SubspaceBasis::span(P, n, &vs).unwrap());
            }
            prop_assume!(edges.len() <= 14);
            let res = max_slir(&subspaces, seed).unwrap();
            prop_assert_eq!(res.size, brute_matching(&edges));
        }

        #[test]
        fn weak_duality_and_basis_split(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (r, n) = (rng.gen_range(1..=6), rng.gen_range(1..=5));
            let subspaces: Vec<SubspaceBasis> = (0..r).map(|_| {
                let d = rng.gen_range(0..=n.min(3));
                let vs: Vec<Vec<Scalar>> = (0..d).map(|_| (0..n).map(|_| if rng.gen_bool(0.5) { Scalar::random(P, &mut rng) } else { Scalar::zero(P) }).collect()).collect();
                SubspaceBasis::span(P, n, &vs).unwrap()
            }).collect();
            let res = max_slir(&subspaces, seed).unwrap();
            for mask in 0u32..(1 << r) {
                prop_assert!(res.size <= rado_bound(&subspaces, &mask_to_set(mask)).unwrap());
            }
            prop_assert_eq!(res.size, rado_bound(&subspaces, &res.deficiency).unwrap());
            let mut sum = SubspaceBasis::zero(P, n);
            for &i in &res.deficiency { sum = sum.sum(&subspaces[i]).unwrap(); }
            let inside: Vec<Vec<Scalar>> = res.assigned.iter().filter(|(i, _)| res.deficiency.contains(i)).map(|(_, w)| w.clone()).collect();
            prop_assert_eq!(SubspaceBasis::span(P, n, &inside).unwrap(), sum);
        }
    }
}
