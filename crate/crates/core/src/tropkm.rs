//! The lattice Kuhn-Munkres algorithm.
//!
//! For lattices `L_1, ..., L_n` in K^n let `A` be the least valuation of
//! `det(v_1, ..., v_n)` over `v_i in L_i`. For every lattice `L`,
//! `det_val(L) + sum_i c(L, L_i) <= A`, and some `L` attains equality.
//! Starting from the sum of the inputs, each step either finds independent
//! tight generators (equality, done) or enlarges `L` by `t^-1 W` over a
//! deficiency set, raising the left side by `|I| - dim W`.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};
use crate::lattice::{Lattice, Relative};
use crate::linalg::{residue::rank_of, SubspaceBasis};
use crate::matrix::SeriesMatrix;
use crate::series::{Series, Valuation};
use crate::slir::{max_slir, SlirResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub potential: i64,
    pub slir_size: usize,
    pub deficiency: Vec<usize>,
    pub w_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub inputs: Vec<Lattice>,
    pub lattice: Lattice,
    pub c_values: Vec<i64>,
    pub tight_generators: Vec<Vec<Series>>,
    pub optimum: i64,
    pub trace: Vec<TraceRecord>,
}

fn fail(msg: String) -> Error {
    Error::VerificationFailed(msg)
}

impl WitnessCertificate {
    /// Rechecks every claim of the certificate from scratch.
    pub fn verify(&self) -> Result<()> {
        let n = self.lattice.n();
        if self.inputs.len() != n || self.c_values.len() != n || self.tight_generators.len() != n {
            return Err(Error::DimensionMismatch(format!("certificate for n = {n}")));
        }
        let field = self.lattice.field();
        let mut residues = Vec::with_capacity(n);
        let mut scaled = Vec::with_capacity(n);
        for (i, w) in self.tight_generators.iter().enumerate() {
            let c = self.c_values[i];
            if self.lattice.c_lattice(&self.inputs[i])? != c {
                return Err(fail(format!("c(L, L_{i}) is not {c}")));
            }
            if !self.lattice.contains(w)? {
                return Err(fail(format!("w_{i} is not in L")));
            }
            if self.inputs[i].c_vector(w)? != c {
                return Err(fail(format!("w_{i} is not tight for L_{i}")));
            }
            let tw: Vec<Series> = w.iter().map(|x| x.shift(c)).collect();
            if !self.inputs[i].contains(&tw)? {
                return Err(fail(format!("t^c w_{i} is not in L_{i}")));
            }
            residues.push(self.lattice.residue(w)?);
            scaled.push(tw);
        }
        if rank_of(field, n, &residues) != n {
            return Err(fail("tight generators are dependent modulo tL".into()));
        }
        if self.lattice.det_val() + self.c_values.iter().sum::<i64>() != self.optimum {
            return Err(fail("det_val(L) + sum c(L, L_i) differs from the optimum".into()));
        }
        let w = SeriesMatrix::from_columns(field, &self.tight_generators)?;
        if w.determinant()?.valuation()? != Valuation::Finite(self.lattice.det_val()) {
            return Err(fail("tight generators do not span L".into()));
        }
        let tw = SeriesMatrix::from_columns(field, &scaled)?;
        if tw.determinant()?.valuation()? != Valuation::Finite(self.optimum) {
            return Err(fail("val det(t^c_i w_i) differs from the optimum".into()));
        }
        if self.trace.windows(2).any(|p| p[1].potential <= p[0].potential) {
            return Err(fail("trace potentials do not increase".into()));
        }
        if self.trace.last().is_some_and(|t| t.potential != self.optimum) {
            return Err(fail("trace does not end at the optimum".into()));
        }
        Ok(())
    }
}

fn check_inputs(l: &Lattice, inputs: &[Lattice]) -> Result<()> {
    if inputs.len() != l.n() {
        return Err(Error::DimensionMismatch(format!("{} lattices in dimension {}", inputs.len(), l.n())));
    }
    if inputs.iter().any(|x| x.n() != l.n()) {
        return Err(Error::DimensionMismatch("inputs of different dimensions".into()));
    }
    if inputs.iter().any(|x| x.field() != l.field()) {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// `det_val(L) + sum_i c(L, L_i)`, a lower bound for the optimum.
pub fn potential(l: &Lattice, inputs: &[Lattice]) -> Result<i64> {
    check_inputs(l, inputs)?;
    let mut p = l.det_val();
    for m in inputs {
        p += l.c_lattice(m)?;
    }
    Ok(p)
}

#[derive(Clone, Debug)]
pub enum KmStep {
    Done {
        slir: SlirResult,
        relatives: Vec<Relative>,
    },
    Next {
        lattice: Lattice,
        deficiency: BTreeSet<usize>,
        w_dim: usize,
        slir_size: usize,
    },
}

// Relative positions, computed once per distinct input lattice.
fn relatives(l: &Lattice, inputs: &[Lattice]) -> Result<Vec<Relative>> {
    let mut out: Vec<Relative> = Vec::with_capacity(inputs.len());
    for (i, m) in inputs.iter().enumerate() {
        match inputs[..i].iter().position(|x| x == m) {
            Some(k) => out.push(out[k].clone()),
            None => out.push(l.relative(m)?),
        }
    }
    Ok(out)
}

/// One improvement step from `l`.
pub fn km_step(l: &Lattice, inputs: &[Lattice], seed: u64) -> Result<KmStep> {
    check_inputs(l, inputs)?;
    let n = l.n();
    let field = l.field();
    let rels = relatives(l, inputs)?;
    let subspaces: Vec<SubspaceBasis> = rels.iter().map(|r| r.tight_subspace(field)).collect();
    let slir = max_slir(&subspaces, seed)?;
    if slir.size == n {
        return Ok(KmStep::Done { slir, relatives: rels });
    }
    let mut w = SubspaceBasis::zero(field, n);
    for &i in &slir.deficiency {
        w = w.sum(&subspaces[i])?;
    }
    let extra: Vec<Vec<Series>> = w
        .basis()
        .iter()
        .map(|x| {
            let y: Vec<Series> = x.iter().cloned().map(Series::constant).collect();
            l.basis().mul_vec(&y).map(|v| v.iter().map(|s| s.shift(-1)).collect())
        })
        .collect::<Result<_>>()?;
    let gens = l.basis().hstack(&SeriesMatrix::from_columns(field, &extra)?)?;
    let next = Lattice::from_generators_with_bound(&gens, l.upper())?;
    for &i in &slir.deficiency {
        let before = -rels[i].a_max();
        let after = next.c_lattice(&inputs[i])?;
        if after != before + 1 {
            return Err(Error::ClaimViolated(format!("input {i}: c went from {before} to {after}")));
        }
    }
    let gain = potential(&next, inputs)? - potential(l, inputs)?;
    let want = slir.deficiency.len() as i64 - w.dim() as i64;
    if gain != want || gain < 1 {
        return Err(fail(format!("potential rose by {gain}, expected |I| - dim W = {want}")));
    }
    Ok(KmStep::Next {
        lattice: next,
        deficiency: slir.deficiency,
        w_dim: w.dim(),
        slir_size: slir.size,
    })
}

#[derive(Clone, Debug, Default)]
pub struct WitnessOptions {
    pub seed: u64,
    pub initial: Option<Lattice>,
    pub budget: Option<usize>,
}

// One random transversal: an upper bound for the optimum.
fn sampled_upper_bound(inputs: &[Lattice], seed: u64) -> Result<i64> {
    let field = inputs[0].field();
    let n = inputs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..64 {
        let cols: Vec<Vec<Series>> = inputs
            .iter()
            .map(|m| {
                let c: Vec<Series> = (0..n).map(|_| Series::constant(Scalar::random(field, &mut rng))).collect();
                m.basis().mul_vec(&c)
            })
            .collect::<Result<_>>()?;
        if let Valuation::Finite(v) = SeriesMatrix::from_columns(field, &cols)?.determinant()?.valuation()? {
            return Ok(v);
        }
    }
    Err(fail("could not sample a nonsingular transversal".into()))
}

pub fn witness(inputs: &[Lattice]) -> Result<WitnessCertificate> {
    witness_with(inputs, &WitnessOptions::default())
}

pub fn witness_with(inputs: &[Lattice], opts: &WitnessOptions) -> Result<WitnessCertificate> {
    let first = inputs.first().ok_or_else(|| Error::InvalidArgument("no input lattices".into()))?;
    check_inputs(first, inputs)?;
    let mut l = match &opts.initial {
        Some(l) => l.clone(),
        None => {
            let mut s = first.clone();
            for m in &inputs[1..] {
                if *m != s {
                    s = s.sum(m)?;
                }
            }
            s
        }
    };
    check_inputs(&l, inputs)?;
    let p0 = potential(&l, inputs)?;
    let budget = match opts.budget {
        Some(b) => b,
        None => (sampled_upper_bound(inputs, opts.seed)? - p0).max(0) as usize + inputs.len(),
    };
    let mut trace = Vec::new();
    let mut current = p0;
    for step in 0..=budget {
        match km_step(&l, inputs, opts.seed.wrapping_add(step as u64 * 7919))? {
            KmStep::Done { slir, relatives } => {
                trace.push(TraceRecord {
                    potential: current,
                    slir_size: slir.size,
                    deficiency: slir.deficiency.iter().copied().collect(),
                    w_dim: 0,
                });
                return finish(inputs, l, slir, relatives, current, trace);
            }
            KmStep::Next {
                lattice,
                deficiency,
                w_dim,
                slir_size,
            } => {
                trace.push(TraceRecord {
                    potential: current,
                    slir_size,
                    deficiency: deficiency.into_iter().collect(),
                    w_dim,
                });
                l = lattice;
                current = potential(&l, inputs)?;
            }
        }
    }
    Err(Error::IterationBudgetExceeded(budget))
}

fn finish(
    inputs: &[Lattice],
    l: Lattice,
    slir: SlirResult,
    rels: Vec<Relative>,
    optimum: i64,
    trace: Vec<TraceRecord>,
) -> Result<WitnessCertificate> {
    let mut gens = Vec::with_capacity(inputs.len());
    let mut c_values = Vec::with_capacity(inputs.len());
    for (i, m) in inputs.iter().enumerate() {
        let x = &slir.assigned[&i];
        gens.push(l.tight_lift_with(x, m, &rels[i])?);
        c_values.push(-rels[i].a_max());
    }
    let cert = WitnessCertificate {
        inputs: inputs.to_vec(),
        lattice: l,
        c_values,
        tight_generators: gens,
        optimum,
        trace,
    };
    cert.verify()?;
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct Assignment {
    pub value: i64,
    /// `permutation[i]` is the column matched to row i.
    pub permutation: Vec<usize>,
    pub row_potentials: Vec<i64>,
    pub col_potentials: Vec<i64>,
    pub certificate: WitnessCertificate,
}

// Kuhn's augmenting paths; `None` when there is no perfect matching.
fn perfect_matching(n: usize, edge: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn augment(i: usize, n: usize, edge: &dyn Fn(usize, usize) -> bool, seen: &mut [bool], col_of: &mut [Option<usize>]) -> bool {
        for j in 0..n {
            if edge(i, j) && !seen[j] {
                seen[j] = true;
                if col_of[j].map_or(true, |k| augment(k, n, edge, seen, col_of)) {
                    col_of[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut col_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, n, &edge, &mut seen, &mut col_of) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, i) in col_of.iter().enumerate() {
        perm[i.unwrap()] = j;
    }
    Some(perm)
}

/// Minimum-cost transversal of an integer matrix, solved through the
/// diagonal lattices `L_i = <t^{c_i1} e_1, ..., t^{c_in} e_n>`.
pub fn assignment_solve(cost: &[Vec<i64>]) -> Result<Assignment> {
    assignment_solve_in(cost, FieldConfig::default(), 0)
}

pub fn assignment_solve_in(cost: &[Vec<i64>], field: FieldConfig, seed: u64) -> Result<Assignment> {
    let n = cost.len();
    if n == 0 || cost.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("cost matrix must be square and nonempty".into()));
    }
    let inputs: Vec<Lattice> = cost.iter().map(|row| Lattice::diagonal(field, row)).collect();
    let cert = witness_with(
        &inputs,
        &WitnessOptions {
            seed,
            ..Default::default()
        },
    )?;
    let a = cert.c_values.clone();
    let b: Vec<i64> = (0..n).map(|j| (0..n).map(|i| cost[i][j] - a[i]).min().unwrap()).collect();
    for i in 0..n {
        for j in 0..n {
            if a[i] + b[j] > cost[i][j] {
                return Err(fail(format!("a_{i} + b_{j} exceeds c_{i}{j}")));
            }
        }
    }
    let value = cert.optimum;
    if a.iter().sum::<i64>() + b.iter().sum::<i64>() != value {
        return Err(fail("potentials do not sum to the optimum".into()));
    }
    let mut support: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for (i, w) in cert.tight_generators.iter().enumerate() {
        for j in 0..n {
            let v = w[j].valuation()?;
            support.insert((i, j), v == Valuation::Finite(cost[i][j] - a[i]));
        }
    }
    let total = |p: &[usize]| (0..n).map(|i| cost[i][p[i]]).sum::<i64>();
    let permutation = match perfect_matching(n, |i, j| support[&(i, j)]) {
        Some(p) if total(&p) == value => p,
        _ => perfect_matching(n, |i, j| a[i] + b[j] == cost[i][j])
            .filter(|p| total(p) == value)
            .ok_or_else(|| fail("no optimal permutation in the equality graph".into()))?,
    };
    Ok(Assignment {
        value,
        permutation,
        row_potentials: a,
        col_potentials: b,
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use rand::Rng;

    const P: FieldConfig = FieldConfig::Prime(DEFAULT_PRIME);

    #[test]
    fn potential_examples() {
        let o = Lattice::standard(P, 2);
        assert_eq!(potential(&o, &[o.clone(), o.clone()]).unwrap(), 0);
        assert_eq!(potential(&o, &[o.clone(), o.scale(1)]).unwrap(), 1);
    }

    #[test]
    fn standard_inputs_finish_at_once() {
        let o = Lattice::standard(P, 3);
        let inputs = vec![o.clone(); 3];
        assert!(matches!(km_step(&o, &inputs, 0).unwrap(), KmStep::Done { ref slir, .. } if slir.size == 3));
        let cert = witness(&inputs).unwrap();
        assert_eq!(cert.optimum, 0);
        assert_eq!(cert.lattice, o);
        assert_eq!(cert.trace.len(), 1);
    }

    #[test]
    fn repeated_input_step() {
        // <e1, t e2> twice: both tight subspaces are span(e1)
        let l1 = Lattice::diagonal(P, &[0, 1]);
        let o = Lattice::standard(P, 2);
        let inputs = vec![l1.clone(), l1.clone()];
        assert_eq!(potential(&o, &inputs).unwrap(), 0);
        match km_step(&o, &inputs, 0).unwrap() {
            KmStep::Next { lattice, deficiency, w_dim, .. } => {
                assert_eq!(deficiency, [0, 1].into_iter().collect());
                assert_eq!(w_dim, 1);
                assert_eq!(potential(&lattice, &inputs).unwrap(), 1);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(witness(&inputs).unwrap().optimum, 1);
    }

    #[test]
    fn diagonal_example() {
        let inputs = vec![Lattice::diagonal(P, &[0, 2]), Lattice::diagonal(P, &[3, 4])];
        let cert = witness(&inputs).unwrap();
        assert_eq!(cert.optimum, 4);
        cert.verify().unwrap();
    }

    #[test]
    fn assignment_examples() {
        let a = assignment_solve(&[vec![0, 2], vec![3, 4]]).unwrap();
        assert_eq!(a.value, 4);
        assert_eq!(a.permutation, vec![0, 1]);
        let z = assignment_solve(&[vec![0; 3], vec![0; 3], vec![0; 3]]).unwrap();
        assert_eq!(z.value, 0);
        assert!(z.row_potentials.iter().chain(&z.col_potentials).all(|&x| x == 0));
        assert!(assignment_solve(&[vec![1, 2]]).is_err());
    }

    #[test]
    fn assignment_against_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let n = rng.gen_range(1..=5);
            let cost: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best = i64::MAX;
            permutohedron(&mut perm, 0, &mut |p| best = best.min((0..n).map(|i| cost[i][p[i]]).sum()));
            let a = assignment_solve(&cost).unwrap();
            assert_eq!(a.value, best);
            assert_eq!((0..n).map(|i| cost[i][a.permutation[i]]).sum::<i64>(), best);
        }
    }

    fn permutohedron(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutohedron(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn scaling_shifts_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..8 {
            let inputs: Vec<Lattice> = (0..3).map(|_| Lattice::random(P, 3, &mut rng, -2, 2)).collect();
            let k: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
            let scaled: Vec<Lattice> = inputs.iter().zip(&k).map(|(l, &k)| l.scale(k)).collect();
            let a = witness(&inputs).unwrap().optimum;
            assert_eq!(witness(&scaled).unwrap().optimum, a + k.iter().sum::<i64>());
        }
    }

    #[test]
    fn weak_duality_along_the_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..8 {
            let inputs: Vec<Lattice> = (0..3).map(|_| Lattice::random(P, 3, &mut rng, -2, 2)).collect();
            let cert = witness(&inputs).unwrap();
            for rec in &cert.trace {
                assert!(rec.potential <= cert.optimum);
            }
            for _ in 0..20 {
                let cols: Vec<Vec<Series>> = inputs
                    .iter()
                    .map(|m| {
                        let c: Vec<Series> = (0..3).map(|_| Series::random(P, &mut rng, 0, 2)).collect();
                        m.basis().mul_vec(&c).unwrap()
                    })
                    .collect();
                let d = SeriesMatrix::from_columns(P, &cols).unwrap().determinant().unwrap();
                if let Valuation::Finite(v) = d.valuation().unwrap() {
                    assert!(v >= cert.optimum);
                }
            }
        }
    }
}
