use alloc::vec;
use alloc::vec::Vec;

use super::enumerate::{search_terms, FactorClass, Outcome, SolveCounter};
use super::{collective_min, Budget, PartitionTerm, RankCertificate, RankValue, SingleResult, Terms};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Matrix};
use crate::tensor::{complement, multi_indices, Tensor, TensorTuple};

/// The smallest support dimension over all slots, an upper bound on the
/// (collective) partition rank: take `I_i = {j}` for a slot `j` of minimal
/// support and let the `a_i` run through a basis of it.
pub fn easy_cap(ts: &TensorTuple) -> usize {
    ts.concise_dims().into_iter().min().unwrap_or(0)
}

/// Exact (collective) partition rank over a finite field.
pub fn prk_exact(ts: &TensorTuple, budget: Budget) -> Result<RankCertificate> {
    if !ts.field().is_finite() {
        return Err(Error::InfiniteField);
    }
    let cert = collective_min(
        ts.field(),
        ts.len(),
        |c, below, counter| single(&ts.combine(c), below, counter),
        budget,
    );
    if let Some(w) = &cert.witness {
        w.verify_tensors(ts).expect("partition witness reassembles");
    }
    Ok(cert)
}

/// Slot subsets searched: `1 <= |I| <= d/2`, and for `|I| = d/2` only those
/// containing slot 0 (the complement covers the rest).
fn normalized_subsets(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=d / 2 {
        for mask in 0u32..(1 << d) {
            if mask.count_ones() as usize != size {
                continue;
            }
            if 2 * size == d && mask & 1 == 0 {
                continue;
            }
            out.push((0..d).filter(|j| mask >> j & 1 == 1).collect());
        }
    }
    out.sort();
    out.sort_by_key(|s: &Vec<usize>| s.len());
    out
}

/// Per-class index tables: for every entry position of the full tensor, the
/// row-major offsets of its restriction to `I` and to the complement.
struct SlotLayout {
    slots: Vec<usize>,
    a_shape: Vec<usize>,
    b_shape: Vec<usize>,
    a_of: Vec<usize>,
    b_of: Vec<usize>,
}

impl SlotLayout {
    fn new(shape: &[usize], slots: Vec<usize>) -> Self {
        let rest = complement(&slots, shape.len());
        let a_shape: Vec<usize> = slots.iter().map(|&s| shape[s]).collect();
        let b_shape: Vec<usize> = rest.iter().map(|&s| shape[s]).collect();
        let mut a_of = Vec::new();
        let mut b_of = Vec::new();
        for idx in multi_indices(shape) {
            a_of.push(slots.iter().fold(0, |acc, &s| acc * shape[s] + idx[s]));
            b_of.push(rest.iter().fold(0, |acc, &s| acc * shape[s] + idx[s]));
        }
        SlotLayout { slots, a_shape, b_shape, a_of, b_of }
    }

    fn a_dim(&self) -> usize {
        self.a_shape.iter().product()
    }

    fn b_dim(&self) -> usize {
        self.b_shape.iter().product()
    }
}

fn single(t: &Tensor, below: Option<usize>, counter: &mut SolveCounter) -> SingleResult {
    if t.is_zero() {
        return SingleResult {
            value: RankValue::Finite(0),
            terms: Some(Terms::Partition(Vec::new())),
            exhaustive: true,
            budget_hit: false,
        };
    }
    let d = t.order();
    if d < 2 {
        return SingleResult { value: RankValue::Infinite, terms: None, exhaustive: true, budget_hit: false };
    }
    let field = t.field().clone();
    let (reduced, inclusions) = TensorTuple::single(t.clone()).concise_reduce();
    let red = &reduced.tensors()[0];
    let shape = red.shape().to_vec();

    // upper bound: slot of smallest support, a_k = e_k, b_k = k-th slice
    let j = (0..d).min_by_key(|&j| shape[j]).unwrap();
    let ub = shape[j];
    let slice_matrix = red.flatten_any(&[j]);
    let rest = complement(&[j], d);
    let rest_shape: Vec<usize> = rest.iter().map(|&s| shape[s]).collect();
    let ub_terms: Vec<PartitionTerm> = (0..ub)
        .map(|k| {
            let mut a = vec![field.zero(); ub];
            a[k] = field.one();
            PartitionTerm {
                slots: vec![j],
                a: Tensor::vector(&field, a),
                b: Tensor::from_data(&field, &rest_shape, slice_matrix.row(k).to_vec()).unwrap(),
            }
        })
        .collect();

    let limit = below.map_or(ub, |b| b.min(ub));
    let layouts: Vec<SlotLayout> = normalized_subsets(d).into_iter().map(|s| SlotLayout::new(&shape, s)).collect();
    let classes: Vec<FactorClass> = layouts
        .iter()
        .map(|l| FactorClass { dim: l.a_dim(), max_terms: l.a_dim().min(l.b_dim()) })
        .collect();
    let target = red.data().to_vec();

    for r in 1..limit {
        let mut leaf = |chosen: &[Vec<Vec<Elem>>]| solve_leaf(&field, &layouts, chosen, &target);
        match search_terms(&field, &classes, r, counter, &mut leaf) {
            Outcome::Found(terms) => {
                return SingleResult {
                    value: RankValue::Finite(r),
                    terms: Some(Terms::Partition(lift(terms, &inclusions))),
                    exhaustive: true,
                    budget_hit: false,
                }
            }
            Outcome::NotFound => {}
            Outcome::BudgetHit => {
                return SingleResult {
                    value: RankValue::Finite(ub),
                    terms: Some(Terms::Partition(lift(ub_terms, &inclusions))),
                    exhaustive: false,
                    budget_hit: true,
                }
            }
        }
    }
    SingleResult {
        value: RankValue::Finite(ub),
        terms: Some(Terms::Partition(lift(ub_terms, &inclusions))),
        exhaustive: true,
        budget_hit: false,
    }
}

/// With the `a`-factors fixed, solves `t = sum a ⊗ b` for the `b`'s.
fn solve_leaf(
    field: &FieldCtx,
    layouts: &[SlotLayout],
    chosen: &[Vec<Vec<Elem>>],
    target: &[Elem],
) -> Option<Vec<PartitionTerm>> {
    let rows = target.len();
    let unknowns: usize = layouts.iter().zip(chosen).map(|(l, a)| a.len() * l.b_dim()).sum();
    let mut m = Matrix::zeros(field, rows, unknowns);
    let mut col0 = 0;
    for (l, basis) in layouts.iter().zip(chosen) {
        let bd = l.b_dim();
        for a in basis {
            for p in 0..rows {
                let v = &a[l.a_of[p]];
                if !field.is_zero(v) {
                    m.set(p, col0 + l.b_of[p], v.clone());
                }
            }
            col0 += bd;
        }
    }
    let x = linalg::solve(field, &m, target)?;
    let mut terms = Vec::new();
    let mut col0 = 0;
    for (l, basis) in layouts.iter().zip(chosen) {
        let bd = l.b_dim();
        for a in basis {
            terms.push(PartitionTerm {
                slots: l.slots.clone(),
                a: Tensor::from_data(field, &l.a_shape, a.clone()).unwrap(),
                b: Tensor::from_data(field, &l.b_shape, x[col0..col0 + bd].to_vec()).unwrap(),
            });
            col0 += bd;
        }
    }
    Some(terms)
}

/// Maps terms of the concise reduction back through the slot inclusions.
fn lift(terms: Vec<PartitionTerm>, inclusions: &[Matrix]) -> Vec<PartitionTerm> {
    let d = inclusions.len();
    terms
        .into_iter()
        .map(|t| {
            let rest = complement(&t.slots, d);
            let amaps: Vec<Matrix> = t.slots.iter().map(|&s| inclusions[s].clone()).collect();
            let bmaps: Vec<Matrix> = rest.iter().map(|&s| inclusions[s].clone()).collect();
            PartitionTerm {
                a: t.a.apply_maps(&amaps).expect("inclusion shapes"),
                b: t.b.apply_maps(&bmaps).expect("inclusion shapes"),
                slots: t.slots,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Decomposition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(s: &str) -> FieldCtx {
        FieldCtx::parse(s).unwrap()
    }

    fn prk(t: &Tensor) -> RankCertificate {
        prk_exact(&TensorTuple::single(t.clone()), Budget::default()).unwrap()
    }

    #[test]
    fn normalized_subsets_small() {
        assert_eq!(normalized_subsets(2), vec![vec![0]]);
        assert_eq!(normalized_subsets(3), vec![vec![0], vec![1], vec![2]]);
        let four = normalized_subsets(4);
        assert_eq!(four.len(), 4 + 3);
        assert!(four.contains(&vec![0, 3]) && !four.contains(&vec![1, 2]));
    }

    #[test]
    fn examples() {
        let k = f("GF(2)");
        let z = prk(&Tensor::zeros(&k, &[2, 2, 2]));
        assert_eq!(z.value, RankValue::Finite(0));
        assert!(z.exhaustive && z.witness.is_none());
        let e = Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]);
        assert_eq!(prk(&e).value, RankValue::Finite(1));
        let mut diag = e.clone();
        diag.set(&[1, 1, 1], k.one());
        let c = prk(&diag);
        assert_eq!(c.value, RankValue::Finite(2));
        assert!(c.exhaustive);
        assert_eq!(c.witness.unwrap().len(), 2);
        assert_eq!(
            prk_exact(&TensorTuple::single(Tensor::zeros(&f("Q"), &[2, 2])), Budget::default()),
            Err(Error::InfiniteField)
        );
    }

    #[test]
    fn order_two_matches_matrix_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for spec in ["GF(2)", "GF(3)"] {
            let k = f(spec);
            for r in 1..=4 {
                for c in 1..=4 {
                    for _ in 0..6 {
                        let t = Tensor::random(&k, &[r, c], &mut rng);
                        let cert = prk(&t);
                        let rank = linalg::rank(&k, &t.flatten(&[0]).unwrap());
                        assert_eq!(cert.value, RankValue::Finite(rank));
                        assert!(cert.exhaustive);
                    }
                }
            }
        }
    }

    #[test]
    fn easy_cap_examples() {
        let k = f("GF(5)");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = Tensor::random(&k, &[2, 3, 4], &mut rng);
        let ts = TensorTuple::single(t);
        assert_eq!(ts.concise_dims(), vec![2, 3, 4]);
        assert_eq!(easy_cap(&ts), 2);
        assert_eq!(easy_cap(&TensorTuple::single(Tensor::zeros(&k, &[2, 2, 2]))), 0);
        assert_eq!(easy_cap(&TensorTuple::single(Tensor::basis(&k, &[3, 3, 3], &[0, 0, 0]))), 1);
    }

    #[test]
    fn collective_examples() {
        let k = f("GF(3)");
        let a = Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]);
        let mut b = a.clone();
        b.set(&[1, 1, 1], k.one());
        // (e000, e000 + e111): the combination b - a has rank 1
        let ts = TensorTuple::new(vec![b.clone(), a.clone()]).unwrap();
        let cert = prk_exact(&ts, Budget::default()).unwrap();
        assert_eq!(cert.value, RankValue::Finite(1));
        cert.witness.unwrap().verify_tensors(&ts).unwrap();
        // dependent tuple has collective rank 0
        let dep = TensorTuple::new(vec![b.clone(), b.scale(&k.from_i64(2))]).unwrap();
        let cert = prk_exact(&dep, Budget::default()).unwrap();
        assert_eq!(cert.value, RankValue::Finite(0));
        let w: Decomposition = cert.witness.unwrap();
        assert!(w.is_empty());
        w.verify_tensors(&dep).unwrap();
    }

    #[test]
    fn budget_exhaustion_reports_upper_bound() {
        let k = f("GF(2)");
        let mut diag = Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]);
        diag.set(&[1, 1, 1], k.one());
        let cert = prk_exact(&TensorTuple::single(diag), Budget { max_solves: 1 }).unwrap();
        assert!(cert.budget_hit && !cert.exhaustive);
        assert_eq!(cert.value, RankValue::Finite(2));
    }

    #[test]
    fn random_witnesses_reassemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for spec in ["GF(2)", "GF(3)", "GF(4)"] {
            let k = f(spec);
            for _ in 0..30 {
                let t = Tensor::random(&k, &[2, 2, 3], &mut rng);
                let cert = prk(&t);
                let RankValue::Finite(v) = cert.value else { panic!() };
                assert!(v <= 2);
                if v > 0 {
                    assert_eq!(cert.witness.as_ref().unwrap().len(), v);
                }
            }
        }
    }
}
