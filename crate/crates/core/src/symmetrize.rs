//! Symmetrization `V^{⊗d} -> S^d V` and polarization `S^d V -> V^{⊗d}`.
//!
//! `polarize_iota` is computed coefficient-wise (entry = α! · coefficient of
//! x^α), never by summing over permutations, so `sym_pi ∘ polarize_iota =
//! d! · id` is a genuine cross-check of the two maps.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::poly::{binomial, Form, Monomial};
use crate::tensor::{multi_indices, Tensor};

fn content(idx: &[usize], n: usize) -> Vec<u32> {
    let mut alpha = vec![0u32; n];
    for &i in idx {
        alpha[i] += 1;
    }
    alpha
}

/// `v_1 ⊗ ... ⊗ v_d ↦ v_1 ⋯ v_d` on a cubical tensor.
pub fn sym_pi(t: &Tensor) -> Result<Form> {
    let shape = t.shape();
    let Some(&n) = shape.first() else {
        return Err(Error::NotCubical);
    };
    if shape.iter().any(|&k| k != n) {
        return Err(Error::NotCubical);
    }
    let f = t.field();
    let mut acc: BTreeMap<Monomial, Elem> = BTreeMap::new();
    for (idx, v) in t.nonzero_entries() {
        let m = Monomial(content(&idx, n));
        let slot = acc.entry(m).or_insert_with(|| f.zero());
        *slot = f.add(slot, v);
    }
    Form::from_terms(f, n, shape.len(), acc.into_iter().map(|(m, c)| (m.0, c)))
}

/// `v_1 ⋯ v_d ↦ Σ_{σ ∈ S_d} v_{σ(1)} ⊗ ... ⊗ v_{σ(d)}`.
pub fn polarize_iota(form: &Form) -> Tensor {
    let (n, d) = (form.nvars(), form.degree());
    let f = form.field();
    let shape = vec![n; d];
    let mut t = Tensor::zeros(f, &shape);
    if form.is_zero() {
        return t;
    }
    for idx in multi_indices(&shape) {
        let alpha = content(&idx, n);
        let c = form.coeff(&alpha);
        if f.is_zero(&c) {
            continue;
        }
        let weight = alpha.iter().fold(f.one(), |acc, &a| f.mul(&acc, &factorial(f, a as u64)));
        t.set(&idx, f.mul(&c, &weight));
    }
    t
}

pub(crate) fn factorial(f: &crate::field::FieldCtx, k: u64) -> Elem {
    (1..=k).fold(f.one(), |acc, i| f.mul(&acc, &f.from_i64(i as i64)))
}

/// `C(d, ⌊d/2⌋)`, the factor relating strength and partition rank of
/// polarizations.
pub fn dconst(d: u64) -> u64 {
    binomial(d, d / 2) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pi_examples() {
        let q = FieldCtx::rational();
        let e = Tensor::basis(&q, &[2, 2, 2], &[0, 0, 0]);
        assert_eq!(sym_pi(&e).unwrap(), Form::monomial(&q, vec![3, 0], q.one()));
        let s = Tensor::basis(&q, &[2, 2], &[0, 1]).add(&Tensor::basis(&q, &[2, 2], &[1, 0])).unwrap();
        assert_eq!(sym_pi(&s).unwrap(), Form::monomial(&q, vec![1, 1], q.from_i64(2)));
        let a = Tensor::basis(&q, &[2, 2], &[0, 1]).sub(&Tensor::basis(&q, &[2, 2], &[1, 0])).unwrap();
        assert!(sym_pi(&a).unwrap().is_zero());
        assert_eq!(sym_pi(&Tensor::zeros(&q, &[2, 3])), Err(Error::NotCubical));
    }

    #[test]
    fn iota_examples() {
        let q = FieldCtx::rational();
        let xy = Form::monomial(&q, vec![1, 1], q.one());
        let expect = Tensor::basis(&q, &[2, 2], &[0, 1]).add(&Tensor::basis(&q, &[2, 2], &[1, 0])).unwrap();
        assert_eq!(polarize_iota(&xy), expect);
        let xx = Form::monomial(&q, vec![2, 0], q.one());
        assert_eq!(polarize_iota(&xx), Tensor::basis(&q, &[2, 2], &[0, 0]).scale(&q.from_i64(2)));
        // x1 x2 x3: the six permutations of (0, 1, 2), enumerated by hand
        let xyz = Form::monomial(&q, vec![1, 1, 1], q.one());
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut expect = Tensor::zeros(&q, &[3, 3, 3]);
        for p in perms {
            expect = expect.add(&Tensor::basis(&q, &[3, 3, 3], &p)).unwrap();
        }
        assert_eq!(polarize_iota(&xyz), expect);
    }

    #[test]
    fn dconst_values() {
        assert_eq!(dconst(2), 2);
        assert_eq!(dconst(3), 3);
        assert_eq!(dconst(4), 6);
    }

    #[test]
    fn pi_iota_is_d_factorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for spec in ["Q", "GF(5)", "GF(7)"] {
            let f = FieldCtx::parse(spec).unwrap();
            for i in 0..200 {
                let d = 1 + i % 4;
                let n = 1 + (i / 4) % 3;
                let g = Form::random(&f, n, d, &mut rng);
                let back = sym_pi(&polarize_iota(&g)).unwrap();
                assert_eq!(back, g.scale(&factorial(&f, d as u64)));
            }
        }
    }
}
