//! Turning a decomposition over a finite extension `L / K` into one over `K`.
//!
//! Write every `a_i = sum_j z_j a_ij` with `a_ij` over `K`. Then
//! `sum_i a_i ⊗ b_i = sum_ij a_ij ⊗ (z_j b_i)`, so the `K`-linear system
//! `t_p + sum_{k != p} c_k t_k = sum_ij a_ij ⊗ b'_ij` in the unknowns `c_k`
//! and `b'_ij` has a solution over `L`, hence one over `K`. The same argument
//! works verbatim for products of forms.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Elem, Extension, FieldCtx};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials_of_degree, Form, FormTuple};
use crate::search::{Decomposition, PartitionTerm, StrengthTerm, Terms};
use crate::tensor::{complement, multi_indices, Tensor, TensorTuple};

/// `prk_K <= e · prk_L`.
pub fn blowup_bound(e: u64, r: u64) -> u64 {
    e * r
}

/// The least integer strictly greater than `log2(d · deg_h)`.
pub fn ext_degree_needed(d: u64, deg_h: u64) -> u32 {
    let x = d * deg_h;
    u64::BITS - x.leading_zeros()
}

pub fn embed_tensor(ext: &Extension, t: &Tensor) -> Tensor {
    let data = t.data().iter().map(|x| ext.embed(x)).collect();
    Tensor::from_data(ext.ext(), t.shape(), data).expect("same shape")
}

pub fn embed_form(ext: &Extension, f: &Form) -> Form {
    Form::from_terms(ext.ext(), f.nvars(), f.degree(), f.terms().map(|(m, c)| (m.to_vec(), ext.embed(c))))
        .expect("same monomials")
}

pub fn embed_tensors(ext: &Extension, ts: &TensorTuple) -> TensorTuple {
    TensorTuple::new(ts.tensors().iter().map(|t| embed_tensor(ext, t)).collect()).expect("same shapes")
}

pub fn embed_forms(ext: &Extension, fs: &FormTuple) -> FormTuple {
    FormTuple::new(fs.forms().iter().map(|f| embed_form(ext, f)).collect()).expect("same shapes")
}

/// The `K`-coordinate tensors `a_1, ..., a_e` of `a = sum_j z_j a_j`.
fn split_tensor(ext: &Extension, a: &Tensor) -> Vec<Tensor> {
    let coords: Vec<Vec<Elem>> = a.data().iter().map(|x| ext.coords(x)).collect();
    (0..ext.degree())
        .map(|j| {
            let data = coords.iter().map(|c| c[j].clone()).collect();
            Tensor::from_data(ext.base(), a.shape(), data).unwrap()
        })
        .collect()
}

fn split_form(ext: &Extension, a: &Form) -> Vec<Form> {
    let terms: Vec<(Vec<u32>, Vec<Elem>)> = a.terms().map(|(m, c)| (m.to_vec(), ext.coords(c))).collect();
    (0..ext.degree())
        .map(|j| {
            Form::from_terms(ext.base(), a.nvars(), a.degree(), terms.iter().map(|(m, c)| (m.clone(), c[j].clone())))
                .unwrap()
        })
        .collect()
}

fn restrict_all(ext: &Extension, xs: &[Elem]) -> Option<Vec<Elem>> {
    xs.iter().map(|x| ext.restrict(x)).collect()
}

fn restrict_tensor(ext: &Extension, t: &Tensor) -> Option<Tensor> {
    Some(Tensor::from_data(ext.base(), t.shape(), restrict_all(ext, t.data())?).unwrap())
}

fn restrict_form(ext: &Extension, f: &Form) -> Option<Form> {
    let terms: Option<Vec<(Vec<u32>, Elem)>> =
        f.terms().map(|(m, c)| Some((m.to_vec(), ext.restrict(c)?))).collect();
    Some(Form::from_terms(ext.base(), f.nvars(), f.degree(), terms?).unwrap())
}

/// Pivot index (largest with `c_k != 0`) and the coefficients rescaled so
/// that `c_pivot = 1`, together with the inverse scale.
fn normalize(field: &FieldCtx, coeffs: &[Elem]) -> Result<(usize, Vec<Elem>, Elem)> {
    let p = coeffs.iter().rposition(|c| !field.is_zero(c)).ok_or(Error::NotADecomposition)?;
    let s = field.inv(&coeffs[p])?;
    Ok((p, coeffs.iter().map(|c| field.mul(c, &s)).collect(), s))
}

fn check_fields(ext: &Extension, base: &FieldCtx, dec: &Decomposition) -> Result<()> {
    if base != ext.base() {
        return Err(Error::FieldMismatch);
    }
    let ok = match &dec.terms {
        Terms::Partition(ts) => ts.iter().all(|t| t.a.field() == ext.ext() && t.b.field() == ext.ext()),
        Terms::Strength(ts) => ts.iter().all(|t| t.a.field() == ext.ext() && t.b.field() == ext.ext()),
    };
    if ok && dec.coeffs.iter().all(|c| ext.ext().contains(c)) {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

/// Descends a partition-rank decomposition of a tuple over `K` found over
/// `L`. The result has at most `e·r` terms and coefficient 1 at the pivot.
pub fn descend_tensors(ts: &TensorTuple, ext: &Extension, dec: &Decomposition) -> Result<Decomposition> {
    check_fields(ext, ts.field(), dec)?;
    let Terms::Partition(terms) = &dec.terms else {
        return Err(Error::NotADecomposition);
    };
    dec.verify_tensors(&embed_tensors(ext, ts))?;
    let base = ext.base();
    let (p, coeffs, s) = normalize(ext.ext(), &dec.coeffs)?;

    // everything already over K: rescale and restrict
    let restricted: Option<Vec<PartitionTerm>> = terms
        .iter()
        .map(|t| {
            Some(PartitionTerm {
                slots: t.slots.clone(),
                a: restrict_tensor(ext, &t.a)?,
                b: restrict_tensor(ext, &t.b.scale(&s))?,
            })
        })
        .collect();
    if let (Some(terms), Some(coeffs)) = (restricted, restrict_all(ext, &coeffs)) {
        return Ok(Decomposition { terms: Terms::Partition(terms), coeffs });
    }

    let shape = ts.shape().to_vec();
    let d = shape.len();
    let positions: Vec<Vec<usize>> = multi_indices(&shape).collect();
    let offset = |slots: &[usize], idx: &[usize]| slots.iter().fold(0, |acc, &s| acc * shape[s] + idx[s]);

    let mut parts: Vec<(Vec<usize>, Tensor)> = Vec::new();
    for t in terms {
        for a in split_tensor(ext, &t.a) {
            if !a.is_zero() {
                parts.push((t.slots.clone(), a));
            }
        }
    }
    let others: Vec<usize> = (0..ts.len()).filter(|&k| k != p).collect();
    let bdims: Vec<usize> = parts.iter().map(|(slots, _)| complement(slots, d).iter().map(|&j| shape[j]).product()).collect();
    let unknowns = others.len() + bdims.iter().sum::<usize>();
    let mut m = Matrix::zeros(base, positions.len(), unknowns);
    for (col, &k) in others.iter().enumerate() {
        for (row, x) in ts.tensors()[k].data().iter().enumerate() {
            m.set(row, col, base.neg(x));
        }
    }
    let mut col0 = others.len();
    for ((slots, a), bd) in parts.iter().zip(&bdims) {
        let rest = complement(slots, d);
        for (row, idx) in positions.iter().enumerate() {
            let v = &a.data()[offset(slots, idx)];
            if !base.is_zero(v) {
                m.set(row, col0 + offset(&rest, idx), v.clone());
            }
        }
        col0 += bd;
    }
    let x = linalg::solve(base, &m, ts.tensors()[p].data())
        .ok_or_else(|| Error::Unsolvable(format!("partition descent of {} terms over degree {}", terms.len(), ext.degree())))?;

    let mut out_coeffs = Vec::with_capacity(ts.len());
    let mut it = x[..others.len()].iter();
    for k in 0..ts.len() {
        out_coeffs.push(if k == p { base.one() } else { it.next().unwrap().clone() });
    }
    let mut out = Vec::new();
    let mut col0 = others.len();
    for ((slots, a), bd) in parts.into_iter().zip(bdims) {
        let rest = complement(&slots, d);
        let b_shape: Vec<usize> = rest.iter().map(|&j| shape[j]).collect();
        let b = Tensor::from_data(base, &b_shape, x[col0..col0 + bd].to_vec()).unwrap();
        col0 += bd;
        if !b.is_zero() {
            out.push(PartitionTerm { slots, a, b });
        }
    }
    let res = Decomposition { terms: Terms::Partition(out), coeffs: out_coeffs };
    res.verify_tensors(ts)?;
    Ok(res)
}

/// Strength analogue of [`descend_tensors`].
pub fn descend_forms(fs: &FormTuple, ext: &Extension, dec: &Decomposition) -> Result<Decomposition> {
    check_fields(ext, fs.field(), dec)?;
    let Terms::Strength(terms) = &dec.terms else {
        return Err(Error::NotADecomposition);
    };
    dec.verify_forms(&embed_forms(ext, fs))?;
    let base = ext.base();
    let (p, coeffs, s) = normalize(ext.ext(), &dec.coeffs)?;

    let restricted: Option<Vec<StrengthTerm>> = terms
        .iter()
        .map(|t| Some(StrengthTerm { a: restrict_form(ext, &t.a)?, b: restrict_form(ext, &t.b.scale(&s))? }))
        .collect();
    if let (Some(terms), Some(coeffs)) = (restricted, restrict_all(ext, &coeffs)) {
        return Ok(Decomposition { terms: Terms::Strength(terms), coeffs });
    }

    let (n, d) = (fs.nvars(), fs.degree());
    let rows = monomials_of_degree(n, d);
    let mut parts: Vec<Form> = Vec::new();
    for t in terms {
        parts.extend(split_form(ext, &t.a).into_iter().filter(|a| !a.is_zero()));
    }
    let others: Vec<usize> = (0..fs.len()).filter(|&k| k != p).collect();
    let bases: Vec<Vec<Vec<u32>>> = parts.iter().map(|a| monomials_of_degree(n, d - a.degree())).collect();
    let unknowns = others.len() + bases.iter().map(|b| b.len()).sum::<usize>();
    let mut m = Matrix::zeros(base, rows.len(), unknowns);
    for (col, &k) in others.iter().enumerate() {
        for (row, x) in fs.forms()[k].to_vector(&rows).iter().enumerate() {
            m.set(row, col, base.neg(x));
        }
    }
    let mut col = others.len();
    for (a, bb) in parts.iter().zip(&bases) {
        for beta in bb {
            let prod = a.mul(&Form::monomial(base, beta.clone(), base.one()))?;
            for (row, v) in prod.to_vector(&rows).into_iter().enumerate() {
                m.set(row, col, v);
            }
            col += 1;
        }
    }
    let x = linalg::solve(base, &m, &fs.forms()[p].to_vector(&rows))
        .ok_or_else(|| Error::Unsolvable(format!("strength descent of {} terms over degree {}", terms.len(), ext.degree())))?;

    let mut out_coeffs = Vec::with_capacity(fs.len());
    let mut it = x[..others.len()].iter();
    for k in 0..fs.len() {
        out_coeffs.push(if k == p { base.one() } else { it.next().unwrap().clone() });
    }
    let mut out = Vec::new();
    let mut col0 = others.len();
    for (a, bb) in parts.into_iter().zip(bases) {
        let b = Form::from_vector(base, n, d - a.degree(), &bb, &x[col0..col0 + bb.len()]);
        col0 += bb.len();
        if !b.is_zero() {
            out.push(StrengthTerm { a, b });
        }
    }
    let res = Decomposition { terms: Terms::Strength(out), coeffs: out_coeffs };
    res.verify_forms(fs)?;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{prk_exact, strength_exact, Budget, RankValue};

    fn f(s: &str) -> FieldCtx {
        FieldCtx::parse(s).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(blowup_bound(1, 5), 5);
        assert_eq!(blowup_bound(2, 1), 2);
        assert_eq!(blowup_bound(3, 4), 12);
        assert_eq!(ext_degree_needed(2, 1), 2);
        assert_eq!(ext_degree_needed(1, 1), 1);
        assert_eq!(ext_degree_needed(3, 5), 4);
        assert_eq!(ext_degree_needed(4, 2), 4);
    }

    #[test]
    fn quadric_over_gf9() {
        let (k, l) = (f("GF(3)"), f("GF(9)"));
        let ext = Extension::new(&k, &l).unwrap();
        let g = Form::from_terms(&k, 2, 2, [(vec![2, 0], k.one()), (vec![0, 2], k.one())]).unwrap();
        // i = alpha for the default modulus x^2 + 1
        let i = l.generator();
        assert!(l.is_zero(&l.add(&l.mul(&i, &i), &l.one())));
        let a = Form::linear(&l, &[l.one(), i.clone()]);
        let b = Form::linear(&l, &[l.one(), l.neg(&i)]);
        let dec = Decomposition { terms: Terms::Strength(alloc::vec![StrengthTerm { a, b }]), coeffs: alloc::vec![l.one()] };
        let fs = FormTuple::single(g.clone());
        let out = descend_forms(&fs, &ext, &dec).unwrap();
        assert!(out.len() <= 2);
        out.verify_forms(&fs).unwrap();
        let exact = strength_exact(&fs, Budget::default()).unwrap();
        assert_eq!(exact.value, RankValue::Finite(2));
        let over_l = strength_exact(&embed_forms(&ext, &fs), Budget::default()).unwrap();
        assert_eq!(over_l.value, RankValue::Finite(1));
    }

    #[test]
    fn diagonal_tensor_over_gf4() {
        let (k, l) = (f("GF(2)"), f("GF(4)"));
        let ext = Extension::new(&k, &l).unwrap();
        let mut t = Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]);
        t.set(&[1, 1, 1], k.one());
        let ts = TensorTuple::single(t);
        let cert = prk_exact(&embed_tensors(&ext, &ts), Budget::default()).unwrap();
        let out = descend_tensors(&ts, &ext, cert.witness.as_ref().unwrap()).unwrap();
        assert!(out.len() <= 4);
        out.verify_tensors(&ts).unwrap();
    }

    #[test]
    fn identity_extension_keeps_terms() {
        let k = f("GF(3)");
        let ext = Extension::new(&k, &k).unwrap();
        let g = Form::from_terms(&k, 2, 2, [(vec![1, 1], k.one())]).unwrap();
        let fs = FormTuple::single(g);
        let cert = strength_exact(&fs, Budget::default()).unwrap();
        let w = cert.witness.unwrap();
        assert_eq!(descend_forms(&fs, &ext, &w).unwrap(), w);
    }

    #[test]
    fn rejects_bad_input() {
        let (k, l) = (f("GF(2)"), f("GF(4)"));
        let ext = Extension::new(&k, &l).unwrap();
        let t = Tensor::basis(&k, &[2, 2], &[0, 0]);
        let wrong = Decomposition {
            terms: Terms::Partition(alloc::vec![PartitionTerm {
                slots: alloc::vec![0],
                a: Tensor::vector(&l, alloc::vec![l.zero(), l.one()]),
                b: Tensor::vector(&l, alloc::vec![l.one(), l.zero()]),
            }]),
            coeffs: alloc::vec![l.one()],
        };
        assert_eq!(descend_tensors(&TensorTuple::single(t), &ext, &wrong), Err(Error::NotADecomposition));
    }
}
