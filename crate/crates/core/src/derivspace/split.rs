//! Splitting each slot as `V_j = U'_j ⊕ V'_j` and extracting the components
//! `t_u` in the unique decomposition `t = sum_u u ⊗ t_u`, where `u` runs over
//! products of `U'`-basis vectors on a slot subset `I` and `t_u` lies in
//! `⊗_{j ∉ I} V'_j`.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Matrix};
use crate::tensor::{complement, Tensor};

/// Bases `(u, v)` of one slot, as lists of vectors.
pub type SlotBases = (Vec<Vec<Elem>>, Vec<Vec<Elem>>);

/// Per slot: a basis of `U'_j` followed by a basis of a complement `V'_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotSplit {
    field: FieldCtx,
    u: Vec<Vec<Vec<Elem>>>,
    v: Vec<Vec<Vec<Elem>>>,
    /// Rows: the dual basis of the adapted basis `(u..., v...)`.
    dual: Vec<Matrix>,
}

impl SlotSplit {
    pub fn new(field: &FieldCtx, parts: Vec<SlotBases>) -> Result<Self> {
        let mut u = Vec::new();
        let mut v = Vec::new();
        let mut dual = Vec::new();
        for (uj, vj) in parts {
            let n = uj.len() + vj.len();
            let cols: Vec<Vec<Elem>> = uj.iter().chain(&vj).cloned().collect();
            if cols.iter().any(|c| c.len() != n || c.iter().any(|x| !field.contains(x))) {
                return Err(Error::ShapeMismatch("split vectors do not form a square basis".into()));
            }
            let adapted = Matrix::from_rows(n, cols).transpose();
            let inv = linalg::inverse(field, &adapted)
                .ok_or_else(|| Error::ShapeMismatch("split vectors are linearly dependent".into()))?;
            u.push(uj);
            v.push(vj);
            dual.push(inv);
        }
        Ok(SlotSplit { field: field.clone(), u, v, dual })
    }

    /// A split with random adapted bases and random `dim U'_j`.
    pub fn random<R: Rng + ?Sized>(field: &FieldCtx, shape: &[usize], rng: &mut R) -> Self {
        let parts = shape
            .iter()
            .map(|&n| loop {
                let cols: Vec<Vec<Elem>> = (0..n).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect();
                if linalg::rank(field, &Matrix::from_rows(n, cols.clone())) == n {
                    let k = rng.gen_range(0..=n);
                    break (cols[..k].to_vec(), cols[k..].to_vec());
                }
            })
            .collect();
        SlotSplit::new(field, parts).expect("random bases are invertible")
    }

    pub fn order(&self) -> usize {
        self.u.len()
    }

    pub fn u_basis(&self, j: usize) -> &[Vec<Elem>] {
        &self.u[j]
    }

    pub fn v_basis(&self, j: usize) -> &[Vec<Elem>] {
        &self.v[j]
    }

    fn n(&self, j: usize) -> usize {
        self.u[j].len() + self.v[j].len()
    }

    /// The functional dual to `u_basis(j)[k]`.
    fn u_dual(&self, j: usize, k: usize) -> Vec<Elem> {
        self.dual[j].row(k).to_vec()
    }

    /// All monomials `u` on the slot subset `slots`.
    pub fn monomials_on(&self, slots: &[usize]) -> Vec<Vec<(usize, usize)>> {
        let mut out = alloc::vec![Vec::new()];
        for &j in slots {
            out = out
                .into_iter()
                .flat_map(|m: Vec<(usize, usize)>| {
                    (0..self.u[j].len()).map(move |k| {
                        let mut m = m.clone();
                        m.push((j, k));
                        m
                    })
                })
                .collect();
        }
        out
    }
}

fn check_monomial(split: &SlotSplit, t: &Tensor, u: &[(usize, usize)]) -> Result<()> {
    if t.field() != &split.field {
        return Err(Error::FieldMismatch);
    }
    let shape_ok = t.order() == split.order() && (0..t.order()).all(|j| t.shape()[j] == split.n(j));
    if !shape_ok {
        return Err(Error::ShapeMismatch("split does not match the tensor shape".into()));
    }
    if !u.windows(2).all(|w| w[0].0 < w[1].0) || u.iter().any(|&(j, k)| j >= t.order() || k >= split.u[j].len()) {
        return Err(Error::BadSubset);
    }
    Ok(())
}

/// `t_u` read off from the coordinates of `t` in the adapted bases.
pub fn coeff_extract_adapted(t: &Tensor, split: &SlotSplit, u: &[(usize, usize)]) -> Result<Tensor> {
    check_monomial(split, t, u)?;
    let field = t.field();
    let d = t.order();
    let coords = t.apply_maps(&split.dual)?;
    let slots: Vec<usize> = u.iter().map(|&(j, _)| j).collect();
    let rest = complement(&slots, d);
    // select coordinate k on slots in I, the V' block elsewhere
    let selectors: Vec<Matrix> = (0..d)
        .map(|j| {
            let n = split.n(j);
            match u.iter().find(|&&(s, _)| s == j) {
                Some(&(_, k)) => {
                    let mut row = alloc::vec![field.zero(); n];
                    row[k] = field.one();
                    Matrix::new(1, n, row)
                }
                None => {
                    let off = split.u[j].len();
                    let rows = (0..split.v[j].len())
                        .map(|i| {
                            let mut row = alloc::vec![field.zero(); n];
                            row[off + i] = field.one();
                            row
                        })
                        .collect();
                    Matrix::from_rows(n, rows)
                }
            }
        })
        .collect();
    let block = coords.apply_maps(&selectors)?;
    // drop the length-one slots of I, then map V' coordinates back
    let squeezed = Tensor::from_data(field, &block.sub_shape(&rest), block.data().to_vec())?;
    let back: Vec<Matrix> =
        rest.iter().map(|&j| Matrix::from_rows(split.n(j), split.v[j].clone()).transpose()).collect();
    squeezed.apply_maps(&back)
}

fn rank_one_over(field: &FieldCtx, vectors: Vec<Vec<Elem>>) -> Tensor {
    if vectors.is_empty() {
        Tensor::scalar(field, field.one())
    } else {
        Tensor::rank_one(field, &vectors)
    }
}

/// `t_u` by inclusion–exclusion over contractions with dual functionals:
/// `sum_{J ⊆ I^c} (-1)^{|J|} sum_{u'' on J} u'' ⊗ ξ_{u u''}(t)`.
pub fn coeff_extract_ie(t: &Tensor, split: &SlotSplit, u: &[(usize, usize)]) -> Result<Tensor> {
    check_monomial(split, t, u)?;
    let field = t.field();
    let d = t.order();
    let slots: Vec<usize> = u.iter().map(|&(j, _)| j).collect();
    let rest = complement(&slots, d);
    let mut acc = Tensor::zeros(field, &t.sub_shape(&rest));
    for mask in 0u32..(1 << rest.len()) {
        let j_pos: Vec<usize> = (0..rest.len()).filter(|p| mask >> p & 1 == 1).collect();
        let j_slots: Vec<usize> = j_pos.iter().map(|&p| rest[p]).collect();
        let sign = if j_pos.len().is_multiple_of(2) { field.one() } else { field.neg(&field.one()) };
        for extra in split.monomials_on(&j_slots) {
            let mut full: Vec<(usize, usize)> = u.iter().chain(&extra).copied().collect();
            full.sort_unstable();
            let contracted: Vec<usize> = full.iter().map(|&(j, _)| j).collect();
            let keep = complement(&contracted, d);
            let xi = rank_one_over(field, full.iter().map(|&(j, k)| split.u_dual(j, k)).collect());
            let xi_t = t.contract_any(&keep, &xi)?;
            let u2 = rank_one_over(field, extra.iter().map(|&(j, k)| split.u[j][k].clone()).collect());
            let term = Tensor::outer_split(&u2, &xi_t, &j_pos, rest.len())?;
            acc = acc.add(&term.scale(&sign))?;
        }
    }
    Ok(acc)
}

/// `t_u` computed both ways; disagreement is reported as an error.
///
/// The result lives on the slots outside `u`, in ambient coordinates; when
/// `u` covers every slot it is an order-0 tensor.
pub fn coeff_extract(t: &Tensor, split: &SlotSplit, u: &[(usize, usize)]) -> Result<Tensor> {
    let a = coeff_extract_adapted(t, split, u)?;
    let b = coeff_extract_ie(t, split, u)?;
    if a == b {
        Ok(a)
    } else {
        Err(Error::IeMismatch)
    }
}

/// `sum_u u ⊗ t_u` over every slot subset and every monomial on it.
pub fn reconstruct(t: &Tensor, split: &SlotSplit) -> Result<Tensor> {
    let field = t.field();
    let d = t.order();
    let mut acc = Tensor::zeros(field, t.shape());
    for mask in 0u32..(1 << d) {
        let slots: Vec<usize> = (0..d).filter(|j| mask >> j & 1 == 1).collect();
        for u in split.monomials_on(&slots) {
            let tu = coeff_extract(t, split, &u)?;
            let uu = rank_one_over(field, u.iter().map(|&(j, k)| split.u[j][k].clone()).collect());
            acc = acc.add(&Tensor::outer_split(&uu, &tu, &slots, d)?)?;
        }
    }
    Ok(acc)
}
