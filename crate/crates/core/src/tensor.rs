//! Dense order-d tensors: flattenings, contractions, multilinear maps and
//! concise reduction.
//!
//! Slots are 0-based in the API. Entries are stored row-major over the
//! multi-index `(i_0, ..., i_{d-1})`, last slot fastest. Order-0 tensors
//! (a single scalar) appear as intermediate results of full contractions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    field: FieldCtx,
    shape: Vec<usize>,
    data: Vec<Elem>,
}

/// Iterator over all multi-indices of a shape in row-major order.
pub struct MultiIndices {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for MultiIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut k = succ.len();
        let mut done = true;
        while k > 0 {
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.shape[k] {
                done = false;
                break;
            }
            succ[k] = 0;
        }
        if !done {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

pub fn multi_indices(shape: &[usize]) -> MultiIndices {
    let empty = shape.contains(&0);
    MultiIndices { shape: shape.to_vec(), next: (!empty).then(|| vec![0; shape.len()]) }
}

/// Complement of `slots` in `0..d`, ascending.
pub fn complement(slots: &[usize], d: usize) -> Vec<usize> {
    (0..d).filter(|j| !slots.contains(j)).collect()
}

fn check_subset(slots: &[usize], d: usize, proper: bool) -> Result<()> {
    let mut seen = vec![false; d];
    for &s in slots {
        if s >= d || seen[s] {
            return Err(Error::BadSubset);
        }
        seen[s] = true;
    }
    if proper && (slots.is_empty() || slots.len() == d) {
        return Err(Error::BadSubset);
    }
    Ok(())
}

impl Tensor {
    pub fn zeros(field: &FieldCtx, shape: &[usize]) -> Self {
        let n: usize = shape.iter().product();
        Tensor { field: field.clone(), shape: shape.to_vec(), data: vec![field.zero(); n] }
    }

    pub fn from_data(field: &FieldCtx, shape: &[usize], data: Vec<Elem>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if data.len() != n {
            return Err(Error::ShapeMismatch(format!("{} entries for shape {:?}", data.len(), shape)));
        }
        if data.iter().any(|x| !field.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Tensor { field: field.clone(), shape: shape.to_vec(), data })
    }

    /// The standard basis tensor `e_{idx}`.
    pub fn basis(field: &FieldCtx, shape: &[usize], idx: &[usize]) -> Self {
        let mut t = Tensor::zeros(field, shape);
        t.set(idx, field.one());
        t
    }

    /// An order-1 tensor (a vector).
    pub fn vector(field: &FieldCtx, v: Vec<Elem>) -> Self {
        Tensor { field: field.clone(), shape: vec![v.len()], data: v }
    }

    pub fn scalar(field: &FieldCtx, v: Elem) -> Self {
        Tensor { field: field.clone(), shape: Vec::new(), data: vec![v] }
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldCtx, shape: &[usize], rng: &mut R) -> Self {
        let n: usize = shape.iter().product();
        Tensor { field: field.clone(), shape: shape.to_vec(), data: (0..n).map(|_| field.random(rng)).collect() }
    }

    /// `v_0 ⊗ v_1 ⊗ ... ⊗ v_{d-1}`.
    pub fn rank_one(field: &FieldCtx, vectors: &[Vec<Elem>]) -> Self {
        let shape: Vec<usize> = vectors.iter().map(|v| v.len()).collect();
        let mut t = Tensor::zeros(field, &shape);
        for (pos, idx) in multi_indices(&shape).enumerate() {
            let mut acc = field.one();
            for (v, &i) in vectors.iter().zip(&idx) {
                acc = field.mul(&acc, &v[i]);
            }
            t.data[pos] = acc;
        }
        t
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Elem {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Elem) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Nonzero entries with their multi-indices, row-major.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &Elem)> {
        multi_indices(&self.shape).zip(&self.data).filter(|(_, v)| !self.field.is_zero(v))
    }

    fn check_same(&self, other: &Tensor) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Tensor { field: f.clone(), shape: self.shape.clone(), data })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(Tensor { field: f.clone(), shape: self.shape.clone(), data })
    }

    pub fn scale(&self, c: &Elem) -> Tensor {
        let f = &self.field;
        Tensor { field: f.clone(), shape: self.shape.clone(), data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }

    /// The tensor `a ⊗ b` with `a` occupying `slots_a` (ascending) and `b`
    /// the complementary slots, inside an order-`d` tensor.
    pub fn outer_split(a: &Tensor, b: &Tensor, slots_a: &[usize], d: usize) -> Result<Tensor> {
        if a.field != b.field {
            return Err(Error::FieldMismatch);
        }
        check_subset(slots_a, d, false)?;
        let slots_b = complement(slots_a, d);
        if a.order() != slots_a.len() || b.order() != slots_b.len() {
            return Err(Error::ShapeMismatch("factor orders do not match the slot split".into()));
        }
        let mut shape = vec![0; d];
        for (k, &s) in slots_a.iter().enumerate() {
            shape[s] = a.shape[k];
        }
        for (k, &s) in slots_b.iter().enumerate() {
            shape[s] = b.shape[k];
        }
        let f = &a.field;
        let mut out = Tensor::zeros(f, &shape);
        let mut idx = vec![0; d];
        for (ia, va) in a.nonzero_entries() {
            for (ib, vb) in b.nonzero_entries() {
                for (k, &s) in slots_a.iter().enumerate() {
                    idx[s] = ia[k];
                }
                for (k, &s) in slots_b.iter().enumerate() {
                    idx[s] = ib[k];
                }
                out.set(&idx, f.mul(va, vb));
            }
        }
        Ok(out)
    }

    /// Shape restricted to the given slots.
    pub fn sub_shape(&self, slots: &[usize]) -> Vec<usize> {
        slots.iter().map(|&s| self.shape[s]).collect()
    }

    /// Flattening matrix without the properness check: rows are indexed by
    /// the multi-index over `rows` and columns by the one over the complement.
    pub(crate) fn flatten_any(&self, rows: &[usize]) -> Matrix {
        let cols = complement(rows, self.order());
        let nr: usize = self.sub_shape(rows).iter().product();
        let nc: usize = self.sub_shape(&cols).iter().product();
        let mut m = Matrix::zeros(&self.field, nr, nc);
        if nr == 0 || nc == 0 {
            return m;
        }
        for (pos, idx) in multi_indices(&self.shape).enumerate() {
            let r = rows.iter().fold(0, |acc, &s| acc * self.shape[s] + idx[s]);
            let c = cols.iter().fold(0, |acc, &s| acc * self.shape[s] + idx[s]);
            m.set(r, c, self.data[pos].clone());
        }
        m
    }

    /// The flattening along a nonempty proper slot subset `rows`.
    pub fn flatten(&self, rows: &[usize]) -> Result<Matrix> {
        let mut sorted = rows.to_vec();
        check_subset(&sorted, self.order(), true)?;
        sorted.sort_unstable();
        Ok(self.flatten_any(&sorted))
    }

    /// Pairs the slots outside `keep` with the functional `xi` (a tensor
    /// over those slots, in ascending slot order). `keep` may be empty or
    /// all slots.
    pub fn contract_any(&self, keep: &[usize], xi: &Tensor) -> Result<Tensor> {
        check_subset(keep, self.order(), false)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let rest = complement(&keep, self.order());
        if xi.shape != self.sub_shape(&rest) {
            return Err(Error::ShapeMismatch(format!(
                "functional shape {:?} does not match slots {:?}",
                xi.shape, rest
            )));
        }
        if xi.field != self.field {
            return Err(Error::FieldMismatch);
        }
        let m = self.flatten_any(&keep);
        let data = if m.cols() == 0 {
            vec![self.field.zero(); m.rows()]
        } else {
            m.mul_vec(&self.field, &xi.data)
        };
        Tensor::from_data(&self.field, &self.sub_shape(&keep), data)
    }

    /// Applies `maps[j]` (an `n'_j x n_j` matrix) to slot `j` for every `j`.
    pub fn apply_maps(&self, maps: &[Matrix]) -> Result<Tensor> {
        if maps.len() != self.order() {
            return Err(Error::ShapeMismatch(format!("{} maps for order {}", maps.len(), self.order())));
        }
        let mut t = self.clone();
        for (j, phi) in maps.iter().enumerate() {
            t = t.apply_slot(j, phi)?;
        }
        Ok(t)
    }

    /// Applies one linear map to slot `j`.
    pub fn apply_slot(&self, j: usize, phi: &Matrix) -> Result<Tensor> {
        if j >= self.order() || phi.cols() != self.shape[j] {
            return Err(Error::ShapeMismatch(format!(
                "map with {} columns on slot {j} of shape {:?}",
                phi.cols(),
                self.shape
            )));
        }
        let f = &self.field;
        let mut shape = self.shape.clone();
        shape[j] = phi.rows();
        let outer: usize = self.shape[..j].iter().product();
        let inner: usize = self.shape[j + 1..].iter().product();
        let (n_in, n_out) = (self.shape[j], phi.rows());
        let mut data = vec![f.zero(); outer * n_out * inner];
        for o in 0..outer {
            for b in 0..n_in {
                for a in 0..n_out {
                    let c = phi.get(a, b);
                    if f.is_zero(c) {
                        continue;
                    }
                    for i in 0..inner {
                        let src = &self.data[(o * n_in + b) * inner + i];
                        let dst = &mut data[(o * n_out + a) * inner + i];
                        *dst = f.mul_add(dst, c, src);
                    }
                }
            }
        }
        Ok(Tensor { field: f.clone(), shape, data })
    }
}

/// `m >= 1` tensors of one field and shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorTuple(Vec<Tensor>);

impl TensorTuple {
    pub fn new(ts: Vec<Tensor>) -> Result<Self> {
        let Some(first) = ts.first() else {
            return Err(Error::ShapeMismatch("empty tensor tuple".into()));
        };
        for t in &ts[1..] {
            first.check_same(t)?;
        }
        Ok(TensorTuple(ts))
    }

    pub fn single(t: Tensor) -> Self {
        TensorTuple(vec![t])
    }

    pub fn tensors(&self) -> &[Tensor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn field(&self) -> &FieldCtx {
        self.0[0].field()
    }

    pub fn shape(&self) -> &[usize] {
        self.0[0].shape()
    }

    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    /// `sum_k c_k t_k`.
    pub fn combine(&self, c: &[Elem]) -> Tensor {
        let f = self.field();
        let mut acc = Tensor::zeros(f, self.shape());
        for (t, ck) in self.0.iter().zip(c) {
            if f.is_zero(ck) {
                continue;
            }
            acc = acc.add(&t.scale(ck)).expect("tuple entries share a shape");
        }
        acc
    }

    /// The proper contraction `sum_i xi_i(t_i)` onto the slots `keep`.
    pub fn contract(&self, keep: &[usize], xis: &[Tensor]) -> Result<Tensor> {
        check_subset(keep, self.order(), true)?;
        if xis.len() != self.len() {
            return Err(Error::ShapeMismatch(format!("{} functionals for {} tensors", xis.len(), self.len())));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let mut acc = Tensor::zeros(self.field(), &self.0[0].sub_shape(&sorted));
        for (t, xi) in self.0.iter().zip(xis) {
            acc = acc.add(&t.contract_any(&sorted, xi)?)?;
        }
        Ok(acc)
    }

    /// Slot-`j` flattenings of all entries, concatenated side by side.
    fn slot_matrix(&self, j: usize) -> Matrix {
        let mut it = self.0.iter().map(|t| t.flatten_any(&[j]));
        let first = it.next().unwrap();
        it.fold(first, |acc, m| acc.hcat(&m))
    }

    /// Basis (as columns) of the smallest subspace of slot `j` supporting
    /// every entry, in reduced echelon form.
    pub fn slot_span(&self, j: usize) -> Matrix {
        let m = self.slot_matrix(j);
        linalg::row_space(self.field(), &m.transpose()).transpose()
    }

    /// Expresses every slot in a basis of its support. Returns the reduced
    /// tuple and, per slot, the inclusion matrix whose columns are the basis;
    /// `reduced.apply_maps(inclusions) == self` for every entry.
    pub fn concise_reduce(&self) -> (TensorTuple, Vec<Matrix>) {
        let f = self.field().clone();
        let mut inclusions = Vec::with_capacity(self.order());
        let mut projections = Vec::with_capacity(self.order());
        for j in 0..self.order() {
            let basis = self.slot_span(j);
            let k = basis.cols();
            let mut proj = Matrix::zeros(&f, k, self.shape()[j]);
            for c in 0..k {
                let pivot = (0..basis.rows()).find(|&r| !f.is_zero(basis.get(r, c))).expect("basis column is nonzero");
                proj.set(c, pivot, f.one());
            }
            inclusions.push(basis);
            projections.push(proj);
        }
        let reduced = self
            .0
            .iter()
            .map(|t| t.apply_maps(&projections).expect("projection shapes match"))
            .collect();
        (TensorTuple(reduced), inclusions)
    }

    /// Dimensions of the slot supports.
    pub fn concise_dims(&self) -> Vec<usize> {
        (0..self.order()).map(|j| linalg::rank(self.field(), &self.slot_matrix(j))).collect()
    }

    /// Functionals `xi_i` with `contract([j], xis) == v`, if `v` lies in the
    /// slot-`j` support.
    pub fn contraction_witness(&self, j: usize, v: &[Elem]) -> Option<Vec<Tensor>> {
        let m = self.slot_matrix(j);
        let x = linalg::solve(self.field(), &m, v)?;
        let rest = complement(&[j], self.order());
        let shape = self.0[0].sub_shape(&rest);
        let per: usize = shape.iter().product();
        Some(
            x.chunks(per.max(1))
                .take(self.len())
                .map(|c| Tensor::from_data(self.field(), &shape, c.to_vec()).expect("chunk size"))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(s: &str) -> FieldCtx {
        FieldCtx::parse(s).unwrap()
    }

    fn e_diag(k: &FieldCtx) -> Tensor {
        let mut t = Tensor::basis(k, &[2, 2, 2], &[0, 0, 0]);
        t.set(&[1, 1, 1], k.one());
        t
    }

    #[test]
    fn flatten_examples() {
        let k = f("GF(3)");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = Tensor::random(&k, &[2, 3], &mut rng);
        let m = t.flatten(&[0]).unwrap();
        assert_eq!(m.data(), t.data());
        let e = Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]);
        let m = e.flatten(&[0]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        assert_eq!(linalg::rank(&k, &m), 1);
        let k2 = f("GF(2)");
        let d = e_diag(&k2);
        for s in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
            assert_eq!(linalg::rank(&k2, &d.flatten(&s).unwrap()), 2);
        }
        assert_eq!(d.flatten(&[]), Err(Error::BadSubset));
        assert_eq!(d.flatten(&[0, 1, 2]), Err(Error::BadSubset));
        assert_eq!(d.flatten(&[3]), Err(Error::BadSubset));
    }

    #[test]
    fn flatten_rank_is_complement_symmetric() {
        let k = f("GF(5)");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let t = Tensor::random(&k, &[2, 3, 2], &mut rng);
            for s in [vec![0], vec![1], vec![2]] {
                let c = complement(&s, 3);
                let a = t.flatten(&s).unwrap();
                let b = t.flatten(&c).unwrap();
                assert_eq!(a.transpose(), b);
                assert_eq!(linalg::rank(&k, &a), linalg::rank(&k, &b));
            }
        }
    }

    #[test]
    fn contract_examples() {
        let k = f("GF(5)");
        let e = TensorTuple::single(Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]));
        let xi = Tensor::basis(&k, &[2], &[0]);
        assert_eq!(e.contract(&[0, 1], &[xi]).unwrap(), Tensor::basis(&k, &[2, 2], &[0, 0]));
        let zero_xi = Tensor::zeros(&k, &[2]);
        assert!(e.contract(&[0, 1], &[zero_xi]).unwrap().is_zero());
        assert!(matches!(e.contract(&[0, 1], &[Tensor::zeros(&k, &[3])]), Err(Error::ShapeMismatch(_))));

        // m = 2 against an explicit double sum
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let ts = TensorTuple::new(vec![Tensor::random(&k, &[2, 2, 2], &mut rng), Tensor::random(&k, &[2, 2, 2], &mut rng)]).unwrap();
            let xis = vec![Tensor::random(&k, &[2, 2], &mut rng), Tensor::random(&k, &[2, 2], &mut rng)];
            let got = ts.contract(&[1], &xis).unwrap();
            for b in 0..2 {
                let mut acc = k.zero();
                for (t, xi) in ts.tensors().iter().zip(&xis) {
                    for a in 0..2 {
                        for c in 0..2 {
                            acc = k.add(&acc, &k.mul(xi.get(&[a, c]), t.get(&[a, b, c])));
                        }
                    }
                }
                assert_eq!(got.get(&[b]), &acc);
            }
        }
    }

    fn random_matrix(k: &FieldCtx, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::new(r, c, (0..r * c).map(|_| k.random(rng)).collect())
    }

    #[test]
    fn apply_maps_examples() {
        let k = f("GF(3)");
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = Tensor::random(&k, &[2, 3, 2], &mut rng);
        let ids: Vec<Matrix> = [2, 3, 2].iter().map(|&n| Matrix::identity(&k, n)).collect();
        assert_eq!(t.apply_maps(&ids).unwrap(), t);
        let proj = Matrix::new(1, 2, vec![k.one(), k.zero()]);
        let e22 = Tensor::basis(&k, &[2, 2], &[1, 1]);
        assert!(e22.apply_maps(&[proj.clone(), proj]).unwrap().is_zero());
        for _ in 0..100 {
            let m = Tensor::random(&k, &[2, 2], &mut rng);
            let p1 = random_matrix(&k, 3, 2, &mut rng);
            let p2 = random_matrix(&k, 2, 2, &mut rng);
            let got = m.apply_maps(&[p1.clone(), p2.clone()]).unwrap();
            let mat = Matrix::new(2, 2, m.data().to_vec());
            let expect = p1.mul(&k, &mat).mul(&k, &p2.transpose());
            assert_eq!(got.data(), expect.data());
        }
    }

    #[test]
    fn apply_maps_composes() {
        let k = f("GF(4)");
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let t = Tensor::random(&k, &[2, 2, 3], &mut rng);
            let phi: Vec<Matrix> = [(3, 2), (2, 2), (2, 3)].iter().map(|&(r, c)| random_matrix(&k, r, c, &mut rng)).collect();
            let psi: Vec<Matrix> = [(2, 3), (3, 2), (2, 2)].iter().map(|&(r, c)| random_matrix(&k, r, c, &mut rng)).collect();
            let comp: Vec<Matrix> = psi.iter().zip(&phi).map(|(a, b)| a.mul(&k, b)).collect();
            let lhs = t.apply_maps(&phi).unwrap().apply_maps(&psi).unwrap();
            assert_eq!(lhs, t.apply_maps(&comp).unwrap());
        }
    }

    #[test]
    fn concise_examples() {
        let k = f("GF(5)");
        let e = TensorTuple::single(Tensor::basis(&k, &[2, 2, 2], &[0, 0, 0]));
        let (r, _) = e.concise_reduce();
        assert_eq!(r.shape(), &[1, 1, 1]);
        assert_eq!(r.tensors()[0].data(), &[k.one()]);
        let z = TensorTuple::single(Tensor::zeros(&k, &[2, 2, 2]));
        let (rz, inc) = z.concise_reduce();
        assert_eq!(rz.shape(), &[0, 0, 0]);
        assert_eq!(rz.tensors()[0].apply_maps(&inc).unwrap(), z.tensors()[0]);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let vs: Vec<Vec<Elem>> = (0..3)
                .map(|_| {
                    let mut v = vec![k.random_nonzero(&mut rng)];
                    v.push(k.random(&mut rng));
                    v
                })
                .collect();
            let t = TensorTuple::single(Tensor::rank_one(&k, &vs));
            assert_eq!(t.concise_reduce().0.shape(), &[1, 1, 1]);
        }
    }

    #[test]
    fn concise_reduce_round_trips_and_is_idempotent() {
        let k = f("GF(3)");
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            // embed a random 2x2x2 pair into 3x3x3 via random maps
            let small = [Tensor::random(&k, &[2, 1, 2], &mut rng), Tensor::random(&k, &[2, 1, 2], &mut rng)];
            let maps: Vec<Matrix> = [(3, 2), (3, 1), (3, 2)].iter().map(|&(r, c)| random_matrix(&k, r, c, &mut rng)).collect();
            let ts = TensorTuple::new(small.iter().map(|t| t.apply_maps(&maps).unwrap()).collect()).unwrap();
            let (red, inc) = ts.concise_reduce();
            for (a, b) in red.tensors().iter().zip(ts.tensors()) {
                assert_eq!(&a.apply_maps(&inc).unwrap(), b);
            }
            let (again, inc2) = red.concise_reduce();
            assert_eq!(again, red);
            for (j, m) in inc2.iter().enumerate() {
                assert_eq!(m, &Matrix::identity(&k, red.shape()[j]));
            }
            assert_eq!(red.shape(), ts.concise_dims().as_slice());
        }
    }

    #[test]
    fn concise_basis_vectors_are_proper_contractions() {
        let k = f("GF(5)");
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let ts = TensorTuple::new(vec![Tensor::random(&k, &[2, 3, 2], &mut rng), Tensor::random(&k, &[2, 3, 2], &mut rng)]).unwrap();
            let (red, _) = ts.concise_reduce();
            for j in 0..3 {
                let n = red.shape()[j];
                for b in 0..n {
                    let v: Vec<Elem> = (0..n).map(|i| if i == b { k.one() } else { k.zero() }).collect();
                    let xis = red.contraction_witness(j, &v).expect("concise slot is spanned by contractions");
                    let got = red.contract(&[j], &xis).unwrap();
                    assert_eq!(got.data(), v.as_slice());
                }
            }
        }
    }
}
