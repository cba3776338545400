//! Homogeneous multivariate polynomials (forms) with sparse storage.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// An exponent vector. Ordered graded-lexicographically: lower total degree
/// first, then larger exponents of earlier variables first, so that
/// `1 < x1 < x2 < x1^2 < x1 x2 < x2^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors in `n` variables of total degree exactly `d`, in
/// graded-lex order.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u32);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent vectors of total degree `<= max_degree`, graded-lex order.
/// There are `C(n + D, n)` of them.
pub fn monomials(n: usize, max_degree: usize) -> Vec<Vec<u32>> {
    (0..=max_degree).flat_map(|d| monomials_of_degree(n, d)).collect()
}

/// `C(n, k)` as u128, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// A homogeneous polynomial of degree `degree` in `nvars` variables.
#[derive(Clone, Debug)]
pub struct Form {
    field: FieldCtx,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.nvars == other.nvars
            && self.terms == other.terms
            && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(field: &FieldCtx, nvars: usize, degree: usize) -> Self {
        Form { field: field.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    /// Builds a form from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed and zero coefficients dropped.
    pub fn from_terms(
        field: &FieldCtx,
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Elem)>,
    ) -> Result<Self> {
        let mut f = Form::zero(field, nvars, degree);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::VarMismatch(exps.len(), nvars));
            }
            let m = Monomial(exps);
            if m.degree() != degree {
                return Err(Error::ShapeMismatch(format!(
                    "monomial {:?} has degree {} in a degree-{degree} form",
                    m.0,
                    m.degree()
                )));
            }
            if !field.contains(&c) {
                return Err(Error::FieldMismatch);
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.field.add(v, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// The linear form `x_i` (0-based).
    pub fn variable(field: &FieldCtx, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Form::monomial(field, e, field.one())
    }

    pub fn monomial(field: &FieldCtx, exps: Vec<u32>, coeff: Elem) -> Self {
        let nvars = exps.len();
        let m = Monomial(exps);
        let mut f = Form::zero(field, nvars, m.degree());
        f.add_term(m, coeff);
        f
    }

    /// The linear form `sum_i c_i x_i`.
    pub fn linear(field: &FieldCtx, coeffs: &[Elem]) -> Self {
        let n = coeffs.len();
        let basis = monomials_of_degree(n, 1);
        Form::from_vector(field, n, 1, &basis, coeffs)
    }

    /// Form with the given coefficients against a monomial basis of degree `degree`.
    pub fn from_vector(field: &FieldCtx, nvars: usize, degree: usize, basis: &[Vec<u32>], coeffs: &[Elem]) -> Self {
        debug_assert_eq!(basis.len(), coeffs.len());
        let mut f = Form::zero(field, nvars, degree);
        for (m, c) in basis.iter().zip(coeffs) {
            f.add_term(Monomial(m.clone()), c.clone());
        }
        f
    }

    /// Coefficients against a monomial basis (usually
    /// `monomials_of_degree(nvars, degree)`).
    pub fn to_vector(&self, basis: &[Vec<u32>]) -> Vec<Elem> {
        basis
            .iter()
            .map(|m| self.terms.get(&Monomial(m.clone())).cloned().unwrap_or_else(|| self.field.zero()))
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldCtx, nvars: usize, degree: usize, rng: &mut R) -> Self {
        let basis = monomials_of_degree(nvars, degree);
        let coeffs: Vec<Elem> = basis.iter().map(|_| field.random(rng)).collect();
        Form::from_vector(field, nvars, degree, &basis, &coeffs)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Elem)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Elem {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Sum of two forms of the same degree (a zero form of any degree
    /// tag is accepted on either side).
    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::ShapeMismatch(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = self.clone();
        out.degree = degree;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, c: &Elem) -> Form {
        let mut out = Form::zero(&self.field, self.nvars, self.degree);
        if self.field.is_zero(c) {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), self.field.mul(v, c));
        }
        out
    }

    /// Product; the degree is the sum of the degrees.
    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let mut out = Form::zero(&self.field, self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                out.add_term(Monomial(e), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Form {
        let mut acc = Form::monomial(&self.field, vec![0; self.nvars], self.field.one());
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Form> {
        if i >= self.nvars {
            return Err(Error::BadIndex(i));
        }
        if self.degree == 0 {
            return Err(Error::ShapeMismatch("derivative of a degree-0 form".into()));
        }
        let mut out = Form::zero(&self.field, self.nvars, self.degree - 1);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::VarMismatch(point.len(), self.nvars));
        }
        if point.iter().any(|x| !self.field.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes `x_i -> images[i]`; all images must share one degree `k`.
    /// The result has degree `degree * k` in the images' variables.
    pub fn substitute(&self, images: &[Form]) -> Result<Form> {
        if images.len() != self.nvars {
            return Err(Error::VarMismatch(images.len(), self.nvars));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (n, k) = (first.nvars, first.degree);
        for g in images {
            if g.field != self.field {
                return Err(Error::FieldMismatch);
            }
            if g.nvars != n {
                return Err(Error::VarMismatch(g.nvars, n));
            }
            if g.degree != k && !g.is_zero() {
                return Err(Error::ShapeMismatch("substitution images of mixed degree".into()));
            }
        }
        let mut out = Form::zero(&self.field, n, self.degree * k);
        for (m, c) in &self.terms {
            let mut t = Form::monomial(&self.field, vec![0; n], c.clone());
            for (g, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&g.pow(e))?;
                }
            }
            out = out.add(&t)?;
        }
        out.degree = self.degree * k;
        Ok(out)
    }
}

/// `m >= 1` forms sharing field, variable count and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTuple(Vec<Form>);

impl FormTuple {
    pub fn new(forms: Vec<Form>) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::ShapeMismatch("empty form tuple".into()));
        };
        for f in &forms[1..] {
            first.check_compatible(f)?;
            if f.degree != first.degree {
                return Err(Error::ShapeMismatch("forms of different degree in a tuple".into()));
            }
        }
        Ok(FormTuple(forms))
    }

    pub fn single(f: Form) -> Self {
        FormTuple(vec![f])
    }

    pub fn forms(&self) -> &[Form] {
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

    pub fn nvars(&self) -> usize {
        self.0[0].nvars()
    }

    pub fn degree(&self) -> usize {
        self.0[0].degree()
    }

    /// `sum_k c_k f_k`.
    pub fn combine(&self, c: &[Elem]) -> Form {
        let mut acc = Form::zero(self.field(), self.nvars(), self.degree());
        for (f, ck) in self.0.iter().zip(c) {
            acc = acc.add(&f.scale(ck)).expect("tuple entries are compatible");
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(f: &FieldCtx, n: usize, i: usize) -> Form {
        Form::variable(f, n, i)
    }

    #[test]
    fn mul_examples() {
        let q = FieldCtx::rational();
        let p = x(&q, 2, 0).mul(&x(&q, 2, 1)).unwrap();
        assert_eq!(p, Form::monomial(&q, vec![1, 1], q.one()));
        let s = x(&q, 2, 0).add(&x(&q, 2, 1)).unwrap();
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.coeff(&[1, 1]), q.from_i64(2));
        assert_eq!(sq.num_terms(), 3);
        let f2 = FieldCtx::prime(2).unwrap();
        let s2 = x(&f2, 2, 0).add(&x(&f2, 2, 1)).unwrap();
        let sq2 = s2.mul(&s2).unwrap();
        let expect = Form::monomial(&f2, vec![2, 0], f2.one())
            .add(&Form::monomial(&f2, vec![0, 2], f2.one()))
            .unwrap();
        assert_eq!(sq2, expect);
    }

    #[test]
    fn mismatches() {
        let q = FieldCtx::rational();
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(x(&q, 2, 0).mul(&x(&f2, 2, 0)), Err(Error::FieldMismatch));
        assert_eq!(x(&q, 2, 0).mul(&x(&q, 3, 0)), Err(Error::VarMismatch(2, 3)));
        assert_eq!(x(&q, 2, 0).partial(2), Err(Error::BadIndex(2)));
        assert_eq!(x(&q, 2, 0).eval(&[f2.one(), f2.one()]), Err(Error::FieldMismatch));
    }

    #[test]
    fn partial_examples() {
        let q = FieldCtx::rational();
        let f = Form::monomial(&q, vec![2, 1], q.one());
        assert_eq!(f.partial(0).unwrap(), Form::monomial(&q, vec![1, 1], q.from_i64(2)));
        let g = Form::monomial(&q, vec![0, 3], q.one());
        let dg = g.partial(0).unwrap();
        assert!(dg.is_zero());
        assert_eq!(dg.degree(), 2);
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(Form::monomial(&f2, vec![2], f2.one()).partial(0).unwrap().is_zero());
    }

    #[test]
    fn eval_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let f = Form::from_terms(&f3, 3, 2, [(vec![1, 1, 0], f3.one()), (vec![0, 0, 2], f3.one())]).unwrap();
        assert_eq!(f.eval(&[f3.one(), f3.one(), f3.one()]).unwrap(), f3.from_i64(2));
        assert_eq!(f.eval(&[f3.zero(), f3.zero(), f3.zero()]).unwrap(), f3.zero());
        let f5 = FieldCtx::prime(5).unwrap();
        let g = Form::from_terms(&f5, 2, 2, [(vec![2, 0], f5.one()), (vec![0, 2], f5.one())]).unwrap();
        assert_eq!(g.eval(&[f5.one(), f5.from_i64(2)]).unwrap(), f5.zero());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 1), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(monomials(1, 5).len(), 6);
        assert_eq!(monomials(3, 2).len(), 10);
        for n in 1..5 {
            for d in 0..5 {
                let all = monomials(n, d);
                assert_eq!(all.len() as u128, binomial((n + d) as u64, n as u64));
                let mono: Vec<Monomial> = all.into_iter().map(Monomial).collect();
                assert!(mono.windows(2).all(|w| w[0] < w[1]), "graded-lex order");
            }
        }
    }

    #[test]
    fn euler_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for spec in ["Q", "GF(5)", "GF(7)"] {
            let f = FieldCtx::parse(spec).unwrap();
            for i in 0..500 {
                let n = 1 + i % 4;
                let d = 1 + (i / 4) % 4;
                if !f.char_exceeds(d) {
                    continue;
                }
                let g = Form::random(&f, n, d, &mut rng);
                let mut lhs = Form::zero(&f, n, d);
                for v in 0..n {
                    lhs = lhs.add(&x(&f, n, v).mul(&g.partial(v).unwrap()).unwrap()).unwrap();
                }
                assert_eq!(lhs, g.scale(&f.from_i64(d as i64)));
            }
        }
    }

    #[test]
    fn eval_is_multiplicative_and_homogeneity_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = FieldCtx::parse("GF(9)").unwrap();
        for _ in 0..200 {
            let a = Form::random(&f, 3, 2, &mut rng);
            let b = Form::random(&f, 3, 1, &mut rng);
            let p = a.mul(&b).unwrap();
            assert!(p.terms().all(|(m, _)| m.iter().sum::<u32>() == 3));
            let pt: Vec<Elem> = (0..3).map(|_| f.random(&mut rng)).collect();
            assert_eq!(p.eval(&pt).unwrap(), f.mul(&a.eval(&pt).unwrap(), &b.eval(&pt).unwrap()));
            let da = a.partial(1).unwrap();
            assert!(da.terms().all(|(m, _)| m.iter().sum::<u32>() == 1));
        }
    }

    #[test]
    fn zero_forms_compare_equal_across_degree_tags() {
        let q = FieldCtx::rational();
        assert_eq!(Form::zero(&q, 2, 1), Form::zero(&q, 2, 3));
    }
}
