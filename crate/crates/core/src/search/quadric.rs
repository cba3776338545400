//! Closed-form strength of quadratic forms.
//!
//! A quadric has strength `r` exactly when it vanishes on a subspace of
//! codimension `r` (write `q = sum l_i m_i` and intersect the kernels of the
//! `l_i`; conversely split off a basis of the annihilator). So the strength
//! is `n` minus the largest totally singular subspace.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Signed;

use super::enumerate::projective_points;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Matrix};
use crate::poly::Form;

/// Where the quadric is considered to live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadMode {
    /// Over an algebraically closed field of characteristic not two.
    AlgClosed,
    /// Over the reals, for a diagonal form with rational coefficients.
    RealDiagonal,
    /// Over the (odd-characteristic) finite field of the form itself.
    FiniteOdd,
}

#[derive(Clone, Debug)]
pub enum Quadric {
    /// `sum_i c_i x_i^2`.
    Diagonal(Vec<BigRational>),
    /// Symmetric matrix `G` of the form `x^T G x`.
    Gram(FieldCtx, Matrix),
    Form(Form),
}

impl Quadric {
    fn nvars(&self) -> usize {
        match self {
            Quadric::Diagonal(c) => c.len(),
            Quadric::Gram(_, g) => g.rows(),
            Quadric::Form(f) => f.nvars(),
        }
    }

    /// The field and the matrix of the polar form `B(u, v) = q(u+v) - q(u) - q(v)`.
    fn polar(&self) -> Result<(FieldCtx, Matrix)> {
        match self {
            Quadric::Diagonal(c) => {
                let q = FieldCtx::rational();
                let mut g = Matrix::zeros(&q, c.len(), c.len());
                for (i, ci) in c.iter().enumerate() {
                    g.set(i, i, Elem::Rat(ci * BigRational::from_integer(2.into())));
                }
                Ok((q, g))
            }
            Quadric::Gram(field, g) => {
                if g.rows() != g.cols() {
                    return Err(Error::NotQuadratic);
                }
                if field.characteristic() == 2 {
                    return Err(Error::CharTwoUnsupported);
                }
                for i in 0..g.rows() {
                    for j in 0..i {
                        if g.get(i, j) != g.get(j, i) {
                            return Err(Error::NotQuadratic);
                        }
                    }
                }
                let two = field.from_i64(2);
                let data = g.data().iter().map(|x| field.mul(&two, x)).collect();
                Ok((field.clone(), Matrix::new(g.rows(), g.cols(), data)))
            }
            Quadric::Form(f) => {
                if f.degree() != 2 && !f.is_zero() {
                    return Err(Error::NotQuadratic);
                }
                let field = f.field();
                if field.characteristic() == 2 {
                    return Err(Error::CharTwoUnsupported);
                }
                let n = f.nvars();
                let mut g = Matrix::zeros(field, n, n);
                for (m, c) in f.terms() {
                    let idx: Vec<usize> = (0..n).filter(|&i| m[i] > 0).collect();
                    match idx.as_slice() {
                        [i] => g.set(*i, *i, field.mul(&field.from_i64(2), c)),
                        [i, j] => {
                            g.set(*i, *j, c.clone());
                            g.set(*j, *i, c.clone());
                        }
                        _ => unreachable!("quadratic monomial"),
                    }
                }
                Ok((field.clone(), g))
            }
        }
    }
}

/// Strength of a quadric in the given mode.
pub fn quad_strength(quadric: &Quadric, mode: QuadMode) -> Result<usize> {
    match mode {
        QuadMode::AlgClosed => {
            let (field, g) = quadric.polar()?;
            Ok(linalg::rank(&field, &g).div_ceil(2))
        }
        QuadMode::RealDiagonal => {
            let coeffs = real_diagonal(quadric)?;
            let pos = coeffs.iter().filter(|c| c.is_positive()).count();
            let neg = coeffs.iter().filter(|c| c.is_negative()).count();
            Ok(pos.max(neg))
        }
        QuadMode::FiniteOdd => {
            let (field, g) = quadric.polar()?;
            if !field.is_finite() {
                return Err(Error::InfiniteField);
            }
            Ok(quadric.nvars() - max_totally_singular(&field, &g))
        }
    }
}

fn real_diagonal(quadric: &Quadric) -> Result<Vec<BigRational>> {
    match quadric {
        Quadric::Diagonal(c) => Ok(c.clone()),
        Quadric::Form(f) if f.field().is_rational() => {
            if f.degree() != 2 && !f.is_zero() {
                return Err(Error::NotQuadratic);
            }
            let mut out = vec![BigRational::from_integer(0.into()); f.nvars()];
            for (m, c) in f.terms() {
                let Some(i) = m.iter().position(|&e| e == 2) else {
                    return Err(Error::Unsupported("form is not diagonal".into()));
                };
                let Elem::Rat(c) = c else { unreachable!() };
                out[i] = c.clone();
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported("real mode needs rational diagonal coefficients".into())),
    }
}

fn bilinear(field: &FieldCtx, g: &Matrix, u: &[Elem], v: &[Elem]) -> Elem {
    let gv = g.mul_vec(field, v);
    u.iter().zip(&gv).fold(field.zero(), |acc, (a, b)| field.mul_add(&acc, a, b))
}

/// Largest dimension of a subspace on which the quadric vanishes, found by a
/// depth-first search over singular points in enumeration order. In odd
/// characteristic `q(v) = B(v, v) / 2`, so a subspace is totally singular iff
/// its basis is pairwise orthogonal and each basis vector is singular.
fn max_totally_singular(field: &FieldCtx, g: &Matrix) -> usize {
    let n = g.rows();
    let singular: Vec<Vec<Elem>> =
        projective_points(field, n).filter(|v| field.is_zero(&bilinear(field, g, v, v))).collect();
    // no totally singular subspace exceeds (n + dim radical) / 2
    let ceiling = (n + n - linalg::rank(field, g)) / 2;
    let mut best = 0;
    let mut chosen: Vec<Vec<Elem>> = Vec::new();
    dfs(field, g, &singular, 0, &mut chosen, &mut best, ceiling);
    best
}

fn dfs(
    field: &FieldCtx,
    g: &Matrix,
    points: &[Vec<Elem>],
    start: usize,
    chosen: &mut Vec<Vec<Elem>>,
    best: &mut usize,
    ceiling: usize,
) {
    *best = (*best).max(chosen.len());
    if *best >= ceiling {
        return;
    }
    for i in start..points.len() {
        if chosen.len() + (points.len() - i) <= *best {
            return;
        }
        let v = &points[i];
        if chosen.iter().any(|u| !field.is_zero(&bilinear(field, g, u, v))) {
            continue;
        }
        let mut rows = chosen.clone();
        rows.push(v.clone());
        if linalg::rank(field, &Matrix::from_rows(v.len(), rows)) <= chosen.len() {
            continue;
        }
        chosen.push(v.clone());
        dfs(field, g, points, i + 1, chosen, best, ceiling);
        chosen.pop();
        if *best >= ceiling {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FormTuple;
    use crate::search::{strength_exact, Budget, RankValue};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn sums_of_squares() {
        for n in 1..=8 {
            let q = Quadric::Diagonal(vec![rat(1); n]);
            assert_eq!(quad_strength(&q, QuadMode::RealDiagonal).unwrap(), n);
            assert_eq!(quad_strength(&q, QuadMode::AlgClosed).unwrap(), n.div_ceil(2));
        }
        let mixed = Quadric::Diagonal(vec![rat(1), rat(-2), rat(3), rat(0)]);
        assert_eq!(quad_strength(&mixed, QuadMode::RealDiagonal).unwrap(), 2);
        assert_eq!(quad_strength(&mixed, QuadMode::AlgClosed).unwrap(), 2);
    }

    #[test]
    fn hyperbolic_over_gf3() {
        let k = FieldCtx::parse("GF(3)").unwrap();
        let f = Form::from_terms(&k, 4, 2, [(vec![1, 1, 0, 0], k.one()), (vec![0, 0, 1, 1], k.one())]).unwrap();
        assert_eq!(quad_strength(&Quadric::Form(f), QuadMode::FiniteOdd).unwrap(), 2);
    }

    #[test]
    fn errors() {
        let k2 = FieldCtx::parse("GF(2)").unwrap();
        let f = Form::from_terms(&k2, 2, 2, [(vec![1, 1], k2.one())]).unwrap();
        assert_eq!(quad_strength(&Quadric::Form(f), QuadMode::FiniteOdd), Err(Error::CharTwoUnsupported));
        let k3 = FieldCtx::parse("GF(3)").unwrap();
        let cubic = Form::from_terms(&k3, 2, 3, [(vec![3, 0], k3.one())]).unwrap();
        assert_eq!(quad_strength(&Quadric::Form(cubic), QuadMode::AlgClosed), Err(Error::NotQuadratic));
    }

    #[test]
    fn finite_odd_agrees_with_search() {
        use crate::poly::monomials_of_degree;
        for spec in ["GF(3)", "GF(5)"] {
            let k = FieldCtx::parse(spec).unwrap();
            let q = k.order().unwrap() as u32;
            for n in 1..=3usize {
                let basis = monomials_of_degree(n, 2);
                let total = (q as u64).pow(basis.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let coeffs: Vec<Elem> = (0..basis.len())
                        .map(|_| {
                            let e = k.elem((c % q as u64) as u32);
                            c /= q as u64;
                            e
                        })
                        .collect();
                    let f = Form::from_vector(&k, n, 2, &basis, &coeffs);
                    let closed = quad_strength(&Quadric::Form(f.clone()), QuadMode::FiniteOdd).unwrap();
                    let cert = strength_exact(&FormTuple::single(f), Budget::default()).unwrap();
                    assert_eq!(cert.value, RankValue::Finite(closed), "{spec} code {code}");
                }
            }
        }
    }
}
