use alloc::format;
use alloc::vec::Vec;

use super::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A finite extension `L / K` with a fixed `K`-basis `z_j = alpha^j` of `L`,
/// where `alpha` is the power-basis generator of `L`.
///
/// Supported pairs are `K = L` (any field), `GF(p) ⊂ GF(p^e)` and
/// `GF(p^a) ⊂ GF(p^(ab))`. In the last case `K` is embedded by sending its
/// generator to the smallest root (in code order) of its modulus in `L`.
#[derive(Clone, Debug)]
pub struct Extension {
    base: FieldCtx,
    ext: FieldCtx,
    degree: usize,
    /// Image of the generator of `base` in `ext`.
    beta: Elem,
    /// Inverse of the GF(p)-coordinate matrix of `beta^k alpha^j`.
    solve: Option<Matrix>,
}

impl Extension {
    pub fn new(base: &FieldCtx, ext: &FieldCtx) -> Result<Self> {
        let not_ext = || Error::NotAnExtension { base: format!("{base}"), ext: format!("{ext}") };
        if base == ext {
            return Ok(Extension {
                base: base.clone(),
                ext: ext.clone(),
                degree: 1,
                beta: ext.generator(),
                solve: None,
            });
        }
        if !base.is_finite() || !ext.is_finite() || base.characteristic() != ext.characteristic() {
            return Err(not_ext());
        }
        let (a, n) = (base.degree() as usize, ext.degree() as usize);
        if n % a != 0 {
            return Err(not_ext());
        }
        let prime = FieldCtx::prime(base.characteristic())?;
        let beta = if a == 1 {
            ext.one()
        } else {
            let modulus = base.modulus().unwrap();
            ext.elements()
                .unwrap()
                .find(|x| {
                    let value = modulus
                        .iter()
                        .rev()
                        .fold(ext.zero(), |acc, &c| ext.add(&ext.mul(&acc, x), &ext.from_i64(c as i64)));
                    ext.is_zero(&value)
                })
                .ok_or_else(not_ext)?
        };
        let degree = n / a;
        let alpha = ext.generator();
        let mut columns: Vec<Vec<u32>> = Vec::with_capacity(n);
        let mut alpha_j = ext.one();
        for _ in 0..degree {
            let mut beta_k = ext.one();
            for _ in 0..a {
                columns.push(ext.coefficients(&ext.mul(&beta_k, &alpha_j)));
                beta_k = ext.mul(&beta_k, &beta);
            }
            alpha_j = ext.mul(&alpha_j, &alpha);
        }
        let mut m = Matrix::zeros(&prime, n, n);
        for (col, coeffs) in columns.iter().enumerate() {
            for (row, &c) in coeffs.iter().enumerate() {
                m.set(row, col, Elem::Fin(c));
            }
        }
        let inv = linalg::inverse(&prime, &m).ok_or_else(not_ext)?;
        Ok(Extension { base: base.clone(), ext: ext.clone(), degree, beta, solve: Some(inv) })
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn ext(&self) -> &FieldCtx {
        &self.ext
    }

    /// `[L : K]`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The basis `z_j` as elements of `L`.
    pub fn basis(&self) -> Vec<Elem> {
        let alpha = self.ext.generator();
        let mut out = Vec::with_capacity(self.degree);
        let mut z = self.ext.one();
        for _ in 0..self.degree {
            out.push(z.clone());
            z = self.ext.mul(&z, &alpha);
        }
        out
    }

    /// Maps an element of `K` into `L`.
    pub fn embed(&self, x: &Elem) -> Elem {
        if self.solve.is_none() {
            return x.clone();
        }
        let digits = self.base.coefficients(x);
        let mut acc = self.ext.zero();
        let mut beta_k = self.ext.one();
        for d in digits {
            acc = self.ext.add(&acc, &self.ext.mul(&self.ext.from_i64(d as i64), &beta_k));
            beta_k = self.ext.mul(&beta_k, &self.beta);
        }
        acc
    }

    /// Coordinates of `x ∈ L` in the basis `z_1, ..., z_e`, as elements of `K`.
    pub fn coords(&self, x: &Elem) -> Vec<Elem> {
        let Some(inv) = &self.solve else {
            return alloc::vec![x.clone()];
        };
        let prime = FieldCtx::prime(self.base.characteristic()).expect("characteristic is prime");
        let digits: Vec<Elem> = self.ext.coefficients(x).into_iter().map(Elem::Fin).collect();
        let y = inv.mul_vec(&prime, &digits);
        let a = self.base.degree() as usize;
        y.chunks(a)
            .map(|chunk| {
                let c: Vec<u32> = chunk
                    .iter()
                    .map(|e| match e {
                        Elem::Fin(v) => *v,
                        Elem::Rat(_) => unreachable!(),
                    })
                    .collect();
                self.base.from_coefficients(&c)
            })
            .collect()
    }

    /// `sum_j embed(c_j) z_j`.
    pub fn recombine(&self, coords: &[Elem]) -> Elem {
        self.basis()
            .iter()
            .zip(coords)
            .fold(self.ext.zero(), |acc, (z, c)| self.ext.add(&acc, &self.ext.mul(&self.embed(c), z)))
    }

    /// Returns `x` as an element of `K` when it lies in the image of `K`.
    pub fn restrict(&self, x: &Elem) -> Option<Elem> {
        let c = self.coords(x);
        c[1..].iter().all(|v| self.base.is_zero(v)).then(|| c[0].clone())
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

    #[test]
    fn coords_examples() {
        let e = Extension::new(&f("GF(2)"), &f("GF(4)")).unwrap();
        let l = e.ext().clone();
        assert_eq!(e.coords(&l.zero()), vec![Elem::Fin(0), Elem::Fin(0)]);
        let w1 = l.add(&l.generator(), &l.one());
        assert_eq!(e.coords(&w1), vec![Elem::Fin(1), Elem::Fin(1)]);
        let e9 = Extension::new(&f("GF(3)"), &f("GF(9)")).unwrap();
        assert_eq!(e9.coords(&e9.ext().one()), vec![Elem::Fin(1), Elem::Fin(0)]);
    }

    #[test]
    fn not_an_extension() {
        assert!(matches!(Extension::new(&f("GF(4)"), &f("GF(8)")), Err(Error::NotAnExtension { .. })));
        assert!(matches!(Extension::new(&f("GF(3)"), &f("GF(4)")), Err(Error::NotAnExtension { .. })));
        assert!(matches!(Extension::new(&f("Q"), &f("GF(4)")), Err(Error::NotAnExtension { .. })));
    }

    #[test]
    fn tower_embedding_is_a_field_homomorphism() {
        let e = Extension::new(&f("GF(4)"), &f("GF(16)")).unwrap();
        assert_eq!(e.degree(), 2);
        let (k, l) = (e.base().clone(), e.ext().clone());
        for a in k.elements().unwrap() {
            for b in k.elements().unwrap() {
                assert_eq!(e.embed(&k.mul(&a, &b)), l.mul(&e.embed(&a), &e.embed(&b)));
                assert_eq!(e.embed(&k.add(&a, &b)), l.add(&e.embed(&a), &e.embed(&b)));
            }
        }
    }

    #[test]
    fn coords_are_linear_and_recombine() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (k, l) in [("GF(2)", "GF(8)"), ("GF(3)", "GF(9)"), ("GF(4)", "GF(64)"), ("GF(9)", "GF(81)"), ("GF(5)", "GF(5)")] {
            let e = Extension::new(&f(k), &f(l)).unwrap();
            let (kf, lf) = (e.base().clone(), e.ext().clone());
            for _ in 0..1000 {
                let x = lf.random(&mut rng);
                let y = lf.random(&mut rng);
                let cx = e.coords(&x);
                let cy = e.coords(&y);
                let cs = e.coords(&lf.add(&x, &y));
                for i in 0..cx.len() {
                    assert_eq!(cs[i], kf.add(&cx[i], &cy[i]));
                }
                assert_eq!(e.recombine(&cx), x);
            }
        }
    }
}
