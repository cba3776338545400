//! Sampling bounded-rank loci and interpolating equations that vanish on them.

mod bounds;

pub use bounds::{
    bits, degree_bound, degree_bound_n, min_n, n_bound_holds, prk_bound, prk_bound_cubical, DegreeBound,
};

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Matrix};
use crate::poly::{binomial, monomials_of_degree, Form, FormTuple};
use crate::tensor::{complement, Tensor, TensorTuple};

/// Which parameterization is sampled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocusKind {
    /// `sum_i a_i ⊗ b_i` with `a_i` on the slots `partitions[i]`.
    Tensor { shape: Vec<usize>, partitions: Vec<Vec<usize>> },
    /// `sum_i a_i b_i` with `deg a_i = splits[i]`.
    Form { nvars: usize, degree: usize, splits: Vec<usize> },
}

/// The image of `(g, t_1, ..., t_{m-1}, a, b) ↦ g · (t_1, ..., t_{m-1}, sum a_i * b_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusSpec {
    pub field: FieldCtx,
    pub m: usize,
    pub kind: LocusKind,
}

impl LocusSpec {
    pub fn tensor(field: &FieldCtx, m: usize, shape: Vec<usize>, partitions: Vec<Vec<usize>>) -> Result<Self> {
        let d = shape.len();
        for p in &partitions {
            let proper = !p.is_empty() && p.len() < d && p.windows(2).all(|w| w[0] < w[1]) && p.iter().all(|&j| j < d);
            if !proper {
                return Err(Error::BadSubset);
            }
        }
        Self::new(field, m, LocusKind::Tensor { shape, partitions })
    }

    pub fn form(field: &FieldCtx, m: usize, nvars: usize, degree: usize, splits: Vec<usize>) -> Result<Self> {
        if splits.iter().any(|&s| s == 0 || s >= degree) {
            return Err(Error::Unsupported("degree split outside [1, d-1]".into()));
        }
        Self::new(field, m, LocusKind::Form { nvars, degree, splits })
    }

    fn new(field: &FieldCtx, m: usize, kind: LocusKind) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::InfiniteField);
        }
        if m == 0 {
            return Err(Error::Unsupported("empty tuple".into()));
        }
        Ok(LocusSpec { field: field.clone(), m, kind })
    }

    /// Number of terms `r`.
    pub fn r(&self) -> usize {
        match &self.kind {
            LocusKind::Tensor { partitions, .. } => partitions.len(),
            LocusKind::Form { splits, .. } => splits.len(),
        }
    }

    /// Coordinates per tuple member.
    fn member_dim(&self) -> usize {
        match &self.kind {
            LocusKind::Tensor { shape, .. } => shape.iter().product(),
            LocusKind::Form { nvars, degree, .. } => monomials_of_degree(*nvars, *degree).len(),
        }
    }

    /// Number of ambient coordinates, `m` times the member dimension.
    pub fn dim(&self) -> usize {
        self.m * self.member_dim()
    }
}

/// A point of the locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sample {
    Tensors(TensorTuple),
    Forms(FormTuple),
}

impl Sample {
    /// Coordinates: members in order, each row-major (tensors) or in the
    /// graded monomial order (forms).
    pub fn coordinates(&self) -> Vec<Elem> {
        match self {
            Sample::Tensors(ts) => ts.tensors().iter().flat_map(|t| t.data().iter().cloned()).collect(),
            Sample::Forms(fs) => {
                let basis = monomials_of_degree(fs.nvars(), fs.degree());
                fs.forms().iter().flat_map(|f| f.to_vector(&basis)).collect()
            }
        }
    }
}

fn random_invertible(field: &FieldCtx, m: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let g = Matrix::new(m, m, (0..m * m).map(|_| field.random(rng)).collect());
        if linalg::rank(field, &g) == m {
            return g;
        }
    }
}

/// Draws one point of the locus.
pub fn sample_with(spec: &LocusSpec, rng: &mut ChaCha8Rng) -> Sample {
    let field = &spec.field;
    let g = random_invertible(field, spec.m, rng);
    match &spec.kind {
        LocusKind::Tensor { shape, partitions } => {
            let d = shape.len();
            let mut members: Vec<Tensor> = (1..spec.m).map(|_| Tensor::random(field, shape, rng)).collect();
            let mut low = Tensor::zeros(field, shape);
            for slots in partitions {
                let a = Tensor::random(field, &sub_shape(shape, slots), rng);
                let b = Tensor::random(field, &sub_shape(shape, &complement(slots, d)), rng);
                low = low.add(&Tensor::outer_split(&a, &b, slots, d).unwrap()).unwrap();
            }
            members.push(low);
            let out = (0..spec.m)
                .map(|k| {
                    members.iter().enumerate().fold(Tensor::zeros(field, shape), |acc, (l, t)| {
                        acc.add(&t.scale(g.get(k, l))).unwrap()
                    })
                })
                .collect();
            Sample::Tensors(TensorTuple::new(out).unwrap())
        }
        LocusKind::Form { nvars, degree, splits } => {
            let (n, d) = (*nvars, *degree);
            let mut members: Vec<Form> = (1..spec.m).map(|_| Form::random(field, n, d, rng)).collect();
            let mut low = Form::zero(field, n, d);
            for &s in splits {
                let a = Form::random(field, n, s, rng);
                let b = Form::random(field, n, d - s, rng);
                low = low.add(&a.mul(&b).unwrap()).unwrap();
            }
            members.push(low);
            let out = (0..spec.m)
                .map(|k| {
                    members.iter().enumerate().fold(Form::zero(field, n, d), |acc, (l, f)| {
                        acc.add(&f.scale(g.get(k, l))).unwrap()
                    })
                })
                .collect();
            Sample::Forms(FormTuple::new(out).unwrap())
        }
    }
}

fn sub_shape(shape: &[usize], slots: &[usize]) -> Vec<usize> {
    slots.iter().map(|&j| shape[j]).collect()
}

/// One seeded point of the locus.
pub fn sample_image(spec: &LocusSpec, seed: u64) -> Sample {
    sample_with(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Limits and sample counts for [`mine_equation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MineParams {
    pub degree_cap: usize,
    /// Extra samples beyond the monomial count, and the number of fresh
    /// verification samples.
    pub margin: usize,
    pub seed: u64,
    /// Largest admissible number of monomials of degree `<= degree_cap`.
    pub max_monomials: usize,
}

impl MineParams {
    pub fn new(degree_cap: usize, seed: u64) -> Self {
        MineParams { degree_cap, margin: 16, seed, max_monomials: 1500 }
    }
}

/// A homogeneous polynomial in the locus coordinates vanishing on every
/// sample drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinedEquation {
    pub polynomial: Form,
    pub degree_cap: usize,
    pub samples_used: usize,
    pub verification_samples: usize,
    pub seed: u64,
    /// Reduced echelon basis of all degree-`polynomial.degree()` equations
    /// vanishing on the samples; `polynomial` is its last element.
    pub kernel: Vec<Form>,
}

impl MinedEquation {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }
}

fn eval_monomials(field: &FieldCtx, point: &[Elem], basis: &[Vec<u32>], max_exp: usize) -> Vec<Elem> {
    let powers: Vec<Vec<Elem>> = point
        .iter()
        .map(|x| {
            let mut p = vec![field.one()];
            for _ in 0..max_exp {
                let next = field.mul(p.last().unwrap(), x);
                p.push(next);
            }
            p
        })
        .collect();
    basis
        .iter()
        .map(|m| {
            m.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(field.one(), |acc, (i, &e)| field.mul(&acc, &powers[i][e as usize]))
        })
        .collect()
}

/// Interpolates an equation of the locus of degree at most `degree_cap`.
///
/// Draws `N = #monomials + margin` samples, where the monomials are those
/// of degree `<= degree_cap` in `spec.dim()` variables. The locus is a cone,
/// so its ideal is homogeneous; degrees are tried in increasing order and
/// the first nonzero space of homogeneous equations vanishing on all samples
/// wins. From its reduced echelon basis (columns in decreasing monomial
/// order) the vector with the smallest leading monomial is returned, after
/// checking it on `margin` fresh samples. `Ok(None)` means no equation.
pub fn mine_equation(spec: &LocusSpec, params: MineParams) -> Result<Option<MinedEquation>> {
    let field = &spec.field;
    let nv = spec.dim();
    let count = binomial((nv + params.degree_cap) as u64, params.degree_cap as u64);
    if count > params.max_monomials as u128 {
        return Err(Error::CapExceeded(count.min(usize::MAX as u128) as usize));
    }
    let n_samples = count as usize + params.margin;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let points: Vec<Vec<Elem>> = (0..n_samples).map(|_| sample_with(spec, &mut rng).coordinates()).collect();

    for degree in 1..=params.degree_cap {
        let mut basis = monomials_of_degree(nv, degree);
        basis.reverse();
        let rows: Vec<Vec<Elem>> = points.iter().map(|p| eval_monomials(field, p, &basis, degree)).collect();
        let kernel = linalg::kernel(field, &Matrix::from_rows(basis.len(), rows));
        if kernel.is_empty() {
            continue;
        }
        let reduced = linalg::row_space(field, &Matrix::from_rows(basis.len(), kernel));
        let kernel: Vec<Form> =
            (0..reduced.rows()).map(|i| Form::from_vector(field, nv, degree, &basis, reduced.row(i))).collect();
        let polynomial = kernel.last().unwrap().clone();
        for _ in 0..params.margin {
            let p = sample_with(spec, &mut rng).coordinates();
            if !field.is_zero(&polynomial.eval(&p)?) {
                return Err(Error::VerificationFailed);
            }
        }
        return Ok(Some(MinedEquation {
            polynomial,
            degree_cap: params.degree_cap,
            samples_used: n_samples,
            verification_samples: params.margin,
            seed: params.seed,
            kernel,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{prk_exact, Budget, RankValue};

    fn f(s: &str) -> FieldCtx {
        FieldCtx::parse(s).unwrap()
    }

    fn matrices(field: &FieldCtx, rows: usize, cols: usize) -> LocusSpec {
        LocusSpec::tensor(field, 1, vec![rows, cols], vec![vec![0]]).unwrap()
    }

    #[test]
    fn samples_have_small_rank() {
        let k = f("GF(3)");
        let spec = matrices(&k, 3, 4);
        for seed in 0..20 {
            let Sample::Tensors(ts) = sample_image(&spec, seed) else { panic!() };
            assert!(linalg::rank(&k, &ts.tensors()[0].flatten(&[0]).unwrap()) <= 1);
        }
        let zero = LocusSpec::tensor(&k, 1, vec![2, 2, 2], vec![]).unwrap();
        let Sample::Tensors(ts) = sample_image(&zero, 1) else { panic!() };
        assert!(ts.tensors()[0].is_zero());
        let cube = LocusSpec::tensor(&k, 1, vec![2, 2, 2], vec![vec![1]]).unwrap();
        for seed in 0..20 {
            let Sample::Tensors(ts) = sample_image(&cube, seed) else { panic!() };
            let cert = prk_exact(&ts, Budget::default()).unwrap();
            assert!(cert.value <= RankValue::Finite(1));
        }
    }

    #[test]
    fn determinant() {
        let k = f("GF(101)");
        let spec = matrices(&k, 2, 2);
        let eq = mine_equation(&spec, MineParams::new(2, 7)).unwrap().unwrap();
        assert_eq!(eq.kernel_dim(), 1);
        // coordinates x11, x12, x21, x22
        let det = Form::from_terms(&k, 4, 2, [(vec![1, 0, 0, 1], k.one()), (vec![0, 1, 1, 0], k.from_i64(-1))]).unwrap();
        let (m, c) = eq.polynomial.terms().next().unwrap();
        let scale = k.div(c, &det.coeff(m)).unwrap();
        assert_eq!(eq.polynomial, det.scale(&scale));
        assert_eq!(mine_equation(&spec, MineParams::new(1, 7)).unwrap(), None);
    }

    #[test]
    fn two_by_three_minors() {
        let k = f("GF(101)");
        let eq = mine_equation(&matrices(&k, 2, 3), MineParams::new(2, 3)).unwrap().unwrap();
        assert!(eq.kernel_dim() >= 3);
        assert_eq!(eq.polynomial.degree(), 2);
    }

    #[test]
    fn vanishes_on_fresh_samples() {
        let k = f("GF(101)");
        let spec = matrices(&k, 2, 2);
        let eq = mine_equation(&spec, MineParams::new(2, 11)).unwrap().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(999);
        for _ in 0..1000 {
            let p = sample_with(&spec, &mut rng).coordinates();
            assert!(k.is_zero(&eq.polynomial.eval(&p).unwrap()));
        }
    }

    #[test]
    fn exhaustive_soundness_over_gf2() {
        let k = f("GF(2)");
        let eq = mine_equation(&matrices(&k, 2, 2), MineParams::new(2, 5)).unwrap().unwrap();
        for code in 0u32..16 {
            let data: Vec<Elem> = (0..4).map(|i| Elem::Fin(code >> i & 1)).collect();
            let t = Tensor::from_data(&k, &[2, 2], data.clone()).unwrap();
            if linalg::rank(&k, &t.flatten(&[0]).unwrap()) <= 1 {
                assert!(k.is_zero(&eq.polynomial.eval(&data).unwrap()));
            }
        }
    }

    #[test]
    fn form_locus_and_caps() {
        let k = f("GF(7)");
        // every binary quadric factors over the closure: no equation
        let binary = LocusSpec::form(&k, 1, 2, 2, vec![1]).unwrap();
        assert_eq!(mine_equation(&binary, MineParams::new(2, 1)).unwrap(), None);
        // ternary products of linear forms have singular Gram matrix
        let ternary = LocusSpec::form(&k, 1, 3, 2, vec![1]).unwrap();
        let eq = mine_equation(&ternary, MineParams::new(3, 1)).unwrap().unwrap();
        assert_eq!((eq.polynomial.degree(), eq.kernel_dim()), (3, 1));
        let big = LocusSpec::tensor(&k, 1, vec![3, 3, 3], vec![vec![0]]).unwrap();
        assert!(matches!(mine_equation(&big, MineParams::new(4, 1)), Err(Error::CapExceeded(_))));
        assert_eq!(LocusSpec::form(&k, 1, 2, 2, vec![2]), Err(Error::Unsupported("degree split outside [1, d-1]".into())));
        assert_eq!(LocusSpec::tensor(&k, 1, vec![2, 2], vec![vec![0, 1]]), Err(Error::BadSubset));
    }

    #[test]
    fn collective_samples() {
        let k = f("GF(5)");
        let spec = LocusSpec::tensor(&k, 2, vec![2, 2], vec![vec![0]]).unwrap();
        assert_eq!(spec.dim(), 8);
        for seed in 0..10 {
            let Sample::Tensors(ts) = sample_image(&spec, seed) else { panic!() };
            let cert = prk_exact(&ts, Budget::default()).unwrap();
            assert!(cert.value <= RankValue::Finite(1));
        }
    }
}
