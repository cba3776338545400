//! Spaces of iterated partial derivatives and graded subalgebra membership.

mod split;

pub use split::{coeff_extract, coeff_extract_adapted, coeff_extract_ie, reconstruct, SlotBases, SlotSplit};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{self, Matrix};
use crate::poly::{monomials_of_degree, Form, FormTuple};
use crate::search::{strength_exact, Budget, RankValue};

/// The span of all partials `∂_{i_1} ⋯ ∂_{i_l} f` of orders `1 <= l < d`,
/// as a reduced echelon basis in each degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSpace {
    pub source: Form,
    /// Degree `d - 1` first, then `d - 2`, down to degree 1.
    pub basis: Vec<Form>,
    pub by_degree: BTreeMap<usize, Vec<Form>>,
}

impl DerivativeSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Computes `D(f)`. Partials are taken along multisets of directions only,
/// since they commute.
pub fn dspace(f: &Form) -> DerivativeSpace {
    let (n, d) = (f.nvars(), f.degree());
    let field = f.field();
    let mut basis = Vec::new();
    let mut by_degree = BTreeMap::new();
    // partials of the current order, keyed by the largest direction used
    let mut level: Vec<(usize, Form)> = if f.is_zero() { Vec::new() } else { alloc::vec![(0, f.clone())] };
    for order in 1..d {
        let mut next = Vec::new();
        for (last, g) in &level {
            for i in *last..n {
                let h = g.partial(i).expect("index in range");
                if !h.is_zero() {
                    next.push((i, h));
                }
            }
        }
        level = next;
        let deg = d - order;
        let monos = monomials_of_degree(n, deg);
        let rows: Vec<Vec<Elem>> = level.iter().map(|(_, g)| g.to_vector(&monos)).collect();
        if rows.is_empty() {
            continue;
        }
        let space = linalg::row_space(field, &Matrix::from_rows(monos.len(), rows));
        let forms: Vec<Form> =
            (0..space.rows()).map(|k| Form::from_vector(field, n, deg, &monos, space.row(k))).collect();
        basis.extend(forms.iter().cloned());
        by_degree.insert(deg, forms);
    }
    DerivativeSpace { source: f.clone(), basis, by_degree }
}

/// A product of generators (indices, nondecreasing) with its coefficient.
pub type ProductTerm = (Vec<usize>, Elem);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `f = sum coeff · prod gens[idx]`.
    Member(Vec<ProductTerm>),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

fn products(gens: &[Form], target: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if target == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..gens.len() {
        let k = gens[i].degree();
        if k <= target {
            cur.push(i);
            products(gens, target - k, i, cur, out);
            cur.pop();
        }
    }
}

/// Decides whether `f` lies in the degree-`d` piece of the algebra
/// generated by `gens`, spanned by products of generators whose degrees add
/// up to `d`.
pub fn subalgebra_member(f: &Form, gens: &[Form]) -> Result<Membership> {
    for g in gens {
        if g.field() != f.field() {
            return Err(Error::FieldMismatch);
        }
        if g.nvars() != f.nvars() {
            return Err(Error::VarMismatch(g.nvars(), f.nvars()));
        }
        if g.degree() == 0 {
            return Err(Error::Unsupported("generators must have positive degree".into()));
        }
    }
    if f.is_zero() {
        return Ok(Membership::Member(Vec::new()));
    }
    let field = f.field();
    let monos = monomials_of_degree(f.nvars(), f.degree());
    let mut combos = Vec::new();
    products(gens, f.degree(), 0, &mut Vec::new(), &mut combos);
    if combos.is_empty() {
        return Ok(Membership::NotMember);
    }
    let mut m = Matrix::zeros(field, monos.len(), combos.len());
    for (col, idx) in combos.iter().enumerate() {
        let mut p = gens[idx[0]].clone();
        for &i in &idx[1..] {
            p = p.mul(&gens[i])?;
        }
        for (row, v) in p.to_vector(&monos).into_iter().enumerate() {
            m.set(row, col, v);
        }
    }
    Ok(match linalg::solve(field, &m, &f.to_vector(&monos)) {
        Some(x) => Membership::Member(
            combos.into_iter().zip(x).filter(|(_, c)| !field.is_zero(c)).collect(),
        ),
        None => Membership::NotMember,
    })
}

/// Observations on how few derivative-space elements generate `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfReport {
    pub dspace_dim: usize,
    pub member: bool,
    /// A locally minimal generating subset of the `D(f)` basis (greedy).
    pub generators: Vec<Form>,
    pub strength: Option<RankValue>,
    /// The characteristic is positive and at most `d`.
    pub outside_hypotheses: bool,
}

/// Runs membership of `f` in the algebra generated by its derivative space,
/// then greedily drops generators while membership persists.
pub fn df_experiment(f: &Form, budget: Budget) -> Result<DfReport> {
    let ds = dspace(f);
    let mut gens = ds.basis.clone();
    let member = subalgebra_member(f, &gens)?.is_member();
    if member {
        let mut i = 0;
        while i < gens.len() {
            let mut trial = gens.clone();
            trial.remove(i);
            if subalgebra_member(f, &trial)?.is_member() {
                gens = trial;
            } else {
                i += 1;
            }
        }
    } else {
        gens.clear();
    }
    let strength = if f.field().is_finite() {
        strength_exact(&FormTuple::single(f.clone()), budget).ok().filter(|c| c.exhaustive).map(|c| c.value)
    } else {
        None
    };
    Ok(DfReport {
        dspace_dim: ds.dim(),
        member,
        generators: gens,
        strength,
        outside_hypotheses: !f.field().char_exceeds(f.degree()),
    })
}
