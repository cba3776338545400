use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::enumerate::{search_terms, FactorClass, Outcome, SolveCounter};
use super::{collective_min, Budget, RankCertificate, RankValue, SingleResult, StrengthTerm, Terms};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials_of_degree, Form, FormTuple};

/// Exact (collective) strength over a finite field.
pub fn strength_exact(fs: &FormTuple, budget: Budget) -> Result<RankCertificate> {
    if !fs.field().is_finite() {
        return Err(Error::InfiniteField);
    }
    let cert = collective_min(
        fs.field(),
        fs.len(),
        |c, below, counter| single(&fs.combine(c), below, counter),
        budget,
    );
    if let Some(w) = &cert.witness {
        w.verify_forms(fs).expect("strength witness reassembles");
    }
    Ok(cert)
}

/// Products `x^α · x^β` for `α` of degree `da` and `β` of degree `d - da`,
/// as row indices into the degree-`d` monomial basis.
struct SplitLayout {
    da: usize,
    a_basis: Vec<Vec<u32>>,
    b_basis: Vec<Vec<u32>>,
    product_row: Vec<Vec<usize>>,
}

impl SplitLayout {
    fn new(n: usize, d: usize, da: usize, row_of: &BTreeMap<Vec<u32>, usize>) -> Self {
        let a_basis = monomials_of_degree(n, da);
        let b_basis = monomials_of_degree(n, d - da);
        let product_row = a_basis
            .iter()
            .map(|a| {
                b_basis
                    .iter()
                    .map(|b| {
                        let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        row_of[&m]
                    })
                    .collect()
            })
            .collect();
        SplitLayout { da, a_basis, b_basis, product_row }
    }
}

/// `f = sum_i x_i g_i`, grouping each monomial under its first variable.
fn first_variable_split(f: &Form) -> Vec<StrengthTerm> {
    let field = f.field();
    let (n, d) = (f.nvars(), f.degree());
    let mut groups: BTreeMap<usize, Vec<(Vec<u32>, Elem)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let i = m.iter().position(|&e| e > 0).expect("positive degree");
        let mut rest = m.to_vec();
        rest[i] -= 1;
        groups.entry(i).or_default().push((rest, c.clone()));
    }
    groups
        .into_iter()
        .map(|(i, g)| StrengthTerm {
            a: Form::variable(field, n, i),
            b: Form::from_terms(field, n, d - 1, g).expect("well-formed cofactor"),
        })
        .collect()
}

fn single(f: &Form, below: Option<usize>, counter: &mut SolveCounter) -> SingleResult {
    if f.is_zero() {
        return SingleResult {
            value: RankValue::Finite(0),
            terms: Some(Terms::Strength(Vec::new())),
            exhaustive: true,
            budget_hit: false,
        };
    }
    let (n, d) = (f.nvars(), f.degree());
    if d < 2 {
        return SingleResult { value: RankValue::Infinite, terms: None, exhaustive: true, budget_hit: false };
    }
    let field = f.field().clone();
    let ub_terms = first_variable_split(f);
    let ub = ub_terms.len();
    let limit = below.map_or(ub, |b| b.min(ub));

    let rows = monomials_of_degree(n, d);
    let row_of: BTreeMap<Vec<u32>, usize> = rows.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let target = f.to_vector(&rows);
    let layouts: Vec<SplitLayout> = (1..=d / 2).map(|da| SplitLayout::new(n, d, da, &row_of)).collect();
    let classes: Vec<FactorClass> = layouts
        .iter()
        .map(|l| FactorClass { dim: l.a_basis.len(), max_terms: l.a_basis.len().min(l.b_basis.len()) })
        .collect();

    for r in 1..limit {
        let mut leaf = |chosen: &[Vec<Vec<Elem>>]| solve_leaf(&field, n, d, &layouts, chosen, &target);
        match search_terms(&field, &classes, r, counter, &mut leaf) {
            Outcome::Found(terms) => {
                return SingleResult {
                    value: RankValue::Finite(r),
                    terms: Some(Terms::Strength(terms)),
                    exhaustive: true,
                    budget_hit: false,
                }
            }
            Outcome::NotFound => {}
            Outcome::BudgetHit => {
                return SingleResult {
                    value: RankValue::Finite(ub),
                    terms: Some(Terms::Strength(ub_terms)),
                    exhaustive: false,
                    budget_hit: true,
                }
            }
        }
    }
    SingleResult { value: RankValue::Finite(ub), terms: Some(Terms::Strength(ub_terms)), exhaustive: true, budget_hit: false }
}

fn solve_leaf(
    field: &FieldCtx,
    n: usize,
    d: usize,
    layouts: &[SplitLayout],
    chosen: &[Vec<Vec<Elem>>],
    target: &[Elem],
) -> Option<Vec<StrengthTerm>> {
    let unknowns: usize = layouts.iter().zip(chosen).map(|(l, a)| a.len() * l.b_basis.len()).sum();
    let mut m = Matrix::zeros(field, target.len(), unknowns);
    let mut col0 = 0;
    for (l, basis) in layouts.iter().zip(chosen) {
        let bd = l.b_basis.len();
        for a in basis {
            for (i, ai) in a.iter().enumerate() {
                if field.is_zero(ai) {
                    continue;
                }
                for (j, &row) in l.product_row[i].iter().enumerate() {
                    let cur = m.get(row, col0 + j).clone();
                    m.set(row, col0 + j, field.add(&cur, ai));
                }
            }
            col0 += bd;
        }
    }
    let x = linalg::solve(field, &m, target)?;
    let mut terms = Vec::new();
    let mut col0 = 0;
    for (l, basis) in layouts.iter().zip(chosen) {
        let bd = l.b_basis.len();
        for a in basis {
            terms.push(StrengthTerm {
                a: Form::from_vector(field, n, l.da, &l.a_basis, a),
                b: Form::from_vector(field, n, d - l.da, &l.b_basis, &x[col0..col0 + bd]),
            });
            col0 += bd;
        }
    }
    Some(terms)
}
