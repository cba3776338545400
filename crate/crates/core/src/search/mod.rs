//! Exact strength and partition rank over finite fields.
//!
//! Both searches try `r = 1, 2, ...` below a cheap upper bound. For a fixed
//! `r` they enumerate the `a`-factors as subspaces (terms sharing a slot
//! subset or degree only matter through the span of their `a`-factors) and
//! decide the existence of matching `b`-factors with a single linear solve,
//! since the target is linear in the `b`'s once the `a`'s are fixed.

mod enumerate;
mod partition;
mod quadric;
mod strength;

pub use enumerate::{projective_points, SolveCounter, Subspaces};
pub use partition::{easy_cap, prk_exact};
pub use quadric::{quad_strength, QuadMode, Quadric};
pub use strength::strength_exact;

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::poly::{Form, FormTuple};
use crate::tensor::{Tensor, TensorTuple};

/// Caps on the work a search may do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of linear systems solved across the whole search.
    pub max_solves: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_solves: 2_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RankValue {
    Finite(usize),
    Infinite,
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Finite(r) => write!(f, "{r}"),
            RankValue::Infinite => f.write_str("INF"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrengthTerm {
    pub a: Form,
    pub b: Form,
}

/// `a` lives on `slots` (ascending, 0-based), `b` on the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTerm {
    pub slots: Vec<usize>,
    pub a: Tensor,
    pub b: Tensor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    Strength,
    Partition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terms {
    Strength(Vec<StrengthTerm>),
    Partition(Vec<PartitionTerm>),
}

/// A decomposition `sum_k c_k x_k = sum_i a_i * b_i` of a combination of a
/// tuple. For a single object `coeffs == [1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Terms,
    pub coeffs: Vec<Elem>,
}

impl Decomposition {
    pub fn kind(&self) -> DecompositionKind {
        match self.terms {
            Terms::Strength(_) => DecompositionKind::Strength,
            Terms::Partition(_) => DecompositionKind::Partition,
        }
    }

    pub fn len(&self) -> usize {
        match &self.terms {
            Terms::Strength(t) => t.len(),
            Terms::Partition(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `sum_i a_i ⊗ b_i` as an order-`shape.len()` tensor.
    pub fn assemble_tensor(&self, field: &FieldCtx, shape: &[usize]) -> Result<Tensor> {
        let Terms::Partition(terms) = &self.terms else {
            return Err(Error::NotADecomposition);
        };
        let d = shape.len();
        let mut acc = Tensor::zeros(field, shape);
        for t in terms {
            if t.slots.is_empty() || t.slots.len() >= d {
                return Err(Error::BadSubset);
            }
            let p = Tensor::outer_split(&t.a, &t.b, &t.slots, d)?;
            acc = acc.add(&p)?;
        }
        Ok(acc)
    }

    /// `sum_i a_i b_i` as a degree-`degree` form.
    pub fn assemble_form(&self, field: &FieldCtx, nvars: usize, degree: usize) -> Result<Form> {
        let Terms::Strength(terms) = &self.terms else {
            return Err(Error::NotADecomposition);
        };
        let mut acc = Form::zero(field, nvars, degree);
        for t in terms {
            if t.a.degree() == 0 || t.b.degree() == 0 || t.a.degree() + t.b.degree() != degree {
                return Err(Error::NotADecomposition);
            }
            acc = acc.add(&t.a.mul(&t.b)?)?;
        }
        Ok(acc)
    }

    fn check_coeffs(&self, field: &FieldCtx, m: usize) -> Result<()> {
        if self.coeffs.len() != m || self.coeffs.iter().all(|c| field.is_zero(c)) {
            return Err(Error::NotADecomposition);
        }
        if self.coeffs.iter().any(|c| !field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Checks that the terms reassemble to `sum_k c_k t_k` exactly.
    pub fn verify_tensors(&self, ts: &TensorTuple) -> Result<()> {
        self.check_coeffs(ts.field(), ts.len())?;
        let lhs = ts.combine(&self.coeffs);
        let rhs = self.assemble_tensor(ts.field(), ts.shape())?;
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::NotADecomposition)
        }
    }

    /// Checks that the terms reassemble to `sum_k c_k f_k` exactly.
    pub fn verify_forms(&self, fs: &FormTuple) -> Result<()> {
        self.check_coeffs(fs.field(), fs.len())?;
        let lhs = fs.combine(&self.coeffs);
        let rhs = self.assemble_form(fs.field(), fs.nvars(), fs.degree())?;
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::NotADecomposition)
        }
    }
}

/// Outcome of an exact rank search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub value: RankValue,
    pub witness: Option<Decomposition>,
    /// Every smaller value was ruled out by complete search.
    pub exhaustive: bool,
    pub budget_hit: bool,
}

/// Projective points of `K^m` in enumeration order (all of `K^1 \ 0` up to
/// scale is just `[1]`).
pub(crate) fn combinations(field: &FieldCtx, m: usize) -> Vec<Vec<Elem>> {
    projective_points(field, m).collect()
}

/// Single-object search result before collective bookkeeping.
pub(crate) struct SingleResult {
    pub value: RankValue,
    pub terms: Option<Terms>,
    pub exhaustive: bool,
    pub budget_hit: bool,
}

/// Minimises a single-object search over all projective combinations.
pub(crate) fn collective_min(
    field: &FieldCtx,
    m: usize,
    mut single: impl FnMut(&[Elem], Option<usize>, &mut SolveCounter) -> SingleResult,
    budget: Budget,
) -> RankCertificate {
    let mut counter = SolveCounter::new(budget.max_solves);
    let mut best: Option<(SingleResult, Vec<Elem>)> = None;
    let mut exhaustive = true;
    let mut budget_hit = false;
    for c in combinations(field, m) {
        let below = match &best {
            Some((b, _)) => match b.value {
                RankValue::Finite(v) => Some(v),
                RankValue::Infinite => None,
            },
            None => None,
        };
        if below == Some(0) {
            break;
        }
        let res = single(&c, below, &mut counter);
        exhaustive &= res.exhaustive;
        budget_hit |= res.budget_hit;
        let better = match &best {
            None => true,
            Some((b, _)) => res.value < b.value,
        };
        if better {
            best = Some((res, c));
        }
    }
    let (res, c) = best.expect("at least one combination");
    let witness = match (res.terms, res.value) {
        (Some(terms), RankValue::Finite(v)) if v > 0 || m > 1 => Some(Decomposition { terms, coeffs: c }),
        _ => None,
    };
    RankCertificate { value: res.value, witness, exhaustive, budget_hit }
}
