//! Enumeration of subspaces of `F_q^n` and the nested search driver shared
//! by the partition-rank and strength searches.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Elem, FieldCtx};

/// All `k`-dimensional subspaces of `F_q^n`, each yielded once as the rows
/// of its reduced echelon basis. Order: pivot sets lexicographically, then
/// free entries as an odometer over element codes (last position fastest).
pub struct Subspaces {
    n: usize,
    k: usize,
    q: u32,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
    done: bool,
}

impl Subspaces {
    pub fn new(field: &FieldCtx, n: usize, k: usize) -> Self {
        let q = field.order().expect("subspace enumeration needs a finite field") as u32;
        let mut s = Subspaces { n, k, q, pivots: (0..k).collect(), free: Vec::new(), digits: Vec::new(), done: k > n };
        if !s.done {
            s.reset_free();
        }
        s
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (row, &p) in self.pivots.iter().enumerate() {
            for col in p + 1..self.n {
                if !self.pivots.contains(&col) {
                    self.free.push((row, col));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn advance_pivots(&mut self) -> bool {
        let (n, k) = (self.n, self.k);
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Subspaces {
    type Item = Vec<Vec<Elem>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut basis = vec![vec![Elem::Fin(0); self.n]; self.k];
        for (row, &p) in self.pivots.iter().enumerate() {
            basis[row][p] = Elem::Fin(1);
        }
        for (&(row, col), &d) in self.free.iter().zip(&self.digits) {
            basis[row][col] = Elem::Fin(d);
        }
        // advance
        let mut pos = self.digits.len();
        let mut carried = true;
        while pos > 0 {
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < self.q {
                carried = false;
                break;
            }
            self.digits[pos] = 0;
        }
        if carried {
            if self.advance_pivots() {
                self.reset_free();
            } else {
                self.done = true;
            }
        }
        Some(basis)
    }
}

/// Nonzero vectors up to scalars: first nonzero coordinate is 1.
pub fn projective_points(field: &FieldCtx, n: usize) -> impl Iterator<Item = Vec<Elem>> {
    Subspaces::new(field, n, 1).map(|mut b| b.pop().unwrap())
}

/// Counts linear solves against a cap.
#[derive(Debug, Clone)]
pub struct SolveCounter {
    pub used: u64,
    pub cap: u64,
}

impl SolveCounter {
    pub fn new(cap: u64) -> Self {
        SolveCounter { used: 0, cap }
    }

    /// Charges one solve; false once the cap is exhausted.
    pub fn charge(&mut self) -> bool {
        if self.used >= self.cap {
            return false;
        }
        self.used += 1;
        true
    }
}

pub enum Outcome<W> {
    Found(W),
    NotFound,
    BudgetHit,
}

/// One family of factor spaces: the `a`-factors of every term in the class
/// live in a space of dimension `dim`; at most `max_terms` terms can be
/// useful in the class.
#[derive(Clone, Debug)]
pub struct FactorClass {
    pub dim: usize,
    pub max_terms: usize,
}

/// Callback receiving one basis list per factor class.
pub type Leaf<'a, W> = dyn FnMut(&[Vec<Vec<Elem>>]) -> Option<W> + 'a;

/// For every distribution of `r` terms over the classes and every choice of
/// an `k_c`-dimensional subspace in each class, calls `leaf` with the chosen
/// bases (one list per class). Stops at the first `Some`.
pub fn search_terms<W>(
    field: &FieldCtx,
    classes: &[FactorClass],
    r: usize,
    counter: &mut SolveCounter,
    leaf: &mut Leaf<'_, W>,
) -> Outcome<W> {
    let mut counts = vec![0usize; classes.len()];
    distribute(field, classes, r, 0, &mut counts, counter, leaf)
}

fn distribute<W>(
    field: &FieldCtx,
    classes: &[FactorClass],
    left: usize,
    ci: usize,
    counts: &mut Vec<usize>,
    counter: &mut SolveCounter,
    leaf: &mut Leaf<'_, W>,
) -> Outcome<W> {
    if ci == classes.len() {
        if left > 0 {
            return Outcome::NotFound;
        }
        let mut chosen = Vec::with_capacity(classes.len());
        return choose(field, classes, counts, 0, &mut chosen, counter, leaf);
    }
    let cap = classes[ci].max_terms.min(classes[ci].dim).min(left);
    for k in (0..=cap).rev() {
        counts[ci] = k;
        match distribute(field, classes, left - k, ci + 1, counts, counter, leaf) {
            Outcome::NotFound => {}
            other => return other,
        }
    }
    counts[ci] = 0;
    Outcome::NotFound
}

fn choose<W>(
    field: &FieldCtx,
    classes: &[FactorClass],
    counts: &[usize],
    ci: usize,
    chosen: &mut Vec<Vec<Vec<Elem>>>,
    counter: &mut SolveCounter,
    leaf: &mut Leaf<'_, W>,
) -> Outcome<W> {
    if ci == classes.len() {
        if !counter.charge() {
            return Outcome::BudgetHit;
        }
        return match leaf(chosen) {
            Some(w) => Outcome::Found(w),
            None => Outcome::NotFound,
        };
    }
    for basis in Subspaces::new(field, classes[ci].dim, counts[ci]) {
        chosen.push(basis);
        let out = choose(field, classes, counts, ci + 1, chosen, counter, leaf);
        chosen.pop();
        match out {
            Outcome::NotFound => {}
            other => return other,
        }
    }
    Outcome::NotFound
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Gaussian binomial coefficient, counted independently.
    fn gaussian(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for (spec, q) in [("GF(2)", 2u64), ("GF(3)", 3), ("GF(4)", 4)] {
            let f = FieldCtx::parse(spec).unwrap();
            for n in 0..5usize {
                for k in 0..=n + 1 {
                    let count = Subspaces::new(&f, n, k).count() as u64;
                    let expect = if k > n { 0 } else { gaussian(n as u32, k as u32, q) };
                    assert_eq!(count, expect, "{spec} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn subspaces_are_distinct() {
        let f = FieldCtx::parse("GF(3)").unwrap();
        let all: Vec<_> = Subspaces::new(&f, 4, 2).collect();
        for i in 0..all.len() {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
        assert_eq!(projective_points(&f, 2).count(), 4);
    }
}
