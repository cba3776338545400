//! Dense exact linear algebra: row reduction, rank, kernels, solving.
//!
//! Pivoting always takes the first nonzero entry at or below the current
//! row, so every result is a deterministic function of the input.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Elem, FieldCtx};

/// Row-major dense matrix. The field is supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Elem>>) -> Self {
        let n = rows.len();
        let data: Vec<Elem> = rows.into_iter().flat_map(|r| {
            assert_eq!(r.len(), cols, "ragged rows");
            r
        }).collect();
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Elem> {
        self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shapes");
        let mut out = Matrix::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ctx.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ctx.mul_add(out.get(i, j), a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(ctx.zero(), |acc, (a, b)| ctx.mul_add(&acc, a, b))
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hcat row counts");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols, data }
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// In-place reduction of the first `limit` columns; returns pivot columns.
fn reduce(ctx: &FieldCtx, m: &mut Matrix, limit: usize) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !ctx.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = ctx.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = ctx.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if ctx.is_zero(&factor) {
                continue;
            }
            let neg = ctx.neg(&factor);
            for j in c..cols {
                let v = ctx.mul_add(m.get(i, j), &neg, m.get(r, j));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref(ctx: &FieldCtx, m: &Matrix) -> Echelon {
    let mut work = m.clone();
    let limit = work.cols;
    let pivots = reduce(ctx, &mut work, limit);
    Echelon { rref: work, pivots }
}

pub fn rank(ctx: &FieldCtx, m: &Matrix) -> usize {
    rref(ctx, m).rank()
}

/// Nonzero rows of the RREF: a canonical basis of the row space.
pub fn row_space(ctx: &FieldCtx, m: &Matrix) -> Matrix {
    let e = rref(ctx, m);
    let r = e.rank();
    Matrix::new(r, m.cols, e.rref.data[..r * m.cols].to_vec())
}

/// Basis of `{x : m x = 0}`, one vector per free column `f` with a 1 at `f`.
/// Vectors come out ordered by their free column.
pub fn kernel(ctx: &FieldCtx, m: &Matrix) -> Vec<Vec<Elem>> {
    let e = rref(ctx, m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![ctx.zero(); m.cols];
            v[f] = ctx.one();
            for (i, &p) in e.pivots.iter().enumerate() {
                v[p] = ctx.neg(e.rref.get(i, f));
            }
            v
        })
        .collect()
}

/// A solution of `a x = b` with all free variables set to zero, or `None`
/// if the system is inconsistent.
pub fn solve(ctx: &FieldCtx, a: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(a.rows, b.len(), "right-hand side length");
    let cols = a.cols + 1;
    let mut data = Vec::with_capacity(a.rows * cols);
    for (i, bi) in b.iter().enumerate() {
        data.extend_from_slice(a.row(i));
        data.push(bi.clone());
    }
    let mut aug = Matrix { rows: a.rows, cols, data };
    let pivots = reduce(ctx, &mut aug, a.cols);
    let r = pivots.len();
    if (r..a.rows).any(|i| !ctx.is_zero(aug.get(i, a.cols))) {
        return None;
    }
    let mut x = vec![ctx.zero(); a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug.get(i, a.cols).clone();
    }
    Some(x)
}

pub fn inverse(ctx: &FieldCtx, m: &Matrix) -> Option<Matrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = m.hcat(&Matrix::identity(ctx, n));
    let pivots = reduce(ctx, &mut aug, n);
    if pivots.len() < n {
        return None;
    }
    let mut out = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(out)
}
