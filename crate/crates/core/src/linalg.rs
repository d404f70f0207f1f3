//! Dense exact linear algebra over a finite field.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gf::{Elem, FieldCtx, FieldError};

/// Matrix size (entries) above which row elimination runs on the thread pool.
const PAR_ELIMINATION: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A row-major matrix whose entries all belong to one field.
#[derive(Clone)]
pub struct Matrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ctx)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form: the nonzero rows and their pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    /// A particular solution and a basis (as rows) of the kernel of `A`.
    Feasible {
        particular: Vec<Elem>,
        kernel: Matrix,
    },
    /// A row `(0 ... 0 | c)` with `c != 0` from the reduced form of `[A | b]`.
    Infeasible { certificate: Vec<Elem> },
}

impl AffineSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AffineSolution::Feasible { .. })
    }
}

impl Matrix {
    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        Self {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Builds a matrix from rows, checking widths and element ranges.
    pub fn from_rows(
        ctx: &Arc<FieldCtx>,
        rows: Vec<Vec<Elem>>,
        cols: usize,
    ) -> Result<Self, LinalgError> {
        let q = ctx.order();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|e| e.index() >= q) {
                return Err(FieldError::OutOfRange {
                    index: u64::from(bad.index()),
                    q,
                }
                .into());
            }
        }
        Ok(Self::from_rows_unchecked(ctx, rows, cols))
    }

    pub(crate) fn from_rows_unchecked(
        ctx: &Arc<FieldCtx>,
        rows: Vec<Vec<Elem>>,
        cols: usize,
    ) -> Self {
        let n = rows.len();
        let data: Vec<Elem> = rows.into_iter().flatten().collect();
        debug_assert_eq!(data.len(), n * cols);
        Self {
            ctx: ctx.clone(),
            rows: n,
            cols,
            data,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.rows().map(<[Elem]>::to_vec).collect()
    }

    /// Rows as element indices, the form used in reports.
    pub fn to_index_rows(&self) -> Vec<Vec<u32>> {
        self.rows()
            .map(|r| r.iter().map(|e| e.index()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.ctx.ensure_same(&other.ctx)?;
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `G G^T`: entry `(i, j)` is the inner product of rows `i` and `j`.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(&self.ctx, self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v = self.ctx.dot(self.row(i), self.row(j));
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let rows = self
            .rows()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        Matrix::from_rows_unchecked(&self.ctx, rows, cols.len())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.ctx.ensure_same(&other.ctx)?;
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "cannot stack widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Canonical reduced row-echelon form. Zero rows are dropped.
    pub fn rref(&self) -> Rref {
        let f = &self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            let cols = m.cols;
            let pivot_row: Vec<(usize, Elem)> = m.data[r * cols + c..(r + 1) * cols]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, &v)| (c + j, v))
                .collect();
            let eliminate = |i: usize, row: &mut [Elem]| {
                let factor = row[c];
                if i == r || factor.is_zero() {
                    return;
                }
                let nf = f.neg(factor);
                for &(j, v) in &pivot_row {
                    row[j] = f.add(row[j], f.mul(nf, v));
                }
            };
            if m.data.len() >= PAR_ELIMINATION {
                m.data
                    .par_chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| eliminate(i, row));
            } else {
                m.data
                    .chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| eliminate(i, row));
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis rows of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref();
        let f = &self.ctx;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect();
        Matrix::from_rows_unchecked(f, rows, self.cols)
    }

    /// True iff both matrices have the same row space.
    pub fn row_space_equal(&self, other: &Matrix) -> Result<bool, LinalgError> {
        self.check_width(other)?;
        Ok(self.rref().matrix.data == other.rref().matrix.data)
    }

    /// True iff every row of `other` lies in the row space of `self`.
    pub fn row_space_contains(&self, other: &Matrix) -> Result<bool, LinalgError> {
        self.check_width(other)?;
        Ok(self.vstack(other)?.rank() == self.rank())
    }

    fn check_width(&self, other: &Matrix) -> Result<(), LinalgError> {
        self.ctx.ensure_same(&other.ctx)?;
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "column counts differ: {} vs {}",
                self.cols, other.cols
            )));
        }
        Ok(())
    }

    /// Solves `self * x = b`.
    pub fn solve_affine(&self, b: &[Elem]) -> Result<AffineSolution, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let rows = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b[r]);
                row
            })
            .collect();
        let aug = Matrix::from_rows_unchecked(&self.ctx, rows, self.cols + 1);
        let Rref { matrix: r, pivots } = aug.rref();
        if let Some(i) = pivots.iter().position(|&c| c == self.cols) {
            return Ok(AffineSolution::Infeasible {
                certificate: r.row(i).to_vec(),
            });
        }
        let mut particular = vec![Elem::ZERO; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            particular[pc] = r.get(i, self.cols);
        }
        Ok(AffineSolution::Feasible {
            particular,
            kernel: self.nullspace(),
        })
    }

    /// `x M` for a row vector `x`.
    pub fn combine_rows(&self, coeffs: &[Elem]) -> Vec<Elem> {
        let f = &self.ctx;
        let mut out = vec![Elem::ZERO; self.cols];
        for (r, &c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }

    /// `M x` for a column vector `x`.
    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        self.rows().map(|r| self.ctx.dot(r, x)).collect()
    }

    /// SHA-256 over the field spec, shape and entries, as hex.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        let spec = self.ctx.spec();
        h.update(spec.p.to_le_bytes());
        h.update(spec.m.to_le_bytes());
        for c in &spec.modulus {
            h.update(c.to_le_bytes());
        }
        h.update((self.rows as u64).to_le_bytes());
        h.update((self.cols as u64).to_le_bytes());
        for e in &self.data {
            h.update(e.index().to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Digest of the canonical reduced form, identical for equal row spaces.
    pub fn row_space_digest(&self) -> String {
        self.rref().matrix.digest()
    }
}
