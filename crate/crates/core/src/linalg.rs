//! Dense matrices over a small field F_q: echelon forms, rank, nullspace,
//! inverses and one-sided inverses.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gf::Fq;

/// Row-major dense matrix with entries given as F_q indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return domain("ragged matrix rows");
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_cols(cols: &[Vec<u8>]) -> Result<Matrix> {
        Ok(Matrix::from_rows(cols)?.transpose())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vec<u8>> = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        Matrix { rows: idx.len(), cols: self.cols, data: rows.concat() }
    }

    pub fn mul(&self, fq: &Fq, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return domain(format!("shape mismatch {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            let orow = &mut out.data[r * o.cols..(r + 1) * o.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for (x, &b) in orow.iter_mut().zip(o.row(k)) {
                    *x = fq.add(*x, fq.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, fq: &Fq, v: &[u8]) -> Result<Vec<u8>> {
        if self.cols != v.len() {
            return domain("vector length mismatch");
        }
        Ok((0..self.rows).map(|r| dot(fq, self.row(r), v)).collect())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self, fq: &Fq) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = fq.inv(self.get(r, c)).expect("pivot nonzero");
            for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
                *x = fq.mul(*x, inv);
            }
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
                for (x, &pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = fq.sub(*x, fq.mul(f, pv));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self, fq: &Fq) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place(fq);
        (m, p)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, fq: &Fq) -> usize {
        self.rref(fq).1.len()
    }

    /// Basis of {v : M v = 0}, one vector per free column, in column order.
    pub fn nullspace(&self, fq: &Fq) -> Vec<Vec<u8>> {
        let (m, pivots) = self.rref(fq);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = fq.neg(m.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self, fq: &Fq) -> Result<Matrix> {
        if self.rows != self.cols {
            return domain("inverse of a non-square matrix");
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref_in_place(fq);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_cols(&idx))
    }

    /// A left inverse L (L·M = I) of a full-column-rank matrix, built from the
    /// first pivot rows of Mᵀ.
    pub fn left_inverse(&self, fq: &Fq) -> Result<Matrix> {
        let (_, pivot_rows) = self.transpose().rref(fq);
        if pivot_rows.len() < self.cols {
            return domain("matrix does not have full column rank");
        }
        let sub = self.select_rows(&pivot_rows);
        let inv = sub.inverse(fq)?;
        let mut l = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.cols {
            for (j, &pr) in pivot_rows.iter().enumerate() {
                l.set(r, pr, inv.get(r, j));
            }
        }
        Ok(l)
    }

    /// Solves M x = b for square invertible M.
    pub fn solve(&self, fq: &Fq, b: &[u8]) -> Result<Vec<u8>> {
        self.inverse(fq)?.mul_vec(fq, b)
    }

    /// Any x with M x = b, or `None` when inconsistent.
    pub fn solve_any(&self, fq: &Fq, b: &[u8]) -> Result<Option<Vec<u8>>> {
        if b.len() != self.rows {
            return domain("right-hand side length mismatch");
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (r, &br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, br);
        }
        let pivots = aug.rref_in_place(fq);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u8; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

pub fn dot(fq: &Fq, a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| if x == 0 || y == 0 { acc } else { fq.add(acc, fq.mul(x, y)) })
}
