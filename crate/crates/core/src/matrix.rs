//! Dense matrices over a ring `R`, stored by columns.

use crate::error::{Error, Result};
use crate::groebner::FreeVector;
use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: Vec<FreeVector>,
}

impl Matrix {
    pub fn from_columns(rows: usize, cols: Vec<FreeVector>) -> Result<Matrix> {
        for c in &cols {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
        }
        Ok(Matrix { rows, cols })
    }

    /// Row-major construction; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::RaggedMatrix { row: i, expected: ncols, found: r.len() });
            }
        }
        let cols = (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
        Ok(Matrix { rows: nrows, cols })
    }

    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols: vec![vec![Polynomial::zero(); rows]; cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.cols[i][i] = ring.one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.cols[c][r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Polynomial) {
        self.cols[c][r] = v;
    }

    pub fn columns(&self) -> &[FreeVector] {
        &self.cols
    }

    pub fn column(&self, c: usize) -> &FreeVector {
        &self.cols[c]
    }

    pub fn into_columns(self) -> Vec<FreeVector> {
        self.cols
    }

    pub fn row(&self, r: usize) -> Vec<Polynomial> {
        self.cols.iter().map(|c| c[r].clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|p| p.is_zero()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.ncols(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                m.cols[i][j] = e.clone();
            }
        }
        m
    }

    /// `self · v`.
    pub fn apply(&self, ring: &Ring, v: &[Polynomial]) -> FreeVector {
        debug_assert_eq!(v.len(), self.ncols());
        let mut out = vec![Polynomial::zero(); self.rows];
        for (c, a) in self.cols.iter().zip(v) {
            if a.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(c) {
                if !e.is_zero() {
                    *o = ring.add(o, &ring.mul_ambient(e, a));
                }
            }
        }
        out.iter().map(|p| ring.normal_form(p)).collect()
    }

    /// `self · other`.
    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Result<Matrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), found: other.nrows() });
        }
        let cols = other.cols.iter().map(|c| self.apply(ring, c)).collect();
        Ok(Matrix { rows: self.rows, cols })
    }

    /// `self ⊗ I_a`: entry `(i, j)` becomes the block `self[i][j]·I_a`.
    pub fn kron_identity(&self, a: usize) -> Matrix {
        let mut m = Matrix::zero(self.rows * a, self.ncols() * a);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for t in 0..a {
                    m.cols[j * a + t][i * a + t] = e.clone();
                }
            }
        }
        m
    }

    /// Block diagonal with `copies` copies of `self`.
    pub fn block_diagonal(&self, copies: usize) -> Matrix {
        let mut m = Matrix::zero(self.rows * copies, self.ncols() * copies);
        for b in 0..copies {
            for (j, col) in self.cols.iter().enumerate() {
                for (i, e) in col.iter().enumerate() {
                    m.cols[b * self.ncols() + j][b * self.rows + i] = e.clone();
                }
            }
        }
        m
    }

    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.rows + other.rows, self.ncols() + other.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                m.cols[j][i] = e.clone();
            }
        }
        for (j, col) in other.cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                m.cols[self.ncols() + j][self.rows + i] = e.clone();
            }
        }
        m
    }

    /// Columns of `self` followed by the columns of `other`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(Matrix { rows: self.rows, cols })
    }

    /// Keep the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols = self.cols.iter().map(|c| rows.iter().map(|r| c[*r].clone()).collect()).collect();
        Matrix { rows: rows.len(), cols }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix { rows: self.rows, cols: cols.iter().map(|c| self.cols[*c].clone()).collect() }
    }

    /// Reduce every entry to normal form in `ring`.
    pub fn reduced(&self, ring: &Ring) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.iter().map(|p| ring.normal_form(p)).collect()).collect(),
        }
    }

    /// Carry every entry into `target` (same variables or extra trailing ones).
    pub fn transferred(&self, from: &Ring, target: &Ring) -> Matrix {
        let map = |p: &Polynomial| {
            if target.nvars() == from.nvars() {
                from.transfer(p, target)
            } else {
                from.extend_element(p, target)
            }
        };
        Matrix { rows: self.rows, cols: self.cols.iter().map(|c| c.iter().map(map).collect()).collect() }
    }

    /// Aligned text rendering, one row per line.
    pub fn render(&self, ring: &Ring) -> String {
        let cells: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(|p| ring.format(p)).collect()).collect();
        let widths: Vec<usize> =
            (0..self.ncols()).map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for r in &cells {
            let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            out.push_str("[ ");
            out.push_str(&line.join("  "));
            out.push_str(" ]\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::monomial::MonomialOrder;

    #[test]
    fn ragged_rows_are_rejected() {
        let r = Ring::polynomial(&["x"], Field::Prime(7), MonomialOrder::Grevlex);
        let err = Matrix::from_rows(vec![vec![r.one(), r.one()], vec![r.one()]]).unwrap_err();
        assert_eq!(err, Error::RaggedMatrix { row: 1, expected: 2, found: 1 });
    }

    #[test]
    fn transpose_and_product() {
        let r = Ring::polynomial(&["x", "y"], Field::Prime(7), MonomialOrder::Grevlex);
        let a = Matrix::from_rows(vec![vec![r.var(0), r.var(1), r.one()]]).unwrap();
        let t = a.transpose();
        assert_eq!((t.nrows(), t.ncols()), (3, 1));
        let p = a.mul(&r, &t).unwrap();
        assert_eq!(r.format(p.get(0, 0)), "x^2 + y^2 + 1");
        assert_eq!(Matrix::zero(0, 3).transpose().ncols(), 0);
        assert_eq!(Matrix::zero(2, 0).transpose().nrows(), 0);
    }

    #[test]
    fn kron_identity_blocks() {
        let r = Ring::polynomial(&["x"], Field::Prime(7), MonomialOrder::Grevlex);
        let a = Matrix::from_rows(vec![vec![r.var(0), r.one()]]).unwrap();
        let k = a.kron_identity(2);
        assert_eq!((k.nrows(), k.ncols()), (2, 4));
        assert_eq!(k.get(1, 1), &r.var(0));
        assert_eq!(k.get(0, 2), &r.one());
        assert!(k.get(1, 2).is_zero());
    }
}
