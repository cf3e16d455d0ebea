//! Dense matrices over F_q with reduced row-echelon form and nullspace.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// A rectangular matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "matrix rows have unequal lengths".into(),
            ));
        }
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            data.extend(r);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds a matrix of integer reps, validating them against the field.
    pub fn from_reps(fs: &FieldSpec, rows: &[Vec<u32>]) -> Result<Matrix> {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| fs.element(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(converted)
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
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self.get(a, j);
            self.set(a, j, self.get(b, j));
            self.set(b, j, t);
        }
    }

    /// Checks that every entry is a valid rep of `fs`.
    pub fn check_field(&self, fs: &FieldSpec) -> Result<()> {
        if self.data.iter().any(|e| e.rep() >= fs.q()) {
            return Err(Error::FieldMismatch(format!(
                "matrix entry out of range for F_{}",
                fs.q()
            )));
        }
        Ok(())
    }

    /// Keeps the first `k` rows.
    pub fn truncate_rows(&mut self, k: usize) {
        self.rows = k.min(self.rows);
        self.data.truncate(self.rows * self.cols);
    }

    /// Row i <- row i + c * row j of `other`.
    pub fn add_scaled_row(
        &mut self,
        fs: &FieldSpec,
        i: usize,
        other: &[FieldElement],
        c: FieldElement,
    ) {
        for (j, &o) in other.iter().enumerate().take(self.cols) {
            let v = fs.add(self.get(i, j), fs.mul(c, o));
            self.set(i, j, v);
        }
    }
}

/// Reduced row-echelon form: pivots are 1, pivot columns are elsewhere zero,
/// zero rows sink to the bottom. Returns the RREF, the rank, and the pivot
/// column indices.
pub fn rref(m: &Matrix, fs: &FieldSpec) -> Result<(Matrix, usize, Vec<usize>)> {
    m.check_field(fs)?;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(pr) = (r..a.rows()).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(r, pr);
        let inv = fs.inv(a.get(r, col))?;
        for j in col..a.cols() {
            a.set(r, j, fs.mul(inv, a.get(r, j)));
        }
        let pivot_row: Vec<FieldElement> = a.row(r).to_vec();
        for i in 0..a.rows() {
            if i == r || a.get(i, col).is_zero() {
                continue;
            }
            let c = fs.neg(a.get(i, col));
            a.add_scaled_row(fs, i, &pivot_row, c);
        }
        pivots.push(col);
        r += 1;
    }
    Ok((a, r, pivots))
}

/// A canonical (RREF) basis of the right kernel {x : M x^T = 0}.
pub fn nullspace(m: &Matrix, fs: &FieldSpec) -> Result<Matrix> {
    let (red, rank, pivots) = rref(m, fs)?;
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let mut basis = Matrix::zeros(free.len(), n);
    for (bi, &fj) in free.iter().enumerate() {
        basis.set(bi, fj, FieldElement::ONE);
        for (pi, &pj) in pivots.iter().enumerate().take(rank) {
            basis.set(bi, pj, fs.neg(red.get(pi, fj)));
        }
    }
    let (canon, k, _) = rref(&basis, fs)?;
    let mut canon = canon;
    canon.truncate_rows(k);
    Ok(canon)
}
