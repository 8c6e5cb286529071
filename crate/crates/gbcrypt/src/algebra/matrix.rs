//! Dense row-major matrices over F_q with exact reduced row echelon form.

use std::fmt;

use super::field::{FieldElement, PrimeField};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Output of [`DenseMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: DenseMatrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows, strictly increasing.
    pub pivots: Vec<usize>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(field: PrimeField, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParams("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(DenseMatrix { field, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from signed integer entries reduced into the field.
    pub fn from_i64(field: PrimeField, rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<FieldElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i128(v as i128)).collect())
            .collect();
        Self::from_rows(field, &rows)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [FieldElement] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::RingMismatch);
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.mul_add(out.get(i, j), a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M·v`.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::RingMismatch);
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(f.zero(), |acc, (&a, &b)| f.mul_add(acc, a, b)))
            .collect())
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &DenseMatrix, b: &DenseMatrix) -> Self {
        let mut m = Self::zeros(a.field, a.rows + b.rows, a.cols + b.cols);
        for r in 0..a.rows {
            for c in 0..a.cols {
                m.set(r, c, a.get(r, c));
            }
        }
        for r in 0..b.rows {
            for c in 0..b.cols {
                m.set(a.rows + r, a.cols + c, b.get(r, c));
            }
        }
        m
    }

    /// The unique reduced row echelon form, with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { rank: pivots.len(), reduced: m, pivots }
    }

    /// Gauss–Jordan elimination in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..cols {
                    self.data.swap(p * cols + c, row * cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            let (before, rest) = self.data.split_at_mut(row * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |other: &mut [FieldElement]| {
                let factor = other[col];
                if factor.is_zero() {
                    return;
                }
                let neg = f.neg(factor);
                for c in col..cols {
                    if !pivot_row[c].is_zero() {
                        other[c] = f.mul_add(other[c], neg, pivot_row[c]);
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, self.field.one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Self::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn determinant(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::InvalidParams("determinant of a non-square matrix".into()));
        }
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(f.zero());
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(p * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for r in col + 1..n {
                let factor = f.neg(f.mul(m.get(r, col), inv));
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.mul_add(m.get(r, c), factor, m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(x·I − M)` via reduction to upper
    /// Hessenberg form followed by the standard column recurrence.
    pub fn charpoly(&self) -> Result<UniPoly> {
        if self.rows != self.cols {
            return Err(Error::InvalidParams("characteristic polynomial of a non-square matrix".into()));
        }
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&r| !h.get(r, j).is_zero()) else {
                continue;
            };
            if p != j + 1 {
                for c in 0..n {
                    h.data.swap(p * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + p, r * n + j + 1);
                }
            }
            let inv = f.inv(h.get(j + 1, j))?;
            for k in j + 2..n {
                let u = f.mul(h.get(k, j), inv);
                if u.is_zero() {
                    continue;
                }
                let neg = f.neg(u);
                for c in 0..n {
                    let v = f.mul_add(h.get(k, c), neg, h.get(j + 1, c));
                    h.set(k, c, v);
                }
                for r in 0..n {
                    let v = f.mul_add(h.get(r, j + 1), u, h.get(r, k));
                    h.set(r, j + 1, v);
                }
            }
        }
        let x = UniPoly::x(f);
        let mut p: Vec<UniPoly> = vec![UniPoly::one(f)];
        for m in 1..=n {
            let mut next = x.sub(&UniPoly::constant(f, h.get(m - 1, m - 1))).mul(&p[m - 1]);
            let mut t = f.one();
            for i in (1..m).rev() {
                t = f.mul(t, h.get(i, i - 1));
                let c = f.mul(h.get(i - 1, m - 1), t);
                if !c.is_zero() {
                    next = next.sub(&p[i - 1].scale(c));
                }
            }
            p.push(next);
        }
        Ok(p.pop().expect("nonempty"))
    }

    /// Reduces every entry into another field (entries are read as integers).
    pub fn reduce_into(&self, field: PrimeField) -> DenseMatrix {
        DenseMatrix {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| field.elem(e.value())).collect(),
        }
    }
}
