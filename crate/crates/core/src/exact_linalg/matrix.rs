use super::ring::{Ring, Scalar};
use crate::{Error, Result};
use num::{One, Zero};
use std::fmt;

/// A dense matrix with exact entries over a fixed [`Ring`], stored row-major.
/// Entries are kept in the ring's canonical form. Zero-by-anything shapes are
/// legal and show up constantly as empty spans.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix({}x{} over {})", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one();
        }
        m
    }

    /// Build from row-major scalar entries, normalizing into the ring.
    pub fn from_entries(ring: Ring, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let mut canon = Vec::with_capacity(entries.len());
        for e in entries {
            match ring.normalize(&e) {
                Some(v) => canon.push(v),
                None => return Err(Error::NotInRing(ring, e.to_string())),
            }
        }
        Ok(ExactMatrix { ring, rows, cols, entries: canon })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(ring: Ring, rows: usize, cols: usize, entries: &[i64]) -> Self {
        let scalars = entries.iter().map(|&v| Scalar::from(num::BigInt::from(v))).collect();
        Self::from_entries(ring, rows, cols, scalars).expect("integer entries lie in every ring")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = self.ring.normalize(&v).expect("value lies in ring");
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }
                })
            })
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(ring: Ring, rows: usize, cols: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape(format!(
                    "column {} has length {}, expected {}",
                    j,
                    col.len(),
                    rows
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.entries[i * other.cols + j] = self.ring.add(&cur, &self.ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Scalar::zero();
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    acc = self.ring.add(&acc, &self.ring.mul(a, &v[j]));
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("matrix addition shape mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Self::from_entries(self.ring, self.rows, self.cols, entries)
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|a| self.ring.neg(a)).collect();
        Self::from_entries(self.ring, self.rows, self.cols, entries).expect("shape preserved")
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let entries = self.entries.iter().map(|a| self.ring.mul(a, c)).collect();
        Self::from_entries(self.ring, self.rows, self.cols, entries).expect("shape preserved")
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat row mismatch".into()));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        let mut m = Self::zeros(self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.entries[i * m.cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                m.entries[i * m.cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        Ok(m)
    }

    /// The submatrix of the given rows (in order), all columns.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zeros(self.ring, rows.len(), self.cols);
        for (i2, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.entries[i2 * self.cols + j] = self.get(i, j).clone();
            }
        }
        m
    }

    /// The submatrix of the given columns (in order), all rows.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.ring, self.rows, cols.len());
        for (j2, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m.entries[i * cols.len() + j2] = self.get(i, j).clone();
            }
        }
        m
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[i] += c * row[j]`
    pub(crate) fn add_row_multiple(&mut self, i: usize, j: usize, c: &Scalar) {
        for k in 0..self.cols {
            let v = self.ring.add(self.get(i, k), &self.ring.mul(c, self.get(j, k)));
            self.entries[i * self.cols + k] = v;
        }
    }

    /// `col[i] += c * col[j]`
    pub(crate) fn add_col_multiple(&mut self, i: usize, j: usize, c: &Scalar) {
        for k in 0..self.rows {
            let v = self.ring.add(self.get(k, i), &self.ring.mul(c, self.get(k, j)));
            self.entries[k * self.cols + i] = v;
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Scalar) {
        for k in 0..self.cols {
            let v = self.ring.mul(self.get(i, k), c);
            self.entries[i * self.cols + k] = v;
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &Scalar) {
        for k in 0..self.rows {
            let v = self.ring.mul(self.get(k, j), c);
            self.entries[k * self.cols + j] = v;
        }
    }

    /// Interpret the matrix over another ring (entry-wise normalization).
    pub fn cast(&self, ring: Ring) -> Result<Self> {
        Self::from_entries(ring, self.rows, self.cols, self.entries.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_identity() {
        let a = ExactMatrix::from_i64(Ring::Integers, 2, 2, &[1, 2, 3, 4]);
        let id = ExactMatrix::identity(Ring::Integers, 2);
        assert_eq!(a.mul(&id).unwrap(), a);
        let b = ExactMatrix::from_i64(Ring::Integers, 2, 1, &[1, 1]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, ExactMatrix::from_i64(Ring::Integers, 2, 1, &[3, 7]));
    }

    #[test]
    fn prime_field_entries_reduce() {
        let m = ExactMatrix::from_i64(Ring::PrimeField(3), 1, 3, &[4, -1, 9]);
        assert_eq!(m, ExactMatrix::from_i64(Ring::PrimeField(3), 1, 3, &[1, 2, 0]));
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = ExactMatrix::zeros(Ring::Rationals, 3, 0);
        let b = ExactMatrix::zeros(Ring::Rationals, 0, 2);
        let ab = a.mul(&b).unwrap();
        assert_eq!((ab.rows(), ab.cols()), (3, 2));
        assert!(ab.is_zero());
    }
}
