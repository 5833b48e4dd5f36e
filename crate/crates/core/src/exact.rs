//! Sparse matrices over `Surd`, for exact products of irrep matrices.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, Surd};

/// Row-major sparse matrix with exact entries; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Surd>>,
}

impl SurdMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SurdMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SurdMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Surd::from_int(1));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Surd {
        self.data[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Surd) {
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn set_scalar(&mut self, i: usize, j: usize, v: &Scalar) -> Result<()> {
        self.set(i, j, Surd::from_scalar(v).ok_or(Error::Overflow)?);
        Ok(())
    }

    /// Entry as `sign*sqrt(q)` when it has that form.
    pub fn scalar(&self, i: usize, j: usize) -> Option<Scalar> {
        self.get(i, j).as_scalar()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Surd)> {
        self.data[i].iter().map(|(j, v)| (*j, v))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn mul(&self, other: &SurdMatrix) -> Result<SurdMatrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = SurdMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc: BTreeMap<usize, Surd> = BTreeMap::new();
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k] {
                    let t = a.checked_mul(b).ok_or(Error::Overflow)?;
                    let e = acc.entry(*j).or_default();
                    *e = e.checked_add(&t).ok_or(Error::Overflow)?;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    fn zip(&self, other: &SurdMatrix, neg: bool) -> Result<SurdMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Mismatch("matrix shapes differ".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, b) in &other.data[i] {
                let b = if neg { b.neg() } else { b.clone() };
                let v = out.get(i, *j).checked_add(&b).ok_or(Error::Overflow)?;
                out.set(i, *j, v);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &SurdMatrix) -> Result<SurdMatrix> {
        self.zip(other, false)
    }

    pub fn sub(&self, other: &SurdMatrix) -> Result<SurdMatrix> {
        self.zip(other, true)
    }

    pub fn scale(&self, q: &Rational) -> Result<SurdMatrix> {
        let mut out = SurdMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in &self.data[i] {
                out.set(i, *j, v.checked_scale(q).ok_or(Error::Overflow)?);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SurdMatrix {
        let mut out = SurdMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (j, v) in &self.data[i] {
                out.data[*j].insert(i, v.clone());
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in &self.data[i] {
                m[(i, *j)] = v.to_f64();
            }
        }
        m
    }

    /// Largest entry magnitude, in floating point.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().flat_map(|r| r.values()).map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Nonzero off-diagonal entries?
    pub fn is_diagonal(&self) -> bool {
        self.data.iter().enumerate().all(|(i, r)| r.keys().all(|&j| j == i))
    }
}

impl fmt::Display for SurdMatrix {
    /// One row per line, entries separated by spaces; `sign*sqrt(q)` when
    /// possible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let v = self.get(i, j);
                    match v.as_scalar() {
                        Some(s) => s.to_string(),
                        None => v.to_string(),
                    }
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_squares_to_one() {
        let h = Scalar::sqrt(Rational::new(3, 4));
        let mut m = SurdMatrix::zeros(2, 2);
        m.set_scalar(0, 0, &Scalar::sqrt(Rational::new(1, 4))).unwrap();
        m.set_scalar(0, 1, &h).unwrap();
        m.set_scalar(1, 0, &h).unwrap();
        m.set_scalar(1, 1, &Scalar::signed_sqrt(-1, Rational::new(1, 4))).unwrap();
        assert_eq!(m.mul(&m).unwrap(), SurdMatrix::identity(2));
        assert_eq!(m.transpose(), m);
        assert!(m.sub(&m).unwrap().is_zero());
    }
}
