//! Dense matrices over a [`Scalar`] ring, with exact row reduction over ℚ.
//!
//! Every choice made by the reduction (pivots, kernel bases, complements) uses
//! the leftmost-pivot rule, so results are deterministic.

use std::fmt;


use super::poly::Poly;
use super::rat::{fmt_rat, Rat};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Scalar> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
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
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub(b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, r: &Rat) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(R::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// Rational entries, when no entry depends on a coordinate.
    pub fn to_rat(&self) -> Result<Matrix<Rat>> {
        let data = self
            .data
            .iter()
            .map(|x| x.as_rat().ok_or(Error::PolynomialEntries))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row mismatch".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }
}

impl Matrix<Poly> {
    pub fn eval(&self, point: &[Rat]) -> Result<Matrix<Rat>> {
        let data = self
            .data
            .iter()
            .map(|p| p.eval(point))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

/// Reduced row echelon form with the pivot column of every nonzero row.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix<Rat>,
    pub pivots: Vec<usize>,
}

impl Matrix<Rat> {
    pub fn rref(&self) -> Rref {
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
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = Rat::one() / m.get(r, c);
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Kernel basis as the columns of the returned matrix, one vector per
    /// free column of the echelon form.
    pub fn kernel(&self) -> Matrix<Rat> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, Rat::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, -matrix.get(row, f).clone());
            }
        }
        k
    }

    /// Columns forming a basis of the column space (leftmost pivots).
    pub fn column_basis(&self) -> Vec<usize> {
        self.rref().pivots
    }

    pub fn inverse(&self) -> Result<Matrix<Rat>> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible(format!("{}x{} matrix", self.rows, self.cols)));
        }
        let aug = self.hstack(&Matrix::identity(self.rows))?;
        let Rref { matrix, pivots } = aug.rref();
        if self.rows > 0 && (pivots.len() < self.rows || pivots[self.rows - 1] >= self.cols) {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        Ok(matrix.select_cols(&(self.cols..2 * self.cols).collect::<Vec<_>>()))
    }

    /// Right inverse of a surjective matrix, supported on the leftmost pivot
    /// columns. `None` when the matrix is not surjective.
    pub fn right_inverse(&self) -> Option<Matrix<Rat>> {
        let piv = self.column_basis();
        if piv.len() != self.rows {
            return None;
        }
        let inv = self.select_cols(&piv).inverse().ok()?;
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (r, &p) in piv.iter().enumerate() {
            for j in 0..self.rows {
                out.set(p, j, inv.get(r, j).clone());
            }
        }
        Some(out)
    }

    /// Left inverse of an injective matrix whose kernel is spanned by the
    /// standard vectors outside the leftmost pivot rows. `None` when the
    /// matrix is not injective.
    pub fn left_inverse(&self) -> Option<Matrix<Rat>> {
        self.transpose().right_inverse().map(|m| m.transpose())
    }

    /// Solves `self · x = b` for every column of `b`; `None` if inconsistent.
    pub fn solve(&self, b: &Matrix<Rat>) -> Option<Matrix<Rat>> {
        let aug = self.hstack(b).ok()?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, matrix.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn fmt_rat_matrix(m: &Matrix<Rat>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
}
