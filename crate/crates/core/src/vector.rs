//! Fixed-capacity real vectors.
//!
//! All ambient, domain and parameter spaces used here have dimension at most
//! [`MAX_DIM`], so vectors live on the stack and are `Copy`.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math;

/// Largest supported dimension for any vector space in the crate.
pub const MAX_DIM: usize = 6;

#[derive(Clone, Copy, PartialEq)]
pub struct RealVec {
    entries: [f64; MAX_DIM],
    dim: usize,
}

impl RealVec {
    /// Builds a vector from a slice, rejecting empty, oversized or
    /// non-finite input.
    pub fn new(entries: &[f64]) -> Result<Self> {
        if entries.is_empty() || entries.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(entries.len()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::from_slice(entries))
    }

    /// Unchecked construction for internal use; panics on oversized input.
    pub fn from_slice(entries: &[f64]) -> Self {
        assert!(entries.len() <= MAX_DIM, "dimension above MAX_DIM");
        let mut out = Self::zeros(entries.len());
        out.entries[..entries.len()].copy_from_slice(entries);
        out
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension above MAX_DIM");
        Self {
            entries: [0.0; MAX_DIM],
            dim,
        }
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zeros(dim);
        e.entries[i] = 1.0;
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries[..self.dim]
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.entries[..self.dim]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|v| v.is_finite())
    }

    /// `self + t * other`.
    pub fn axpy(&self, t: f64, other: &Self) -> Self {
        let mut out = *self;
        for (o, b) in out.as_mut_slice().iter_mut().zip(other.as_slice()) {
            *o += t * b;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim,
            })
        }
    }
}

impl core::fmt::Debug for RealVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Index<usize> for RealVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for RealVec {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.as_mut_slice()[i]
    }
}

impl Add for RealVec {
    type Output = RealVec;
    fn add(self, rhs: RealVec) -> RealVec {
        self.axpy(1.0, &rhs)
    }
}

impl Sub for RealVec {
    type Output = RealVec;
    fn sub(self, rhs: RealVec) -> RealVec {
        self.axpy(-1.0, &rhs)
    }
}

impl AddAssign for RealVec {
    fn add_assign(&mut self, rhs: RealVec) {
        *self = self.axpy(1.0, &rhs);
    }
}

impl SubAssign for RealVec {
    fn sub_assign(&mut self, rhs: RealVec) {
        *self = self.axpy(-1.0, &rhs);
    }
}

impl Mul<f64> for RealVec {
    type Output = RealVec;
    fn mul(mut self, t: f64) -> RealVec {
        for v in self.as_mut_slice() {
            *v *= t;
        }
        self
    }
}

impl Mul<RealVec> for f64 {
    type Output = RealVec;
    fn mul(self, v: RealVec) -> RealVec {
        v * self
    }
}

impl Neg for RealVec {
    type Output = RealVec;
    fn neg(self) -> RealVec {
        self * -1.0
    }
}

/// Small dense row-major matrix, used for map gradients (`rows = m` domain
/// directions, `cols = n` target components) and ambient Jacobians.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat {
    data: [[f64; MAX_DIM]; MAX_DIM],
    rows: usize,
    cols: usize,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows <= MAX_DIM && cols <= MAX_DIM,
            "dimension above MAX_DIM"
        );
        Self {
            data: [[0.0; MAX_DIM]; MAX_DIM],
            rows,
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i][..cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> RealVec {
        RealVec::from_slice(&self.data[i][..self.cols])
    }

    /// Frobenius norm squared, `sum_ij a_ij^2`.
    pub fn norm_sq(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.data[i][..self.cols].iter().map(|v| v * v).sum::<f64>())
            .sum()
    }

    /// `v^T M`: contraction over the row (domain) index, giving a
    /// `cols`-vector. For a map gradient this is the directional derivative
    /// `v . grad u`.
    pub fn contract_rows(&self, v: &RealVec) -> RealVec {
        debug_assert_eq!(v.dim(), self.rows);
        let mut out = RealVec::zeros(self.cols);
        for i in 0..self.rows {
            let vi = v[i];
            for j in 0..self.cols {
                out[j] += vi * self.data[i][j];
            }
        }
        out
    }

    /// `M v`: contraction over the column index.
    pub fn apply(&self, v: &RealVec) -> RealVec {
        debug_assert_eq!(v.dim(), self.cols);
        let mut out = RealVec::zeros(self.rows);
        for i in 0..self.rows {
            out[i] = self.data[i][..self.cols]
                .iter()
                .zip(v.as_slice())
                .map(|(a, b)| a * b)
                .sum();
        }
        out
    }

    pub fn scale(mut self, t: f64) -> Self {
        for i in 0..self.rows {
            for v in &mut self.data[i][..self.cols] {
                *v *= t;
            }
        }
        self
    }
}
