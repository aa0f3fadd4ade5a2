use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// An element of the matrix triple `C^{r×s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleElement(CMatrix);

impl TripleElement {
    pub fn new(matrix: CMatrix) -> Self {
        TripleElement(matrix)
    }

    pub fn zeros(r: usize, s: usize) -> Self {
        TripleElement(CMatrix::zeros(r, s))
    }

    /// Build from row-major entries.
    pub fn from_rows(r: usize, s: usize, entries: &[Complex64]) -> Self {
        TripleElement(CMatrix::from_row_slice(r, s, entries))
    }

    /// Build from row-major real entries.
    pub fn from_real_rows(r: usize, s: usize, entries: &[f64]) -> Self {
        let e: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(r, s, &e)
    }

    /// `[I_k 0; 0 0]` in `C^{r×s}`.
    pub fn block_identity(r: usize, s: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(r, s);
        for i in 0..k.min(r).min(s) {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        TripleElement(m)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> CMatrix {
        self.0.adjoint()
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        TripleElement(&self.0 * alpha)
    }

    /// Frobenius norm, i.e. the norm of the trace inner product.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.0.is_empty() {
            return 0.0;
        }
        super::svd::svd(&self.0).singular_values[0]
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.0.is_empty() {
            return Vec::new();
        }
        super::svd::svd(&self.0).singular_values
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &TripleElement) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &TripleElement, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other) <= tol
    }

    pub(crate) fn check_shape(&self, other: &TripleElement) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn expect_shape(&self, shape: (usize, usize)) -> Result<()> {
        if self.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                found: self.shape(),
            });
        }
        Ok(())
    }
}

impl From<CMatrix> for TripleElement {
    fn from(m: CMatrix) -> Self {
        TripleElement(m)
    }
}

impl Add for &TripleElement {
    type Output = TripleElement;
    fn add(self, rhs: &TripleElement) -> TripleElement {
        TripleElement(&self.0 + &rhs.0)
    }
}

impl Sub for &TripleElement {
    type Output = TripleElement;
    fn sub(self, rhs: &TripleElement) -> TripleElement {
        TripleElement(&self.0 - &rhs.0)
    }
}

impl Neg for &TripleElement {
    type Output = TripleElement;
    fn neg(self) -> TripleElement {
        TripleElement(-&self.0)
    }
}

impl Mul<f64> for &TripleElement {
    type Output = TripleElement;
    fn mul(self, rhs: f64) -> TripleElement {
        TripleElement(&self.0 * Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for &TripleElement {
    type Output = TripleElement;
    fn mul(self, rhs: Complex64) -> TripleElement {
        TripleElement(&self.0 * rhs)
    }
}
