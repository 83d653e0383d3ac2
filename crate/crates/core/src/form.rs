//! Bilinear forms over a fixed basis.
//!
//! The matrix entry `(i, j)` is `B(e_i, e_j)`. The same matrix is the flat
//! map `x ↦ B(x, ·)` written in the dual basis, so `sharp` is its inverse.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalMatrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    matrix: RationalMatrix,
    symmetric: bool,
    nondegenerate: bool,
}

impl BilinearForm {
    pub fn new(matrix: RationalMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let symmetric = matrix.is_symmetric();
        let nondegenerate = matrix.rows() == 0 || !matrix.determinant().is_zero();
        Ok(Self {
            matrix,
            symmetric,
            nondegenerate,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(RationalMatrix::zeros(dim, dim)).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RationalMatrix {
        self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.matrix.get(i, j)
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let my = self.matrix.mul_vec(y);
        x.iter().zip(&my).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// `{ x : B(x, y) = 0 for all y }`.
    pub fn left_radical(&self) -> Subspace {
        Subspace::kernel(&self.matrix.transpose())
    }

    /// The inverse of the flat map.
    pub fn sharp(&self) -> Result<RationalMatrix> {
        self.matrix.inverse().ok_or(Error::DegenerateForm)
    }

    /// Gram matrix in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &RationalMatrix) -> BilinearForm {
        let m = &(&p.transpose() * &self.matrix) * p;
        BilinearForm::new(m).expect("square")
    }

    pub fn scale(&self, k: &Rational) -> BilinearForm {
        BilinearForm::new(self.matrix.scale(k)).expect("square")
    }
}
