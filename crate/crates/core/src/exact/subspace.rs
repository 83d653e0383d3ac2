use num_traits::Zero;

use super::matrix::{nullspace, RationalMatrix};
use super::rational::Rational;

/// A linear subspace of `Q^n`, stored as the nonzero rows of the RREF of any
/// spanning set. Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, &RationalMatrix::identity(ambient_dim).to_rows())
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        let m = RationalMatrix::from_rows(vectors.to_vec());
        assert_eq!(m.cols(), ambient_dim, "vector length differs from ambient dimension");
        let (r, pivots) = m.rref();
        Self {
            ambient_dim,
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    /// Kernel of `a` as a subspace of `Q^{a.cols}`.
    pub fn kernel(a: &RationalMatrix) -> Self {
        Self::span(a.cols(), &nullspace(a))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        RationalMatrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(self.ambient_dim, &rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient_dim);
        }
        let (p, q) = (self.dim(), other.dim());
        // a·U - b·W = 0, then the intersection is spanned by a·U.
        let system = RationalMatrix::from_fn(self.ambient_dim, p + q, |i, j| {
            if j < p {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - p][i].clone()
            }
        });
        let vectors: Vec<Vec<Rational>> = nullspace(&system)
            .into_iter()
            .map(|coeffs| self.combine(&coeffs[..p]))
            .collect();
        Self::span(self.ambient_dim, &vectors)
    }

    /// `sum_i coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient_dim];
        for (c, v) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// `{ y : v^T G y = 0 for every v in self }`.
    pub fn orthogonal(&self, gram: &RationalMatrix) -> Subspace {
        if self.is_zero() {
            return Self::full(self.ambient_dim);
        }
        let rows = RationalMatrix::from_rows(self.basis.clone());
        Self::kernel(&(&rows * gram))
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, map: &RationalMatrix) -> Subspace {
        let vectors: Vec<_> = self.basis.iter().map(|v| map.mul_vec(v)).collect();
        Self::span(map.rows(), &vectors)
    }
}
