//! Commutative associative unital algebras by structure constants.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{nullspace, unit_vector, Rational, RationalMatrix};
use crate::form::BilinearForm;

/// `mu[a][b][c]` is the coefficient of `s_c` in `s_a s_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    mu: Vec<Rational>,
    unit: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssocValidation {
    Ok,
    Commutativity { a: usize, b: usize, c: usize },
    Associativity { a: usize, b: usize, c: usize, e: usize },
    Unit { a: usize },
}

impl AssocValidation {
    pub fn is_ok(&self) -> bool {
        matches!(self, AssocValidation::Ok)
    }
}

impl AssocAlgebra {
    pub fn new(basis_names: Vec<String>, mu: Vec<Rational>, unit: Vec<Rational>) -> Result<Self> {
        let dim = basis_names.len();
        if mu.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: mu.len(),
            });
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: unit.len(),
            });
        }
        Ok(Self {
            dim,
            basis_names,
            mu,
            unit,
        })
    }

    /// `F[X]/(X^m)` on the basis `1, X, ..., X^{m-1}`.
    pub fn truncated_polynomial(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidAlgebra("truncated polynomial algebra needs m >= 1".into()));
        }
        let mut mu = vec![Rational::zero(); m * m * m];
        for a in 0..m {
            for b in 0..m - a {
                mu[(a * m + b) * m + a + b] = crate::exact::rational::one();
            }
        }
        let names = (0..m)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            })
            .collect();
        Self::new(names, mu, unit_vector(m, 0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn structure(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.mu[(a * self.dim + b) * self.dim + c]
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.mu
    }

    pub fn product_basis(&self, a: usize, b: usize) -> Vec<Rational> {
        (0..self.dim).map(|c| self.structure(a, b, c).clone()).collect()
    }

    pub fn product(&self, s: &[Rational], t: &[Rational]) -> Result<Vec<Rational>> {
        for v in [s, t] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (a, sa) in s.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, tb) in t.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let k = sa * tb;
                for (c, o) in out.iter_mut().enumerate() {
                    let m = self.structure(a, b, c);
                    if !m.is_zero() {
                        *o += &k * m;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplication by `s` as a matrix acting on coordinates.
    pub fn multiplication_matrix(&self, s: &[Rational]) -> RationalMatrix {
        let cols: Vec<_> = (0..self.dim)
            .map(|b| self.product(s, &unit_vector(self.dim, b)).expect("sized"))
            .collect();
        RationalMatrix::from_columns(self.dim, &cols)
    }

    pub fn validate(&self) -> AssocValidation {
        let m = self.dim;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if self.structure(a, b, c) != self.structure(b, a, c) {
                        return AssocValidation::Commutativity { a, b, c };
                    }
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for e in 0..m {
                        let mut lhs = Rational::zero();
                        let mut rhs = Rational::zero();
                        for d in 0..m {
                            lhs += self.structure(a, b, d) * self.structure(d, c, e);
                            rhs += self.structure(b, c, d) * self.structure(a, d, e);
                        }
                        if lhs != rhs {
                            return AssocValidation::Associativity { a, b, c, e };
                        }
                    }
                }
            }
        }
        for a in 0..m {
            let sa = unit_vector(m, a);
            if self.product(&self.unit, &sa).expect("sized") != sa {
                return AssocValidation::Unit { a };
            }
        }
        AssocValidation::Ok
    }

    /// Basis of `{ γ : γ(s t, u) = γ(s, t u) }` over the basis triples.
    pub fn frobenius_forms(&self) -> Vec<BilinearForm> {
        let m = self.dim;
        let var = |p: usize, q: usize| p * m + q;
        let mut rows = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let mut row = vec![Rational::zero(); m * m];
                    for d in 0..m {
                        let ab = self.structure(a, b, d);
                        if !ab.is_zero() {
                            row[var(d, c)] += ab;
                        }
                        let bc = self.structure(b, c, d);
                        if !bc.is_zero() {
                            row[var(a, d)] -= bc;
                        }
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let ns = if rows.is_empty() {
            RationalMatrix::identity(m * m).to_rows()
        } else {
            nullspace(&RationalMatrix::from_rows(rows))
        };
        ns.into_iter()
            .map(|v| BilinearForm::new(RationalMatrix::from_fn(m, m, |p, q| v[var(p, q)].clone())).expect("square"))
            .collect()
    }

    /// `γ(s t, u) = γ(s, t u)` on all basis triples.
    pub fn is_frobenius_invariant(&self, gamma: &BilinearForm) -> bool {
        let m = self.dim;
        if gamma.dim() != m {
            return false;
        }
        (0..m).all(|a| {
            (0..m).all(|b| {
                (0..m).all(|c| {
                    let ab = self.product_basis(a, b);
                    let bc = self.product_basis(b, c);
                    gamma.eval(&ab, &unit_vector(m, c)) == gamma.eval(&unit_vector(m, a), &bc)
                })
            })
        })
    }

    /// Symmetric, invariant and nondegenerate.
    pub fn is_frobenius_form(&self, gamma: &BilinearForm) -> bool {
        gamma.is_symmetric() && gamma.is_nondegenerate() && self.is_frobenius_invariant(gamma)
    }

    /// `s^k` for `k >= 0`.
    pub fn power(&self, s: &[Rational], k: usize) -> Vec<Rational> {
        let mut acc = self.unit.clone();
        for _ in 0..k {
            acc = self.product(&acc, s).expect("sized");
        }
        acc
    }

    /// Smallest `k >= 1` with `s^k = 0`, or `None` when `s` is not nilpotent.
    pub fn nil_index(&self, s: &[Rational]) -> Option<usize> {
        let mut acc = s.to_vec();
        for k in 1..=self.dim + 1 {
            if acc.iter().all(Zero::is_zero) {
                return Some(k);
            }
            acc = self.product(&acc, s).expect("sized");
        }
        None
    }

    /// Coordinate functional `p¹` dual to the unit: with `a` the first index
    /// where the unit is nonzero, it is the dual basis functional of the unit
    /// in the basis obtained by replacing `s_a` with the unit.
    pub fn unit_dual_functional(&self) -> Vec<Rational> {
        let a = self
            .unit
            .iter()
            .position(|v| !v.is_zero())
            .expect("validated algebras have a nonzero unit");
        let inv = self.unit[a].recip();
        let mut p = vec![Rational::zero(); self.dim];
        p[a] = inv;
        p
    }
}
