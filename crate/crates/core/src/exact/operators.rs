use num_traits::Zero;

use super::matrix::{nullspace, RationalMatrix};
use super::rational::Rational;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::form::BilinearForm;

/// `T* = B^{-1} T^T B`, so that `B(T x, y) = B(x, T* y)`.
pub fn adjoint_wrt_form(t: &RationalMatrix, form: &BilinearForm) -> Result<RationalMatrix> {
    if !t.is_square() || t.rows() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: t.rows(),
        });
    }
    let sharp = form.sharp()?;
    Ok(&(&sharp * &t.transpose()) * form.matrix())
}

pub fn is_nilpotent_matrix(t: &RationalMatrix) -> bool {
    t.pow(t.rows() as u32).is_zero()
}

/// Writes `T = γ I + N` with `γ = tr T / n` and `N^n = 0`.
pub fn scalar_plus_nilpotent_split(t: &RationalMatrix) -> Result<(Rational, RationalMatrix)> {
    let n = t.rows();
    if !t.is_square() || n == 0 {
        return Err(Error::DimensionMismatch {
            expected: t.rows().max(1),
            found: t.cols(),
        });
    }
    let gamma = t.trace() / Rational::from_integer((n as i64).into());
    let nil = t - &RationalMatrix::scalar(n, &gamma);
    if is_nilpotent_matrix(&nil) {
        Ok((gamma, nil))
    } else {
        Err(Error::NotScalarPlusNilpotent)
    }
}

/// A nonzero vector of `restricted_to` killed by every map, found by
/// descending through kernels: pick the first map not vanishing on the
/// current space, pass to its kernel there (stable under the others since
/// they commute), repeat. Returns the first canonical basis vector of the
/// final space, or `None` when `restricted_to` is zero.
pub fn common_kernel_of_nilpotents(
    maps: &[RationalMatrix],
    restricted_to: &Subspace,
) -> Result<Option<Vec<Rational>>> {
    let n = restricted_to.ambient_dim();
    for (idx, m) in maps.iter().enumerate() {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows(),
            });
        }
        if !restricted_to.contains_subspace(&restricted_to.image(m)) {
            return Err(Error::HypothesisViolated(format!(
                "map {idx} does not preserve the subspace"
            )));
        }
        let mut power = restricted_to.clone();
        for _ in 0..restricted_to.dim() {
            power = power.image(m);
        }
        if !power.is_zero() {
            return Err(Error::HypothesisViolated(format!(
                "map {idx} is not nilpotent on the subspace"
            )));
        }
    }
    for i in 0..maps.len() {
        for j in 0..i {
            let comm = &(&maps[i] * &maps[j]) - &(&maps[j] * &maps[i]);
            if restricted_to.basis().iter().any(|v| comm.mul_vec(v).iter().any(|x| !x.is_zero())) {
                return Err(Error::HypothesisViolated(format!(
                    "maps {j} and {i} do not commute on the subspace"
                )));
            }
        }
    }
    if restricted_to.is_zero() {
        return Ok(None);
    }
    let mut space = restricted_to.clone();
    while let Some(m) = maps.iter().find(|m| {
        space
            .basis()
            .iter()
            .any(|v| m.mul_vec(v).iter().any(|x| !x.is_zero()))
    }) {
        let coords = nullspace(&(m * &space.basis_matrix()));
        let vectors: Vec<_> = coords.iter().map(|c| space.combine(c)).collect();
        space = Subspace::span(n, &vectors);
    }
    Ok(space.basis().first().cloned())
}
