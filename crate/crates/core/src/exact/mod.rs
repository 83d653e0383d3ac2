//! Exact rational linear algebra.

mod matrix;
mod operators;
pub mod poly;
pub mod rational;
pub mod search;
mod subspace;

pub use matrix::{nullspace, solve, RationalMatrix, Solution};
pub use operators::{
    adjoint_wrt_form, common_kernel_of_nilpotents, is_nilpotent_matrix, scalar_plus_nilpotent_split,
};
pub use rational::Rational;
pub use subspace::Subspace;

/// `a + b` componentwise.
pub fn add_vectors(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `k * v`.
pub fn scale_vector(k: &Rational, v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| k * x).collect()
}

/// Standard basis vector `e_i` of `Q^n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![rational::zero(); n];
    v[i] = rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    use num_traits::Zero;
    v.iter().all(Zero::is_zero)
}
