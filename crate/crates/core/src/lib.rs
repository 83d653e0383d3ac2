//! Exact computation of invariant metrics on Lie algebras and their
//! current algebras `g ⊗ S`.
//!
//! All arithmetic is over ℚ. Lie algebras and commutative associative
//! algebras are given by structure constants on a fixed basis.

pub mod assoc;
pub mod constructions;
pub mod current;
pub mod error;
pub mod exact;
pub mod form;
pub mod lie;
pub mod reverse;

pub use assoc::{AssocAlgebra, AssocValidation};
pub use current::{AlphaMap, CurrentAlgebra};
pub use error::{Error, Result};
pub use exact::{Rational, RationalMatrix, Subspace};
pub use form::BilinearForm;
pub use lie::{Indecomposability, LieAlgebra, Validation};
