//! Finite fields, finite algebras and the enumeration machinery over them.

pub mod algebra;
pub mod field;
pub mod models;
pub mod orbit;
pub mod radical;
pub mod submodule;
pub mod units;
pub mod vecspace;

pub use algebra::{AlgElem, QuotientAlgebra, ScalarRing};
pub use field::{FiniteField, FqElem};
