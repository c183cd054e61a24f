//! Lattices over local quaternion Bass orders and the census of
//! finite-order conjugacy classes in `GL_2` of a definite maximal
//! quaternion order.

pub mod class_numbers;
pub mod counting;
pub mod cyclotomic;
pub mod error;
pub mod finite;
pub mod linalg;
pub mod lattice_classes;
pub mod local_orders;
pub mod quaternion;
pub mod rational;

pub use error::{Error, Result};
pub use finite::{AlgElem, FiniteField, FqElem, QuotientAlgebra, ScalarRing};
pub use counting::Provenance;
pub use cyclotomic::NBar;
pub use quaternion::Place;
