//! Unit groups of finite algebras by exhaustive enumeration.

use super::algebra::{AlgElem, QuotientAlgebra, ScalarRing};
use super::field::FiniteField;
use super::vecspace::rank;
use crate::error::{Error, Result};
use crate::linalg::rref_mod;

pub const DEFAULT_UNIT_BUDGET: u128 = 1 << 24;

/// Whether `x` is invertible: left multiplication by `x` (mod `p` for
/// `Z/p^k` algebras) must be injective.
pub fn is_unit(a: &QuotientAlgebra, x: &[u32]) -> bool {
    let lm = a.left_mul_matrix(x);
    match a.ring() {
        ScalarRing::Field(f) if f.degree() > 1 => rank(f, &lm) == a.dim(),
        r => {
            let p = r.characteristic_prime();
            let mut m: Vec<Vec<u32>> = lm.iter().map(|row| row.iter().map(|c| c % p).collect()).collect();
            rref_mod(&mut m, p).len() == a.dim()
        }
    }
}

/// All units of `a`, in canonical enumeration order.
pub fn unit_group_of_finite_algebra(a: &QuotientAlgebra) -> Result<Vec<AlgElem>> {
    unit_group_with_budget(a, DEFAULT_UNIT_BUDGET)
}

pub fn unit_group_with_budget(a: &QuotientAlgebra, budget: u128) -> Result<Vec<AlgElem>> {
    let total = a.cardinality().unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::Resource { required: total, budget });
    }
    (0..total)
        .map(|i| a.element_at(i))
        .filter(|x| is_unit(a, x))
        .map(|x| a.elem(x))
        .collect()
}

/// Matrix of `v -> v x` on the coordinates of `a`, over the scalar field.
pub fn right_action_matrix(a: &QuotientAlgebra, x: &[u32]) -> Vec<Vec<u32>> {
    a.right_mul_matrix(x)
}

/// The scalar field of a field-based algebra.
pub fn scalar_field(a: &QuotientAlgebra) -> Result<FiniteField> {
    match a.ring() {
        ScalarRing::Field(f) => Ok(f.clone()),
        ScalarRing::IntegersMod { .. } => Err(Error::Usage("algebra is not over a field".into())),
    }
}
