//! Jacobson radical and the type of the semisimple quotient.

use serde::Serialize;

use super::algebra::{QuotientAlgebra, ScalarRing};
use super::field::FiniteField;
use super::submodule::SubmoduleBasis;
use super::vecspace::all_vectors;
use crate::error::{Error, Result};
use crate::linalg::{nullspace_mod, reduce_mod_rows, rref_mod};

/// Elements examined before the radical search gives up.
pub const RADICAL_SEARCH_BUDGET: u64 = 1 << 22;

/// Semisimple quotient `A/J(A)` relative to a residue field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemisimpleType {
    /// `k x k`
    SplitPair,
    /// `k`
    Field,
    /// the quadratic extension of `k`
    QuadraticField,
    /// `Mat_2(k)`
    FullMatrix,
}

impl SemisimpleType {
    /// The Eichler invariant attached to this type.
    pub fn eichler_invariant(self) -> i8 {
        match self {
            SemisimpleType::FullMatrix => 2,
            SemisimpleType::SplitPair => 1,
            SemisimpleType::Field => 0,
            SemisimpleType::QuadraticField => -1,
        }
    }
}

fn prime_model(a: &QuotientAlgebra) -> Result<QuotientAlgebra> {
    match a.ring() {
        ScalarRing::IntegersMod { .. } => a.reduce_mod_p(),
        ScalarRing::Field(_) => a.restrict_to_prime_field(),
    }
}

fn span_products(a: &QuotientAlgebra, left: &[Vec<u32>], right: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let mut rows = Vec::new();
    for x in left {
        for y in right {
            let z = a.mul_coords(x, y);
            if z.iter().any(|&c| c != 0) {
                rows.push(z);
            }
        }
    }
    if !rows.is_empty() {
        rref_mod(&mut rows, p);
    }
    rows
}

fn is_nilpotent(a: &QuotientAlgebra, ideal: &[Vec<u32>], p: u32) -> bool {
    let mut power = ideal.to_vec();
    for _ in 0..=a.dim() {
        if power.is_empty() {
            return true;
        }
        let next = span_products(a, &power, ideal, p);
        if next.len() == power.len() {
            return false;
        }
        power = next;
    }
    power.is_empty()
}

/// Two-sided ideal `A x A + J` over F_p.
fn ideal_generated(a: &QuotientAlgebra, x: &[u32], base: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let basis: Vec<Vec<u32>> = (0..a.dim()).map(|i| a.basis_coords(i)).collect();
    let left: Vec<Vec<u32>> = basis.iter().map(|e| a.mul_coords(e, x)).collect();
    let mut rows = span_products(a, &left, &basis, p);
    rows.extend_from_slice(base);
    if !rows.is_empty() {
        rref_mod(&mut rows, p);
    }
    rows
}

/// Radical of an algebra over a prime field, as rref rows.
pub(crate) fn radical_prime(a: &QuotientAlgebra, budget: u64) -> Result<Vec<Vec<u32>>> {
    let p = a.ring().characteristic_prime();
    let d = a.dim();
    // J is contained in the radical of the trace form (x, y) -> Tr(L_{xy})
    let traces: Vec<Vec<u32>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    let eij = a.mul_coords(&a.basis_coords(i), &a.basis_coords(j));
                    let lm = a.left_mul_matrix(&eij);
                    (0..d).fold(0u32, |acc, t| (acc + lm[t][t]) % p)
                })
                .collect()
        })
        .collect();
    let mut trace_radical = nullspace_mod(&traces, d, p);
    if !trace_radical.is_empty() {
        rref_mod(&mut trace_radical, p);
    }

    let mut j: Vec<Vec<u32>> = Vec::new();
    let mut examined = 0u64;
    'grow: loop {
        // complement of J inside the trace radical
        let jp = if j.is_empty() { Vec::new() } else { rref_mod(&mut j, p) };
        let mut w: Vec<Vec<u32>> = trace_radical
            .iter()
            .map(|v| {
                let mut v = v.clone();
                reduce_mod_rows(&mut v, &j, &jp, p);
                v
            })
            .filter(|v| v.iter().any(|&c| c != 0))
            .collect();
        if w.is_empty() {
            break;
        }
        rref_mod(&mut w, p);
        for coeffs in all_vectors(p, w.len()) {
            match coeffs.iter().find(|&&c| c != 0) {
                Some(&1) => {}
                _ => continue,
            }
            examined += 1;
            if examined > budget {
                return Err(Error::Resource { required: (p as u128).pow(w.len() as u32), budget: budget as u128 });
            }
            let mut x = vec![0u32; d];
            for (c, row) in coeffs.iter().zip(&w) {
                for (xi, ri) in x.iter_mut().zip(row) {
                    *xi = (*xi + c * ri) % p;
                }
            }
            let k = ideal_generated(a, &x, &j, p);
            if is_nilpotent(a, &k, p) {
                j = k;
                continue 'grow;
            }
        }
        break;
    }
    Ok(j)
}

/// Jacobson radical as a subspace over the scalar field of `a`.
///
/// For algebras over `Z/p^k` this is the radical of the reduction mod `p`;
/// the radical of `a` itself is its preimage.
pub fn jacobson_radical(a: &QuotientAlgebra) -> Result<SubmoduleBasis> {
    let prime = prime_model(a)?;
    let rows = radical_prime(&prime, RADICAL_SEARCH_BUDGET)?;
    let p = prime.ring().characteristic_prime();
    match a.ring() {
        ScalarRing::Field(f) if f.degree() > 1 => {
            let deg = f.degree();
            let back: Vec<Vec<u32>> = rows
                .iter()
                .map(|r| (0..a.dim()).map(|i| f.from_coords(&r[i * deg..(i + 1) * deg]).0).collect())
                .collect();
            Ok(SubmoduleBasis::span(f, a.dim(), &back))
        }
        _ => Ok(SubmoduleBasis::span(&FiniteField::prime(p)?, a.dim(), &rows)),
    }
}

/// Semisimple type of `a/J(a)` relative to its own scalar field.
pub fn semisimple_type(a: &QuotientAlgebra) -> Result<SemisimpleType> {
    let deg = match a.ring() {
        ScalarRing::Field(f) => f.degree(),
        ScalarRing::IntegersMod { .. } => 1,
    };
    semisimple_type_over(a, deg)
}

/// Semisimple type of `a/J(a)` relative to the field with `p^kappa_degree`
/// elements, where `p` is the characteristic.
pub fn semisimple_type_over(a: &QuotientAlgebra, kappa_degree: usize) -> Result<SemisimpleType> {
    let prime = prime_model(a)?;
    let p = prime.ring().characteristic_prime();
    let j = radical_prime(&prime, RADICAL_SEARCH_BUDGET)?;
    let (s, _) = prime.quotient(&j)?;
    let dim = s.dim();
    let unrecognized = |why: &str| {
        Err(Error::Structural(format!(
            "{}: semisimple quotient of dimension {dim} over F_{p} ({why}) is not of quaternion-order type",
            a.label()
        )))
    };
    if kappa_degree == 0 || dim % kappa_degree != 0 {
        return unrecognized("dimension not a multiple of the residue degree");
    }
    let center = s.center_dim()?;
    match dim / kappa_degree {
        1 => Ok(SemisimpleType::Field),
        2 if center == dim => {
            let idempotents = count_idempotents(&s)?;
            match idempotents {
                4 => Ok(SemisimpleType::SplitPair),
                2 => Ok(SemisimpleType::QuadraticField),
                _ => unrecognized("unexpected idempotent count"),
            }
        }
        4 if center == kappa_degree => Ok(SemisimpleType::FullMatrix),
        _ => unrecognized("no matching type"),
    }
}

fn count_idempotents(s: &QuotientAlgebra) -> Result<usize> {
    let total = s.cardinality().filter(|&t| t <= 1 << 20).ok_or(Error::Resource {
        required: s.cardinality().unwrap_or(u128::MAX),
        budget: 1 << 20,
    })?;
    Ok((0..total)
        .map(|i| s.element_at(i))
        .filter(|x| &s.mul_coords(x, x) == x)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::models;

    #[test]
    fn matrix_algebra_is_semisimple() {
        for p in [2, 3] {
            let m = models::mat2(p).unwrap();
            assert_eq!(jacobson_radical(&m).unwrap().dim(), 0);
            assert_eq!(semisimple_type(&m).unwrap(), SemisimpleType::FullMatrix);
        }
    }

    #[test]
    fn residue_order_radical_is_eta_line() {
        for p in [2, 3, 5] {
            let o = models::residue_maximal_order(p).unwrap();
            let j = jacobson_radical(&o).unwrap();
            assert_eq!(j.dim(), 2);
            let f = FiniteField::prime(p).unwrap();
            assert!(j.contains(&f, &[0, 0, 1, 0]));
            assert!(j.contains(&f, &[0, 0, 0, 1]));
            assert_eq!(semisimple_type_over(&o, 1).unwrap(), SemisimpleType::QuadraticField);
        }
    }

    #[test]
    fn dual_numbers_over_f4() {
        let f = FiniteField::quadratic(2).unwrap();
        let a = models::dual_numbers(&f).unwrap();
        let j = jacobson_radical(&a).unwrap();
        assert_eq!(j.rows(), &[vec![0, 1]]);
        assert_eq!(semisimple_type(&a).unwrap(), SemisimpleType::Field);
    }

    #[test]
    fn trivial_extension_is_split_pair() {
        let e = models::trivial_extension_f4().unwrap();
        assert_eq!(jacobson_radical(&e).unwrap().dim(), 2);
        assert_eq!(semisimple_type(&e).unwrap(), SemisimpleType::SplitPair);
    }

    #[test]
    fn integers_mod_reduce_first() {
        let m = models::mat2_mod(3, 2).unwrap();
        assert_eq!(semisimple_type(&m).unwrap(), SemisimpleType::FullMatrix);
    }

    #[test]
    fn radical_of_quotient_vanishes() {
        for a in [models::residue_maximal_order(3).unwrap(), models::trivial_extension_f4().unwrap().restrict_to_prime_field().unwrap()] {
            let j = radical_prime(&a, RADICAL_SEARCH_BUDGET).unwrap();
            assert!(is_nilpotent(&a, &j, a.ring().characteristic_prime()));
            let (s, _) = a.quotient(&j).unwrap();
            assert!(radical_prime(&s, RADICAL_SEARCH_BUDGET).unwrap().is_empty());
        }
    }
}
