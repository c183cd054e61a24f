//! Finite associative algebras given by structure constants over F_q or
//! Z/p^k.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use super::field::{FiniteField, FqElem};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_mod, reduce_mod_rows, rref_mod};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Coefficient ring of a [`QuotientAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ScalarRing {
    Field(FiniteField),
    IntegersMod { p: u32, k: u32 },
}

impl ScalarRing {
    pub fn prime_field(p: u32) -> Result<Self> {
        Ok(ScalarRing::Field(FiniteField::prime(p)?))
    }

    pub fn characteristic_prime(&self) -> u32 {
        match self {
            ScalarRing::Field(f) => f.characteristic(),
            ScalarRing::IntegersMod { p, .. } => *p,
        }
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        match self {
            ScalarRing::Field(f) => f.order(),
            ScalarRing::IntegersMod { p, k } => p.pow(*k),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, ScalarRing::Field(f) if f.degree() == 1)
    }

    pub fn from_int(&self, n: i64) -> u32 {
        match self {
            ScalarRing::Field(f) => f.from_int(n).0,
            ScalarRing::IntegersMod { .. } => n.rem_euclid(self.size() as i64) as u32,
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            ScalarRing::Field(f) if f.degree() > 1 => f.add(FqElem(a), FqElem(b)).0,
            _ => (a + b) % self.size(),
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            ScalarRing::Field(f) if f.degree() > 1 => f.mul(FqElem(a), FqElem(b)).0,
            _ => ((a as u64 * b as u64) % self.size() as u64) as u32,
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match self {
            ScalarRing::Field(f) if f.degree() > 1 => f.neg(FqElem(a)).0,
            _ => (self.size() - a % self.size()) % self.size(),
        }
    }
}

/// A finite associative unital algebra of dimension `dim` over a
/// [`ScalarRing`], with structure constants `e_i e_j = sum_l c[i][j][l] e_l`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientAlgebra {
    #[serde(skip)]
    id: u64,
    ring: ScalarRing,
    dim: usize,
    table: Vec<u32>,
    one: Vec<u32>,
    label: String,
}

impl PartialEq for QuotientAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.dim == other.dim && self.table == other.table && self.one == other.one
    }
}

/// Element of a [`QuotientAlgebra`], tagged with the algebra it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem {
    algebra_id: u64,
    pub coords: Vec<u32>,
}

impl QuotientAlgebra {
    /// Builds an algebra and checks associativity on basis triples and that
    /// `one` is a two-sided identity.
    pub fn new(
        ring: ScalarRing,
        dim: usize,
        table: Vec<u32>,
        one: Vec<u32>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if table.len() != dim * dim * dim || one.len() != dim {
            return Err(Error::Usage("structure constant table has the wrong size".into()));
        }
        let alg = QuotientAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            ring,
            dim,
            table,
            one,
            label: label.into(),
        };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<()> {
        for i in 0..self.dim {
            let ei = self.basis_coords(i);
            if self.mul_coords(&self.one, &ei) != ei || self.mul_coords(&ei, &self.one) != ei {
                return Err(Error::Structural(format!(
                    "{}: unit element does not act as identity on e{i}",
                    self.label
                )));
            }
            for j in 0..self.dim {
                let eij = self.mul_coords(&ei, &self.basis_coords(j));
                for l in 0..self.dim {
                    let el = self.basis_coords(l);
                    let left = self.mul_coords(&eij, &el);
                    let right = self.mul_coords(&ei, &self.mul_coords(&self.basis_coords(j), &el));
                    if left != right {
                        return Err(Error::Structural(format!(
                            "{}: (e{i} e{j}) e{l} != e{i} (e{j} e{l})",
                            self.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn structure_constant(&self, i: usize, j: usize, l: usize) -> u32 {
        self.table[(i * self.dim + j) * self.dim + l]
    }

    pub fn one_coords(&self) -> &[u32] {
        &self.one
    }

    pub fn basis_coords(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn elem(&self, coords: Vec<u32>) -> Result<AlgElem> {
        if coords.len() != self.dim {
            return Err(Error::Usage(format!(
                "coordinate vector of length {} in an algebra of dimension {}",
                coords.len(),
                self.dim
            )));
        }
        Ok(AlgElem { algebra_id: self.id, coords })
    }

    pub fn one(&self) -> AlgElem {
        AlgElem { algebra_id: self.id, coords: self.one.clone() }
    }

    pub fn contains(&self, x: &AlgElem) -> bool {
        x.algebra_id == self.id
    }

    /// Bilinear product from the structure constants.
    pub fn multiply(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        if a.algebra_id != self.id || b.algebra_id != self.id {
            return Err(Error::Usage(format!(
                "multiplying elements that do not belong to {}",
                self.label
            )));
        }
        Ok(AlgElem { algebra_id: self.id, coords: self.mul_coords(&a.coords, &b.coords) })
    }

    pub fn mul_coords(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let d = self.dim;
        let r = &self.ring;
        let mut out = vec![0u32; d];
        if self.ring.is_prime_field() || matches!(self.ring, ScalarRing::IntegersMod { .. }) {
            let m = r.size() as u64;
            let mut acc = vec![0u64; d];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y == 0 {
                        continue;
                    }
                    let xy = x as u64 * y as u64 % m;
                    let base = (i * d + j) * d;
                    for l in 0..d {
                        let c = self.table[base + l];
                        if c != 0 {
                            acc[l] = (acc[l] + xy * c as u64) % m;
                        }
                    }
                }
            }
            for (o, v) in out.iter_mut().zip(acc) {
                *o = v as u32;
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y == 0 {
                        continue;
                    }
                    let xy = r.mul(x, y);
                    let base = (i * d + j) * d;
                    for l in 0..d {
                        let c = self.table[base + l];
                        if c != 0 {
                            out[l] = r.add(out[l], r.mul(xy, c));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add_coords(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect()
    }

    pub fn sub_coords(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, self.ring.neg(y))).collect()
    }

    pub fn scale_coords(&self, s: u32, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| self.ring.mul(s, x)).collect()
    }

    /// Number of elements, or `None` if it overflows `u128`.
    pub fn cardinality(&self) -> Option<u128> {
        (self.ring.size() as u128).checked_pow(self.dim as u32)
    }

    /// Decodes the `index`-th element in the canonical enumeration order.
    pub fn element_at(&self, mut index: u128) -> Vec<u32> {
        let q = self.ring.size() as u128;
        (0..self.dim)
            .map(|_| {
                let c = (index % q) as u32;
                index /= q;
                c
            })
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                self.mul_coords(&self.basis_coords(i), &self.basis_coords(j))
                    == self.mul_coords(&self.basis_coords(j), &self.basis_coords(i))
            })
        })
    }

    /// Restriction of scalars to the prime field: an F_p-algebra of
    /// dimension `dim * [F_q : F_p]` with basis `w^a e_i`.
    pub fn restrict_to_prime_field(&self) -> Result<QuotientAlgebra> {
        let f = match &self.ring {
            ScalarRing::Field(f) if f.degree() > 1 => f.clone(),
            ScalarRing::Field(_) => return Ok(self.clone()),
            ScalarRing::IntegersMod { .. } => {
                return Err(Error::Usage("restriction of scalars needs a field".into()))
            }
        };
        let d = f.degree();
        let n = self.dim * d;
        let p = f.characteristic();
        let w_pow = |a: usize| f.pow(f.generator(), a as u64);
        let expand = |coords: &[u32]| -> Vec<u32> {
            // coordinate (i, a) -> index i*d + a
            let mut out = vec![0u32; n];
            for (i, &c) in coords.iter().enumerate() {
                for (a, x) in f.coords(FqElem(c)).into_iter().enumerate() {
                    out[i * d + a] = x;
                }
            }
            out
        };
        let mut table = vec![0u32; n * n * n];
        for i in 0..self.dim {
            for a in 0..d {
                for j in 0..self.dim {
                    for b in 0..d {
                        let s = w_pow(a + b).0;
                        let prod = self.mul_coords(&self.basis_coords(i), &self.basis_coords(j));
                        let scaled: Vec<u32> = prod.iter().map(|&c| self.ring.mul(s, c)).collect();
                        let row = expand(&scaled);
                        let base = ((i * d + a) * n + (j * d + b)) * n;
                        table[base..base + n].copy_from_slice(&row);
                    }
                }
            }
        }
        QuotientAlgebra::new(
            ScalarRing::prime_field(p)?,
            n,
            table,
            expand(&self.one),
            format!("{} over F_{p}", self.label),
        )
    }

    /// Reduction of a Z/p^k-algebra modulo p.
    pub fn reduce_mod_p(&self) -> Result<QuotientAlgebra> {
        match self.ring {
            ScalarRing::IntegersMod { p, .. } => QuotientAlgebra::new(
                ScalarRing::prime_field(p)?,
                self.dim,
                self.table.iter().map(|c| c % p).collect(),
                self.one.iter().map(|c| c % p).collect(),
                format!("{} mod {p}", self.label),
            ),
            ScalarRing::Field(_) => Ok(self.clone()),
        }
    }

    /// Base change of an F_p-algebra to an extension field `k`.
    pub fn base_change(&self, k: &FiniteField) -> Result<QuotientAlgebra> {
        if !self.ring.is_prime_field() || self.ring.characteristic_prime() != k.characteristic() {
            return Err(Error::Usage("base change needs an F_p-algebra and an extension of F_p".into()));
        }
        QuotientAlgebra::new(
            ScalarRing::Field(k.clone()),
            self.dim,
            self.table.clone(),
            self.one.clone(),
            format!("F_{} (x) {}", k.order(), self.label),
        )
    }

    /// Direct product `A x B` with the basis of `A` first.
    pub fn direct_product(&self, other: &QuotientAlgebra) -> Result<QuotientAlgebra> {
        if self.ring != other.ring {
            return Err(Error::Usage("direct product over different scalar rings".into()));
        }
        let (m, n) = (self.dim, other.dim);
        let t = m + n;
        let mut table = vec![0u32; t * t * t];
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    table[(i * t + j) * t + l] = self.structure_constant(i, j, l);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[((m + i) * t + m + j) * t + m + l] = other.structure_constant(i, j, l);
                }
            }
        }
        let mut one = self.one.clone();
        one.extend_from_slice(&other.one);
        QuotientAlgebra::new(self.ring.clone(), t, table, one, format!("{} x {}", self.label, other.label))
    }

    /// Matrix of `v -> x v` in row convention (`row_i` = image of `e_i`).
    pub fn left_mul_matrix(&self, x: &[u32]) -> Vec<Vec<u32>> {
        (0..self.dim).map(|i| self.mul_coords(x, &self.basis_coords(i))).collect()
    }

    /// Matrix of `v -> v x` in row convention.
    pub fn right_mul_matrix(&self, x: &[u32]) -> Vec<Vec<u32>> {
        (0..self.dim).map(|i| self.mul_coords(&self.basis_coords(i), x)).collect()
    }

    fn prime(&self) -> Result<u32> {
        if self.ring.is_prime_field() {
            Ok(self.ring.characteristic_prime())
        } else {
            Err(Error::Usage(format!("{} is not an algebra over a prime field", self.label)))
        }
    }

    /// Dimension of the center (prime-field algebras only).
    pub fn center_dim(&self) -> Result<usize> {
        Ok(self.center_basis()?.len())
    }

    pub fn center_basis(&self) -> Result<Vec<Vec<u32>>> {
        let p = self.prime()?;
        let d = self.dim;
        // x commutes with e_j: sum_i x_i (c[i][j] - c[j][i]) = 0
        let mut eqs = Vec::new();
        for j in 0..d {
            for l in 0..d {
                let row: Vec<u32> = (0..d)
                    .map(|i| (self.structure_constant(i, j, l) + p - self.structure_constant(j, i, l)) % p)
                    .collect();
                eqs.push(row);
            }
        }
        Ok(nullspace_mod(&eqs, d, p))
    }

    /// Quotient by a two-sided ideal given by F_p-spanning rows.
    /// Returns the quotient algebra and the list of complement basis indices
    /// (quotient basis vector `t` is the class of `e_{cols[t]}`).
    pub fn quotient(&self, ideal_rows: &[Vec<u32>]) -> Result<(QuotientAlgebra, Vec<usize>)> {
        let p = self.prime()?;
        let mut basis = ideal_rows.to_vec();
        let pivots = if basis.is_empty() { Vec::new() } else { rref_mod(&mut basis, p) };
        let cols: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let n = cols.len();
        let project = |v: &[u32]| -> Vec<u32> {
            let mut w = v.to_vec();
            reduce_mod_rows(&mut w, &basis, &pivots, p);
            cols.iter().map(|&c| w[c]).collect()
        };
        let mut table = vec![0u32; n * n * n];
        for (a, &i) in cols.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                let prod = self.mul_coords(&self.basis_coords(i), &self.basis_coords(j));
                let base = (a * n + b) * n;
                table[base..base + n].copy_from_slice(&project(&prod));
            }
        }
        let q = QuotientAlgebra::new(
            ScalarRing::prime_field(p)?,
            n,
            table,
            project(&self.one),
            format!("{} / ideal", self.label),
        )?;
        Ok((q, cols))
    }

    pub fn is_unit(&self, x: &[u32]) -> bool {
        // finite-dimensional: left multiplication bijective <=> two-sided unit
        self.inverse(x).is_some()
    }

    /// Two-sided inverse, found by solving `x y = 1` (prime-field and Z/p^k
    /// algebras are handled by exhaustive search only when small).
    pub fn inverse(&self, x: &[u32]) -> Option<Vec<u32>> {
        if self.ring.is_prime_field() {
            let p = self.ring.characteristic_prime();
            // solve y * L where L = left multiplication by x: x*y = 1
            let lm = self.left_mul_matrix(x);
            // x*y = sum_i y_i (x e_i) = sum_i y_i lm[i]; solve over F_p
            let d = self.dim;
            let mut aug: Vec<Vec<u32>> = (0..d)
                .map(|l| {
                    let mut r: Vec<u32> = (0..d).map(|i| lm[i][l]).collect();
                    r.push(self.one[l]);
                    r
                })
                .collect();
            let piv = rref_mod(&mut aug, p);
            if piv.len() != d || piv.iter().any(|&c| c == d) {
                return None;
            }
            let y: Vec<u32> = aug.iter().map(|r| r[d]).collect();
            if self.mul_coords(&y, x) == self.one {
                Some(y)
            } else {
                None
            }
        } else {
            let total = self.cardinality()?;
            if total > 1 << 22 {
                return None;
            }
            (0..total)
                .map(|i| self.element_at(i))
                .find(|y| self.mul_coords(x, y) == self.one && self.mul_coords(y, x) == self.one)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::models;

    #[test]
    fn identity_acts_trivially_on_random_elements() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for alg in [models::mat2(2).unwrap(), models::trivial_extension_f4().unwrap(), models::residue_maximal_order(3).unwrap()] {
            let q = alg.ring().size();
            for _ in 0..100 {
                let x: Vec<u32> = (0..alg.dim()).map(|_| rng.gen_range(0..q)).collect();
                let xe = alg.elem(x.clone()).unwrap();
                assert_eq!(alg.multiply(&alg.one(), &xe).unwrap().coords, x);
                assert_eq!(alg.multiply(&xe, &alg.one()).unwrap().coords, x);
            }
        }
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let a = models::mat2(2).unwrap();
        let b = models::mat2(2).unwrap();
        let x = a.one();
        let y = b.one();
        assert!(matches!(a.multiply(&x, &y), Err(Error::Usage(_))));
    }

    #[test]
    fn non_associative_table_rejected() {
        // 2-dim over F_2 with e1*e1 = e0 + e1 and everything else making it non-associative
        let mut table = vec![0u32; 8];
        // e0 is the unit
        table[0] = 1; // e0 e0 = e0
        table[3] = 1; // e0 e1 = e1
        table[(2 + 0) * 2 + 1] = 1; // e1 e0 = e1
        table[6] = 1;
        table[7] = 1; // e1 e1 = e0 + e1 : this is F_4, associative
        assert!(QuotientAlgebra::new(ScalarRing::prime_field(2).unwrap(), 2, table.clone(), vec![1, 0], "f4").is_ok());
        let mut bad = vec![0u32; 27];
        // unit e0; e1 e2 = e1, e2 e2 = e2, e1 e1 = e2 -> (e1 e1) e2 = e2 but e1 (e1 e2) = e2... craft failure
        for i in 0..3 {
            bad[(0 * 3 + i) * 3 + i] = 1;
            bad[(i * 3) * 3 + i] = 1;
        }
        bad[(1 * 3 + 1) * 3 + 2] = 1; // e1 e1 = e2
        bad[(1 * 3 + 2) * 3 + 0] = 1; // e1 e2 = e0
        bad[(2 * 3 + 1) * 3 + 1] = 1; // e2 e1 = e1
        assert!(matches!(
            QuotientAlgebra::new(ScalarRing::prime_field(2).unwrap(), 3, bad, vec![1, 0, 0], "bad"),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn restriction_of_scalars_doubles_dimension() {
        let e = models::trivial_extension_f4().unwrap();
        let r = e.restrict_to_prime_field().unwrap();
        assert_eq!(r.dim(), 8);
        assert!(!r.is_commutative());
    }
}
