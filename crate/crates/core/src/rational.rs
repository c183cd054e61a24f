//! Finite-dimensional algebras over Q and their Z-orders.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::finite::{FiniteField, QuotientAlgebra, ScalarRing};
use crate::linalg::{determinant, inverse, lattice_basis, q, reduce_mod_rows, rref_mod, vec_mat, Q};

/// Associative Q-algebra with structure constants `e_i e_j = sum_l c_ijl e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalAlgebra {
    dim: usize,
    table: Vec<Q>,
    one: Vec<Q>,
    label: String,
}

impl RationalAlgebra {
    pub fn new(dim: usize, table: Vec<Q>, one: Vec<Q>, label: impl Into<String>) -> Result<Self> {
        if table.len() != dim * dim * dim || one.len() != dim {
            return Err(Error::Usage("structure constant table has the wrong size".into()));
        }
        let alg = RationalAlgebra { dim, table, one, label: label.into() };
        for i in 0..dim {
            let ei = alg.basis(i);
            if alg.mul(&alg.one, &ei) != ei || alg.mul(&ei, &alg.one) != ei {
                return Err(Error::Structural(format!("{}: bad identity", alg.label)));
            }
            for j in 0..dim {
                let eij = alg.mul(&ei, &alg.basis(j));
                for l in 0..dim {
                    let el = alg.basis(l);
                    if alg.mul(&eij, &el) != alg.mul(&ei, &alg.mul(&alg.basis(j), &el)) {
                        return Err(Error::Structural(format!("{}: not associative", alg.label)));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn from_products(
        dim: usize,
        one: Vec<Q>,
        label: impl Into<String>,
        product: impl Fn(usize, usize) -> Vec<Q>,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                table.extend(product(i, j));
            }
        }
        Self::new(dim, table, one, label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn one(&self) -> Vec<Q> {
        self.one.clone()
    }

    pub fn basis(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    pub fn scalar(&self, c: &Q) -> Vec<Q> {
        self.one.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.dim;
        let mut out = vec![Q::zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                let base = (i * d + j) * d;
                for (l, o) in out.iter_mut().enumerate() {
                    let c = &self.table[base + l];
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn pow(&self, a: &[Q], e: u32) -> Vec<Q> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Matrix of `y -> x y` in the row convention (row i is `x e_i`).
    pub fn left_mul_matrix(&self, x: &[Q]) -> Vec<Vec<Q>> {
        (0..self.dim).map(|i| self.mul(x, &self.basis(i))).collect()
    }

    /// Trace of left multiplication.
    pub fn trace(&self, x: &[Q]) -> Q {
        let m = self.left_mul_matrix(x);
        (0..self.dim).map(|i| m[i][i].clone()).sum()
    }

    pub fn norm(&self, x: &[Q]) -> Q {
        determinant(&self.left_mul_matrix(x))
    }

    pub fn inverse(&self, x: &[Q]) -> Option<Vec<Q>> {
        let m = inverse(&self.left_mul_matrix(x))?;
        // x y = 1 means (row coords of y) * L_x = one, L_x row i = x e_i
        Some(vec_mat(&self.one, &m))
    }

    pub fn is_central(&self, x: &[Q]) -> bool {
        (0..self.dim).all(|i| {
            let e = self.basis(i);
            self.mul(x, &e) == self.mul(&e, x)
        })
    }

    /// `A (x) B` with basis `e_i (x) f_j` at index `i * dim(B) + j`.
    pub fn tensor(&self, other: &RationalAlgebra) -> Result<RationalAlgebra> {
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 * d2;
        let mut one = vec![Q::zero(); d];
        for i in 0..d1 {
            for j in 0..d2 {
                one[i * d2 + j] = &self.one[i] * &other.one[j];
            }
        }
        RationalAlgebra::from_products(d, one, format!("{} (x) {}", self.label, other.label), |x, y| {
            let (i1, j1) = (x / d2, x % d2);
            let (i2, j2) = (y / d2, y % d2);
            let a = self.mul(&self.basis(i1), &self.basis(i2));
            let b = other.mul(&other.basis(j1), &other.basis(j2));
            let mut out = vec![Q::zero(); d];
            for (i, u) in a.iter().enumerate() {
                for (j, v) in b.iter().enumerate() {
                    out[i * d2 + j] = u * v;
                }
            }
            out
        })
    }

    /// `A x B` with `A` first.
    pub fn direct_product(&self, other: &RationalAlgebra) -> Result<RationalAlgebra> {
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 + d2;
        let mut one = self.one.clone();
        one.extend(other.one.iter().cloned());
        RationalAlgebra::from_products(d, one, format!("{} x {}", self.label, other.label), |x, y| {
            let mut out = vec![Q::zero(); d];
            if x < d1 && y < d1 {
                out[..d1].clone_from_slice(&self.mul(&self.basis(x), &self.basis(y)));
            } else if x >= d1 && y >= d1 {
                out[d1..].clone_from_slice(&other.mul(&other.basis(x - d1), &other.basis(y - d1)));
            }
            out
        })
    }

    /// Number field `Q[t]/(f)`, basis `1, t, ..., t^{n-1}`, for monic `f`
    /// given low degree first.
    pub fn number_field(poly: &[i64], label: impl Into<String>) -> Result<RationalAlgebra> {
        let n = poly.len() - 1;
        if n == 0 || poly[n] != 1 {
            return Err(Error::Usage("defining polynomial must be monic of positive degree".into()));
        }
        let reduce = |mut c: Vec<Q>| {
            while c.len() > n {
                let top = c.pop().expect("nonempty");
                let base = c.len() - n;
                for (i, &a) in poly[..n].iter().enumerate() {
                    c[base + i] -= &top * q(a);
                }
            }
            c.resize(n, Q::zero());
            c
        };
        let mut one = vec![Q::zero(); n];
        one[0] = Q::one();
        RationalAlgebra::from_products(n, one, label, |i, j| {
            let mut c = vec![Q::zero(); i + j + 1];
            c[i + j] = Q::one();
            reduce(c)
        })
    }
}

/// A full-rank Z-lattice in a [`RationalAlgebra`] that is a subring.
#[derive(Clone, Debug, PartialEq)]
pub struct Order {
    algebra: RationalAlgebra,
    basis: Vec<Vec<Q>>,
    basis_inverse: Vec<Vec<Q>>,
    label: String,
}

const CLOSURE_ROUNDS: usize = 64;
const MAX_DENOMINATOR_BITS: u64 = 64;

impl Order {
    /// Order with the given Z-basis; fails unless the lattice is a full-rank
    /// ring containing 1.
    pub fn from_basis(algebra: &RationalAlgebra, basis: Vec<Vec<Q>>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let lattice = lattice_basis(&basis);
        if lattice.len() != algebra.dim() || basis.len() != algebra.dim() {
            return Err(Error::Structural(format!("{label}: lattice is not of full rank")));
        }
        let basis_inverse = inverse(&basis).ok_or_else(|| Error::Structural(format!("{label}: singular basis")))?;
        let o = Order { algebra: algebra.clone(), basis, basis_inverse, label };
        if !o.contains(&algebra.one()) {
            return Err(Error::Structural(format!("{}: does not contain 1", o.label)));
        }
        for a in &o.basis {
            for b in &o.basis {
                if !o.contains(&algebra.mul(a, b)) {
                    return Err(Error::Structural(format!("{}: not closed under multiplication", o.label)));
                }
            }
        }
        Ok(o)
    }

    /// Smallest order containing the generators; fails if they are not
    /// integral (the closure never stabilises) or do not span.
    pub fn from_generators(algebra: &RationalAlgebra, gens: &[Vec<Q>], label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let mut rows: Vec<Vec<Q>> = vec![algebra.one()];
        rows.extend(gens.iter().cloned());
        let mut lattice = lattice_basis(&rows);
        for _ in 0..CLOSURE_ROUNDS {
            for x in &lattice {
                let integral = algebra.trace(x).is_integer() && algebra.norm(x).is_integer();
                let small = x.iter().all(|c| c.denom().bits() <= MAX_DENOMINATOR_BITS);
                if !integral || !small {
                    return Err(Error::Structural(format!("{label}: generators are not integral")));
                }
            }
            let mut next = lattice.clone();
            for a in &lattice {
                for b in &lattice {
                    next.push(algebra.mul(a, b));
                }
            }
            let next = lattice_basis(&next);
            if next == lattice {
                return Order::from_basis(algebra, lattice, label);
            }
            lattice = next;
        }
        Err(Error::Structural(format!("{label}: generators are not integral")))
    }

    pub fn algebra(&self) -> &RationalAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` in the order basis.
    pub fn coordinates(&self, x: &[Q]) -> Vec<Q> {
        vec_mat(x, &self.basis_inverse)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.coordinates(x).iter().all(|c| c.is_integer())
    }

    pub fn contains_order(&self, other: &Order) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn element(&self, coords: &[i64]) -> Vec<Q> {
        let c: Vec<Q> = coords.iter().map(|&x| q(x)).collect();
        vec_mat(&c, &self.basis)
    }

    /// Integer coordinates of `x`; fails if `x` is not in the order.
    pub fn integer_coordinates(&self, x: &[Q]) -> Result<Vec<BigInt>> {
        self.coordinates(x)
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Structural(format!("{}: element is not integral", self.label)))
                }
            })
            .collect()
    }

    /// Gram matrix of the trace form `Tr(e_i e_j)` in the order basis.
    pub fn trace_gram(&self) -> Vec<Vec<Q>> {
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| self.algebra.trace(&self.algebra.mul(a, b))).collect())
            .collect()
    }

    /// Integer-valued trace Gram matrix, scaled by `1/scale` (e.g. 2 for the
    /// reduced trace of a quaternion algebra, or the degree of the center).
    pub fn trace_gram_integer(&self, scale: i64) -> Result<Vec<Vec<BigInt>>> {
        self.trace_gram()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        let y = x / q(scale);
                        if y.is_integer() {
                            Ok(y.to_integer())
                        } else {
                            Err(Error::Internal("trace form is not integral".into()))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `[self : other]` for `other` of the same rank, as a positive rational.
    pub fn index_in(&self, other: &Order) -> Q {
        let m: Vec<Vec<Q>> = self.basis.iter().map(|b| other.coordinates(b)).collect();
        determinant(&m).abs()
    }

    /// `O / p^k O` as an algebra over `Z/p^k` (over `F_p` when `k = 1`).
    pub fn quotient_mod(&self, p: u32, k: u32) -> Result<QuotientAlgebra> {
        let m = (p as i64).pow(k);
        let ring = if k == 1 {
            ScalarRing::Field(FiniteField::prime(p)?)
        } else {
            ScalarRing::IntegersMod { p, k }
        };
        let d = self.rank();
        let to_mod = |c: &BigInt| -> u32 {
            let r = c.mod_floor(&BigInt::from(m));
            r.to_u32().expect("reduced residue")
        };
        let mut table = Vec::with_capacity(d * d * d);
        for a in &self.basis {
            for b in &self.basis {
                let c = self.integer_coordinates(&self.algebra.mul(a, b))?;
                table.extend(c.iter().map(to_mod));
            }
        }
        let one = self.integer_coordinates(&self.algebra.one())?;
        QuotientAlgebra::new(ring, d, table, one.iter().map(to_mod).collect(), format!("{}/{}^{}", self.label, p, k))
    }

    /// `O / pi O` for a central element `pi` with `p in pi O`, as an
    /// algebra over `F_p`.
    pub fn quotient_by_central(&self, pi: &[Q], p: u32) -> Result<QuotientAlgebra> {
        Ok(self.central_quotient(pi, p)?.algebra)
    }

    /// Like [`Order::quotient_by_central`], keeping the reduction map.
    pub fn central_quotient(&self, pi: &[Q], p: u32) -> Result<CentralQuotient> {
        if !self.algebra.is_central(pi) || !self.contains(pi) {
            return Err(Error::Usage("uniformizer must be a central element of the order".into()));
        }
        let pinv = self
            .algebra
            .inverse(pi)
            .ok_or_else(|| Error::Usage("uniformizer is not invertible".into()))?;
        let p_over_pi: Vec<Q> = pinv.iter().map(|x| x * q(p as i64)).collect();
        if !self.contains(&p_over_pi) {
            return Err(Error::Usage(format!("{p} is not divisible by the uniformizer")));
        }
        let full = self.quotient_mod(p, 1)?;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for b in &self.basis {
            let c = self.integer_coordinates(&self.algebra.mul(pi, b))?;
            rows.push(c.iter().map(|x| x.mod_floor(&BigInt::from(p)).to_u32().expect("residue")).collect());
        }
        let pivots = rref_mod(&mut rows, p);
        rows.truncate(pivots.len());
        let (algebra, cols) = full.quotient(&rows)?;
        Ok(CentralQuotient { p, algebra, ideal_rows: rows, pivots, cols })
    }

    /// `det Tr(e_i e_j)` over the order basis.
    pub fn discriminant(&self) -> Q {
        determinant(&self.trace_gram())
    }
}

/// `O / pi O` together with the reduction `O -> O / pi O`.
#[derive(Clone, Debug)]
pub struct CentralQuotient {
    pub p: u32,
    pub algebra: QuotientAlgebra,
    ideal_rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    cols: Vec<usize>,
}

impl CentralQuotient {
    /// Image of an element of the order.
    pub fn reduce(&self, order: &Order, x: &[Q]) -> Result<Vec<u32>> {
        let p = BigInt::from(self.p);
        let mut v: Vec<u32> = order
            .integer_coordinates(x)?
            .iter()
            .map(|c| c.mod_floor(&p).to_u32().expect("residue"))
            .collect();
        reduce_mod_rows(&mut v, &self.ideal_rows, &self.pivots, self.p);
        Ok(self.cols.iter().map(|&c| v[c]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> RationalAlgebra {
        RationalAlgebra::number_field(&[1, 0, 1], "Q(i)").unwrap()
    }

    #[test]
    fn number_field_arithmetic() {
        let k = gaussian();
        let i = k.basis(1);
        assert_eq!(k.mul(&i, &i), k.scalar(&q(-1)));
        assert_eq!(k.trace(&i), q(0));
        assert_eq!(k.norm(&k.add(&k.one(), &i)), q(2));
        let inv = k.inverse(&k.add(&k.one(), &i)).unwrap();
        assert_eq!(k.mul(&inv, &k.add(&k.one(), &i)), k.one());
    }

    #[test]
    fn tensor_and_product_dimensions() {
        let k = gaussian();
        assert_eq!(k.tensor(&k).unwrap().dim(), 4);
        assert_eq!(k.direct_product(&k).unwrap().dim(), 4);
    }

    #[test]
    fn generated_order_and_index() {
        let k = gaussian();
        let max = Order::from_generators(&k, &[k.basis(1)], "Z[i]").unwrap();
        let two_i: Vec<Q> = k.basis(1).iter().map(|x| x * q(2)).collect();
        let sub = Order::from_generators(&k, &[two_i], "Z[2i]").unwrap();
        assert!(max.contains_order(&sub));
        assert_eq!(sub.index_in(&max), q(2));
        assert_eq!(max.discriminant(), q(-4));
        let half: Vec<Q> = k.basis(1).iter().map(|x| x / q(2)).collect();
        assert!(Order::from_generators(&k, &[half], "bad").is_err());
    }

    #[test]
    fn residue_rings() {
        let k = gaussian();
        let o = Order::from_generators(&k, &[k.basis(1)], "Z[i]").unwrap();
        let a = o.quotient_mod(2, 3).unwrap();
        assert_eq!(a.cardinality(), Some(64));
        let pi = k.sub(&k.one(), &k.basis(1));
        let res = o.quotient_by_central(&pi, 2).unwrap();
        assert_eq!(res.dim(), 1);
    }
}
