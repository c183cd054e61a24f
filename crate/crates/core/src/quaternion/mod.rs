//! Quaternion algebras over Q, their orders, and unit groups of definite
//! orders.

mod hilbert;

pub use hilbert::{hilbert_by_search, hilbert_odd, hilbert_symbol, ramified_places, Place};

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse, q, q_frac, Q};
use crate::rational::{Order, RationalAlgebra};

/// `(a, b)_Q` with basis `1, i, j, k`, `i^2 = a`, `j^2 = b`, `k = ij = -ji`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuaternionAlgebraQ {
    pub a: i64,
    pub b: i64,
}

impl QuaternionAlgebraQ {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Usage("quaternion parameters must be nonzero".into()));
        }
        Ok(QuaternionAlgebraQ { a, b })
    }

    /// Algebras used for the maximal orders: `(-1,-1)`, `(-1,-3)`, `(-2,-5)`
    /// for `p = 2, 3, 5`, and `(-p, -1)` or `(-p, -3)` otherwise.
    pub fn definite_ramified_at(p: u32) -> Result<Self> {
        match p {
            2 => Self::new(-1, -1),
            3 => Self::new(-1, -3),
            5 => Self::new(-2, -5),
            _ if crate::finite::field::is_prime(p) && p % 4 == 3 => Self::new(-1, -(p as i64)),
            _ => Err(Error::Usage(format!("no fixed model of the quaternion algebra ramified at {p}"))),
        }
    }

    pub fn is_definite(&self) -> bool {
        self.a < 0 && self.b < 0
    }

    pub fn algebra(&self) -> RationalAlgebra {
        let (a, b) = (q(self.a), q(self.b));
        let z = Q::zero;
        let e = |l: usize, c: Q| {
            let mut v = vec![z(), z(), z(), z()];
            v[l] = c;
            v
        };
        RationalAlgebra::from_products(4, e(0, q(1)), format!("({},{})", self.a, self.b), |i, j| match (i, j) {
            (0, l) | (l, 0) => e(l, q(1)),
            (1, 1) => e(0, a.clone()),
            (1, 2) => e(3, q(1)),
            (1, 3) => e(2, a.clone()),
            (2, 1) => e(3, q(-1)),
            (2, 2) => e(0, b.clone()),
            (2, 3) => e(1, -b.clone()),
            (3, 1) => e(2, -a.clone()),
            (3, 2) => e(1, b.clone()),
            (3, 3) => e(0, -(&a * &b)),
            _ => unreachable!(),
        })
        .expect("quaternion structure constants are associative")
    }

    pub fn element(&self, c: [Q; 4]) -> Vec<Q> {
        c.to_vec()
    }

    pub fn conj(&self, x: &[Q]) -> Vec<Q> {
        vec![x[0].clone(), -x[1].clone(), -x[2].clone(), -x[3].clone()]
    }

    pub fn reduced_trace(&self, x: &[Q]) -> Q {
        &x[0] * q(2)
    }

    pub fn reduced_norm(&self, x: &[Q]) -> Q {
        let (a, b) = (q(self.a), q(self.b));
        &x[0] * &x[0] - &a * &x[1] * &x[1] - &b * &x[2] * &x[2] + &a * &b * &x[3] * &x[3]
    }

    pub fn ramified_places(&self) -> Result<BTreeSet<Place>> {
        ramified_places(&q(self.a), &q(self.b))
    }

    /// Product of the ramified finite primes.
    pub fn discriminant(&self) -> Result<u64> {
        Ok(self
            .ramified_places()?
            .into_iter()
            .filter_map(|v| match v {
                Place::Finite(p) => Some(p as u64),
                Place::Infinity => None,
            })
            .product())
    }

    /// Human-readable form such as `(1 + j)/2` or `-i`.
    pub fn format(&self, x: &[Q]) -> String {
        let den = x.iter().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
        let names = ["", "i", "j", "k"];
        let mut terms = Vec::new();
        for (c, n) in x.iter().zip(names) {
            let num = (c * Q::from_integer(den.clone())).to_integer();
            if num.is_zero() {
                continue;
            }
            let mag = num.abs();
            let body = match (n, mag.is_one()) {
                ("", _) => mag.to_string(),
                (_, true) => n.to_string(),
                (_, false) => format!("{mag}{n}"),
            };
            terms.push((num.is_negative(), body));
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (neg, body)) in terms.iter().enumerate() {
            match (idx, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(body);
        }
        if den.is_one() {
            s
        } else if terms.len() == 1 {
            format!("{s}/{den}")
        } else {
            format!("({s})/{den}")
        }
    }
}

/// An order in a quaternion algebra over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionOrder {
    pub algebra: QuaternionAlgebraQ,
    pub order: Order,
}

impl QuaternionOrder {
    pub fn from_basis(algebra: &QuaternionAlgebraQ, basis: Vec<Vec<Q>>, label: &str) -> Result<Self> {
        let order = Order::from_basis(&algebra.algebra(), basis, label)?;
        let qo = QuaternionOrder { algebra: algebra.clone(), order };
        for b in qo.order.basis() {
            if !qo.algebra.reduced_trace(b).is_integer() || !qo.algebra.reduced_norm(b).is_integer() {
                return Err(Error::Structural(format!("{label}: basis element is not integral")));
            }
        }
        Ok(qo)
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        self.order.basis()
    }

    /// Gram matrix of `(x, y) -> trd(x conj(y)) / 2`, so `nrd(x) = x G x^T`.
    pub fn norm_gram(&self) -> Vec<Vec<Q>> {
        let alg = self.order.algebra();
        let b = self.basis();
        b.iter()
            .map(|x| {
                b.iter()
                    .map(|y| self.algebra.reduced_trace(&alg.mul(x, &self.algebra.conj(y))) / q(2))
                    .collect()
            })
            .collect()
    }
}

/// `sqrt |det trd(e_i e_j)|`.
pub fn reduced_discriminant(o: &QuaternionOrder) -> Result<u64> {
    let det = crate::linalg::determinant(
        &o.basis()
            .iter()
            .map(|x| {
                o.basis()
                    .iter()
                    .map(|y| o.algebra.reduced_trace(&o.order.algebra().mul(x, y)))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    )
    .abs();
    if !det.is_integer() {
        return Err(Error::Internal("reduced trace form is not integral".into()));
    }
    let n = det.to_integer();
    let r = n.sqrt();
    if &r * &r != n {
        return Err(Error::Internal(format!("{n} is not a square")));
    }
    r.to_u64().ok_or_else(|| Error::Internal("discriminant overflow".into()))
}

/// Fixed maximal order in the definite algebra ramified at `{p, inf}`.
pub fn maximal_order(p: u32) -> Result<QuaternionOrder> {
    let alg = QuaternionAlgebraQ::definite_ramified_at(p)?;
    let h = |n, d| q_frac(n, d);
    let basis = match p {
        2 => vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(0), q(1), q(0)],
            vec![h(1, 2), h(1, 2), h(1, 2), h(1, 2)],
        ],
        3 => vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![h(1, 2), q(0), h(1, 2), q(0)],
            vec![q(0), h(1, 2), q(0), h(1, 2)],
        ],
        5 => vec![
            vec![h(1, 2), q(0), h(1, 2), h(1, 2)],
            vec![q(0), h(1, 4), h(1, 2), h(1, 4)],
            vec![q(0), q(0), q(1), q(0)],
            vec![q(0), q(0), q(0), q(1)],
        ],
        _ => {
            // (-1,-p), p = 3 mod 4: Z<1, i, (1+j)/2, i(1+j)/2>
            vec![
                vec![q(1), q(0), q(0), q(0)],
                vec![q(0), q(1), q(0), q(0)],
                vec![h(1, 2), q(0), h(1, 2), q(0)],
                vec![q(0), h(1, 2), q(0), h(1, 2)],
            ]
        }
    };
    let o = QuaternionOrder::from_basis(&alg, basis, &format!("O_{p}"))?;
    let d = reduced_discriminant(&o)?;
    if d != p as u64 {
        return Err(Error::Internal(format!("order for p = {p} has discriminant {d}")));
    }
    Ok(o)
}

/// All units of a definite order, sorted by integer coordinates.
pub fn unit_group(o: &QuaternionOrder) -> Result<Vec<Vec<Q>>> {
    if !o.algebra.is_definite() {
        return Err(Error::Usage("unit groups are only enumerated for definite algebras".into()));
    }
    let g = o.norm_gram();
    let ginv = inverse(&g).ok_or_else(|| Error::Internal("degenerate norm form".into()))?;
    // |c_k| <= sqrt((G^-1)_kk) on the ellipsoid x G x^T <= 1
    let bounds: Vec<i64> = (0..4)
        .map(|k| {
            let v = &ginv[k][k];
            let mut r = 0i64;
            while q((r + 1) * (r + 1)) <= *v {
                r += 1;
            }
            r
        })
        .collect();
    let mut coords = Vec::new();
    let mut c = [0i64; 4];
    fn rec(k: usize, c: &mut [i64; 4], bounds: &[i64], out: &mut Vec<[i64; 4]>) {
        if k == 4 {
            out.push(*c);
            return;
        }
        for x in -bounds[k]..=bounds[k] {
            c[k] = x;
            rec(k + 1, c, bounds, out);
        }
    }
    rec(0, &mut c, &bounds, &mut coords);
    let mut units: Vec<([i64; 4], Vec<Q>)> = coords
        .into_iter()
        .map(|c| (c, o.order.element(&c)))
        .filter(|(_, x)| o.algebra.reduced_norm(x).is_one())
        .collect();
    units.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(units.into_iter().map(|(_, x)| x).collect())
}

/// `[O^x : {+-1}]`-style mass term `1/|O^x|` summed over one order.
pub fn unit_count(o: &QuaternionOrder) -> Result<usize> {
    Ok(unit_group(o)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_rules() {
        let a = QuaternionAlgebraQ::new(-2, -5).unwrap();
        let alg = a.algebra();
        let (i, j, k) = (alg.basis(1), alg.basis(2), alg.basis(3));
        assert_eq!(alg.mul(&i, &j), k);
        assert_eq!(alg.mul(&k, &k), alg.scalar(&q(-10)));
        let x = vec![q(1), q(2), q(-1), q(3)];
        assert_eq!(alg.mul(&x, &a.conj(&x)), alg.scalar(&a.reduced_norm(&x)));
    }

    #[test]
    fn maximal_orders_have_prime_discriminant() {
        for p in [2, 3, 5, 7, 11] {
            let o = maximal_order(p).unwrap();
            assert_eq!(reduced_discriminant(&o).unwrap(), p as u64);
            assert_eq!(o.algebra.discriminant().unwrap(), p as u64);
        }
    }

    #[test]
    fn unit_group_orders() {
        let counts: Vec<usize> = [2, 3, 5, 7, 11].iter().map(|&p| unit_count(&maximal_order(p).unwrap()).unwrap()).collect();
        assert_eq!(counts, vec![24, 12, 6, 4, 4]);
    }

    #[test]
    fn units_at_three() {
        let o = maximal_order(3).unwrap();
        let mut names: Vec<String> = unit_group(&o).unwrap().iter().map(|u| o.algebra.format(u)).collect();
        names.sort();
        let mut expected: Vec<String> = [
            "1", "-1", "i", "-i", "(1 + j)/2", "(1 - j)/2", "(-1 + j)/2", "(-1 - j)/2", "(i + k)/2", "(i - k)/2",
            "(-i + k)/2", "(-i - k)/2",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        expected.sort();
        assert_eq!(names, expected);
    }

    #[test]
    fn indefinite_units_rejected() {
        let alg = QuaternionAlgebraQ::new(1, 1).unwrap();
        let o = QuaternionOrder::from_basis(&alg, (0..4).map(|i| alg.algebra().basis(i)).collect(), "Z<i,j>").unwrap();
        assert!(unit_group(&o).is_err());
    }
}
