//! Small named algebras used throughout the local computations.

use super::algebra::{QuotientAlgebra, ScalarRing};
use super::field::{FiniteField, FqElem};
use crate::error::Result;

/// Builds the structure constants of a bilinear product given on basis
/// vectors.
pub fn from_basis_products(
    ring: ScalarRing,
    dim: usize,
    one: Vec<u32>,
    label: &str,
    product: impl Fn(usize, usize) -> Vec<u32>,
) -> Result<QuotientAlgebra> {
    let mut table = vec![0u32; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let base = (i * dim + j) * dim;
            table[base..base + dim].copy_from_slice(&product(i, j));
        }
    }
    QuotientAlgebra::new(ring, dim, table, one, label)
}

fn unit_vec(dim: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// `Mat_2` over a finite field, basis `E11, E12, E21, E22`.
pub fn mat2_over(field: &FiniteField) -> Result<QuotientAlgebra> {
    from_basis_products(
        ScalarRing::Field(field.clone()),
        4,
        vec![1, 0, 0, 1],
        &format!("Mat2(F_{})", field.order()),
        |a, b| {
            let (i, j) = (a / 2, a % 2);
            let (k, l) = (b / 2, b % 2);
            if j == k {
                unit_vec(4, i * 2 + l)
            } else {
                vec![0; 4]
            }
        },
    )
}

pub fn mat2(p: u32) -> Result<QuotientAlgebra> {
    mat2_over(&FiniteField::prime(p)?)
}

/// `Mat_2(Z/p^k)`.
pub fn mat2_mod(p: u32, k: u32) -> Result<QuotientAlgebra> {
    from_basis_products(
        ScalarRing::IntegersMod { p, k },
        4,
        vec![1, 0, 0, 1],
        &format!("Mat2(Z/{p}^{k})"),
        |a, b| {
            let (i, j) = (a / 2, a % 2);
            let (k2, l) = (b / 2, b % 2);
            if j == k2 {
                unit_vec(4, i * 2 + l)
            } else {
                vec![0; 4]
            }
        },
    )
}

/// The trivial extension `<F4 F4; F4 F4>` with product
/// `<a b; c d><a' b'; c' d'> = <aa', ab'+bd'; ca'+dc', dd'>`,
/// basis `E11, E12, E21, E22` over the given model of F_4.
pub fn trivial_extension(field: &FiniteField) -> Result<QuotientAlgebra> {
    from_basis_products(
        ScalarRing::Field(field.clone()),
        4,
        vec![1, 0, 0, 1],
        "E-bar",
        |x, y| {
            let mut out = vec![0; 4];
            match (x, y) {
                (0, 0) => out[0] = 1, // aa'
                (0, 1) => out[1] = 1, // ab'
                (1, 3) => out[1] = 1, // bd'
                (2, 0) => out[2] = 1, // ca'
                (3, 2) => out[2] = 1, // dc'
                (3, 3) => out[3] = 1, // dd'
                _ => {}
            }
            out
        },
    )
}

pub fn trivial_extension_f4() -> Result<QuotientAlgebra> {
    trivial_extension(&FiniteField::quadratic(2)?)
}

/// `F[x]/(x^2)` over a finite field, basis `1, x`.
pub fn dual_numbers(field: &FiniteField) -> Result<QuotientAlgebra> {
    from_basis_products(ScalarRing::Field(field.clone()), 2, vec![1, 0], "F[x]/(x^2)", |a, b| {
        if a + b < 2 {
            unit_vec(2, a + b)
        } else {
            vec![0, 0]
        }
    })
}

/// A finite field viewed as a one-dimensional algebra over itself.
pub fn field_algebra(field: &FiniteField) -> Result<QuotientAlgebra> {
    from_basis_products(ScalarRing::Field(field.clone()), 1, vec![1], &format!("F_{}", field.order()), |_, _| {
        vec![1]
    })
}

/// The residue algebra `F_{p^2} + F_{p^2} eta` of the local maximal order
/// modulo `p`: `eta^2 = 0`, `x eta = eta frob(x)`. F_p-basis
/// `1, w, eta, w eta` with `w` the generator of the fixed model of F_{p^2}.
pub fn residue_maximal_order(p: u32) -> Result<QuotientAlgebra> {
    residue_maximal_order_with(&FiniteField::quadratic(p)?)
}

pub fn residue_maximal_order_with(f: &FiniteField) -> Result<QuotientAlgebra> {
    let p = f.characteristic();
    // element (x, y) <-> x + y eta, x, y in F_{p^2}
    let split = |v: usize| -> (FqElem, FqElem) {
        let basis = if v % 2 == 0 { f.one() } else { f.generator() };
        if v < 2 {
            (basis, f.zero())
        } else {
            (f.zero(), basis)
        }
    };
    from_basis_products(
        ScalarRing::prime_field(p)?,
        4,
        vec![1, 0, 0, 0],
        &format!("O-bar_{p}"),
        |a, b| {
            let (x, y) = split(a);
            let (x2, y2) = split(b);
            // (x + y eta)(x' + y' eta) = x x' + (x y' + y frob(x')) eta
            let s = f.mul(x, x2);
            let t = f.add(f.mul(x, y2), f.mul(y, f.frobenius(x2)));
            let mut out = f.coords(s);
            out.extend(f.coords(t));
            out
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_extension_matches_product_rule_on_all_pairs() {
        let f = FiniteField::quadratic(2).unwrap();
        let e = trivial_extension(&f).unwrap();
        let els: Vec<FqElem> = f.elements().collect();
        let mut checked = 0;
        for &a in &els {
            for &b in &[els[0], els[1], els[2], els[3]] {
                for &c in &els {
                    for &d in &[els[1], els[3]] {
                        for &a2 in &[els[1], els[2]] {
                            for &b2 in &els {
                                let (c2, d2) = (els[3], els[2]);
                                let x = vec![a.0, b.0, c.0, d.0];
                                let y = vec![a2.0, b2.0, c2.0, d2.0];
                                let expect = vec![
                                    f.mul(a, a2).0,
                                    f.add(f.mul(a, b2), f.mul(b, d2)).0,
                                    f.add(f.mul(c, a2), f.mul(d, c2)).0,
                                    f.mul(d, d2).0,
                                ];
                                assert_eq!(e.mul_coords(&x, &y), expect);
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn residue_order_relations() {
        for p in [2, 3, 5] {
            let f = FiniteField::quadratic(p).unwrap();
            let o = residue_maximal_order(p).unwrap();
            let eta = vec![0, 0, 1, 0];
            assert_eq!(o.mul_coords(&eta, &eta), vec![0; 4]);
            for x in f.elements() {
                let mut xv = f.coords(x);
                xv.extend([0, 0]);
                let mut fx = f.coords(f.frobenius(x));
                fx.extend([0, 0]);
                assert_eq!(o.mul_coords(&xv, &eta), o.mul_coords(&eta, &fx));
            }
        }
    }
}
