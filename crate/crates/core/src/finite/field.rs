//! Small finite fields F_p and F_{p^d} for d in {2, 4}.

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite field `F_p[x]/(m(x))` with elements encoded as integers
/// `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` over the polynomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteField {
    p: u32,
    degree: usize,
    /// Monic modulus, low degree first, length `degree + 1`.
    modulus: Vec<u32>,
}

/// Element of a [`FiniteField`] in the polynomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FqElem(pub u32);

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        Ok(FiniteField { p, degree: 1, modulus: vec![0, 1] })
    }

    /// `F_p[x]/(modulus)`; the modulus is checked for irreducibility.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        let degree = modulus.len().saturating_sub(1);
        if !matches!(degree, 1 | 2 | 4) || modulus[degree] % p != 1 {
            return Err(Error::Usage(format!(
                "modulus must be monic of degree 1, 2 or 4, got {modulus:?}"
            )));
        }
        let modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        if !is_irreducible(&modulus, p) {
            return Err(Error::Structural(format!(
                "{modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(FiniteField { p, degree, modulus })
    }

    /// The quadratic extension with the fixed moduli x^2+x+1 (p=2),
    /// x^2+1 (p=3), x^2+2 (p=5); other odd p use x^2 - n for the least
    /// non-residue n.
    pub fn quadratic(p: u32) -> Result<Self> {
        let modulus = match p {
            2 => vec![1, 1, 1],
            3 => vec![1, 0, 1],
            5 => vec![2, 0, 1],
            _ => {
                let n = (2..p)
                    .find(|&n| crate::finite::field::legendre(n as i64, p) == -1)
                    .ok_or_else(|| Error::Usage(format!("no quadratic non-residue mod {p}")))?;
                vec![p - n, 0, 1]
            }
        };
        Self::with_modulus(p, &modulus)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.degree as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// The class of `x` (the polynomial generator); equals 0 for prime fields.
    pub fn generator(&self) -> FqElem {
        if self.degree == 1 {
            FqElem(0)
        } else {
            FqElem(self.p)
        }
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.degree)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[u32]) -> FqElem {
        let mut v = 0;
        for &x in c.iter().rev() {
            v = v * self.p + x % self.p;
        }
        FqElem(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.order()).map(FqElem)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let (x, y) = (self.coords(a), self.coords(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_coords(&s)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let s: Vec<u32> = self.coords(a).iter().map(|u| (self.p - u) % self.p).collect();
        self.from_coords(&s)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p;
        let d = self.degree;
        let (x, y) = (self.coords(a), self.coords(b));
        let mut prod = vec![0u32; 2 * d];
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for top in (d..2 * d).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..d {
                prod[top - d + i] = (prod[top - d + i] + (p - c) * self.modulus[i]) % p;
            }
        }
        self.from_coords(&prod[..d])
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.0 == 0 {
            return None;
        }
        Some(self.pow(a, self.order() as u64 - 2))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FqElem) -> u64 {
        assert_ne!(a.0, 0);
        let mut x = a;
        let mut n = 1;
        while x != self.one() {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Matrix (row convention, `v -> v * M`) of multiplication by `a` on the
    /// F_p-coordinates.
    pub fn mul_matrix(&self, a: FqElem) -> Vec<Vec<u32>> {
        (0..self.degree)
            .map(|i| {
                let mut e = vec![0; self.degree];
                e[i] = 1;
                self.coords(self.mul(self.from_coords(&e), a))
            })
            .collect()
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Legendre symbol (a | p) for an odd prime p.
pub fn legendre(a: i64, p: u32) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let p64 = p as u64;
    let mut e = (p64 - 1) / 2;
    let mut base = a;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (a | p) for a prime p, with (a | 2) = 0 for even a,
/// +1 for a = ±1 mod 8 and -1 for a = ±3 mod 8.
pub fn kronecker(a: i64, p: u32) -> i32 {
    if p == 2 {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    } else {
        legendre(a, p)
    }
}

/// Brute-force irreducibility over F_p for degree <= 4 polynomials: no
/// monic factor of degree <= deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push(c % p);
                c /= p;
            }
            f.push(1);
            if poly_rem(poly, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` by the monic polynomial `m` over F_p (low degree first).
pub fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u32> = a.iter().map(|x| x % p).collect();
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + (p - c) * m[i] % p) % p;
            }
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = FiniteField::quadratic(2).unwrap();
        let w = f.generator();
        // w^2 = w + 1
        assert_eq!(f.mul(w, w), f.add(w, f.one()));
        assert_eq!(f.multiplicative_order(w), 3);
        assert_eq!(f.elements().filter(|&a| a.0 != 0).count(), 3);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(FiniteField::with_modulus(3, &[2, 0, 1]).is_err()); // x^2 - 1
        assert!(FiniteField::with_modulus(2, &[1, 1, 0, 0, 1]).is_ok()); // x^4+x+1
    }

    #[test]
    fn inverses_in_f9_and_f25() {
        for p in [3, 5] {
            let f = FiniteField::quadratic(p).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-7, 2), 1);
    }
}
