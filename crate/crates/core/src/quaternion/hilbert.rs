//! Hilbert symbols `(a, b)_v` over Q.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite::field::{is_prime, legendre};
use crate::linalg::Q;

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u32),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(Place::Infinity),
            t => {
                let p: u32 = t.parse().map_err(|_| Error::Usage(format!("cannot parse place {s:?}")))?;
                if !is_prime(p) {
                    return Err(Error::Usage(format!("place {p} is not prime")));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

/// Integer representative of the square class of a nonzero rational:
/// `n/d -> n d`, with square factors of small primes removed.
fn square_class(x: &Q) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::Usage("Hilbert symbol arguments must be nonzero".into()));
    }
    let mut v: BigInt = x.numer() * x.denom();
    for p in [2u32, 3, 5, 7, 11, 13] {
        let pp = BigInt::from(p * p);
        while (&v % &pp).is_zero() {
            v /= &pp;
        }
    }
    v.to_i64().ok_or_else(|| Error::Usage("Hilbert symbol arguments are too large".into()))
}

fn split_p(mut a: i64, p: i64) -> (u32, i64) {
    let mut e = 0;
    while a % p == 0 {
        a /= p;
        e += 1;
    }
    (e, a)
}

/// `(a, b)_v`: `+1` iff `z^2 = a x^2 + b y^2` has a nontrivial solution
/// over `Q_v`.
pub fn hilbert_symbol(a: &Q, b: &Q, v: Place) -> Result<i8> {
    let (a, b) = (square_class(a)?, square_class(b)?);
    match v {
        Place::Infinity => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Finite(2) => hilbert_by_search(a, b, 2, 6),
        Place::Finite(p) if is_prime(p) => Ok(hilbert_odd(a, b, p)),
        Place::Finite(p) => Err(Error::Usage(format!("{p} is not prime"))),
    }
}

/// Legendre-symbol formula at an odd prime.
pub fn hilbert_odd(a: i64, b: i64, p: u32) -> i8 {
    let (alpha, u) = split_p(a, p as i64);
    let (beta, w) = split_p(b, p as i64);
    let eps = ((p - 1) / 2) as u64;
    let mut s = if (alpha as u64 * beta as u64 * eps) % 2 == 1 { -1 } else { 1 };
    if beta % 2 == 1 {
        s *= legendre(u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(w, p);
    }
    s as i8
}

/// Bounded solubility search mod `p^k`.
///
/// After replacing `(a, b)` by `(a, -ab)` when both are divisible by `p`, a
/// primitive solution over `Z_p` always has one of `z, a x, b y` a unit.
/// A solution mod `p^k` with that property lifts by Hensel's lemma once
/// `k >= 2 v(2) + 1`.
pub fn hilbert_by_search(a: i64, b: i64, p: u32, k: u32) -> Result<i8> {
    let pi = p as i64;
    let reduce = |x: i64| -> i64 {
        let (e, u) = split_p(x, pi);
        if e % 2 == 0 {
            u
        } else {
            u * pi
        }
    };
    let (mut a, mut b) = (reduce(a), reduce(b));
    if a % pi == 0 && b % pi == 0 {
        b = reduce(-(a / pi) * (b / pi));
    }
    if a % pi == 0 {
        std::mem::swap(&mut a, &mut b);
    }
    let needed = if p == 2 { 3 } else { 1 };
    if k < needed {
        return Err(Error::Usage(format!("search modulus {p}^{k} is too small for a lifting argument")));
    }
    let m = pi.pow(k);
    let (am, bm) = (a.rem_euclid(m), b.rem_euclid(m));
    let unit = |x: i64| x.rem_euclid(pi) != 0;
    for x in 0..m {
        let ax2 = am * (x * x % m) % m;
        for y in 0..m {
            let rhs = (ax2 + bm * (y * y % m)) % m;
            for z in 0..m {
                if (z * z) % m != rhs {
                    continue;
                }
                if !(unit(x) || unit(y) || unit(z)) {
                    continue;
                }
                if unit(z) || unit(am * x) || unit(bm * y) {
                    return Ok(1);
                }
            }
        }
    }
    Ok(-1)
}

/// Places where `(a, b)` ramifies.
pub fn ramified_places(a: &Q, b: &Q) -> Result<BTreeSet<Place>> {
    let (ai, bi) = (square_class(a)?, square_class(b)?);
    let mut out = BTreeSet::new();
    if hilbert_symbol(a, b, Place::Infinity)? == -1 {
        out.insert(Place::Infinity);
    }
    let n = BigInt::from(2) * BigInt::from(ai).abs() * BigInt::from(bi).abs();
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        if rest.is_multiple_of(&d) {
            primes.push(d.to_u32().expect("small prime"));
            while rest.is_multiple_of(&d) {
                rest /= &d;
            }
        }
        d += 1;
    }
    if rest > BigInt::from(1) {
        primes.push(rest.to_u32().ok_or_else(|| Error::Usage("argument too large".into()))?);
    }
    for p in primes {
        if hilbert_symbol(a, b, Place::Finite(p))? == -1 {
            out.insert(Place::Finite(p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn examples() {
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-3), Place::Finite(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-3), Place::Finite(5)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(3), Place::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(7), Place::Finite(2)).unwrap(), 1);
    }

    #[test]
    fn odd_formula_agrees_with_search() {
        for p in [3u32, 5, 7] {
            for a in -12i64..=12 {
                for b in -12i64..=12 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    assert_eq!(hilbert_odd(a, b, p), hilbert_by_search(a, b, p, 2).unwrap(), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn ramification_of_definite_algebras() {
        let r = |a, b| ramified_places(&q(a), &q(b)).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(r(-1, -3), vec![Place::Finite(3), Place::Infinity]);
        assert_eq!(r(-1, -1), vec![Place::Finite(2), Place::Infinity]);
        assert_eq!(r(-2, -5), vec![Place::Finite(5), Place::Infinity]);
    }

    #[test]
    fn rational_arguments() {
        use crate::linalg::q_frac;
        assert_eq!(
            hilbert_symbol(&q_frac(-1, 4), &q_frac(-3, 9), Place::Finite(3)).unwrap(),
            hilbert_symbol(&q(-1), &q(-3), Place::Finite(3)).unwrap()
        );
    }
}
