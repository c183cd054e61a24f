//! Cyclotomic polynomials, the orders `A_n = Z[T]/(prod Phi_{n_i})`, and
//! their local behaviour at small primes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite::field::is_prime;
use crate::linalg::hnf;

/// A single order `n` or a pair `(n1, n2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NBar {
    Single(u32),
    Pair(u32, u32),
}

impl NBar {
    pub fn components(self) -> Vec<u32> {
        match self {
            NBar::Single(n) => vec![n],
            NBar::Pair(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for NBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NBar::Single(n) => write!(f, "{n}"),
            NBar::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl Serialize for NBar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for NBar {
    type Err = Error;

    /// Accepts `"n"`, `"n1,n2"` or `"(n1,n2)"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        let num = |x: &str| x.parse::<u32>().map_err(|_| Error::Usage(format!("cannot parse case {s:?}")));
        match parts.as_slice() {
            [n] => Ok(NBar::Single(num(n)?)),
            [a, b] => Ok(NBar::Pair(num(a)?, num(b)?)),
            _ => Err(Error::Usage(format!("cannot parse case {s:?}"))),
        }
    }
}

/// Integer polynomial, coefficients low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefiningPolynomial {
    pub case: NBar,
    pub coefficients: Vec<i64>,
    pub degree: usize,
}

pub const MAX_N: u32 = 12;

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial; errors if the remainder is nonzero.
fn poly_div_exact(a: &[i64], m: &[i64]) -> Result<Vec<i64>> {
    let (q, r) = poly_divmod(a, m);
    if r.iter().any(|&c| c != 0) {
        return Err(Error::Internal("cyclotomic division left a remainder".into()));
    }
    Ok(q)
}

/// Division with remainder by a monic polynomial.
pub fn poly_divmod(a: &[i64], m: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        r.resize(dm, 0);
        return (vec![0], r);
    }
    let mut q = vec![0; r.len() - dm];
    for top in (dm..r.len()).rev() {
        let c = r[top];
        if c != 0 {
            q[top - dm] = c;
            for (i, &mi) in m.iter().enumerate() {
                r[top - dm + i] -= c * mi;
            }
        }
    }
    r.truncate(dm);
    (q, r)
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| num::integer::gcd(k, n) == 1).count() as u32
}

fn phi_coeffs(n: u32) -> Result<Vec<i64>> {
    if n == 0 || n > MAX_N {
        return Err(Error::Usage(format!("cyclotomic polynomials are supported for 1 <= n <= {MAX_N}, got {n}")));
    }
    // T^n - 1 divided by Phi_d for the proper divisors d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        p = poly_div_exact(&p, &phi_coeffs(d)?)?;
    }
    Ok(p)
}

/// `Phi_n`, `1 <= n <= 12`.
pub fn cyclotomic_polynomial(n: u32) -> Result<DefiningPolynomial> {
    let c = phi_coeffs(n)?;
    Ok(DefiningPolynomial { case: NBar::Single(n), degree: c.len() - 1, coefficients: c })
}

/// `prod Phi_{n_i}`.
pub fn defining_polynomial(case: NBar) -> Result<DefiningPolynomial> {
    let mut c = vec![1i64];
    for n in case.components() {
        c = poly_mul(&c, &phi_coeffs(n)?);
    }
    Ok(DefiningPolynomial { case, degree: c.len() - 1, coefficients: c })
}

/// How a component `Z[zeta_n]` is modelled: the power basis of
/// `zeta_{model}` and the image of `T` in it. `zeta_6` is modelled as
/// `-zeta_3` so that `A_3` and `A_6` share `Z[zeta_3]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentModel {
    pub n: u32,
    pub model: u32,
    pub modulus: Vec<i64>,
    pub image_of_t: Vec<i64>,
}

pub fn component_model(n: u32) -> Result<ComponentModel> {
    let (model, image) = match n {
        1 => (1, vec![1]),
        2 => (1, vec![-1]),
        6 => (3, vec![0, -1]),
        _ => {
            let d = euler_phi(n) as usize;
            let mut v = vec![0; d];
            v[1] = 1;
            (n, v)
        }
    };
    let modulus = phi_coeffs(model)?;
    // image must be a root of Phi_n
    let phi = phi_coeffs(n)?;
    let mut acc = vec![0i64; modulus.len() - 1];
    let mut power = one_in(&modulus);
    for &c in &phi {
        for (a, p) in acc.iter_mut().zip(&power) {
            *a += c * p;
        }
        power = mul_mod(&power, &image, &modulus);
    }
    if acc.iter().any(|&x| x != 0) {
        return Err(Error::Internal(format!("model of zeta_{n} is not a root of Phi_{n}")));
    }
    Ok(ComponentModel { n, model, modulus, image_of_t: image })
}

fn one_in(modulus: &[i64]) -> Vec<i64> {
    let mut v = vec![0; modulus.len() - 1];
    v[0] = 1;
    v
}

/// Product in `Z[x]/(modulus)` on coefficient vectors.
pub fn mul_mod(a: &[i64], b: &[i64], modulus: &[i64]) -> Vec<i64> {
    let (_, r) = poly_divmod(&poly_mul(a, b), modulus);
    r
}

/// Coordinates of `T^i`, `0 <= i < deg`, in the product of component power
/// bases; rows of the embedding `A_n -> O_K`.
pub fn embedding_matrix(case: NBar) -> Result<Vec<Vec<i64>>> {
    let models: Vec<ComponentModel> = case.components().into_iter().map(component_model).collect::<Result<_>>()?;
    let deg = defining_polynomial(case)?.degree;
    let mut rows = Vec::with_capacity(deg);
    let mut powers: Vec<Vec<i64>> = models.iter().map(|m| one_in(&m.modulus)).collect();
    for _ in 0..deg {
        rows.push(powers.iter().flatten().copied().collect());
        for (p, m) in powers.iter_mut().zip(&models) {
            *p = mul_mod(p, &m.image_of_t, &m.modulus);
        }
    }
    Ok(rows)
}

/// Congruence description of a pair order inside `O_{K_1} x O_{K_2}`:
/// `{(a, b) : a = b mod I}` where the first component embeds into the
/// second and `I` is generated by `ideal` in the second component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOrderPresentation {
    pub case: NBar,
    pub presentation: String,
    pub index: u64,
    pub components: Vec<ComponentModel>,
    /// Generators of `I` in the power basis of the second component.
    pub ideal: Vec<Vec<i64>>,
}

pub const SUPPORTED_PAIRS: [(u32, u32); 6] = [(1, 2), (2, 3), (2, 4), (2, 6), (3, 4), (3, 6)];

/// Presentation and index of `A_{(n1,n2)}` for the six supported pairs.
pub fn pair_order(n1: u32, n2: u32) -> Result<PairOrderPresentation> {
    if !SUPPORTED_PAIRS.contains(&(n1, n2)) {
        return Err(Error::Usage(format!("pair ({n1},{n2}) is not supported")));
    }
    let case = NBar::Pair(n1, n2);
    let components = vec![component_model(n1)?, component_model(n2)?];
    let d2 = components[1].modulus.len() - 1;
    let basis2 = |i: usize| -> Vec<i64> { (0..d2).map(|j| i64::from(i == j)).collect() };
    let (presentation, ideal): (&str, Vec<Vec<i64>>) = match (n1, n2) {
        (1, 2) => ("a = b mod 2", vec![vec![2]]),
        (2, 4) => ("a = b mod (1 - zeta_4)", ideal_times(&[1, -1], &components[1].modulus)),
        (2, 6) => ("a = b mod (1 - zeta_3)", ideal_times(&[1, -1], &components[1].modulus)),
        (3, 6) => ("a = b mod 2 Z[zeta_3]", (0..d2).map(|i| basis2(i).iter().map(|x| 2 * x).collect()).collect()),
        _ => ("A = O_K (product of maximal orders)", (0..d2).map(basis2).collect()),
    };
    let index = lattice_index(&embedding_matrix(case)?)?;
    let pres = PairOrderPresentation { case, presentation: presentation.into(), index, components, ideal };
    if congruence_lattice(&pres)? != hnf(to_big(&embedding_matrix(case)?)) {
        return Err(Error::Internal(format!("congruence presentation of {case} does not match Z[T]/(P)")));
    }
    Ok(pres)
}

fn ideal_times(g: &[i64], modulus: &[i64]) -> Vec<Vec<i64>> {
    let d = modulus.len() - 1;
    (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            let mut gg = g.to_vec();
            gg.resize(d, 0);
            mul_mod(&gg, &e, modulus)
        })
        .collect()
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// `|det|` of a square integer matrix, via its Hermite form.
pub fn lattice_index(m: &[Vec<i64>]) -> Result<u64> {
    let h = hnf(to_big(m));
    if h.len() != m.len() || h.len() != m.first().map_or(0, |r| r.len()) {
        return Err(Error::Internal("embedding is not of full rank".into()));
    }
    let mut det = BigInt::from(1);
    for (i, r) in h.iter().enumerate() {
        det *= &r[i];
    }
    u64::try_from(det.abs()).map_err(|_| Error::Internal("index overflow".into()))
}

/// HNF of `{(a, b) : a = b mod I}`.
fn congruence_lattice(p: &PairOrderPresentation) -> Result<Vec<Vec<BigInt>>> {
    let (c1, c2) = (&p.components[0], &p.components[1]);
    let d1 = c1.modulus.len() - 1;
    let d2 = c2.modulus.len() - 1;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    // diagonal: basis of the first component and its image in the second
    for i in 0..d1 {
        let mut row = vec![0; d1 + d2];
        row[i] = 1;
        let image: Vec<i64> = if d1 == d2 {
            (0..d2).map(|j| i64::from(i == j)).collect()
        } else {
            // first component is Z
            (0..d2).map(|j| i64::from(j == 0)).collect()
        };
        row[d1..].copy_from_slice(&image);
        gens.push(row);
    }
    for g in &p.ideal {
        let mut row = vec![0; d1];
        row.extend_from_slice(g);
        gens.push(row);
    }
    Ok(hnf(to_big(&gens)))
}

/// Decomposition of `p` in `Q(zeta_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplittingTag {
    TotallyRamified,
    Inert,
    Split,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalBehavior {
    pub n: u32,
    pub p: u32,
    pub tag: SplittingTag,
    pub residue_degree: u32,
    pub ramification_index: u32,
    pub number_of_primes: u32,
}

/// Factorisation pattern `(degree, multiplicity)` of `Phi_n mod p`.
pub fn factor_pattern_mod(n: u32, p: u32) -> Result<Vec<(u32, u32)>> {
    let phi = phi_coeffs(n)?;
    let mut f: Vec<u32> = phi.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
    let mut pattern = Vec::new();
    // factors are removed in increasing degree, so every divisor found is
    // irreducible
    let mut deg = 1;
    while deg < f.len() {
        for g in monic_polys(p, deg) {
            let mut mult = 0;
            while f.len() > 1 {
                let (q, r) = divmod_fp(&f, &g, p);
                if r.iter().any(|&c| c != 0) {
                    break;
                }
                f = q;
                mult += 1;
            }
            if mult > 0 {
                pattern.push((deg as u32, mult));
            }
        }
        deg += 1;
    }
    Ok(pattern)
}

fn monic_polys(p: u32, deg: usize) -> impl Iterator<Item = Vec<u32>> {
    crate::finite::vecspace::all_vectors(p, deg).map(move |mut v| {
        v.push(1);
        v
    })
}

fn divmod_fp(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return (vec![0], r);
    }
    let mut q = vec![0; r.len() - dm];
    for top in (dm..r.len()).rev() {
        let c = r[top] % p;
        if c != 0 {
            q[top - dm] = c;
            for (i, &mi) in m.iter().enumerate() {
                r[top - dm + i] = (r[top - dm + i] + (p - c) * mi % p) % p;
            }
        }
    }
    r.truncate(dm);
    (q, r)
}

pub fn local_splitting(n: u32, p: u32) -> Result<LocalBehavior> {
    if !is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    let pattern = factor_pattern_mod(n, p)?;
    let (f, e) = pattern[0];
    if pattern.iter().any(|&(d, m)| d != f || m != e) {
        return Err(Error::Internal(format!("Phi_{n} mod {p} has unequal factors")));
    }
    let g = pattern.len() as u32;
    let tag = match (e, f, g) {
        (1, 1, _) => SplittingTag::Split,
        (1, _, 1) => SplittingTag::Inert,
        (_, 1, 1) => SplittingTag::TotallyRamified,
        _ => SplittingTag::Mixed,
    };
    Ok(LocalBehavior { n, p, tag, residue_degree: f, ramification_index: e, number_of_primes: g })
}

/// Index `[O_K : A_n]`; 1 for a single `n`.
pub fn index(case: NBar) -> Result<u64> {
    match case {
        NBar::Single(n) => {
            phi_coeffs(n)?;
            Ok(1)
        }
        NBar::Pair(a, b) => Ok(pair_order(a, b)?.index),
    }
}

/// Primes where `A_n (x) O` is non-maximal: `p` and the primes dividing the
/// index.
pub fn nonmaximal_primes(case: NBar, p: u32) -> Result<BTreeSet<u32>> {
    let i = index(case)?;
    let mut s: BTreeSet<u32> = (2..=i as u32).filter(|&l| is_prime(l) && i % l as u64 == 0).collect();
    s.insert(p);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap().coefficients, vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(6).unwrap().coefficients, vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12).unwrap().coefficients, vec![1, 0, -1, 0, 1]);
        assert!(matches!(cyclotomic_polynomial(13), Err(Error::Usage(_))));
        assert!(matches!(cyclotomic_polynomial(0), Err(Error::Usage(_))));
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=MAX_N {
            let mut prod = vec![1i64];
            for d in (1..=n).filter(|d| n % d == 0) {
                prod = poly_mul(&prod, &cyclotomic_polynomial(d).unwrap().coefficients);
            }
            let mut expect = vec![0i64; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, expect);
        }
    }

    #[test]
    fn pair_indices() {
        let want = [((1, 2), 2), ((2, 3), 1), ((2, 4), 2), ((2, 6), 3), ((3, 4), 1), ((3, 6), 4)];
        for ((a, b), i) in want {
            assert_eq!(pair_order(a, b).unwrap().index, i, "({a},{b})");
        }
        assert!(matches!(pair_order(1, 3), Err(Error::Usage(_))));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(local_splitting(3, 3).unwrap().tag, SplittingTag::TotallyRamified);
        let b = local_splitting(3, 2).unwrap();
        assert_eq!((b.tag, b.residue_degree), (SplittingTag::Inert, 2));
        let b = local_splitting(12, 2).unwrap();
        assert_eq!((b.ramification_index, b.residue_degree, b.number_of_primes), (2, 2, 1));
        let b = local_splitting(12, 3).unwrap();
        assert_eq!((b.ramification_index, b.residue_degree, b.number_of_primes), (2, 2, 1));
    }

    #[test]
    fn splitting_counts_match_degree() {
        for n in 1..=MAX_N {
            for p in [2, 3, 5] {
                let b = local_splitting(n, p).unwrap();
                assert_eq!(b.ramification_index * b.residue_degree * b.number_of_primes, euler_phi(n));
            }
        }
    }

    #[test]
    fn nonmaximal_prime_sets() {
        let s = |c, p| nonmaximal_primes(c, p).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(s(NBar::Pair(3, 6), 3), vec![2, 3]);
        assert_eq!(s(NBar::Pair(3, 6), 2), vec![2]);
        assert_eq!(s(NBar::Single(5), 5), vec![5]);
    }

    #[test]
    fn parse_cases() {
        assert_eq!("3,6".parse::<NBar>().unwrap(), NBar::Pair(3, 6));
        assert_eq!("(1, 2)".parse::<NBar>().unwrap(), NBar::Pair(1, 2));
        assert_eq!("12".parse::<NBar>().unwrap(), NBar::Single(12));
        assert!("x".parse::<NBar>().is_err());
    }
}
