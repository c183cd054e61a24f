//! Local quaternion orders `A_n (x) O` at a prime `p`, modelled through the
//! finite quotients `O / p^k O` of a global Z-order.

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomic::{component_model, local_splitting, NBar};
use crate::error::{Error, Result};
use crate::finite::radical::{jacobson_radical, semisimple_type_over, SemisimpleType};
use crate::finite::QuotientAlgebra;
use crate::linalg::{determinant, elementary_valuations_mod, nullspace_mod, q, valuation, Q};
use crate::quaternion::{maximal_order, QuaternionAlgebraQ};
use crate::rational::{Order, RationalAlgebra};

pub const DEFAULT_PRECISION: u32 = 4;

/// Largest socle searched for minimal overorders, in F_p-dimension.
const MAX_SOCLE_DIM: usize = 12;

/// The local center `A_{n,p}` when it is a complete discrete valuation ring.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalCenter {
    /// `[F : Q_p]`.
    pub degree: u32,
    pub residue_degree: u32,
    pub ramification_index: u32,
    /// `v_p` of the discriminant of the center order.
    pub discriminant_valuation: u32,
    #[serde(skip)]
    pub uniformizer: Vec<Q>,
}

impl LocalCenter {
    pub fn residue_field_size(&self, p: u32) -> u64 {
        (p as u64).pow(self.residue_degree)
    }
}

/// A Z_p-order seen through a global order and its reduction mod `p^k`.
#[derive(Clone, Debug)]
pub struct LocalOrderModel {
    pub p: u32,
    pub k: u32,
    pub case: Option<NBar>,
    pub construction: String,
    order: Order,
    reduction: QuotientAlgebra,
    center: Option<LocalCenter>,
}

impl LocalOrderModel {
    pub fn from_order(order: Order, p: u32, k: u32, case: Option<NBar>, construction: impl Into<String>, center: Option<LocalCenter>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Usage("precision must be at least 1".into()));
        }
        let reduction = order.quotient_mod(p, k)?;
        if let Some(c) = &center {
            if !order.algebra().is_central(&c.uniformizer) {
                return Err(Error::Internal("center uniformizer is not central".into()));
            }
        }
        Ok(LocalOrderModel { p, k, case, construction: construction.into(), order, reduction, center })
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    /// `O / p^k O`.
    pub fn reduction(&self) -> &QuotientAlgebra {
        &self.reduction
    }

    pub fn center(&self) -> Option<&LocalCenter> {
        self.center.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    fn with_order(&self, order: Order, construction: String) -> Result<Self> {
        LocalOrderModel::from_order(order, self.p, self.k, self.case, construction, self.center.clone())
    }

    /// Same order at another precision.
    pub fn at_precision(&self, k: u32) -> Result<Self> {
        LocalOrderModel::from_order(self.order.clone(), self.p, k, self.case, self.construction.clone(), self.center.clone())
    }

    fn local_center(&self) -> Result<&LocalCenter> {
        self.center.as_ref().ok_or_else(|| {
            Error::Structural(format!("{}: center is not a local ring at {}", self.construction, self.p))
        })
    }
}

/// Product of the component fields of `n̄` with the image of `T`.
pub fn cyclotomic_algebra(case: NBar) -> Result<(RationalAlgebra, Vec<Q>)> {
    let mut alg: Option<RationalAlgebra> = None;
    let mut t: Vec<Q> = Vec::new();
    for n in case.components() {
        let cm = component_model(n)?;
        let field = RationalAlgebra::number_field(&cm.modulus, format!("Q(zeta_{})", cm.model))?;
        t.extend(cm.image_of_t.iter().map(|&c| q(c)));
        alg = Some(match alg {
            None => field,
            Some(a) => a.direct_product(&field)?,
        });
    }
    Ok((alg.expect("at least one component"), t))
}

/// `A_n = Z[T]/(P_n)` as the order `Z[t]` in its cyclotomic algebra.
pub fn cyclotomic_order(case: NBar) -> Result<Order> {
    let (alg, t) = cyclotomic_algebra(case)?;
    Order::from_generators(&alg, &[t], format!("A_{case}"))
}

fn tensor_vec(x: &[Q], y: &[Q]) -> Vec<Q> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// `a (x) O` inside `K (x) D` for a Z-order `a` in `K`.
pub fn tensor_with_maximal(a: &Order, p: u32, label: &str) -> Result<Order> {
    let d = QuaternionAlgebraQ::definite_ramified_at(p)?;
    let o = maximal_order(p)?;
    let b = a.algebra().tensor(&d.algebra())?;
    let basis: Vec<Vec<Q>> = a
        .basis()
        .iter()
        .flat_map(|x| o.basis().iter().map(move |y| tensor_vec(x, y)))
        .collect();
    Order::from_basis(&b, basis, label)
}

fn norm_valuation(alg: &RationalAlgebra, x: &[Q], p: u32) -> Option<u32> {
    let n = alg.norm(x);
    if n.is_zero() || !n.is_integer() {
        return None;
    }
    Some(valuation(&n.to_integer(), p))
}

/// Local data of `Z[zeta_n]` at `p`, when `p` has a single prime above it.
fn single_center(n: u32, p: u32, a: &Order) -> Result<Option<LocalCenter>> {
    let lb = local_splitting(n, p)?;
    if lb.number_of_primes != 1 {
        return Ok(None);
    }
    let alg = a.algebra();
    let degree = alg.dim() as u32;
    let f = lb.residue_degree;
    let uniformizer = if lb.ramification_index == 1 {
        alg.scalar(&q(p as i64))
    } else {
        let (_, t) = cyclotomic_algebra(NBar::Single(n))?;
        (1..n)
            .map(|j| alg.sub(&alg.one(), &alg.pow(&t, j)))
            .find(|x| norm_valuation(alg, x, p) == Some(f))
            .ok_or_else(|| Error::Internal(format!("no uniformizer of the form 1 - zeta^j for ({n}, {p})")))?
    };
    let disc = determinant(&a.trace_gram());
    let discriminant_valuation = if disc.is_zero() {
        return Err(Error::Internal("degenerate trace form".into()));
    } else {
        valuation(&disc.to_integer(), p)
    };
    Ok(Some(LocalCenter {
        degree,
        residue_degree: f,
        ramification_index: lb.ramification_index,
        discriminant_valuation,
        uniformizer,
    }))
}

/// `A_{n̄,p} (x) O_p` at precision `k`. Pair orders carry the congruence
/// condition of `A_{n̄}` automatically, since `A_{n̄}` is built as `Z[t]`
/// inside the product of fields.
pub fn tensor_local_order(case: NBar, p: u32, k: u32) -> Result<LocalOrderModel> {
    if ![2, 3, 5].contains(&p) {
        return Err(Error::Usage(format!("p = {p} is outside the supported primes 2, 3, 5")));
    }
    let a = cyclotomic_order(case)?;
    let label = format!("A_{case} (x) O_{p}");
    let lambda = tensor_with_maximal(&a, p, &label)?;
    let center = match case {
        NBar::Single(n) => single_center(n, p, &a)?.map(|c| LocalCenter {
            uniformizer: tensor_vec(&c.uniformizer, &lambda.algebra().one()[..4]),
            ..c
        }),
        NBar::Pair(..) => None,
    };
    LocalOrderModel::from_order(lambda, p, k, Some(case), label, center)
}

/// The maximal order of `D_{p,inf}` completed at `p`.
pub fn local_maximal_order(p: u32, k: u32) -> Result<LocalOrderModel> {
    let o = maximal_order(p)?;
    let center = LocalCenter {
        degree: 1,
        residue_degree: 1,
        ramification_index: 1,
        discriminant_valuation: 0,
        uniformizer: o.order.algebra().scalar(&q(p as i64)),
    };
    LocalOrderModel::from_order(o.order.clone(), p, k, None, format!("O_{p}"), Some(center))
}

/// Eichler invariant from the semisimple quotient of `O / pO`.
pub fn eichler_invariant(m: &LocalOrderModel) -> Result<i8> {
    Ok(semisimple_kind(m)?.eichler_invariant())
}

pub fn semisimple_kind(m: &LocalOrderModel) -> Result<SemisimpleType> {
    let c = m.local_center()?;
    let r = m.order.quotient_mod(m.p, 1)?;
    semisimple_type_over(&r, c.residue_degree as usize)
}

/// Gram matrix of `Tr_{F/Q} o trd` on the order basis.
fn reduced_trace_gram(m: &LocalOrderModel) -> Result<Vec<Vec<BigInt>>> {
    // the left-regular trace on F (x) D is twice Tr_F o trd
    m.order.trace_gram_integer(2)
}

/// p-adic valuations of the elementary divisors of the reduced trace form,
/// read off mod `p^k`. Fails when some divisor vanishes mod `p^k`.
pub fn trace_form_valuations(m: &LocalOrderModel) -> Result<Vec<u32>> {
    let modulus = BigInt::from(m.p).pow(m.k);
    let g: Vec<Vec<i64>> = reduced_trace_gram(m)?
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&modulus).to_i64().expect("reduced entry")).collect())
        .collect();
    let vals = elementary_valuations_mod(&g, m.p, m.k);
    let mut out = Vec::with_capacity(vals.len());
    for v in vals {
        match v {
            Some(v) => out.push(v),
            None => return Err(Error::Precision { k: m.k, exponent: m.k }),
        }
    }
    Ok(out)
}

/// `n(O)` with `d(O) = (pi^n(O))` over the center.
pub fn discriminant_exponent(m: &LocalOrderModel) -> Result<u32> {
    let c = m.local_center()?;
    let v: u32 = trace_form_valuations(m)?.iter().sum();
    let center_part = 4 * c.discriminant_valuation;
    let twice_f = 2 * c.residue_degree;
    if v < center_part || (v - center_part) % twice_f != 0 {
        return Err(Error::Internal(format!(
            "{}: trace form valuation {v} is inconsistent with the center",
            m.construction
        )));
    }
    Ok((v - center_part) / twice_f)
}

/// Elements of `p^-1 O / O` killed by `J(O/pO)` on both sides, as coordinate
/// vectors over F_p.
fn bimodule_socle(o: &Order, p: u32) -> Result<Vec<Vec<u32>>> {
    let r = o.quotient_mod(p, 1)?;
    let j = jacobson_radical(&r)?;
    let d = r.dim();
    let mut eqs = Vec::new();
    for x in j.rows() {
        for side in 0..2 {
            let images: Vec<Vec<u32>> = (0..d)
                .map(|i| {
                    let e = r.basis_coords(i);
                    if side == 0 {
                        r.mul_coords(x, &e)
                    } else {
                        r.mul_coords(&e, x)
                    }
                })
                .collect();
            for l in 0..d {
                eqs.push((0..d).map(|i| images[i][l]).collect());
            }
        }
    }
    Ok(nullspace_mod(&eqs, d, p))
}

fn projective_points(basis: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let dim = basis.len();
    let len = basis.first().map_or(0, |b| b.len());
    let mut out = Vec::new();
    let total = (p as u64).pow(dim as u32);
    for code in 1..total {
        let mut c = code;
        let coeffs: Vec<u32> = (0..dim)
            .map(|_| {
                let x = (c % p as u64) as u32;
                c /= p as u64;
                x
            })
            .collect();
        // leading nonzero coefficient normalised to 1
        if coeffs.iter().rev().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let mut v = vec![0u32; len];
        for (b, &cf) in basis.iter().zip(&coeffs) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = (*vi + cf * bi) % p;
            }
        }
        out.push(v);
    }
    out
}

/// All minimal overorders of `o` with `p`-power index.
pub fn minimal_overorders(o: &Order, p: u32) -> Result<Vec<Order>> {
    let socle = bimodule_socle(o, p)?;
    if socle.len() > MAX_SOCLE_DIM {
        return Err(Error::Resource {
            required: (p as u128).pow(socle.len() as u32),
            budget: (p as u128).pow(MAX_SOCLE_DIM as u32),
        });
    }
    let alg = o.algebra();
    let pq = q(p as i64);
    let mut candidates: Vec<Order> = Vec::new();
    for v in projective_points(&socle, p) {
        let x: Vec<Q> = o
            .basis()
            .iter()
            .zip(&v)
            .fold(vec![Q::zero(); alg.dim()], |acc, (b, &c)| {
                acc.iter().zip(b).map(|(a, bi)| a + bi * q(c as i64) / &pq).collect()
            });
        let mut gens = o.basis().to_vec();
        gens.push(x);
        match Order::from_generators(alg, &gens, format!("{}+", o.label())) {
            Ok(l) => {
                if !candidates.iter().any(|c| c.basis() == l.basis()) {
                    candidates.push(l);
                }
            }
            Err(Error::Structural(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let minimal: Vec<Order> = candidates
        .iter()
        .filter(|l| !candidates.iter().any(|c| c.basis() != l.basis() && l.contains_order(c)))
        .cloned()
        .collect();
    Ok(minimal)
}

/// Every overorder of `o` with `p`-power index, `o` first, then by index.
pub fn overorders(o: &Order, p: u32) -> Result<Vec<Order>> {
    let mut all: Vec<Order> = vec![o.clone()];
    let mut frontier = vec![o.clone()];
    while let Some(x) = frontier.pop() {
        for y in minimal_overorders(&x, p)? {
            if !all.iter().any(|z| z.basis() == y.basis()) {
                all.push(y.clone());
                frontier.push(y);
            }
        }
    }
    all.sort_by(|a, b| o.index_in(a).cmp(&o.index_in(b)).then_with(|| a.basis().cmp(b.basis())));
    Ok(all)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    pub label: String,
    pub eichler_invariant: i8,
    pub discriminant_exponent: u32,
}

/// `O = M^0 ⊂ M^1 ⊂ ... ⊂ M^m`, ending at the hereditary closure.
#[derive(Clone, Debug, Serialize)]
pub struct OverorderChain {
    pub eichler_invariant: i8,
    pub links: Vec<ChainLink>,
    pub bass_justification: String,
    #[serde(skip)]
    pub orders: Vec<LocalOrderModel>,
}

impl OverorderChain {
    /// `m`, the number of steps to the hereditary closure.
    pub fn length(&self) -> usize {
        self.links.len() - 1
    }

    pub fn hereditary_closure(&self) -> &LocalOrderModel {
        self.orders.last().expect("chain is nonempty")
    }
}

fn expected_drop(e: i8) -> u32 {
    if e == -1 {
        2
    } else {
        1
    }
}

/// Chain of unique minimal overorders. Eichler orders (`e = 1, 2`) are
/// returned as a one-element chain.
pub fn overorder_chain(m: &LocalOrderModel) -> Result<OverorderChain> {
    let e = eichler_invariant(m)?;
    let n0 = discriminant_exponent(m)?;
    let justification = match e {
        1 | 2 => "Eichler order".to_string(),
        _ => "e(O) != 1 with a unique minimal overorder at every step".to_string(),
    };
    let mut links = vec![ChainLink { label: m.construction.clone(), eichler_invariant: e, discriminant_exponent: n0 }];
    let mut orders = vec![m.clone()];
    if e >= 1 {
        return Ok(OverorderChain { eichler_invariant: e, links, bass_justification: justification, orders });
    }
    let (mut cur, mut n, mut ecur) = (m.clone(), n0, e);
    // hereditary iff the discriminant is squarefree
    while n > 1 || (n == 1 && ecur != -1) {
        let mins = minimal_overorders(cur.order(), m.p)?;
        let next = match mins.as_slice() {
            [one] => one.clone(),
            [] => {
                return Err(Error::Internal(format!("{}: no minimal overorder found", cur.construction)));
            }
            _ => {
                return Err(Error::Internal(format!(
                    "{}: {} minimal overorders, expected a unique one",
                    cur.construction,
                    mins.len()
                )));
            }
        };
        let label = format!("M^{}({})", links.len(), m.construction);
        let nxt = cur.with_order(next, label.clone())?;
        let nn = discriminant_exponent(&nxt)?;
        let en = eichler_invariant(&nxt)?;
        if nn + expected_drop(ecur) != n {
            return Err(Error::Internal(format!(
                "{label}: discriminant exponent {nn} after {n} does not match e = {ecur}"
            )));
        }
        let hereditary = nn == 0 || (nn == 1 && en == -1);
        if !hereditary && en != ecur {
            return Err(Error::Internal(format!("{label}: Eichler invariant changed along the chain")));
        }
        links.push(ChainLink { label, eichler_invariant: en, discriminant_exponent: nn });
        orders.push(nxt.clone());
        cur = nxt;
        n = nn;
        ecur = en;
        if hereditary {
            break;
        }
    }
    Ok(OverorderChain { eichler_invariant: e, links, bass_justification: justification, orders })
}

/// `[B : F]`-normalised dimension check: an order over its center has rank
/// `4 [F : Q_p]`.
pub fn check_rank(m: &LocalOrderModel) -> Result<()> {
    if let Some(c) = &m.center {
        if m.rank() != 4 * c.degree as usize {
            return Err(Error::Internal(format!("{}: rank {} over a center of degree {}", m.construction, m.rank(), c.degree)));
        }
    }
    Ok(())
}

/// Indices `[M^{i+1} : M^i]` along a chain, as positive integers.
pub fn chain_indices(chain: &OverorderChain) -> Vec<u64> {
    chain
        .orders
        .windows(2)
        .map(|w| {
            let ix = w[0].order().index_in(w[1].order());
            let n = ix.numer().clone();
            if ix.denom().is_one() && n.is_positive() {
                n.to_u64().unwrap_or(u64::MAX)
            } else {
                0
            }
        })
        .collect()
}

/// Distinct primes at which `Z[t] (x) O` fails to be maximal, tested directly.
pub fn nonmaximal_primes_by_search(case: NBar, p: u32) -> Result<BTreeSet<u32>> {
    let lambda = tensor_local_order(case, p, 1)?;
    let gram = reduced_trace_gram(&lambda)?;
    let det = determinant(&gram.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect::<Vec<_>>());
    let mut out = BTreeSet::new();
    for l in [2u32, 3, 5, 7] {
        if det.is_zero() || !(det.to_integer() % BigInt::from(l)).is_zero() {
            continue;
        }
        if !minimal_overorders(lambda.order(), l)?.is_empty() {
            out.insert(l);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_order_invariants() {
        for p in [2, 3, 5] {
            let m = local_maximal_order(p, 3).unwrap();
            assert_eq!(eichler_invariant(&m).unwrap(), -1);
            assert_eq!(discriminant_exponent(&m).unwrap(), 1);
            let c = overorder_chain(&m).unwrap();
            assert_eq!(c.length(), 0);
        }
    }

    #[test]
    fn eichler_invariants_of_isotypic_orders() {
        let e = |n, p| eichler_invariant(&tensor_local_order(NBar::Single(n), p, 4).unwrap()).unwrap();
        assert_eq!(e(3, 3), -1);
        assert_eq!(e(4, 2), -1);
        assert_eq!(e(12, 2), 1);
        assert_eq!(e(12, 3), 1);
        assert_eq!(e(3, 2), 1);
    }

    #[test]
    fn discriminant_exponents() {
        let n = |c, p| discriminant_exponent(&tensor_local_order(NBar::Single(c), p, 4).unwrap()).unwrap();
        assert_eq!(n(3, 3), 2);
        assert_eq!(n(4, 2), 2);
        assert_eq!(n(12, 2), 2);
        assert_eq!(n(5, 5), 4);
        assert_eq!(n(8, 2), 4);
    }

    #[test]
    fn chain_for_three_at_three() {
        let m = tensor_local_order(NBar::Single(3), 3, 4).unwrap();
        let c = overorder_chain(&m).unwrap();
        assert_eq!(c.length(), 1);
        assert_eq!(semisimple_kind(c.hereditary_closure()).unwrap(), SemisimpleType::FullMatrix);
    }

    #[test]
    fn precision_guard() {
        let m = tensor_local_order(NBar::Single(3), 3, 1).unwrap();
        assert!(matches!(discriminant_exponent(&m), Err(Error::Precision { .. })));
    }

    #[test]
    fn overorders_of_one_two() {
        let a = cyclotomic_order(NBar::Pair(1, 2)).unwrap();
        let lambda = tensor_with_maximal(&a, 2, "A").unwrap();
        assert_eq!(overorders(&lambda, 2).unwrap().len(), 3);
    }
}
