//! Class numbers of the endomorphism orders that occur: the mass formula
//! for maximal orders, and double cosets through finite unit images.

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::field::{is_prime, kronecker};
use crate::finite::radical::jacobson_radical;
use crate::finite::units::unit_group_of_finite_algebra;
use crate::finite::QuotientAlgebra;
use crate::lattice_classes::{EndomorphismOrder, LatticeClassLabel, MaximalFactor};
use crate::linalg::{q_frac, reduce_mod_rows, Q};
use crate::cyclotomic::NBar;
use crate::quaternion::{maximal_order, unit_group, QuaternionOrder};

/// `h(O)` for a maximal order of `D_{p,inf}`:
/// `(p-1)/12 + (1 - (-3|p))/3 + (1 - (-4|p))/4`, with Kronecker symbols, so
/// `(-3|2) = -1`, `(-4|2) = 0` and `(-3|3) = 0`.
pub fn h_maximal_quaternion(p: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    let h: Q = q_frac(p as i64 - 1, 12)
        + q_frac(1 - kronecker(-3, p) as i64, 3)
        + q_frac(1 - kronecker(-4, p) as i64, 4);
    if !h.is_integer() || h < Q::one() {
        return Err(Error::Internal(format!("class number formula gave {h} at p = {p}")));
    }
    h.to_integer().to_u64().ok_or_else(|| Error::Internal("class number overflow".into()))
}

/// Finite quotient of `O` that global units are pushed into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitTarget {
    /// `(O / 2O)^×`.
    ModTwo,
    /// `(O_p / P)^× = F_{p^2}^×`.
    ResidueField,
    /// `(O / mO)^×` for any `m`.
    ModInteger(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitImage {
    pub p: u32,
    pub target: UnitTarget,
    pub global_units: usize,
    pub target_order: usize,
    pub image_order: usize,
    /// Global units mapping to 1, written in the quaternion basis.
    pub kernel: Vec<String>,
    /// `|image \ target|`, the number of cosets of the image.
    pub cosets: usize,
    /// `|image \ target / image|`.
    pub double_cosets: usize,
}

impl UnitImage {
    pub fn is_surjective(&self) -> bool {
        self.image_order == self.target_order
    }
}

fn reduce_mod(o: &QuaternionOrder, x: &[Q], m: u32) -> Result<Vec<u32>> {
    let mm = BigInt::from(m);
    Ok(o.order
        .integer_coordinates(x)?
        .iter()
        .map(|c| c.mod_floor(&mm).to_u32().expect("residue"))
        .collect())
}

fn double_coset_count(a: &QuotientAlgebra, group: &[Vec<u32>], sub: &BTreeSet<Vec<u32>>) -> usize {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut count = 0;
    for g in group {
        if seen.contains(g) {
            continue;
        }
        count += 1;
        for x in sub {
            let xg = a.mul_coords(x, g);
            for y in sub {
                seen.insert(a.mul_coords(&xg, y));
            }
        }
    }
    count
}

/// The image of `O^×` in a finite unit group, its kernel, and coset counts.
pub fn unit_image_double_cosets(p: u32, target: UnitTarget) -> Result<UnitImage> {
    let o = maximal_order(p)?;
    let units = unit_group(&o)?;
    let m = match target {
        UnitTarget::ModTwo => 2,
        UnitTarget::ResidueField => p,
        UnitTarget::ModInteger(m) if is_prime(m) => m,
        UnitTarget::ModInteger(m) => return Err(Error::Usage(format!("modulus {m} must be prime"))),
    };
    let full = o.order.quotient_mod(m, 1)?;
    // the residue field is O/pO modulo its radical
    let (alg, project): (QuotientAlgebra, Box<dyn Fn(Vec<u32>) -> Vec<u32>>) = match target {
        UnitTarget::ResidueField => {
            let j = jacobson_radical(&full)?;
            let rows = j.rows().to_vec();
            let pivots = j.pivots().to_vec();
            let (quot, cols) = full.quotient(&rows)?;
            if quot.dim() != 2 {
                return Err(Error::Internal(format!("O/P has dimension {} over F_{p}", quot.dim())));
            }
            let f = move |mut v: Vec<u32>| {
                reduce_mod_rows(&mut v, &rows, &pivots, m);
                cols.iter().map(|&c| v[c]).collect()
            };
            (quot, Box::new(f))
        }
        _ => (full, Box::new(|v| v)),
    };
    let target_group: Vec<Vec<u32>> = unit_group_of_finite_algebra(&alg)?.into_iter().map(|u| u.coords).collect();
    let one = alg.one_coords().to_vec();
    let mut image = BTreeSet::new();
    let mut kernel = Vec::new();
    for u in &units {
        let r = project(reduce_mod(&o, u, m)?);
        if r == one {
            kernel.push(o.algebra.format(u));
        }
        image.insert(r);
    }
    if target_group.len() % image.len() != 0 {
        return Err(Error::Internal("unit image is not a subgroup".into()));
    }
    Ok(UnitImage {
        p,
        target,
        global_units: units.len(),
        target_order: target_group.len(),
        image_order: image.len(),
        kernel,
        cosets: target_group.len() / image.len(),
        double_cosets: double_coset_count(&alg, &target_group, &image),
    })
}

/// Units of `O` congruent to 1 modulo `m O`. Serre's lemma predicts
/// `{1}` for `m >= 3` and a subset of `{±1}` for `m = 2`.
pub fn serre_kernel(p: u32, m: u32) -> Result<Vec<String>> {
    Ok(unit_image_double_cosets(p, UnitTarget::ModInteger(m))?.kernel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    Formula,
    DoubleCoset,
    Fixture,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassNumber {
    pub h: u64,
    pub justification: Justification,
    pub note: String,
}

/// One genus: a local class at each prime of `S(n̄, p)`.
#[derive(Clone, Debug, Serialize)]
pub struct GenusRecord {
    pub case: NBar,
    pub p: u32,
    pub classes: Vec<LatticeClassLabel>,
    pub endomorphism: Vec<EndomorphismOrder>,
    pub h: u64,
    pub justification: Justification,
    pub note: String,
}

fn fixture(note: &str) -> ClassNumber {
    ClassNumber { h: 1, justification: Justification::Fixture, note: note.into() }
}

fn has_trivial_class_number(d: &EndomorphismOrder) -> bool {
    match d {
        EndomorphismOrder::Determinant { .. } | EndomorphismOrder::Commutative { .. } => true,
        EndomorphismOrder::Components { factors } => factors.iter().all(has_trivial_class_number),
        _ => false,
    }
}

fn single(d: &EndomorphismOrder) -> Result<ClassNumber> {
    use EndomorphismOrder as E;
    Ok(match d {
        E::Determinant { n } => fixture(&format!("det of local units is A_{n}^x; h(A_{n}) = 1")),
        E::Commutative { order } => fixture(&format!("{order} has class number 1")),
        E::MaximalProduct { factors } => {
            let mut h = 1;
            let mut notes = Vec::new();
            let mut any_formula = false;
            for f in factors {
                match f {
                    MaximalFactor::Quaternion { p } => {
                        let hp = h_maximal_quaternion(*p)?;
                        h *= hp;
                        any_formula = true;
                        notes.push(format!("h(O_{p}) = {hp}"));
                    }
                    MaximalFactor::Cyclotomic { n } => notes.push(format!("h(A_{n}) = 1")),
                }
            }
            ClassNumber {
                h,
                justification: if any_formula { Justification::Formula } else { Justification::Fixture },
                note: notes.join(", "),
            }
        }
        E::Congruence { p, n2 } => {
            if *p != 2 && *p != 3 {
                return Err(Error::Unsupported(format!("congruence order at p = {p}")));
            }
            let img = unit_image_double_cosets(*p, UnitTarget::ResidueField)?;
            ClassNumber {
                h: img.cosets as u64,
                justification: Justification::DoubleCoset,
                note: format!(
                    "|O^x \\ F_{}^x| with image of order {} in O x A_{n2}",
                    p * p,
                    img.image_order
                ),
            }
        }
        E::SubdirectSum { p } => {
            if *p != 2 {
                return Err(Error::Unsupported(format!("subdirect sum at p = {p}")));
            }
            let img = unit_image_double_cosets(2, UnitTarget::ModTwo)?;
            if img.kernel.len() != 2 {
                return Err(Error::Internal(format!("kernel of O^x -> (O/2O)^x is {:?}", img.kernel)));
            }
            ClassNumber {
                h: img.double_cosets as u64,
                justification: Justification::DoubleCoset,
                note: format!(
                    "O^x -> (O/2O)^x has image {} of {} and kernel {{{}}}",
                    img.image_order,
                    img.target_order,
                    img.kernel.join(", ")
                ),
            }
        }
        E::Intermediate { p } => {
            let upper = single(&E::SubdirectSum { p: *p })?;
            if upper.h != 1 {
                return Err(Error::Unsupported("h(R) is only bounded when h(A_(1,2)) = 1".into()));
            }
            ClassNumber { h: 1, justification: Justification::DoubleCoset, note: "1 <= h(R) <= h(A_(1,2)) = 1".into() }
        }
        E::Components { factors } => {
            let parts: Vec<ClassNumber> = factors.iter().map(single).collect::<Result<_>>()?;
            let h = parts.iter().map(|c| c.h).product();
            let justification = if parts.iter().any(|c| c.justification == Justification::Formula) {
                Justification::Formula
            } else {
                Justification::Fixture
            };
            ClassNumber { h, justification, note: parts.iter().map(|c| c.note.as_str()).collect::<Vec<_>>().join("; ") }
        }
    })
}

/// Class number of the endomorphism order of a genus, from its local
/// descriptors (one per prime of `S(n̄, p)`).
pub fn class_number_of_genus(descriptors: &[EndomorphismOrder]) -> Result<ClassNumber> {
    match descriptors {
        [] => Err(Error::Usage("a genus needs at least one local descriptor".into())),
        [d] => single(d),
        ds if ds.iter().all(has_trivial_class_number) => {
            Ok(fixture("commutative or isotypic at every prime; class number 1"))
        }
        ds => Err(Error::Unsupported(format!("genus with descriptors {ds:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_formula_values() {
        let got: Vec<u64> = [2, 3, 5, 7, 11, 13].iter().map(|&p| h_maximal_quaternion(p).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 1, 1, 2, 1]);
        for p in (2..=50).filter(|&p| is_prime(p)) {
            assert!(h_maximal_quaternion(p).unwrap() >= 1);
        }
        assert!(h_maximal_quaternion(9).is_err());
    }

    #[test]
    fn mod_two_is_surjective_with_kernel_pm1() {
        let img = unit_image_double_cosets(2, UnitTarget::ModTwo).unwrap();
        assert_eq!((img.global_units, img.target_order, img.image_order), (24, 12, 12));
        assert_eq!(img.kernel, vec!["-1".to_string(), "1".to_string()]);
        assert_eq!(img.double_cosets, 1);
    }

    #[test]
    fn residue_field_images() {
        let f9 = unit_image_double_cosets(3, UnitTarget::ResidueField).unwrap();
        assert_eq!((f9.target_order, f9.image_order, f9.cosets), (8, 4, 2));
        let f4 = unit_image_double_cosets(2, UnitTarget::ResidueField).unwrap();
        assert!(f4.is_surjective());
        assert_eq!(f4.cosets, 1);
    }

    #[test]
    fn serre_kernels() {
        let k2 = serre_kernel(2, 2).unwrap();
        assert!(k2.iter().all(|s| s == "1" || s == "-1"));
        assert_eq!(serre_kernel(3, 3).unwrap(), vec!["1".to_string()]);
    }

    #[test]
    fn genus_dispatch() {
        let congruence = EndomorphismOrder::Congruence { p: 3, n2: 6 };
        assert_eq!(class_number_of_genus(&[congruence]).unwrap().h, 2);
        let prod = EndomorphismOrder::MaximalProduct {
            factors: vec![MaximalFactor::Quaternion { p: 3 }, MaximalFactor::Cyclotomic { n: 6 }],
        };
        assert_eq!(class_number_of_genus(&[prod]).unwrap().h, 1);
        let a12 = class_number_of_genus(&[EndomorphismOrder::SubdirectSum { p: 2 }]).unwrap();
        let r = class_number_of_genus(&[EndomorphismOrder::Intermediate { p: 2 }]).unwrap();
        assert_eq!((a12.h, r.h), (1, 1));
        assert!(a12.h >= r.h);
        assert!(matches!(
            class_number_of_genus(&[EndomorphismOrder::Congruence { p: 5, n2: 10 }]),
            Err(Error::Unsupported(_))
        ));
    }
}
