//! Isomorphism classes of local lattices: Eichler orders, Bass orders with
//! `e in {-1, 0}`, commutative Bass orders, and the finite-quotient orbit
//! censuses for the non-isotypic cases.

use serde::Serialize;

use crate::cyclotomic::{nonmaximal_primes, NBar};
use crate::error::{Error, Result};
use crate::finite::models;
use crate::finite::orbit::orbit_classes_generated;
use crate::finite::radical::{jacobson_radical, SemisimpleType};
use crate::finite::submodule::{enumerate_submodules, FiniteModule, SubmoduleBasis, SubmoduleConstraint};
use crate::finite::units::is_unit;
use crate::finite::vecspace::rref;
use crate::finite::{FiniteField, FqElem, QuotientAlgebra};
use crate::local_orders::{
    cyclotomic_order, discriminant_exponent, eichler_invariant, overorder_chain, overorders, semisimple_kind,
    tensor_local_order, OverorderChain, DEFAULT_PRECISION,
};
use crate::rational::Order;

/// How a class is described.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ClassKind {
    /// `⊕ [O; pi^{e_i} O]` over an Eichler order.
    Column { exponents: Vec<u32> },
    /// The `i`-th order of an overorder chain, as a lattice over the base.
    ChainOrder { index: usize },
    /// Multiplicities in a Bass-order decomposition: `r` copies of
    /// `[O; pi O]`, `s` copies of `[O; O]`, `t_i` copies of `M^i`.
    Decomposition { r: Option<u32>, s: Option<u32>, t: Vec<u32> },
    /// A submodule of a finite quotient, by its echelon rows.
    Explicit { rows: Vec<Vec<u32>> },
    /// One class per factor where the order is locally a product.
    Product { factors: Vec<LatticeClassLabel> },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LatticeClassLabel {
    pub kind: ClassKind,
    pub name: String,
    pub prime: u32,
}

/// `(n̄, p, ℓ)`: lattices over `A_{n̄} (x) O` completed at `ℓ`, where `O`
/// is maximal in the quaternion algebra ramified at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CaseKey {
    pub case: NBar,
    pub p: u32,
    pub ell: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalClassList {
    pub key: CaseKey,
    pub classes: Vec<LatticeClassLabel>,
}

impl LocalClassList {
    pub fn new(key: CaseKey, classes: Vec<LatticeClassLabel>) -> Result<Self> {
        for (i, a) in classes.iter().enumerate() {
            if classes[..i].contains(a) {
                return Err(Error::Internal(format!("duplicate class {} for {:?}", a.name, key)));
            }
        }
        Ok(LocalClassList { key, classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// How the ambient module looks over the hereditary closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ModuleShape {
    /// `B` division, `W = B^r`.
    Division { rank: u32 },
    /// `B = M_2(F)`, `W = M_{2,u}(F)`.
    Split { u: u32 },
}

/// Non-decreasing tuples of length `len` in `0..=max`.
fn monotone_tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in monotone_tuples(len - 1, max) {
        let lo = rest.last().copied().unwrap_or(0);
        for x in lo..=max {
            let mut v = rest.clone();
            v.push(x);
            out.push(v);
        }
    }
    out
}

/// Tuples of non-negative integers of length `len` with `sum w_i x_i = total`.
fn weighted_compositions(weights: &[u32], total: u32) -> Vec<Vec<u32>> {
    match weights.split_first() {
        None => {
            if total == 0 {
                vec![vec![]]
            } else {
                vec![]
            }
        }
        Some((&w, rest)) => {
            let mut out = Vec::new();
            let mut x = 0;
            while x * w <= total {
                for tail in weighted_compositions(rest, total - x * w) {
                    let mut v = vec![x];
                    v.extend(tail);
                    out.push(v);
                }
                x += 1;
            }
            out
        }
    }
}

fn column_name(exponents: &[u32]) -> String {
    exponents
        .iter()
        .map(|&e| match e {
            0 => "[O;O]".to_string(),
            1 => "[O;pi O]".to_string(),
            _ => format!("[O;pi^{e} O]"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Lattices of rank `u` over an Eichler order of level `pi^e`.
pub fn eichler_lattice_classes(key: CaseKey, level_exponent: u32, u: u32) -> Result<LocalClassList> {
    if u == 0 {
        return Err(Error::Usage("multiplicity must be at least 1".into()));
    }
    let classes = monotone_tuples(u as usize, level_exponent)
        .into_iter()
        .map(|exponents| LatticeClassLabel {
            name: column_name(&exponents),
            kind: ClassKind::Column { exponents },
            prime: key.ell,
        })
        .collect();
    LocalClassList::new(key, classes)
}

fn decomposition_name(r: Option<u32>, s: Option<u32>, t: &[u32]) -> String {
    let mut parts = Vec::new();
    if let Some(r) = r.filter(|&r| r > 0) {
        parts.push(format!("[O;pi O]^{r}"));
    }
    if let Some(s) = s.filter(|&s| s > 0) {
        parts.push(format!("[O;O]^{s}"));
    }
    for (i, &ti) in t.iter().enumerate() {
        if ti > 0 {
            parts.push(format!("M^{i}^{ti}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Lattices over a Bass order with `e in {-1, 0}`, from the numerical
/// invariants of its overorder chain.
pub fn bass_lattice_classes(key: CaseKey, chain: &OverorderChain, shape: ModuleShape) -> Result<LocalClassList> {
    let e = chain.eichler_invariant;
    if e != -1 && e != 0 {
        return Err(Error::Usage(format!("Eichler invariant {e}: use eichler_lattice_classes")));
    }
    let m = chain.length();
    let tuples: Vec<(Option<u32>, Option<u32>, Vec<u32>)> = match shape {
        ModuleShape::Division { rank } => {
            weighted_compositions(&vec![1; m + 1], rank).into_iter().map(|t| (None, None, t)).collect()
        }
        ModuleShape::Split { u } if e == -1 => {
            let mut w = vec![1];
            w.extend(std::iter::repeat(2).take(m));
            weighted_compositions(&w, u).into_iter().map(|v| (None, Some(v[0]), v[1..].to_vec())).collect()
        }
        ModuleShape::Split { u } => {
            let mut w = vec![1, 1];
            w.extend(std::iter::repeat(2).take(m));
            weighted_compositions(&w, u)
                .into_iter()
                .map(|v| (Some(v[0]), Some(v[1]), v[2..].to_vec()))
                .collect()
        }
    };
    let classes = tuples
        .into_iter()
        .map(|(r, s, t)| LatticeClassLabel {
            name: decomposition_name(r, s, &t),
            kind: ClassKind::Decomposition { r, s, t },
            prime: key.ell,
        })
        .collect();
    LocalClassList::new(key, classes)
}

/// Lattices in the fraction algebra of a commutative Bass order: one class
/// per overorder.
pub fn commutative_lattice_classes(key: CaseKey, order: &Order) -> Result<LocalClassList> {
    let alg = order.algebra();
    for a in order.basis() {
        for b in order.basis() {
            if alg.mul(a, b) != alg.mul(b, a) {
                return Err(Error::Usage(format!("{} is not commutative", order.label())));
            }
        }
    }
    let overs = overorders(order, key.ell)?;
    let top = overs.len() - 1;
    let classes = overs
        .iter()
        .enumerate()
        .map(|(i, o)| LatticeClassLabel {
            kind: ClassKind::ChainOrder { index: i },
            name: if i == 0 {
                order.label().to_string()
            } else if i == top && overs.iter().all(|x| o.contains_order(x)) {
                "maximal order".to_string()
            } else {
                format!("overorder {i}")
            },
            prime: key.ell,
        })
        .collect();
    LocalClassList::new(key, classes)
}

/// Whether the hereditary closure of a Bass chain is split over its center.
pub fn chain_is_split(chain: &OverorderChain) -> Result<bool> {
    let top = chain.hereditary_closure();
    Ok(matches!(semisimple_kind(top)?, SemisimpleType::FullMatrix | SemisimpleType::SplitPair))
}

/// `dim_Q` of the part of `V` on which `A_n` acts through `Q(zeta_n)`: all
/// of `V` (dimension 8) for a single `n`, one half for each member of a pair.
fn component_dim(case: NBar) -> u32 {
    match case {
        NBar::Single(_) => 8,
        NBar::Pair(..) => 4,
    }
}

/// Classes over `A_{n,p} (x) O_p` for a single `n`, inside a module of
/// `Q`-dimension `dim_v`.
pub fn component_lattice_classes(key: CaseKey, n: u32, dim_v: u32, k: u32) -> Result<LocalClassList> {
    if key.ell != key.p {
        return Err(Error::Usage("component classes are computed at the ramified prime only".into()));
    }
    let model = tensor_local_order(NBar::Single(n), key.p, k)?;
    let center = model
        .center()
        .cloned()
        .ok_or_else(|| Error::Internal(format!("A_{n} has several primes above {}", key.p)))?;
    let e = eichler_invariant(&model)?;
    let deg = center.degree;
    if e >= 1 {
        let level = discriminant_exponent(&model)?;
        let u = dim_v / (2 * deg);
        return eichler_lattice_classes(key, level, u);
    }
    let chain = overorder_chain(&model)?;
    let shape = if chain_is_split(&chain)? {
        ModuleShape::Split { u: dim_v / (2 * deg) }
    } else {
        ModuleShape::Division { rank: dim_v / (4 * deg) }
    };
    bass_lattice_classes(key, &chain, shape)
}

/// The local class lists `L_ell(n̄)` for every `ell` in `S(n̄, p)`.
pub fn local_class_lists(case: NBar, p: u32, k: u32) -> Result<Vec<LocalClassList>> {
    let primes = nonmaximal_primes(case, p)?;
    let mut out = Vec::new();
    for ell in primes {
        let key = CaseKey { case, p, ell };
        let list = match (case, ell == p) {
            (NBar::Single(n), true) => component_lattice_classes(key, n, component_dim(case), k)?,
            (NBar::Pair(1, 2), true) | (NBar::Pair(3, 6), true) | (NBar::Pair(2, 4), true) | (NBar::Pair(2, 6), true)
                if has_quotient_census(case, p) =>
            {
                quotient_orbit_classification(case, p)?
            }
            (NBar::Pair(n1, n2), true) => product_classes(key, &[n1, n2], k)?,
            (NBar::Pair(..), false) => {
                // O is split at ell, so A (x) O is Morita equivalent to A.
                let a = cyclotomic_order(case)?;
                commutative_lattice_classes(key, &a)?
            }
            (NBar::Single(_), false) => {
                return Err(Error::Unsupported(format!("single case {case} at ell = {ell} != p")));
            }
        };
        out.push(list);
    }
    Ok(out)
}

/// Cases where `A_{n̄}` is not locally a product at `p`.
pub fn has_quotient_census(case: NBar, p: u32) -> bool {
    matches!((case, p), (NBar::Pair(1, 2), 2) | (NBar::Pair(3, 6), 2) | (NBar::Pair(2, 4), 2) | (NBar::Pair(2, 6), 3))
}

/// Classes over `A_{n1} x A_{n2}` at `p` when `A_{n̄}` is locally the
/// product: pairs of component classes.
fn product_classes(key: CaseKey, ns: &[u32], k: u32) -> Result<LocalClassList> {
    let parts: Vec<LocalClassList> = ns
        .iter()
        .map(|&n| component_lattice_classes(key, n, component_dim(key.case), k))
        .collect::<Result<_>>()?;
    let mut combos: Vec<Vec<LatticeClassLabel>> = vec![vec![]];
    for part in &parts {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                part.classes.iter().map(move |x| {
                    let mut v = c.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    let classes = combos
        .into_iter()
        .map(|c| LatticeClassLabel {
            name: c.iter().map(|x| x.name.as_str()).collect::<Vec<_>>().join(" x "),
            kind: ClassKind::Product { factors: c },
            prime: key.ell,
        })
        .collect();
    LocalClassList::new(key, classes)
}

/// Which model of `F_{p^2}` a census is run in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldModel {
    Standard,
    /// A second, independently constructed model of the same field.
    Alternative,
}

/// Orbits of generating submodules of one `Δ̄`.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaCensus {
    pub delta: String,
    /// Submodules passing the generation condition, before taking orbits.
    pub generating_submodules: usize,
    pub orbits: Vec<LatticeClassLabel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientCensus {
    pub key: CaseKey,
    pub field_model: FieldModel,
    /// Coefficients of the modulus of the field, lowest degree first.
    pub modulus: Vec<u32>,
    pub deltas: Vec<DeltaCensus>,
}

impl QuotientCensus {
    pub fn counts(&self) -> Vec<usize> {
        self.deltas.iter().map(|d| d.orbits.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }
}

/// Which column of the trivial extension `Ē`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EColumn {
    /// First column, `(x, z) -> (a x, c x + d z)`.
    Dagger,
    /// Second column, `(y, w) -> (a y + b w, d w)`.
    DoubleDagger,
}

impl EColumn {
    fn symbol(self) -> &'static str {
        match self {
            EColumn::Dagger => "†",
            EColumn::DoubleDagger => "‡",
        }
    }
}

/// Row-convention matrix of `g = <a b; c d>` on a column of `Ē`.
pub fn e_column_action(g: &[u32], column: EColumn) -> Vec<Vec<u32>> {
    let (a, b, c, d) = (g[0], g[1], g[2], g[3]);
    match column {
        EColumn::Dagger => vec![vec![a, c], vec![0, d]],
        EColumn::DoubleDagger => vec![vec![a, 0], vec![b, d]],
    }
}

fn primitive_element(f: &FiniteField) -> FqElem {
    let q = f.order() as u64;
    f.elements().find(|&a| a.0 != 0 && f.multiplicative_order(a) == q - 1).expect("finite fields are cyclic")
}

fn block_diag(blocks: &[Vec<Vec<u32>>]) -> Vec<Vec<u32>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![0u32; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            out[off + i][off..off + row.len()].copy_from_slice(row);
        }
        off += b.len();
    }
    out
}

fn identity(f: &FiniteField, n: usize) -> Vec<Vec<u32>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one().0 } else { 0 }).collect()).collect()
}

fn scalar(n: usize, s: FqElem) -> Vec<Vec<u32>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { s.0 } else { 0 }).collect()).collect()
}

/// The four `B̄`-lattices `Δ` of the `(3,6)` case at 2, as column pairs,
/// in report order.
pub const THREE_SIX_DELTAS: [(EColumn, EColumn); 4] = [
    (EColumn::Dagger, EColumn::Dagger),
    (EColumn::DoubleDagger, EColumn::DoubleDagger),
    (EColumn::Dagger, EColumn::DoubleDagger),
    (EColumn::DoubleDagger, EColumn::Dagger),
];

/// Writes `F_4`-matrices over `F_2` through `F_4 ⊂ F_16 = F_2[x]/(x^4+x+1)`,
/// using the normal basis `{w, w^2}` with `w = x^5`.
struct F4InsideF16 {
    f4: FiniteField,
    f16: FiniteField,
    omega: FqElem,
}

impl F4InsideF16 {
    fn new() -> Result<Self> {
        let f16 = FiniteField::with_modulus(2, &[1, 1, 0, 0, 1])?;
        let x = f16.from_coords(&[0, 1, 0, 0]);
        let omega = f16.pow(x, 5);
        if f16.multiplicative_order(omega) != 3 {
            return Err(Error::Internal("x^5 does not have order 3 in F_16".into()));
        }
        Ok(F4InsideF16 { f4: FiniteField::quadratic(2)?, f16, omega })
    }

    fn embed(&self, c: u32) -> FqElem {
        let cs = self.f4.coords(FqElem(c));
        let f = &self.f16;
        f.add(f.from_int(cs[0] as i64), f.mul(f.from_int(cs[1] as i64), self.omega))
    }

    /// Coordinates of an element of the subfield in the basis `{w, w^2}`.
    fn normal_coords(&self, z: FqElem) -> Result<[u32; 2]> {
        let f = &self.f16;
        let w2 = f.mul(self.omega, self.omega);
        for a in 0..2u32 {
            for b in 0..2u32 {
                let v = f.add(f.mul(f.from_int(a as i64), self.omega), f.mul(f.from_int(b as i64), w2));
                if v == z {
                    return Ok([a, b]);
                }
            }
        }
        Err(Error::Internal("element outside the subfield F_4".into()))
    }

    fn restrict(&self, m: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
        let n = m.len();
        let f = &self.f16;
        let basis = [self.omega, f.mul(self.omega, self.omega)];
        let mut out = vec![vec![0u32; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let e = self.embed(m[i][j]);
                for (r, &b) in basis.iter().enumerate() {
                    let c = self.normal_coords(f.mul(b, e))?;
                    out[2 * i + r][2 * j] = c[0];
                    out[2 * i + r][2 * j + 1] = c[1];
                }
            }
        }
        Ok(out)
    }
}

fn census_of(
    field: &FiniteField,
    dim: usize,
    ops: Vec<Vec<Vec<u32>>>,
    split: usize,
    group: &[Vec<Vec<u32>>],
    label: &str,
) -> Result<(Vec<SubmoduleBasis>, Vec<SubmoduleBasis>)> {
    let module = FiniteModule::new(field.clone(), dim, ops, label)?;
    let subs = enumerate_submodules(&module, &SubmoduleConstraint::ProjectionsSurjective { split });
    let orbits = orbit_classes_generated(field, &subs, group)?;
    Ok((subs, orbits.into_iter().map(|o| o.representative).collect()))
}

fn three_six_shape(dim_over_f4: usize) -> &'static str {
    match dim_over_f4 {
        2 => "graph",
        3 => "index-1 congruence",
        4 => "ambient",
        _ => "other",
    }
}

/// `(3,6)` at 2: orbits of `F_4^× x F_4^×` on generating `Ē`-submodules of
/// each `Δ̄`.
fn three_six_census(model: FieldModel) -> Result<QuotientCensus> {
    let f4 = FiniteField::quadratic(2)?;
    let e = models::trivial_extension(&f4)?;
    let restrict = match model {
        FieldModel::Standard => None,
        FieldModel::Alternative => Some(F4InsideF16::new()?),
    };
    let w = f4.generator();
    let key = CaseKey { case: NBar::Pair(3, 6), p: 2, ell: 2 };
    let mut deltas = Vec::new();
    for (c1, c2) in THREE_SIX_DELTAS {
        let name = format!("{}x{}", c1.symbol(), c2.symbol());
        let mut ops: Vec<Vec<Vec<u32>>> = (0..4)
            .map(|i| {
                let g = e.basis_coords(i);
                block_diag(&[e_column_action(&g, c1), e_column_action(&g, c2)])
            })
            .collect();
        let mut group = vec![
            block_diag(&[scalar(2, w), identity(&f4, 2)]),
            block_diag(&[identity(&f4, 2), scalar(2, w)]),
        ];
        let (field, dim, split, per_f4) = match &restrict {
            None => (f4.clone(), 4, 2, 1),
            Some(r) => {
                // F_4-linearity has to be imposed explicitly over F_2
                ops.push(scalar(4, w));
                ops = ops.iter().map(|m| r.restrict(m)).collect::<Result<_>>()?;
                group = group.iter().map(|m| r.restrict(m)).collect::<Result<_>>()?;
                (FiniteField::prime(2)?, 8, 4, 2)
            }
        };
        let (subs, reps) = census_of(&field, dim, ops, split, &group, &name)?;
        let orbits = reps
            .into_iter()
            .map(|s| LatticeClassLabel {
                name: format!("{name}: {}", three_six_shape(s.dim() / per_f4)),
                kind: ClassKind::Explicit { rows: s.rows().to_vec() },
                prime: 2,
            })
            .collect();
        deltas.push(DeltaCensus { delta: name, generating_submodules: subs.len(), orbits });
    }
    let modulus = match &restrict {
        None => f4.modulus().to_vec(),
        Some(r) => r.f16.modulus().to_vec(),
    };
    Ok(QuotientCensus { key, field_model: model, modulus, deltas })
}

/// `(2, 2p)` at `p`: orbits of `Ō_p^× x F_p^×` on generating
/// `Ō_p`-submodules of `Δ̄ = Ō_p x F_{p^2}`, over `F_p`.
fn two_two_p_census(p: u32, model: FieldModel) -> Result<QuotientCensus> {
    let f = match (model, p) {
        (FieldModel::Standard, _) => FiniteField::quadratic(p)?,
        (FieldModel::Alternative, 3) => FiniteField::with_modulus(3, &[2, 1, 1])?,
        (FieldModel::Alternative, _) => {
            return Err(Error::Usage(format!("no alternative model of F_{} is available", p * p)));
        }
    };
    let o = models::residue_maximal_order_with(&f)?;
    let fp = FiniteField::prime(p)?;
    let key = CaseKey { case: NBar::Pair(2, 2 * p), p, ell: p };
    // x + y eta acts on the simple module F_{p^2} through x
    let ops: Vec<Vec<Vec<u32>>> = (0..4)
        .map(|i| {
            let x = o.basis_coords(i);
            block_diag(&[o.left_mul_matrix(&x), f.mul_matrix(f.from_coords(&x[..2]))])
        })
        .collect();
    let units: Vec<Vec<u32>> = (0..o.cardinality().unwrap_or(0))
        .map(|i| o.element_at(i))
        .filter(|x| is_unit(&o, x))
        .collect();
    let mut group: Vec<Vec<Vec<u32>>> =
        units.iter().map(|u| block_diag(&[o.right_mul_matrix(u), identity(&fp, 2)])).collect();
    group.push(block_diag(&[identity(&fp, 4), scalar(2, primitive_element(&fp))]));
    let (subs, reps) = census_of(&fp, 6, ops, 4, &group, "Ō_p x F_p^2")?;
    let gamma = SubmoduleBasis::span(
        &fp,
        6,
        &[vec![1, 0, 0, 0, 1, 0], vec![0, 1, 0, 0, 0, 1], vec![0, 0, 1, 0, 0, 0], vec![0, 0, 0, 1, 0, 0]],
    );
    let mut orbits = Vec::new();
    for s in reps {
        let label = match s.dim() {
            6 => LatticeClassLabel { kind: ClassKind::Explicit { rows: s.rows().to_vec() }, name: "Delta".into(), prime: p },
            4 if subs.contains(&gamma) => LatticeClassLabel {
                kind: ClassKind::Explicit { rows: gamma.rows().to_vec() },
                name: "Gamma (a = c)".into(),
                prime: p,
            },
            d => {
                return Err(Error::Internal(format!("unexpected generating submodule of F_p-dimension {d}")));
            }
        };
        orbits.push(label);
    }
    orbits.sort_by(|a, b| a.name.cmp(&b.name));
    let deltas = vec![DeltaCensus { delta: "Ō_p x F_p^2".into(), generating_submodules: subs.len(), orbits }];
    Ok(QuotientCensus { key, field_model: model, modulus: f.modulus().to_vec(), deltas })
}

/// The finite-quotient censuses for `((3,6), 2)`, `((2,4), 2)`, `((2,6), 3)`.
pub fn quotient_census(case: NBar, p: u32, model: FieldModel) -> Result<QuotientCensus> {
    match (case, p) {
        (NBar::Pair(3, 6), 2) => three_six_census(model),
        (NBar::Pair(2, 4), 2) => two_two_p_census(2, model),
        (NBar::Pair(2, 6), 3) => two_two_p_census(3, model),
        _ => Err(Error::Usage(format!("no quotient census for ({case}, {p})"))),
    }
}

/// Lattices over `A_{(1,2),2} (x) O_2`: it is Gorenstein, so every lattice
/// is isomorphic to an overorder.
fn one_two_classes() -> Result<LocalClassList> {
    let key = CaseKey { case: NBar::Pair(1, 2), p: 2, ell: 2 };
    let model = tensor_local_order(NBar::Pair(1, 2), 2, DEFAULT_PRECISION)?;
    let overs = overorders(model.order(), 2)?;
    let names = ["A_(1,2)", "R", "O x O"];
    if overs.len() != names.len() {
        return Err(Error::Internal(format!("expected 3 overorders of A_(1,2) (x) O_2, found {}", overs.len())));
    }
    let classes = names
        .iter()
        .enumerate()
        .map(|(i, n)| LatticeClassLabel { kind: ClassKind::ChainOrder { index: i }, name: n.to_string(), prime: 2 })
        .collect();
    LocalClassList::new(key, classes)
}

/// Class list for the cases settled at the level of a finite quotient.
pub fn quotient_orbit_classification(case: NBar, p: u32) -> Result<LocalClassList> {
    if (case, p) == (NBar::Pair(1, 2), 2) {
        return one_two_classes();
    }
    let census = quotient_census(case, p, FieldModel::Standard)?;
    let classes = census.deltas.into_iter().flat_map(|d| d.orbits).collect();
    LocalClassList::new(census.key, classes)
}

/// Whether some invertible `F_4`-linear map intertwines the two column
/// modules of `Ē`.
pub fn e_columns_isomorphic(a: EColumn, b: EColumn) -> Result<bool> {
    let f4 = FiniteField::quadratic(2)?;
    let e = models::trivial_extension(&f4)?;
    let mul = |x: &[Vec<u32>], y: &[Vec<u32>]| crate::finite::vecspace::mat_mul(&f4, x, y);
    for code in 0..256u32 {
        let t: Vec<Vec<u32>> = vec![vec![code % 4, (code / 4) % 4], vec![(code / 16) % 4, code / 64]];
        let mut tt = t.clone();
        if rref(&f4, &mut tt).len() < 2 {
            continue;
        }
        let intertwines = (0..4).all(|i| {
            let g = e.basis_coords(i);
            mul(&e_column_action(&g, a), &t) == mul(&t, &e_column_action(&g, b))
        });
        if intertwines {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Brute-force count of lattices over a Bass order next to the count from
/// its chain invariants.
#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub case: NBar,
    pub p: u32,
    pub u: u32,
    /// `F_p`-dimension of `M / pi^c M` for the hereditary closure `M`.
    pub quotient_dim: usize,
    pub brute_force: usize,
    pub from_invariants: usize,
}

/// Coordinates of the vectors of a subspace `S` in its echelon basis.
struct Subspace {
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(f: &FiniteField, gens: Vec<Vec<u32>>) -> Self {
        let mut rows = gens;
        let pivots = rref(f, &mut rows);
        Subspace { rows, pivots }
    }

    fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    fn operator(&self, image: impl Fn(&[u32]) -> Vec<u32>) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| self.coords(&image(r))).collect()
    }
}

fn is_nilpotent(a: &QuotientAlgebra, x: &[u32]) -> bool {
    let mut y = x.to_vec();
    for _ in 0..=a.dim() {
        if y.iter().all(|&c| c == 0) {
            return true;
        }
        y = a.mul_coords(&y, x);
    }
    false
}

/// A nontrivial idempotent, lifted from one modulo the radical.
fn nontrivial_idempotent(a: &QuotientAlgebra) -> Result<Vec<u32>> {
    let one = a.one_coords().to_vec();
    let zero = vec![0u32; a.dim()];
    let three = a.scale_coords(3 % a.ring().characteristic_prime(), &one);
    let two = a.scale_coords(2 % a.ring().characteristic_prime(), &one);
    for i in 0..a.cardinality().unwrap_or(0) {
        let y = a.element_at(i);
        let y2 = a.mul_coords(&y, &y);
        if !is_nilpotent(a, &a.sub_coords(&y2, &y)) {
            continue;
        }
        // e -> 3e^2 - 2e^3 converges to an idempotent
        let mut e = y;
        for _ in 0..2 * a.dim() + 2 {
            let e2 = a.mul_coords(&e, &e);
            let e3 = a.mul_coords(&e2, &e);
            e = a.sub_coords(&a.mul_coords(&three, &e2), &a.mul_coords(&two, &e3));
        }
        if a.mul_coords(&e, &e) == e && e != zero && e != one {
            return Ok(e);
        }
    }
    Err(Error::Internal(format!("{}: no nontrivial idempotent", a.label())))
}

/// Generators of the unit group of a finite algebra over `F_p`: `1 + b` for
/// bases of every power of the radical, and every unit supported on a
/// complement of the radical.
fn unit_generators(a: &QuotientAlgebra) -> Result<Vec<Vec<u32>>> {
    let f = FiniteField::prime(a.ring().characteristic_prime())?;
    let j = jacobson_radical(a)?;
    let one = a.one_coords().to_vec();
    let mut gens = Vec::new();
    let mut power: Vec<Vec<u32>> = j.rows().to_vec();
    while !power.is_empty() {
        gens.extend(power.iter().map(|b| a.add_coords(&one, b)));
        let prods: Vec<Vec<u32>> =
            power.iter().flat_map(|x| j.rows().iter().map(move |y| a.mul_coords(x, y))).collect();
        power = Subspace::new(&f, prods).rows;
    }
    let free: Vec<usize> = (0..a.dim()).filter(|c| !j.pivots().contains(c)).collect();
    let q = f.order() as u64;
    for code in 0..q.pow(free.len() as u32) {
        let mut x = vec![0u32; a.dim()];
        let mut c = code;
        for &col in &free {
            x[col] = (c % q) as u32;
            c /= q;
        }
        if is_unit(a, &x) {
            gens.push(x);
        }
    }
    Ok(gens)
}

/// Counts lattices over `A_{n,p} (x) O_p` (split, `e = -1`) in
/// `M_{2,u}(F)` directly: sublattices between `pi^c M` and `M` for the
/// hereditary closure `M` that are stable, generate, and are counted up to
/// `End_M(M)^×`.
pub fn bass_count_oracle(n: u32, p: u32, u: u32, k: u32) -> Result<OracleComparison> {
    if u != 1 && u != 2 {
        return Err(Error::Usage("the oracle handles u = 1 and u = 2".into()));
    }
    let case = NBar::Single(n);
    let model = tensor_local_order(case, p, k)?;
    let chain = overorder_chain(&model)?;
    if chain.eichler_invariant != -1 || !chain_is_split(&chain)? {
        return Err(Error::Usage(format!("({n}, {p}) is not a split Bass order with e = -1")));
    }
    let top = chain.hereditary_closure().order();
    let alg = top.algebra();
    let c = chain.links[0].discriminant_exponent / 2;
    let pi = &model.center().ok_or_else(|| Error::Internal("missing center".into()))?.uniformizer;
    let pic = alg.pow(pi, c);
    for b in top.basis() {
        if !model.order().contains(&alg.mul(&pic, b)) {
            return Err(Error::Internal(format!("pi^{c} M is not contained in A_{n} (x) O_{p}")));
        }
    }
    let cq = top.central_quotient(&pic, p)?;
    let a = &cq.algebra;
    let fp = FiniteField::prime(p)?;
    let dim = a.dim();
    let delta = if u == 2 {
        Subspace::new(&fp, (0..dim).map(|i| a.basis_coords(i)).collect())
    } else {
        let e = nontrivial_idempotent(a)?;
        Subspace::new(&fp, (0..dim).map(|i| a.mul_coords(&a.basis_coords(i), &e)).collect())
    };
    if delta.rows.len() * 2 != dim * u as usize {
        return Err(Error::Internal(format!("column module has dimension {} in {dim}", delta.rows.len())));
    }
    let left = |x: Vec<u32>| delta.operator(move |v| a.mul_coords(&x, v));
    let ops: Vec<Vec<Vec<u32>>> =
        model.order().basis().iter().map(|b| cq.reduce(top, b).map(left)).collect::<Result<_>>()?;
    let big: Vec<Vec<Vec<u32>>> = (0..dim).map(|i| left(a.basis_coords(i))).collect();
    let module = FiniteModule::new(fp.clone(), delta.rows.len(), ops, format!("A_{n} on M/pi^{c}M"))?;
    let subs = enumerate_submodules(&module, &SubmoduleConstraint::GeneratesUnder(big));
    let endo: Vec<Vec<u32>> = if u == 2 {
        unit_generators(a)?
    } else {
        // End is the center O_F / pi^c acting by scalars
        let z = a.center_basis()?;
        let q = p as u64;
        (0..q.pow(z.len() as u32))
            .map(|code| {
                let mut x = vec![0u32; dim];
                let mut cc = code;
                for b in &z {
                    x = a.add_coords(&x, &a.scale_coords((cc % q) as u32, b));
                    cc /= q;
                }
                x
            })
            .filter(|x| is_unit(a, x))
            .collect()
    };
    let group: Vec<Vec<Vec<u32>>> = endo.iter().map(|g| delta.operator(|v| a.mul_coords(v, g))).collect();
    let brute_force = orbit_classes_generated(&fp, &subs, &group)?.len();
    let key = CaseKey { case, p, ell: p };
    let from_invariants = bass_lattice_classes(key, &chain, ModuleShape::Split { u })?.len();
    Ok(OracleComparison { case, p, u, quotient_dim: dim, brute_force, from_invariants })
}

/// A maximal factor of a global endomorphism order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum MaximalFactor {
    /// The maximal order `O` of `D_{p,inf}`.
    Quaternion { p: u32 },
    /// `A_n = Z[zeta_n]`.
    Cyclotomic { n: u32 },
}

/// The type of the global endomorphism order of a genus, as far as the
/// class number needs it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EndomorphismOrder {
    /// Isotypic `n`: `det` of the local unit group is `A_{n,p}^×`, so the
    /// class number is `h(A_n)`.
    Determinant { n: u32 },
    /// A commutative order, `A_{n̄}` or `O_K`.
    Commutative { order: String },
    MaximalProduct { factors: Vec<MaximalFactor> },
    /// `{(x, y) in O x A_{n2} : x ≡ y mod P}`.
    Congruence { p: u32, n2: u32 },
    /// `A_{(1,2)} (x) O` itself.
    SubdirectSum { p: u32 },
    /// The order strictly between `A_{(1,2)} (x) O` and `O x O`.
    Intermediate { p: u32 },
    /// One descriptor per component where `A_{n̄}` is locally a product.
    Components { factors: Vec<EndomorphismOrder> },
}

fn component_endomorphism(n: u32, p: u32) -> EndomorphismOrder {
    if n <= 2 {
        EndomorphismOrder::MaximalProduct { factors: vec![MaximalFactor::Quaternion { p }] }
    } else {
        EndomorphismOrder::Determinant { n }
    }
}

/// Endomorphism order type of the genus through a local class.
pub fn endomorphism_order(label: &LatticeClassLabel, key: CaseKey) -> Result<EndomorphismOrder> {
    let CaseKey { case, p, ell } = key;
    let unknown = || Error::Usage(format!("class {} does not belong to ({case}, {p}) at {ell}", label.name));
    Ok(match case {
        NBar::Single(n) => EndomorphismOrder::Determinant { n },
        NBar::Pair(n1, n2) if ell != p => match &label.kind {
            ClassKind::ChainOrder { index: 0 } => EndomorphismOrder::Commutative { order: format!("A_({n1},{n2})") },
            ClassKind::ChainOrder { .. } => EndomorphismOrder::Commutative { order: format!("O_K for ({n1},{n2})") },
            _ => return Err(unknown()),
        },
        NBar::Pair(1, 2) => match &label.kind {
            ClassKind::ChainOrder { index: 0 } => EndomorphismOrder::SubdirectSum { p },
            ClassKind::ChainOrder { index: 1 } => EndomorphismOrder::Intermediate { p },
            ClassKind::ChainOrder { index: 2 } => EndomorphismOrder::MaximalProduct {
                factors: vec![MaximalFactor::Quaternion { p }, MaximalFactor::Quaternion { p }],
            },
            _ => return Err(unknown()),
        },
        NBar::Pair(2, n2) if n2 == 2 * p => match label.name.as_str() {
            "Delta" => EndomorphismOrder::MaximalProduct {
                factors: vec![MaximalFactor::Quaternion { p }, MaximalFactor::Cyclotomic { n: n2 }],
            },
            name if name.starts_with("Gamma") => EndomorphismOrder::Congruence { p, n2 },
            _ => return Err(unknown()),
        },
        NBar::Pair(3, 6) => EndomorphismOrder::Commutative { order: "A_(3,6) or O_K".into() },
        NBar::Pair(n1, n2) => match &label.kind {
            ClassKind::Product { factors } if factors.len() == 2 => EndomorphismOrder::Components {
                factors: vec![component_endomorphism(n1, p), component_endomorphism(n2, p)],
            },
            _ => return Err(unknown()),
        },
    })
}
