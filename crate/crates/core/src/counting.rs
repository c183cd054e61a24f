//! `o(n̄)` as a sum of class numbers over genera, and the total
//! `|SSp_2(F_q)|` from the eleven values of a row.

use serde::{Serialize, Serializer};

use crate::class_numbers::{class_number_of_genus, GenusRecord, Justification};
use crate::cyclotomic::NBar;
use crate::error::{Error, Result};
use crate::lattice_classes::{endomorphism_order, has_quotient_census, local_class_lists, LatticeClassLabel, LocalClassList};

/// Where a number in a report comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    FixtureConcludingTable,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::FixtureConcludingTable => "fixture:concluding-table",
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// The eleven cases of a row, in table order.
pub const COLUMNS: [NBar; 11] = [
    NBar::Single(3),
    NBar::Single(4),
    NBar::Single(5),
    NBar::Single(8),
    NBar::Single(12),
    NBar::Pair(1, 2),
    NBar::Pair(2, 3),
    NBar::Pair(2, 4),
    NBar::Pair(2, 6),
    NBar::Pair(3, 4),
    NBar::Pair(3, 6),
];

/// Coefficients of the columns in the total; `o(1) = o(2) = 1` and the
/// symmetries `o(n) = o(n')` for `n' = 6, 10, ...` account for the 2's.
pub const WEIGHTS: [u64; 11] = [2, 1, 2, 1, 1, 1, 2, 2, 2, 2, 1];
pub const CONSTANT_TERM: u64 = 2;

pub const PRIMES: [u32; 3] = [2, 3, 5];

#[derive(Clone, Debug, Serialize)]
pub struct FixtureEntry {
    pub o: u64,
    pub location: String,
}

/// Values quoted from the concluding table, read-only.
#[derive(Clone, Debug)]
pub struct FixtureTable {
    rows: [(u32, [u64; 11]); 3],
}

impl FixtureTable {
    pub fn concluding() -> Self {
        FixtureTable {
            rows: [
                (2, [3, 2, 2, 1, 3, 3, 2, 2, 4, 2, 8]),
                (3, [2, 3, 2, 4, 3, 3, 1, 4, 3, 2, 2]),
                (5, [3, 1, 1, 4, 4, 4, 2, 0, 6, 0, 8]),
            ],
        }
    }

    pub fn get(&self, case: NBar, p: u32) -> Result<FixtureEntry> {
        let col = COLUMNS
            .iter()
            .position(|&c| c == case)
            .ok_or_else(|| Error::Usage(format!("{case} is not a column of the table")))?;
        let (_, row) = self
            .rows
            .iter()
            .find(|(q, _)| *q == p)
            .ok_or_else(|| Error::Usage(format!("no fixture row for p = {p}")))?;
        Ok(FixtureEntry { o: row[col], location: format!("concluding table, row p={p}, column {case}") })
    }
}

/// Whether `o(n̄)` at `p` is derived here rather than quoted.
pub fn is_computed(case: NBar, p: u32) -> bool {
    match case {
        NBar::Single(n) => [3, 4, 5, 8, 12].contains(&n) && n % p == 0 && PRIMES.contains(&p),
        NBar::Pair(1, 2) | NBar::Pair(2, 4) => p == 2,
        NBar::Pair(2, 3) | NBar::Pair(2, 6) => p == 3,
        NBar::Pair(3, 4) | NBar::Pair(3, 6) => p == 2 || p == 3,
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    pub case: NBar,
    pub p: u32,
    pub o: u64,
    pub provenance: Provenance,
    pub local_classes: Vec<LocalClassList>,
    pub genera: Vec<GenusRecord>,
    /// Which operation produced each factor.
    pub trace: Vec<String>,
}

fn genera(case: NBar, p: u32, lists: &[LocalClassList]) -> Result<Vec<GenusRecord>> {
    let mut tuples: Vec<Vec<LatticeClassLabel>> = vec![vec![]];
    for l in lists {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                l.classes.iter().map(move |c| {
                    let mut v = t.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|classes| {
            let endomorphism = classes
                .iter()
                .zip(lists)
                .map(|(c, l)| endomorphism_order(c, l.key))
                .collect::<Result<Vec<_>>>()?;
            let h = class_number_of_genus(&endomorphism)?;
            Ok(GenusRecord { case, p, classes, endomorphism, h: h.h, justification: h.justification, note: h.note })
        })
        .collect()
}

fn assemble(case: NBar, p: u32, k: u32) -> Result<CountResult> {
    let lists = local_class_lists(case, p, k)?;
    let genera = genera(case, p, &lists)?;
    let o = genera.iter().map(|g| g.h).sum();
    let mut trace: Vec<String> = lists
        .iter()
        .map(|l| format!("|L_{}| = {} ({})", l.key.ell, l.len(), class_list_source(case, p, l.key.ell)))
        .collect();
    let by = |j| genera.iter().filter(|g| g.justification == j).count();
    trace.push(format!(
        "{} genera: {} by mass formula, {} by double cosets, {} with h = 1 from the local description",
        genera.len(),
        by(Justification::Formula),
        by(Justification::DoubleCoset),
        by(Justification::Fixture)
    ));
    Ok(CountResult { case, p, o, provenance: Provenance::Computed, local_classes: lists, genera, trace })
}

fn class_list_source(case: NBar, p: u32, ell: u32) -> &'static str {
    match (case, ell == p) {
        (NBar::Single(_), _) => "component_lattice_classes",
        (NBar::Pair(1, 2), true) => "overorders",
        (NBar::Pair(..), true) if has_quotient_census(case, p) => "quotient census",
        (NBar::Pair(..), true) => "product of components",
        (NBar::Pair(..), false) => "commutative_lattice_classes",
    }
}

/// `o(n)` for the isotypic cases with `p | n`.
pub fn o_isotypic(n: u32, p: u32, k: u32) -> Result<CountResult> {
    let case = NBar::Single(n);
    if !is_computed(case, p) {
        return Err(Error::Usage(format!("o({n}) at p = {p} is outside the isotypic scope")));
    }
    assemble(case, p, k)
}

/// `o(n1, n2)` for the non-isotypic cases derived here.
pub fn o_pair(case: NBar, p: u32, k: u32) -> Result<CountResult> {
    if !matches!(case, NBar::Pair(..)) || !is_computed(case, p) {
        return Err(Error::Usage(format!("o{case} at p = {p} is outside the non-isotypic scope")));
    }
    assemble(case, p, k)
}

/// Computed value when in scope, fixture otherwise.
pub fn o_value(case: NBar, p: u32, k: u32) -> Result<CountResult> {
    if is_computed(case, p) {
        return assemble(case, p, k);
    }
    let f = FixtureTable::concluding().get(case, p)?;
    Ok(CountResult {
        case,
        p,
        o: f.o,
        provenance: Provenance::FixtureConcludingTable,
        local_classes: vec![],
        genera: vec![],
        trace: vec![f.location],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TotalColumn {
    pub case: NBar,
    pub weight: u64,
    pub o: u64,
    pub provenance: Provenance,
    /// The table value, for computed entries a cross-check.
    pub table_value: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TotalReport {
    pub p: u32,
    pub constant_term: u64,
    pub columns: Vec<TotalColumn>,
    pub total: u64,
}

/// `|SSp_2(F_q)|`-style total for `p in {2, 3, 5}`:
/// `2 + 2 o(3) + o(4) + 2 o(5) + o(8) + o(12) + o(1,2) + 2 o(2,3)
///  + 2 o(2,4) + 2 o(2,6) + 2 o(3,4) + o(3,6)`.
pub fn ssp2_total(p: u32, k: u32) -> Result<TotalReport> {
    if !PRIMES.contains(&p) {
        return Err(Error::Usage(format!("p = {p} is outside 2, 3, 5")));
    }
    let table = FixtureTable::concluding();
    let mut columns = Vec::new();
    for (case, weight) in COLUMNS.iter().zip(WEIGHTS) {
        let r = o_value(*case, p, k)?;
        columns.push(TotalColumn {
            case: *case,
            weight,
            o: r.o,
            provenance: r.provenance,
            table_value: table.get(*case, p)?.o,
        });
    }
    let total = CONSTANT_TERM + columns.iter().map(|c| c.weight * c.o).sum::<u64>();
    Ok(TotalReport { p, constant_term: CONSTANT_TERM, columns, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_orders::DEFAULT_PRECISION;

    #[test]
    fn fixture_rows_give_stated_totals() {
        let t = FixtureTable::concluding();
        for (p, want) in [(2, 49), (3, 45), (5, 47)] {
            let s: u64 = COLUMNS.iter().zip(WEIGHTS).map(|(c, w)| w * t.get(*c, p).unwrap().o).sum();
            assert_eq!(s + CONSTANT_TERM, want);
        }
        assert!(t.get(NBar::Single(7), 2).is_err());
        assert!(t.get(NBar::Single(3), 7).is_err());
    }

    #[test]
    fn computed_scope() {
        let n = |p| COLUMNS.iter().filter(|c| is_computed(**c, p)).count();
        assert_eq!((n(2), n(3), n(5)), (7, 6, 1));
    }

    #[test]
    fn isotypic_values() {
        for (n, p, want) in [(3, 3, 2), (4, 2, 2), (5, 5, 1), (8, 2, 1), (12, 2, 3), (12, 3, 3)] {
            assert_eq!(o_isotypic(n, p, DEFAULT_PRECISION).unwrap().o, want, "({n}, {p})");
        }
        assert!(o_isotypic(4, 3, DEFAULT_PRECISION).is_err());
    }

    #[test]
    fn pair_values() {
        let cases = [
            (NBar::Pair(1, 2), 2, 3),
            (NBar::Pair(2, 3), 3, 1),
            (NBar::Pair(2, 4), 2, 2),
            (NBar::Pair(2, 6), 3, 3),
            (NBar::Pair(3, 4), 2, 2),
            (NBar::Pair(3, 4), 3, 2),
            (NBar::Pair(3, 6), 2, 8),
            (NBar::Pair(3, 6), 3, 2),
        ];
        for (case, p, want) in cases {
            let r = o_pair(case, p, DEFAULT_PRECISION).unwrap();
            assert_eq!(r.o, want, "{case} at {p}: {:?}", r.trace);
        }
    }

    #[test]
    fn totals() {
        for (p, want) in [(2, 49), (3, 45), (5, 47)] {
            let t = ssp2_total(p, DEFAULT_PRECISION).unwrap();
            assert_eq!(t.total, want);
            assert!(t.columns.iter().all(|c| c.o == c.table_value));
        }
        assert!(ssp2_total(7, DEFAULT_PRECISION).is_err());
    }

    #[test]
    fn two_six_has_genera_one_and_two() {
        let r = o_pair(NBar::Pair(2, 6), 3, DEFAULT_PRECISION).unwrap();
        let mut hs: Vec<u64> = r.genera.iter().map(|g| g.h).collect();
        hs.sort();
        assert_eq!(hs, vec![1, 2]);
    }

    #[test]
    fn product_rule_when_all_h_are_one() {
        let r = o_pair(NBar::Pair(3, 6), 3, DEFAULT_PRECISION).unwrap();
        assert!(r.genera.iter().all(|g| g.h == 1));
        let prod: usize = r.local_classes.iter().map(|l| l.len()).product();
        assert_eq!(r.o as usize, prod);
        assert_eq!(r.local_classes.len(), 2);
    }
}
