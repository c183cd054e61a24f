//! Subspaces of `F^n` and enumeration of submodules under a finite set of
//! linear operators.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::field::{FiniteField, FqElem};
use super::vecspace::{all_vectors, rank, reduce, rref, vec_mat};
use crate::error::{Error, Result};

/// A subspace of `F^n` stored as its reduced row echelon basis.
///
/// Ordering is lexicographic on `(dim, rows)` so the least element of any
/// set is a deterministic canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubmoduleBasis {
    dim: usize,
    rows: Vec<Vec<u32>>,
    #[serde(skip)]
    ambient_dim: usize,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl SubmoduleBasis {
    pub fn span(field: &FiniteField, ambient_dim: usize, gens: &[Vec<u32>]) -> Self {
        let mut rows: Vec<Vec<u32>> = gens.to_vec();
        let pivots = if rows.is_empty() { Vec::new() } else { rref(field, &mut rows) };
        SubmoduleBasis { dim: rows.len(), rows, ambient_dim, pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        SubmoduleBasis { dim: 0, rows: Vec::new(), ambient_dim, pivots: Vec::new() }
    }

    pub fn whole(field: &FiniteField, ambient_dim: usize) -> Self {
        let rows: Vec<Vec<u32>> = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| u32::from(i == j)).collect())
            .collect();
        Self::span(field, ambient_dim, &rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, field: &FiniteField, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        reduce(field, &mut w, &self.rows, &self.pivots);
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, field: &FiniteField, other: &SubmoduleBasis) -> bool {
        self.rows.iter().all(|r| other.contains(field, r))
    }

    /// Image under `v -> v M`.
    pub fn image(&self, field: &FiniteField, m: &[Vec<u32>]) -> SubmoduleBasis {
        let gens: Vec<Vec<u32>> = self.rows.iter().map(|r| vec_mat(field, r, m)).collect();
        Self::span(field, m.first().map_or(0, |r| r.len()), &gens)
    }

    /// Dimension of the projection onto the coordinates in `cols`.
    pub fn projection_rank(&self, field: &FiniteField, cols: &[usize]) -> usize {
        let proj: Vec<Vec<u32>> = self.rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        if proj.is_empty() {
            0
        } else {
            rank(field, &proj)
        }
    }
}

/// A module `F^n` with a left action given by generator matrices in row
/// convention (`v -> v M_g`).
#[derive(Clone, Debug)]
pub struct FiniteModule {
    field: FiniteField,
    dim: usize,
    generators: Vec<Vec<Vec<u32>>>,
    label: String,
}

impl FiniteModule {
    pub fn new(field: FiniteField, dim: usize, generators: Vec<Vec<Vec<u32>>>, label: impl Into<String>) -> Result<Self> {
        for g in &generators {
            if g.len() != dim || g.iter().any(|r| r.len() != dim) {
                return Err(Error::Usage("action matrix has the wrong shape".into()));
            }
        }
        Ok(FiniteModule { field, dim, generators, label: label.into() })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Vec<u32>>] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Smallest stable subspace containing `gens`.
    pub fn closure(&self, gens: &[Vec<u32>]) -> SubmoduleBasis {
        closure_under(&self.field, self.dim, &self.generators, gens)
    }

    pub fn is_stable(&self, s: &SubmoduleBasis) -> bool {
        self.generators
            .iter()
            .all(|g| s.rows().iter().all(|r| s.contains(&self.field, &vec_mat(&self.field, r, g))))
    }
}

pub fn closure_under(field: &FiniteField, dim: usize, ops: &[Vec<Vec<u32>>], gens: &[Vec<u32>]) -> SubmoduleBasis {
    let mut s = SubmoduleBasis::span(field, dim, gens);
    loop {
        let mut new = Vec::new();
        for g in ops {
            for r in s.rows() {
                let img = vec_mat(field, r, g);
                if !s.contains(field, &img) {
                    new.push(img);
                }
            }
        }
        if new.is_empty() {
            return s;
        }
        let mut all = s.rows().to_vec();
        all.extend(new);
        s = SubmoduleBasis::span(field, dim, &all);
    }
}

/// Filter applied to enumerated submodules.
#[derive(Clone, Debug)]
pub enum SubmoduleConstraint {
    None,
    /// Ambient splits as `F^split x F^(n - split)`; keep submodules whose
    /// two coordinate projections are surjective.
    ProjectionsSurjective { split: usize },
    /// Keep submodules whose closure under the given larger set of operators
    /// is the whole ambient space.
    GeneratesUnder(Vec<Vec<Vec<u32>>>),
}

impl SubmoduleConstraint {
    fn accepts(&self, field: &FiniteField, n: usize, s: &SubmoduleBasis) -> bool {
        match self {
            SubmoduleConstraint::None => true,
            SubmoduleConstraint::ProjectionsSurjective { split } => {
                let first: Vec<usize> = (0..*split).collect();
                let second: Vec<usize> = (*split..n).collect();
                s.projection_rank(field, &first) == first.len() && s.projection_rank(field, &second) == second.len()
            }
            SubmoduleConstraint::GeneratesUnder(ops) => closure_under(field, n, ops, s.rows()).dim() == n,
        }
    }
}

/// All stable subspaces of `m` passing `constraint`, sorted canonically.
///
/// Every submodule is a sum of cyclic submodules, so the cyclic ones are
/// found first (one closure per line) and then joined breadth-first.
pub fn enumerate_submodules(m: &FiniteModule, constraint: &SubmoduleConstraint) -> Vec<SubmoduleBasis> {
    let f = &m.field;
    let n = m.dim;
    let mut cyclic: BTreeSet<SubmoduleBasis> = BTreeSet::new();
    for v in all_vectors(f.order(), n) {
        // one representative per line: leading coordinate equal to 1
        if v.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        cyclic.insert(m.closure(&[v]));
    }
    let cyclic: Vec<SubmoduleBasis> = cyclic.into_iter().collect();
    let mut seen: BTreeSet<SubmoduleBasis> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let zero = SubmoduleBasis::zero(n);
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(s) = queue.pop_front() {
        for c in &cyclic {
            if c.is_subspace_of(f, &s) {
                continue;
            }
            let mut gens = s.rows().to_vec();
            gens.extend(c.rows().iter().cloned());
            let t = SubmoduleBasis::span(f, n, &gens);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    seen.into_iter().filter(|s| constraint.accepts(f, n, s)).collect()
}

/// Naive reference: closes every subset of nonzero vectors of size at most
/// `n` by brute force. Exponential; only for tiny modules in tests.
pub fn enumerate_submodules_naive(m: &FiniteModule) -> Vec<SubmoduleBasis> {
    let f = &m.field;
    let n = m.dim;
    let vectors: Vec<Vec<u32>> = all_vectors(f.order(), n).filter(|v| v.iter().any(|&x| x != 0)).collect();
    let mut out: BTreeSet<SubmoduleBasis> = BTreeSet::new();
    out.insert(SubmoduleBasis::zero(n));
    // every subspace is spanned by subsets; stable ones are exactly the
    // spans that are closed
    fn rec(
        f: &FiniteField,
        m: &FiniteModule,
        vectors: &[Vec<u32>],
        start: usize,
        chosen: &mut Vec<Vec<u32>>,
        out: &mut BTreeSet<SubmoduleBasis>,
        n: usize,
    ) {
        if !chosen.is_empty() {
            let s = SubmoduleBasis::span(f, n, chosen);
            if s.dim() < chosen.len() {
                return;
            }
            if m.is_stable(&s) {
                out.insert(s);
            }
        }
        if chosen.len() == n {
            return;
        }
        for i in start..vectors.len() {
            chosen.push(vectors[i].clone());
            rec(f, m, vectors, i + 1, chosen, out, n);
            chosen.pop();
        }
    }
    rec(f, m, &vectors, 0, &mut Vec::new(), &mut out, n);
    out.into_iter().collect()
}

/// Scalar multiplication by `s` as an operator matrix.
pub fn scalar_matrix(field: &FiniteField, n: usize, s: FqElem) -> Vec<Vec<u32>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { s.0 } else { field.zero().0 }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_action_on_f4_squared() {
        let f = FiniteField::quadratic(2).unwrap();
        let m = FiniteModule::new(f, 2, vec![], "F4^2").unwrap();
        let subs = enumerate_submodules(&m, &SubmoduleConstraint::None);
        assert_eq!(subs.len(), 7);
        assert_eq!(subs.iter().filter(|s| s.dim() == 1).count(), 5);
    }

    #[test]
    fn projection_filter() {
        let f = FiniteField::prime(2).unwrap();
        let m = FiniteModule::new(f, 2, vec![], "F2^2").unwrap();
        let subs = enumerate_submodules(&m, &SubmoduleConstraint::ProjectionsSurjective { split: 1 });
        // the diagonal line and the whole space
        assert_eq!(subs.len(), 2);
    }
}
