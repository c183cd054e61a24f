//! Orbits of a finite matrix group acting on a set of subspaces.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::field::FiniteField;
use super::submodule::SubmoduleBasis;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Least member in the canonical subspace order.
    pub representative: SubmoduleBasis,
    pub size: usize,
}

/// Partitions `elements` into orbits of `group` acting by `S -> S g`.
/// Orbits are returned sorted by representative.
pub fn orbit_classes(field: &FiniteField, elements: &[SubmoduleBasis], group: &[Vec<Vec<u32>>]) -> Result<Vec<Orbit>> {
    let set: BTreeSet<&SubmoduleBasis> = elements.iter().collect();
    let mut assigned: BTreeMap<SubmoduleBasis, usize> = BTreeMap::new();
    let mut orbits: Vec<Orbit> = Vec::new();
    for s in set.iter() {
        if assigned.contains_key(*s) {
            continue;
        }
        let mut members: BTreeSet<SubmoduleBasis> = BTreeSet::new();
        members.insert((*s).clone());
        for g in group {
            let img = s.image(field, g);
            if !set.contains(&img) {
                return Err(Error::Structural(format!(
                    "group element maps a {}-dimensional member outside the input set",
                    s.dim()
                )));
            }
            members.insert(img);
        }
        let idx = orbits.len();
        let representative = members.iter().next().expect("orbit is nonempty").clone();
        for m in &members {
            if assigned.insert(m.clone(), idx).is_some() {
                return Err(Error::Structural("orbits overlap: input group is not closed".into()));
            }
        }
        orbits.push(Orbit { representative, size: members.len() });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// Orbits of the group generated by `generators` (which must act
/// invertibly on the set). Each orbit is closed by breadth-first search, so
/// the group itself is never listed.
pub fn orbit_classes_generated(
    field: &FiniteField,
    elements: &[SubmoduleBasis],
    generators: &[Vec<Vec<u32>>],
) -> Result<Vec<Orbit>> {
    let set: BTreeSet<&SubmoduleBasis> = elements.iter().collect();
    let mut seen: BTreeSet<SubmoduleBasis> = BTreeSet::new();
    let mut orbits = Vec::new();
    for s in set.iter() {
        if seen.contains(*s) {
            continue;
        }
        let mut members: BTreeSet<SubmoduleBasis> = BTreeSet::new();
        members.insert((*s).clone());
        let mut frontier = vec![(*s).clone()];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let img = x.image(field, g);
                if !set.contains(&img) {
                    return Err(Error::Structural(format!(
                        "group element maps a {}-dimensional member outside the input set",
                        x.dim()
                    )));
                }
                if members.insert(img.clone()) {
                    frontier.push(img);
                }
            }
        }
        let representative = members.iter().next().expect("orbit is nonempty").clone();
        seen.extend(members.iter().cloned());
        orbits.push(Orbit { representative, size: members.len() });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::submodule::{enumerate_submodules, scalar_matrix, FiniteModule, SubmoduleConstraint};

    #[test]
    fn scalars_fix_lines() {
        let f = FiniteField::quadratic(2).unwrap();
        let m = FiniteModule::new(f.clone(), 2, vec![], "F4^2").unwrap();
        let lines: Vec<_> = enumerate_submodules(&m, &SubmoduleConstraint::None)
            .into_iter()
            .filter(|s| s.dim() == 1)
            .collect();
        let group: Vec<_> = f.elements().skip(1).map(|s| scalar_matrix(&f, 2, s)).collect();
        let orbits = orbit_classes(&f, &lines, &group).unwrap();
        assert_eq!(orbits.len(), 5);
    }

    #[test]
    fn generated_orbits_match_full_group() {
        let f = FiniteField::prime(3).unwrap();
        let m = FiniteModule::new(f.clone(), 2, vec![], "F3^2").unwrap();
        let all = enumerate_submodules(&m, &SubmoduleConstraint::None);
        let gens = vec![vec![vec![1, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
        let orbits = orbit_classes_generated(&f, &all, &gens).unwrap();
        // zero, the four lines, the whole plane
        assert_eq!(orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![1, 4, 1]);
    }

    #[test]
    fn singleton() {
        let f = FiniteField::prime(3).unwrap();
        let s = SubmoduleBasis::whole(&f, 2);
        let orbits = orbit_classes(&f, &[s], &[scalar_matrix(&f, 2, f.from_int(2))]).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size, 1);
    }

    #[test]
    fn action_leaving_the_set_is_rejected() {
        let f = FiniteField::prime(2).unwrap();
        let line = SubmoduleBasis::span(&f, 2, &[vec![1, 0]]);
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert!(matches!(orbit_classes(&f, &[line], &[swap]), Err(Error::Structural(_))));
    }
}
