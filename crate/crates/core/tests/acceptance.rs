//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are printed even when the run succeeds.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ssp_core::class_numbers::{h_maximal_quaternion, unit_image_double_cosets, UnitTarget};
use ssp_core::counting::{is_computed, o_value, ssp2_total, Provenance, COLUMNS};
use ssp_core::cyclotomic::NBar;
use ssp_core::lattice_classes::{bass_count_oracle, local_class_lists, quotient_census, FieldModel};
use ssp_core::linalg::{q, q_frac, Q};
use ssp_core::local_orders::{eichler_invariant, overorder_chain, tensor_local_order, DEFAULT_PRECISION};
use ssp_core::quaternion::{hilbert_symbol, maximal_order, reduced_discriminant, unit_group, Place};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

const TABLE: [(NBar, u32, u64); 14] = [
    (NBar::Single(3), 3, 2),
    (NBar::Single(4), 2, 2),
    (NBar::Single(5), 5, 1),
    (NBar::Single(8), 2, 1),
    (NBar::Single(12), 2, 3),
    (NBar::Single(12), 3, 3),
    (NBar::Pair(1, 2), 2, 3),
    (NBar::Pair(2, 3), 3, 1),
    (NBar::Pair(2, 4), 2, 2),
    (NBar::Pair(2, 6), 3, 3),
    (NBar::Pair(3, 4), 2, 2),
    (NBar::Pair(3, 4), 3, 2),
    (NBar::Pair(3, 6), 2, 8),
    (NBar::Pair(3, 6), 3, 2),
];

fn table_values() -> Check {
    let start = Instant::now();
    for (case, p, want) in TABLE {
        let r = o_value(case, p, DEFAULT_PRECISION).map_err(e)?;
        ensure(r.provenance == Provenance::Computed, format!("o{case} at {p} was not computed"))?;
        ensure(r.o == want, format!("o{case} at {p} = {}, expected {want}", r.o))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("14 values in {:.1}s", t.as_secs_f64()))
}

fn totals() -> Check {
    let mut out = vec![];
    for (p, want) in [(2, 49), (3, 45), (5, 47)] {
        let r = ssp2_total(p, DEFAULT_PRECISION).map_err(e)?;
        ensure(r.total == want, format!("p = {p}: total {} != {want}", r.total))?;
        ensure(r.columns.len() == COLUMNS.len(), "column count")?;
        for c in &r.columns {
            let tag = c.provenance.tag();
            ensure(tag == "computed" || tag == "fixture:concluding-table", format!("bad tag {tag}"))?;
            ensure(
                (c.provenance == Provenance::Computed) == is_computed(c.case, p),
                format!("{} at {p} tagged {tag}", c.case),
            )?;
        }
        let n = r.columns.iter().filter(|c| c.provenance == Provenance::Computed).count();
        out.push(format!("p={p}: {want} ({n} computed)"));
    }
    Ok(out.join(", "))
}

fn orbit_census() -> Check {
    let case = NBar::Pair(3, 6);
    let std = quotient_census(case, 2, FieldModel::Standard).map_err(e)?;
    let alt = quotient_census(case, 2, FieldModel::Alternative).map_err(e)?;
    ensure(std.counts() == vec![3, 3, 1, 1], format!("standard {:?}", std.counts()))?;
    ensure(alt.counts() == std.counts(), format!("alternative {:?}", alt.counts()))?;
    Ok(format!("{:?} in both F4 models", std.counts()))
}

fn quat(a: Q, b: Q, c: Q, d: Q) -> Vec<Q> {
    vec![a, b, c, d]
}

fn unit_groups() -> Check {
    let o2 = maximal_order(2).map_err(e)?;
    ensure(unit_group(&o2).map_err(e)?.len() == 24, "|O^x| != 24 at p = 2")?;
    let o3 = maximal_order(3).map_err(e)?;
    let got: BTreeSet<Vec<Q>> = unit_group(&o3).map_err(e)?.into_iter().collect();
    let h = q_frac(1, 2);
    let mut want = BTreeSet::new();
    for s in [q(1), q(-1)] {
        want.insert(quat(s.clone(), q(0), q(0), q(0)));
        want.insert(quat(q(0), s.clone(), q(0), q(0)));
        for t in [q(1), q(-1)] {
            // ±(1 ± j)/2 and ±i(1 ± j)/2 = ±(i ± k)/2
            want.insert(quat(&s * &h, q(0), &s * &t * &h, q(0)));
            want.insert(quat(q(0), &s * &h, q(0), &s * &t * &h));
        }
    }
    ensure(want.len() == 12 && got == want, "p = 3 units differ from the expected twelve")?;

    let m2 = unit_image_double_cosets(2, UnitTarget::ModTwo).map_err(e)?;
    ensure(m2.is_surjective(), "O^x -> (O/2O)^x not surjective")?;
    ensure(m2.kernel == vec!["-1".to_string(), "1".to_string()], format!("kernel {:?}", m2.kernel))?;
    let f9 = unit_image_double_cosets(3, UnitTarget::ResidueField).map_err(e)?;
    ensure(f9.target_order == 8 && f9.cosets == 2, format!("F9 image index {}", f9.cosets))?;
    Ok("24 / 12 units, surjective mod 2 with kernel {+-1}, index 2 in F9^x".into())
}

fn structure_invariants() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let places: Vec<Place> =
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29].into_iter().map(Place::Finite).chain([Place::Infinity]).collect();
    let mut pairs = 0;
    while pairs < 50 {
        let (a, b) = (rng.gen_range(-30i64..=30), rng.gen_range(-30i64..=30));
        if a == 0 || b == 0 {
            continue;
        }
        let mut prod = 1i8;
        for &v in &places {
            prod *= hilbert_symbol(&q(a), &q(b), v).map_err(e)?;
        }
        ensure(prod == 1, format!("reciprocity fails for ({a}, {b})"))?;
        pairs += 1;
    }

    for p in [2, 3, 5, 7, 11] {
        let d = reduced_discriminant(&maximal_order(p).map_err(e)?).map_err(e)?;
        ensure(d == p as u64, format!("discriminant {d} at p = {p}"))?;
    }

    for (n, p, want) in [(3, 3, -1), (4, 2, -1), (12, 2, 1)] {
        let got = eichler_invariant(&tensor_local_order(NBar::Single(n), p, DEFAULT_PRECISION).map_err(e)?).map_err(e)?;
        ensure(got == want, format!("e(A_{{{n},{p}}}) = {got}"))?;
    }

    let mut chains = 0;
    for (n, p) in [(3, 3), (4, 2), (5, 5), (8, 2), (12, 2), (12, 3)] {
        let c = overorder_chain(&tensor_local_order(NBar::Single(n), p, DEFAULT_PRECISION).map_err(e)?).map_err(e)?;
        let drop = if c.eichler_invariant == -1 { 2 } else { 1 };
        for w in c.links.windows(2) {
            ensure(
                w[0].discriminant_exponent == w[1].discriminant_exponent + drop,
                format!("drop {} -> {} along {n} at {p}", w[0].discriminant_exponent, w[1].discriminant_exponent),
            )?;
        }
        chains += 1;
    }

    let k = DEFAULT_PRECISION;
    for (case, p, _) in TABLE {
        let a = serde_json::to_string(&local_class_lists(case, p, k).map_err(e)?).map_err(e)?;
        let b = serde_json::to_string(&local_class_lists(case, p, k + 1).map_err(e)?).map_err(e)?;
        ensure(a == b, format!("class lists for {case} at {p} change from k = {k} to {}", k + 1))?;
        let (x, y) = (o_value(case, p, k).map_err(e)?.o, o_value(case, p, k + 1).map_err(e)?.o);
        ensure(x == y, format!("o{case} at {p} changes with precision"))?;
    }
    Ok(format!("reciprocity on {pairs} pairs, {chains} chains, stable from k={k} to k={}", k + 1))
}

fn oracle_equivalence() -> Check {
    let mut done = vec![];
    for (n, p, u) in [(3, 3, 1), (3, 3, 2), (4, 2, 1), (4, 2, 2), (8, 2, 1), (8, 2, 2), (5, 5, 1)] {
        let r = bass_count_oracle(n, p, u, DEFAULT_PRECISION).map_err(e)?;
        ensure(
            r.brute_force == r.from_invariants,
            format!("({n}, p={p}, u={u}): brute force {} vs {}", r.brute_force, r.from_invariants),
        )?;
        done.push(format!("({n},{p},u={u})={}", r.brute_force));
    }
    Ok(done.join(" "))
}

fn class_numbers() -> Check {
    let got: Vec<u64> = [2, 3, 5, 11].into_iter().map(h_maximal_quaternion).collect::<Result<_, _>>().map_err(e)?;
    ensure(got == vec![1, 1, 1, 2], format!("{got:?}"))?;
    Ok("h = 1, 1, 1, 2 for p = 2, 3, 5, 11".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("table values", table_values),
        ("totals", totals),
        ("orbit census", orbit_census),
        ("unit groups", unit_groups),
        ("structure invariants", structure_invariants),
        ("oracle equivalence", oracle_equivalence),
        ("class-number formula", class_numbers),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
