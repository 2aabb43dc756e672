// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use ictz_core::kodaira::KodairaFiber;
use ictz_core::lattice::{
    enumerate_even_overlattices, enumerate_even_posdef_binary, GramLattice, Overlattice,
};
use ictz_core::surfaces::{quadratic_base_change, BranchSpec, LabeledFiber, SurfaceConfig};
use ictz_oracles::{binary, fibers, overlattice};

/// Glue group `M / L` as numerators in `(1/m) Z^2 / Z^2`.
fn glue(o: &Overlattice, m: i64) -> BTreeSet<(i64, i64)> {
    let scaled: Vec<(i64, i64)> = o
        .generators
        .iter()
        .map(|r| {
            let x = (&r[0] * BigInt::from(m)).to_integer().to_i64().unwrap();
            let y = (&r[1] * BigInt::from(m)).to_integer().to_i64().unwrap();
            (x, y)
        })
        .collect();
    let mut h = BTreeSet::new();
    for i in 0..m {
        for j in 0..m {
            let x = i * scaled[0].0 + j * scaled[1].0;
            let y = i * scaled[0].1 + j * scaled[1].1;
            h.insert((x.rem_euclid(m), y.rem_euclid(m)));
        }
    }
    h
}

static SUBGROUPS: Mutex<BTreeMap<i64, Vec<overlattice::Subgroup>>> = Mutex::new(BTreeMap::new());

/// Oracle glue groups of the even overlattices, with the subgroup lists cached.
fn oracle_even(g: &[[i64; 2]; 2], m: i64) -> BTreeSet<overlattice::Subgroup> {
    let mut cache = SUBGROUPS.lock().unwrap();
    let all = cache
        .entry(m)
        .or_insert_with(|| overlattice::subgroups_of_order(m).into_iter().collect());
    all.iter()
        .filter(|h| overlattice::classify(g, h, m).1)
        .cloned()
        .collect()
}

#[test]
fn binary_enumeration_matches_brute_force_up_to_80() {
    for d in 1..=80u64 {
        let ours: Vec<(i64, i64, i64)> = enumerate_even_posdef_binary(d)
            .iter()
            .map(|f| {
                (
                    f.a.to_i64().unwrap(),
                    f.b.to_i64().unwrap(),
                    f.c.to_i64().unwrap(),
                )
            })
            .collect();
        let oracle = binary::brute_force_classes(d as i64);
        assert_eq!(ours.len(), oracle.len(), "class count for d = {d}");
        for f in &ours {
            assert_eq!(binary::disc(*f), d as i64);
            assert_eq!(
                oracle.iter().filter(|g| binary::isometric(**g, *f)).count(),
                1,
                "{f:?} at d = {d}"
            );
        }
    }
}

fn even_gram() -> impl Strategy<Value = [[i64; 2]; 2]> {
    (-12i64..=12, -20i64..=20, -12i64..=12)
        .prop_map(|(a, b, c)| [[2 * a, b], [b, 2 * c]])
        .prop_filter("nondegenerate, |det| <= 100", |g| {
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            det != 0 && det.abs() <= 100
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn overlattices_match_subgroup_search(g in even_gram()) {
        let l = GramLattice::from_i64(&g).unwrap();
        let det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).abs();
        for m in (2..=10i64).filter(|m| det % (m * m) == 0) {
            let ours: BTreeSet<_> = enumerate_even_overlattices(&l, m as u64).unwrap().iter().map(|o| glue(o, m)).collect();
            prop_assert_eq!(&ours, &oracle_even(&g, m), "m = {}", m);
            if m == 2 {
                prop_assert_eq!(ours.len(), overlattice::half_coset_even_overlattices(&g).len());
            }
        }
    }

    #[test]
    fn base_change_obeys_the_defect_law(
        types in proptest::collection::vec(0usize..14, 1..7),
        genus in 0u32..3,
        mask in proptest::collection::vec(any::<bool>(), 7),
        extra_fresh in 0usize..3,
    ) {
        let catalog = ["I1", "I2", "I3", "I5", "II", "III", "IV", "I0*", "I1*", "I2*", "I3*", "II*", "III*", "IV*"];
        let mut tokens: Vec<&str> = types.iter().map(|&i| catalog[i]).collect();
        let e: u32 = tokens.iter().map(|t| fibers::euler_via_discriminant(t).unwrap()).sum();
        tokens.extend(std::iter::repeat_n("I1", ((12 - e % 12) % 12) as usize));
        let fibers_in: Vec<LabeledFiber> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| LabeledFiber { label: format!("f{i}"), fiber: t.parse().unwrap() })
            .collect();
        let c = SurfaceConfig::new("random", genus, fibers_in).unwrap();
        let mut branch: Vec<String> = (0..tokens.len()).filter(|&i| mask.get(i).copied().unwrap_or(false)).map(|i| format!("f{i}")).collect();
        let mut fresh: Vec<String> = (0..extra_fresh).map(|i| format!("t{i}")).collect();
        if (branch.len() + fresh.len()) % 2 == 1 {
            fresh.push("odd".into());
        }
        if genus == 0 && branch.is_empty() && fresh.is_empty() {
            fresh.extend(["p".to_string(), "q".to_string()]);
        }
        branch.extend(fresh.iter().cloned());
        let b = BranchSpec::new(branch, fresh).unwrap();
        let (cover, report) = quadratic_base_change(&c, &b).unwrap();
        let e_before = c.euler() as i64;
        let e_after = cover.euler() as i64;
        prop_assert_eq!(2 * e_before - e_after, 12 * report.delta as i64);
        prop_assert_eq!(report.d_prime, 2 * report.d - report.delta as i64);

        let mut expect: BTreeMap<KodairaFiber, usize> = BTreeMap::new();
        for (i, t) in tokens.iter().enumerate() {
            let label = format!("f{i}");
            let images: Vec<String> = if b.contains(&label) {
                vec![fibers::base_change(t).unwrap()]
            } else {
                vec![t.to_string(), t.to_string()]
            };
            for img in images.into_iter().filter(|s| s != "I0") {
                *expect.entry(img.parse().unwrap()).or_insert(0) += 1;
            }
        }
        prop_assert_eq!(cover.fiber_multiset(), expect);
    }
}
