use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use wordlab::generation::{count_generating_tuples, hall_max_power, is_generating, power_closure};
use wordlab::group_walks::power_walk_equivalence;
use wordlab::groups::Idx;
use wordlab::{Group, GroupElement, GroupSpec};

fn group(s: &str) -> Arc<Group> {
    Arc::new(Group::construct(&s.parse::<GroupSpec>().unwrap()).unwrap())
}

/// Conjugation of an `A5` element by a permutation of five points.
fn conj(a5: &Group, a: Idx, pi: &[u8]) -> Idx {
    let img = a5.permutation(a).unwrap();
    let mut out = vec![0u8; 5];
    for i in 0..5 {
        out[pi[i] as usize] = pi[img[i] as usize];
    }
    a5.permutation_index(&out).unwrap()
}

fn s5_perms() -> Vec<Vec<u8>> {
    let s5 = group("symmetric:5");
    (0..s5.order())
        .map(|i| s5.permutation(i).unwrap())
        .collect()
}

/// Aut(A5) = S5 orbits on generating pairs, by direct enumeration.
fn aut_orbits(a5: &Group) -> Vec<(Idx, Idx)> {
    let perms = s5_perms();
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for a in 0..60 {
        for b in 0..60 {
            if seen.contains(&(a, b)) || !a5.is_generated_by(&[a, b]) {
                continue;
            }
            reps.push((a, b));
            for pi in &perms {
                seen.insert((conj(a5, a, pi), conj(a5, b, pi)));
            }
        }
    }
    reps
}

fn pair(g: &Group, (a, b): (Idx, Idx)) -> Vec<GroupElement> {
    vec![g.element(a).unwrap(), g.element(b).unwrap()]
}

#[test]
fn hall_count_matches_orbit_enumeration() {
    let a5 = group("alternating:5");
    let reps = aut_orbits(&a5);
    assert_eq!(reps.len(), 19);
    let report = hall_max_power(&a5, 2).unwrap();
    assert_eq!(report.aut_classes, reps.len() as u64);
    assert_eq!(count_generating_tuples(&a5, 2).unwrap(), 2280);
}

#[test]
fn hall_criterion_agrees_with_closure() {
    let a5 = group("alternating:5");
    let reps = aut_orbits(&a5);
    for n in 1..=3 {
        let tuples: Vec<Vec<GroupElement>> = reps[..n].iter().map(|&p| pair(&a5, p)).collect();
        assert!(power_closure(&a5, &tuples).unwrap().is_full(), "N={n}");
    }
    // An odd conjugation keeps the pair in its Aut class; the diagonal
    // subgroup it generates has order 60.
    let odd = vec![1u8, 0, 2, 3, 4];
    let (a, b) = reps[0];
    let twin = (conj(&a5, a, &odd), conj(&a5, b, &odd));
    let closure = power_closure(&a5, &[pair(&a5, (a, b)), pair(&a5, twin)]).unwrap();
    assert_eq!(closure.len(), 60);
    let closure = power_closure(
        &a5,
        &[pair(&a5, reps[1]), pair(&a5, reps[2]), pair(&a5, reps[1])],
    )
    .unwrap();
    assert!(!closure.is_full());
}

#[test]
fn catalog_counts_are_divisible_by_aut_order() {
    for s in ["alternating:5", "psl2:5", "psl2:7", "psl2:11", "psl2:13"] {
        let r = hall_max_power(&group(s), 2).unwrap();
        assert!(r.free_action, "{s}");
        assert_eq!(r.consistent, Some(true), "{s}");
    }
}

#[test]
fn joint_walk_mixes_iff_power_is_generated() {
    let a5 = group("alternating:5");
    let reps = aut_orbits(&a5);
    let cross = [pair(&a5, reps[0]), pair(&a5, reps[5])];
    let rep = power_walk_equivalence(&a5, &cross, 400, 100_000, 11).unwrap();
    assert_eq!(rep.steps_generate_power, Some(true));
    assert!(rep.marginal_l1_uniform_words[0] < 0.05);
    assert!(rep.marginal_l1_uniform_walk[0] < 0.05);
    assert!(rep.exact_joint_l1_uniform.unwrap() < 1e-3);

    let odd = vec![1u8, 0, 2, 3, 4];
    let (a, b) = reps[5];
    let diag = [
        pair(&a5, (a, b)),
        pair(&a5, (conj(&a5, a, &odd), conj(&a5, b, &odd))),
    ];
    let rep = power_walk_equivalence(&a5, &diag, 400, 100_000, 11).unwrap();
    assert_eq!(rep.steps_generate_power, Some(false));
    assert!(rep.marginal_l1_uniform_words.iter().all(|&x| x < 0.05));
    assert!(rep.exact_joint_l1_uniform.unwrap() > 1.9);
    assert!(rep.joint_l1_uniform_words.unwrap() > 1.9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn generation_invariant_under_permutation_and_inversion(
        spec in prop::sample::select(vec!["alternating:5", "symmetric:4", "dihedral:6", "psl2:7"]),
        raw in prop::collection::vec(any::<u32>(), 1..4),
        flip in any::<usize>(),
        rot in any::<usize>(),
    ) {
        let g = group(spec);
        let t: Vec<GroupElement> = raw.iter().map(|&x| g.element(x % g.order()).unwrap()).collect();
        let base = is_generating(&g, &t).unwrap();
        let mut rotated = t.clone();
        rotated.rotate_left(rot % t.len());
        prop_assert_eq!(is_generating(&g, &rotated).unwrap(), base);
        let mut inverted = t.clone();
        let i = flip % t.len();
        inverted[i] = g.invert(inverted[i]).unwrap();
        prop_assert_eq!(is_generating(&g, &inverted).unwrap(), base);
    }
}
