//! Acceptance suite: one PASS/FAIL line per criterion, each with its own
//! runtime limit. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordlab::generation::{count_generating_tuples, hall_max_power, power_closure};
use wordlab::group_walks::{cyclic_obstruction, exact_walk_law, mixing_profile, StepSet};
use wordlab::groups::{catalog, Idx};
use wordlab::harness::{self, ExperimentConfig, Results};
use wordlab::lattice::{exact_mod_law, simulate_walk};
use wordlab::measure::{exact_distribution, Distance};
use wordlab::words::{sample_word, SamplingModel};
use wordlab::{Group, GroupElement, GroupSpec, Word};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn group(s: &str) -> Arc<Group> {
    Arc::new(Group::construct(&s.parse::<GroupSpec>().unwrap()).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_group_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for spec in catalog() {
        let g = Group::construct(&spec).map_err(|e| e.to_string())?;
        if g.order() > 20_000 {
            continue;
        }
        let n = g.order();
        for _ in 0..10_000 {
            let (a, b, c) = (
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            );
            ensure(g.op(g.op(a, b), c) == g.op(a, g.op(b, c)), || {
                format!("{spec}: associativity")
            })?;
            ensure(g.op(a, 0) == a && g.op(0, a) == a, || {
                format!("{spec}: identity")
            })?;
            ensure(g.op(a, g.inv(a)) == 0 && g.op(g.inv(a), a) == 0, || {
                format!("{spec}: inverse")
            })?;
        }
        checked += 1;
    }
    let sl = group("sl2:5");
    let z = sl.center().map_err(|e| e.to_string())?;
    let q = sl.quotient_by_center().map_err(|e| e.to_string())?;
    ensure(z.len() == 2, || format!("|Z(SL(2,5))| = {}", z.len()))?;
    ensure(q.group.order() == 60, || {
        format!("|SL(2,5)/Z| = {}", q.group.order())
    })?;
    Ok(format!(
        "{checked} groups x 10^4 triples; |Z(SL(2,5))| = 2, quotient order 60"
    ))
}

fn c2_primitive_uniform() -> Outcome {
    let mut cells = 0;
    for spec in catalog() {
        let g = Group::construct(&spec).map_err(|e| e.to_string())?;
        if g.order() > 360 {
            continue;
        }
        for d in [2, 3] {
            let w = Word::parse("1", Some(d)).unwrap();
            match exact_distribution(&w, &g) {
                Ok(dist) => {
                    let l1 = dist.l1_uniform_distance();
                    ensure(l1.exact().is_some_and(Zero::is_zero), || {
                        format!("{spec} d={d}: distance {l1}")
                    })?;
                    cells += 1;
                }
                Err(e) if e.is_budget() => {}
                Err(e) => return Err(format!("{spec} d={d}: {e}")),
            }
        }
    }
    Ok(format!("x1 exactly uniform in {cells} (group, d) cells"))
}

/// Conjugacy classes by brute-force conjugation over all elements.
fn class_count(g: &Group) -> usize {
    let n = g.order();
    let mut seen = vec![false; n as usize];
    let mut classes = 0;
    for x in 0..n {
        if seen[x as usize] {
            continue;
        }
        classes += 1;
        for y in 0..n {
            seen[g.op(g.op(g.inv(y), x), y) as usize] = true;
        }
    }
    classes
}

fn c3_commutator_counts() -> Outcome {
    let w = Word::parse("1 2 -1 -2", None).unwrap();
    let mut parts = Vec::new();
    for (s, expected) in [("alternating:5", 300u32), ("psl2:7", 1008)] {
        let g = group(s);
        let oracle = g.order() as usize * class_count(&g);
        let dist = exact_distribution(&w, &g).map_err(|e| e.to_string())?;
        let got = dist.count(0).clone();
        ensure(
            got == BigUint::from(expected) && oracle == expected as usize,
            || format!("{s}: count {got}, oracle {oracle}, expected {expected}"),
        )?;
        parts.push(format!("{s}: {got}"));
    }
    Ok(parts.join(", "))
}

fn c4_bezout_coverage() -> Outcome {
    let g = group("psl2:7");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut words, mut full) = (0, 0);
    while words < 100 {
        let w = sample_word(SamplingModel::Symmetric, 2, 40, &mut rng);
        let ab = w.abelianize();
        let m = ab.gamma();
        if !(1..=3).contains(&m) {
            continue;
        }
        let (_, b) = ab.bezout_certificate().map_err(|e| e.to_string())?;
        for x in 0..g.order() {
            let tuple: Vec<Idx> = b.iter().map(|&bi| g.pow(x, bi)).collect();
            ensure(w.evaluate_indices(&g, &tuple) == g.pow(x, m as i64), || {
                format!("word {w}: g = {x}")
            })?;
        }
        if m == 1 {
            let support = exact_distribution(&w, &g)
                .map_err(|e| e.to_string())?
                .support();
            ensure(support.is_full(), || {
                format!("word {w}: image has {} elements", support.len())
            })?;
            full += 1;
        }
        words += 1;
    }
    Ok(format!(
        "100 words, g^m reached for all 168 g; {full} words with m = 1 have full image"
    ))
}

fn c5_power_separation() -> Outcome {
    let w = Word::parse("1 1", None).unwrap();
    let half = Ratio::new(BigUint::from(1u32), BigUint::from(2u32));
    let mut parts = Vec::new();
    for p in [5, 7, 11, 13] {
        let g = group(&format!("psl2:{p}"));
        let n = g.order() as usize;
        let mut counts = vec![0u64; n];
        for x in 0..g.order() {
            counts[g.op(x, x) as usize] += 1;
        }
        let num: u64 = counts
            .iter()
            .map(|&c| (c * n as u64).abs_diff(n as u64))
            .sum();
        let oracle = Ratio::new(BigUint::from(num), BigUint::from((n * n) as u64));
        let l1 = exact_distribution(&w, &g)
            .map_err(|e| e.to_string())?
            .l1_uniform_distance();
        let exact = l1.exact().ok_or("sampled distance")?.clone();
        ensure(exact == oracle && exact >= half, || {
            format!("PSL(2,{p}): {exact} vs oracle {oracle}")
        })?;
        parts.push(format!("p={p}: {exact}"));
    }
    Ok(parts.join(", "))
}

fn c6_lattice_limits() -> Outcome {
    let mut parts = Vec::new();
    for p in [3u64, 5] {
        let law = exact_mod_law(2, p, 1, 500).map_err(|e| e.to_string())?;
        let err = (law.prob_zero() - 1.0 / (p * p) as f64).abs();
        ensure(err < 1e-3, || format!("p={p}: |P0 - 1/p^2| = {err}"))?;
        parts.push(format!("p={p}: {err:.1e}"));
    }
    let odd = exact_mod_law(2, 2, 1, 499).map_err(|e| e.to_string())?;
    ensure(odd.exact_prob_zero().is_some_and(|r| r.is_zero()), || {
        "p=2 odd n: P0 != 0".into()
    })?;
    let four = exact_mod_law(2, 2, 2, 500).map_err(|e| e.to_string())?;
    let err = (four.prob_zero() - 0.125).abs();
    ensure(err < 1e-3, || format!("mod 4: |P0 - 1/8| = {err}"))?;
    Ok(format!(
        "{}, p=2 odd n: exactly 0, mod 4: {err:.1e}",
        parts.join(", ")
    ))
}

fn c7_simulation_vs_dp() -> Outcome {
    let samples = 100_000u64;
    let law = exact_mod_law(2, 3, 2, 200).map_err(|e| e.to_string())?;
    let mut counts = vec![0u64; law.states()];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..samples {
        counts[law.state_of(&simulate_walk(2, 200, &mut rng))] += 1;
    }
    let mut worst: f64 = 0.0;
    for (s, &c) in counts.iter().enumerate() {
        let p = law.probability(s);
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        let z = (c as f64 / samples as f64 - p).abs() / sigma;
        ensure(z <= 4.0, || format!("state {s}: {z:.2} sigma"))?;
        worst = worst.max(z);
    }
    Ok(format!("81 states, max deviation {worst:.2} sigma"))
}

fn steps(g: &Group, elems: &[&str]) -> StepSet {
    let e: Vec<GroupElement> = elems.iter().map(|s| g.parse_element(s).unwrap()).collect();
    StepSet::uniform(g, &e).unwrap()
}

fn c8_mixing_dichotomy() -> Outcome {
    let a5 = group("alternating:5");
    let st = steps(&a5, &["(1 2 3 4 5)", "(1 2 3)"]);
    let d300 = exact_walk_law(&a5, &st, 300)
        .map_err(|e| e.to_string())?
        .l1_uniform_distance()
        .to_f64();
    ensure(d300 < 1e-4, || format!("A5 at n=300: {d300:e}"))?;
    let s3 = group("symmetric:3");
    let st = steps(&s3, &["(1 2)", "(2 3)"]);
    let ob = cyclic_obstruction(&s3, &st).map_err(|e| e.to_string())?;
    ensure(ob.as_ref().is_some_and(|o| o.modulus == 2), || {
        format!("S3 obstruction {ob:?}")
    })?;
    let profile = mixing_profile(&s3, &st, 600).map_err(|e| e.to_string())?;
    let min = profile
        .iter()
        .map(Distance::to_f64)
        .fold(f64::INFINITY, f64::min);
    ensure(min >= 0.5, || format!("S3 distance dropped to {min}"))?;
    Ok(format!(
        "A5 n=300: {d300:.2e}; S3: c = 2, min distance over n <= 600 = {min}"
    ))
}

/// Conjugation of an A5 element by a permutation of the five points.
fn conj(a5: &Group, a: Idx, pi: &[u8]) -> Idx {
    let img = a5.permutation(a).unwrap();
    let mut out = vec![0u8; 5];
    for i in 0..5 {
        out[pi[i] as usize] = pi[img[i] as usize];
    }
    a5.permutation_index(&out).unwrap()
}

fn c9_hall() -> Outcome {
    let a5 = group("alternating:5");
    let count = count_generating_tuples(&a5, 2).map_err(|e| e.to_string())?;
    let r = hall_max_power(&a5, 2).map_err(|e| e.to_string())?;
    ensure(
        count == 2280 && r.aut_classes == 19 && r.mt_bound == 15 && r.consistent == Some(true),
        || format!("{r:?}"),
    )?;
    let el = |s: &str| a5.parse_element(s).unwrap();
    let first = vec![el("(1 2 3 4 5)"), el("(1 2 3)")];
    // Different product orders put the two pairs in different Aut classes.
    let second = vec![el("(1 2 3 4 5)"), el("(1 2)(3 4)")];
    let cross = power_closure(&a5, &[first.clone(), second]).map_err(|e| e.to_string())?;
    let odd = [1u8, 0, 2, 3, 4];
    let twin: Vec<GroupElement> = first
        .iter()
        .map(|x| a5.element(conj(&a5, x.index(), &odd)).unwrap())
        .collect();
    let diagonal = power_closure(&a5, &[first, twin]).map_err(|e| e.to_string())?;
    ensure(cross.is_full() && cross.len() == 3600, || {
        format!("cross pair closure {}", cross.len())
    })?;
    ensure(!diagonal.is_full(), || {
        "diagonal pair generated A5^2".into()
    })?;
    Ok(format!(
        "2280 tuples, 19 classes, 15 <= 19; cross closure 3600, diagonal closure {}",
        diagonal.len()
    ))
}

fn c10_harness() -> Outcome {
    let text =
        "kind = density\nmodel = symmetric\nrank = 2\nlength = 200\nwords = 500\ngcd_cap = 30\n\
                groups = alternating:5\nseed = 20240601\n";
    let mut map = harness::parse_config_text(text).map_err(|e| e.to_string())?;
    let base = ExperimentConfig::from_map(&map, None).map_err(|e| e.to_string())?;
    let first = harness::report_json(&harness::run(&base).map_err(|e| e.to_string())?);
    let again = harness::report_json(&harness::run(&base).map_err(|e| e.to_string())?);
    map.insert("threads".into(), "4".into());
    let wide = ExperimentConfig::from_map(&map, None).map_err(|e| e.to_string())?;
    let wide = harness::report_json(&harness::run(&wide).map_err(|e| e.to_string())?);
    map.insert("threads".into(), "1".into());
    let narrow = ExperimentConfig::from_map(&map, None).map_err(|e| e.to_string())?;
    let narrow = harness::report_json(&harness::run(&narrow).map_err(|e| e.to_string())?);
    ensure(first == again && first == wide && first == narrow, || {
        "reports differ between runs".into()
    })?;
    let report: harness::ExperimentReport =
        serde_json::from_str(&first).map_err(|e| e.to_string())?;
    let diffs = harness::audit(&report);
    ensure(diffs.is_empty(), || format!("audit: {diffs:?}"))?;
    let Results::Density(res) = &report.results else {
        return Err("not a density report".into());
    };
    let frac = res.aggregates.gamma_zero_or_above_cap_fraction;
    ensure(frac < 0.1, || {
        format!("fraction gamma = 0 or > 30 is {frac}")
    })?;
    Ok(format!("4 runs byte-identical (default, repeat, 4 and 1 threads); audit 0 diffs; fraction = {frac}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "group axioms and structure", 30, c1_group_axioms),
        (
            2,
            "primitive words exactly uniform",
            120,
            c2_primitive_uniform,
        ),
        (3, "commutator identity counts", 60, c3_commutator_counts),
        (4, "Bezout coverage", 120, c4_bezout_coverage),
        (5, "power-word separation", 60, c5_power_separation),
        (6, "lattice DP limits", 10, c6_lattice_limits),
        (7, "simulation vs DP", 30, c7_simulation_vs_dp),
        (8, "mixing dichotomy", 30, c8_mixing_dichotomy),
        (9, "Hall count and MT bound", 120, c9_hall),
        (10, "harness determinism and audit", 300, c10_harness),
    ];
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(msg), true) => ("PASS", msg.clone()),
            (Ok(msg), false) => ("FAIL", format!("{msg}; over the {limit}s limit")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {status} {name} [{:.2}s / {limit}s]: {detail}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
