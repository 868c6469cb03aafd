use wordlab::lattice::{exact_mod_law, gcd_tail_estimate, gcd_tail_prediction, planar_gcd_law};

#[test]
fn sampled_gcd_tail_matches_exact_planar_law() {
    let samples = 100_000;
    let est = gcd_tail_estimate(2, 1000, 30, samples, 77).unwrap();
    let exact = planar_gcd_law(1000, 30).unwrap();
    for (hits, p) in [
        (est.tail_count + est.zero_count, exact.tail_or_zero),
        (est.zero_count, exact.zero),
    ] {
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        let freq = hits as f64 / samples as f64;
        assert!(
            (freq - p).abs() <= 3.0 * sigma,
            "{freq} vs {p} (3σ = {})",
            3.0 * sigma
        );
    }
    assert!(exact.tail_or_zero < 0.1);
}

#[test]
fn independence_heuristic_overstates_the_tail() {
    let exact = planar_gcd_law(1000, 30).unwrap();
    let heuristic = gcd_tail_prediction(2, 1000, 30).unwrap();
    assert!(heuristic.tail_or_zero > exact.tail_or_zero);
    // each per-prime factor is exact: Pr[p | γ] from the mod-p law
    let est = gcd_tail_estimate(2, 1000, 30, 100_000, 5).unwrap();
    for (profile, emp) in heuristic.primes.iter().zip(&est.divisibility) {
        let p = profile.divisible[1];
        let sigma = (p * (1.0 - p) / 100_000f64).sqrt();
        assert!((emp.frequency - p).abs() <= 4.0 * sigma, "p={}", profile.p);
    }
}

#[test]
fn prime_power_divisibility_bounds() {
    let n = 1000;
    let zero = planar_gcd_law(n, 1).unwrap().zero;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29] {
        let mut k = 1;
        while p.pow(k + 1) <= 30 {
            k += 1;
        }
        let law = exact_mod_law(2, p, k, n).unwrap();
        for e in 1..=k {
            let q = p.pow(e) as f64;
            let bound = if p == 2 { 2.05 / (q * q) } else { 1.05 / (q * q) };
            assert!(law.prob_divisible(e) < bound, "p={p} e={e}");
        }
        let off_origin = law.prob_divisible(1) - zero;
        assert!(p == 2 || off_origin < 4.0 / ((p + 1) * (p + 1)) as f64, "p={p}");
    }
}
