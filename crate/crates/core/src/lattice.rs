//! The simple random walk on `Z^d`: each step is uniform on the `2d` vectors
//! `±e_i`.

use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::measure::big_ratio_f64;
use crate::words::AbelianVector;
use crate::{exec, rng, Error, Result};

/// Largest state space handled by [`exact_mod_law`].
pub const STATE_CAP: u128 = 1_000_000;
/// State spaces up to this size are propagated in exact integer arithmetic.
pub const EXACT_STATE_CAP: u128 = 10_000;

/// Sum of `n` uniform steps from `{±e_1, …, ±e_d}`.
pub fn simulate_walk<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Vec<i64> {
    let mut x = vec![0i64; d];
    for _ in 0..n {
        let k = rng.random_range(0..2 * d);
        x[k % d] += if k < d { 1 } else { -1 };
    }
    x
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|q| q * q <= p)
            .all(|q| !p.is_multiple_of(q))
}

/// Law of the walk endpoint reduced modulo `p^k` in every coordinate.
///
/// States are indexed in mixed radix with the first coordinate most
/// significant. Small state spaces keep exact counts scaled by `(2d)^n`.
#[derive(Clone, Debug)]
pub struct ModLaw {
    pub d: usize,
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub modulus: u64,
    exact: Option<Vec<BigUint>>,
    probabilities: Vec<f64>,
}

struct Neighbors {
    states: usize,
    strides: Vec<usize>,
    modulus: usize,
}

impl Neighbors {
    fn digit(&self, s: usize, i: usize) -> usize {
        (s / self.strides[i]) % self.modulus
    }

    /// States one step before `s`: `s - e_i` and `s + e_i` for every `i`.
    fn predecessors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.strides.len()).flat_map(move |i| {
            let stride = self.strides[i];
            let digit = self.digit(s, i);
            let minus = if digit == 0 {
                s + (self.modulus - 1) * stride
            } else {
                s - stride
            };
            let plus = if digit + 1 == self.modulus {
                s - (self.modulus - 1) * stride
            } else {
                s + stride
            };
            [minus, plus]
        })
    }
}

pub fn exact_mod_law(d: usize, p: u64, k: u32, n: usize) -> Result<ModLaw> {
    if d == 0 || k == 0 || !is_prime(p) {
        return Err(Error::UnsupportedParameter(format!(
            "mod law needs d >= 1, k >= 1 and p prime (got d={d}, p={p}, k={k})"
        )));
    }
    let modulus = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    let states = modulus.checked_pow(d as u32).unwrap_or(u128::MAX);
    if states > STATE_CAP {
        return Err(Error::StateCapExceeded {
            states,
            cap: STATE_CAP,
        });
    }
    let modulus = modulus as usize;
    let states = states as usize;
    let mut strides = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * modulus;
    }
    let nb = Neighbors {
        states,
        strides,
        modulus,
    };
    let pred: Vec<Vec<usize>> = (0..nb.states)
        .map(|s| nb.predecessors(s).collect())
        .collect();

    let (exact, probabilities) = if states as u128 <= EXACT_STATE_CAP {
        let mut cur = vec![BigUint::zero(); states];
        let mut next = vec![BigUint::zero(); states];
        cur[0] = BigUint::one();
        for _ in 0..n {
            for (s, slot) in next.iter_mut().enumerate() {
                slot.set_zero();
                for &q in &pred[s] {
                    if !cur[q].is_zero() {
                        *slot += &cur[q];
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        let scale = BigUint::from(2 * d as u64).pow(n as u32);
        let probs = cur.iter().map(|c| big_ratio_f64(c, &scale)).collect();
        (Some(cur), probs)
    } else {
        let mut cur = vec![0f64; states];
        let mut next = vec![0f64; states];
        cur[0] = 1.0;
        let w = 1.0 / (2 * d) as f64;
        for _ in 0..n {
            for (s, slot) in next.iter_mut().enumerate() {
                *slot = pred[s].iter().map(|&q| cur[q]).sum::<f64>() * w;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        (None, cur)
    };
    Ok(ModLaw {
        d,
        p,
        k,
        n,
        modulus: modulus as u64,
        exact,
        probabilities,
    })
}

impl ModLaw {
    pub fn states(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, state: usize) -> f64 {
        self.probabilities[state]
    }

    fn scale(&self) -> BigUint {
        BigUint::from(2 * self.d as u64).pow(self.n as u32)
    }

    pub fn exact_probability(&self, state: usize) -> Option<Ratio<BigUint>> {
        self.exact
            .as_ref()
            .map(|c| Ratio::new(c[state].clone(), self.scale()))
    }

    /// Residues of a lattice point, one per coordinate.
    pub fn state_of(&self, x: &[i64]) -> usize {
        let m = self.modulus as i64;
        x.iter().fold(0usize, |acc, &c| {
            acc * self.modulus as usize + c.rem_euclid(m) as usize
        })
    }

    pub fn coordinates(&self, state: usize) -> Vec<u64> {
        let m = self.modulus as usize;
        let mut out = vec![0u64; self.d];
        let mut s = state;
        for c in out.iter_mut().rev() {
            *c = (s % m) as u64;
            s /= m;
        }
        out
    }

    /// `Pr[X_n ∈ p^k Z^d]`.
    pub fn prob_zero(&self) -> f64 {
        self.probabilities[0]
    }

    pub fn exact_prob_zero(&self) -> Option<Ratio<BigUint>> {
        self.exact_probability(0)
    }

    fn divisible_states(&self, e: u32) -> impl Iterator<Item = usize> + '_ {
        let q = self.p.pow(e.min(self.k));
        (0..self.states()).filter(move |&s| self.coordinates(s).iter().all(|c| c % q == 0))
    }

    /// `Pr[X_n ∈ p^e Z^d]` for `e <= k`.
    pub fn prob_divisible(&self, e: u32) -> f64 {
        self.divisible_states(e)
            .map(|s| self.probabilities[s])
            .sum()
    }

    pub fn exact_prob_divisible(&self, e: u32) -> Option<Ratio<BigUint>> {
        let counts = self.exact.as_ref()?;
        let num = self
            .divisible_states(e)
            .fold(BigUint::zero(), |acc, s| acc + &counts[s]);
        Some(Ratio::new(num, self.scale()))
    }

    /// Pushes the law forward to residues modulo `p^j`, `j <= k`.
    pub fn reduce_exact(&self, j: u32) -> Option<Vec<BigUint>> {
        let counts = self.exact.as_ref()?;
        let m = self.p.pow(j.min(self.k));
        let states = (m as usize).pow(self.d as u32);
        let mut out = vec![BigUint::zero(); states];
        for (s, c) in counts.iter().enumerate() {
            let t = self
                .coordinates(s)
                .iter()
                .fold(0usize, |acc, &x| acc * m as usize + (x % m) as usize);
            out[t] += c;
        }
        Some(out)
    }

    /// Exact counts scaled by `(2d)^n`, when available.
    pub fn exact_counts(&self) -> Option<&[BigUint]> {
        self.exact.as_deref()
    }

    /// Rows `x1,…,xd,probability`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        let header: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        writeln!(
            out,
            "# d: {}, p: {}, k: {}, n: {}, exact: {}",
            self.d,
            self.p,
            self.k,
            self.n,
            self.is_exact()
        )
        .expect("write to vec");
        writeln!(out, "{},probability", header.join(",")).expect("write to vec");
        for s in 0..self.states() {
            let coords: Vec<String> = self.coordinates(s).iter().map(u64::to_string).collect();
            writeln!(out, "{},{}", coords.join(","), self.probabilities[s]).expect("write to vec");
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

pub(crate) fn primes_up_to(m: u64) -> Vec<u64> {
    (2..=m).filter(|&p| is_prime(p)).collect()
}

/// 95% normal-approximation half-width for a binomial proportion.
pub fn half_width(successes: u64, trials: u64) -> f64 {
    let p = successes as f64 / trials as f64;
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeDivisibility {
    pub p: u64,
    /// Walks whose endpoint has every coordinate divisible by `p`.
    pub count: u64,
    pub frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdTailEstimate {
    pub d: usize,
    pub n: usize,
    pub m: u64,
    pub samples: u64,
    pub seed: u64,
    /// Walks with `γ > M`.
    pub tail_count: u64,
    /// Walks ending at the origin (`γ = 0`).
    pub zero_count: u64,
    pub tail: f64,
    pub zero: f64,
    pub tail_half_width: f64,
    pub zero_half_width: f64,
    /// Empirical `Pr[X ∈ pZ^d]` for primes `p <= M`.
    pub divisibility: Vec<PrimeDivisibility>,
}

/// Monte Carlo estimates of `Pr[γ(X_{d,n}) > M]` and `Pr[γ = 0]`. Batch `b`
/// draws from stream `b` of `seed`.
pub fn gcd_tail_estimate(
    d: usize,
    n: usize,
    m: u64,
    samples: u64,
    seed: u64,
) -> Result<GcdTailEstimate> {
    if d < 2 || m < 1 {
        return Err(Error::UnsupportedParameter(format!(
            "gcd tail needs d >= 2 and M >= 1 (got d={d}, M={m})"
        )));
    }
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let primes = primes_up_to(m);
    let batches: Vec<(u64, u64)> = rng::batches(samples).collect();
    let parts = exec::map_chunks(batches.len(), |i| {
        let (b, size) = batches[i];
        let mut r = rng::stream(seed, b);
        let (mut tail, mut zero) = (0u64, 0u64);
        let mut div = vec![0u64; primes.len()];
        for _ in 0..size {
            let x = simulate_walk(d, n, &mut r);
            let g = AbelianVector(x).gamma();
            if g == 0 {
                zero += 1;
            } else if g > m {
                tail += 1;
            }
            for (c, &p) in div.iter_mut().zip(&primes) {
                if g.is_multiple_of(p) {
                    *c += 1;
                }
            }
        }
        (tail, zero, div)
    });
    let mut tail_count = 0;
    let mut zero_count = 0;
    let mut div = vec![0u64; primes.len()];
    for (t, z, dv) in parts {
        tail_count += t;
        zero_count += z;
        for (a, b) in div.iter_mut().zip(dv) {
            *a += b;
        }
    }
    let f = |c: u64| c as f64 / samples as f64;
    Ok(GcdTailEstimate {
        d,
        n,
        m,
        samples,
        seed,
        tail_count,
        zero_count,
        tail: f(tail_count),
        zero: f(zero_count),
        tail_half_width: half_width(tail_count, samples),
        zero_half_width: half_width(zero_count, samples),
        divisibility: primes
            .iter()
            .zip(div)
            .map(|(&p, count)| PrimeDivisibility {
                p,
                count,
                frequency: f(count),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeProfile {
    pub p: u64,
    pub k: u32,
    /// `Pr[X ∈ p^e Z^d]` for `e = 0..=k`.
    pub divisible: Vec<f64>,
}

/// Tail prediction assembled from exact per-prime laws under the
/// assumption that divisibility by different primes is independent.
///
/// This is a heuristic: divisibility events are positively correlated
/// (an endpoint on a coordinate hyperplane is divisible by every prime in
/// that coordinate), so the prediction overstates `Pr[γ = 0 or γ > M]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailPrediction {
    pub d: usize,
    pub n: usize,
    pub m: u64,
    pub primes: Vec<PrimeProfile>,
    /// Predicted `Pr[1 <= γ <= M]`.
    pub in_range: f64,
    /// Predicted `Pr[γ = 0 or γ > M]`.
    pub tail_or_zero: f64,
}

pub fn gcd_tail_prediction(d: usize, n: usize, m: u64) -> Result<TailPrediction> {
    let mut profiles = Vec::new();
    for p in primes_up_to(m) {
        let mut k = 1;
        while p.pow(k) <= m {
            k += 1;
        }
        while k > 1 && (p as u128).pow(k * d as u32) > STATE_CAP {
            k -= 1;
        }
        let law = exact_mod_law(d, p, k, n)?;
        let divisible = (0..=k).map(|e| law.prob_divisible(e)).collect();
        profiles.push(PrimeProfile { p, k, divisible });
    }
    let in_range: f64 = (1..=m)
        .map(|g| {
            profiles
                .iter()
                .map(|pp| {
                    let mut e = 0;
                    let mut x = g;
                    while x % pp.p == 0 {
                        x /= pp.p;
                        e += 1;
                    }
                    let at_least = pp.divisible.get(e).copied().unwrap_or(0.0);
                    let more = pp.divisible.get(e + 1).copied().unwrap_or(0.0);
                    at_least - more
                })
                .product::<f64>()
        })
        .sum();
    Ok(TailPrediction {
        d,
        n,
        m,
        primes: profiles,
        in_range,
        tail_or_zero: 1.0 - in_range,
    })
}

/// Exact `Pr[γ = 0]` and `Pr[γ > M]` for the planar walk, `d = 2`.
///
/// `U = X₁ + X₂` and `V = X₁ - X₂` are independent simple ±1 walks of
/// length `n`, so `Pr[U = u, V = v]` factors into two binomial terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarGcdLaw {
    pub n: usize,
    pub m: u64,
    pub zero: f64,
    pub tail: f64,
    pub tail_or_zero: f64,
}

/// Largest `n` accepted by [`planar_gcd_law`] (the sum has `(n+1)²` terms).
pub const PLANAR_MAX_N: usize = 5000;

pub fn planar_gcd_law(n: usize, m: u64) -> Result<PlanarGcdLaw> {
    if n > PLANAR_MAX_N || m < 1 {
        return Err(Error::UnsupportedParameter(format!(
            "planar gcd law needs n <= {PLANAR_MAX_N} and M >= 1 (got n={n}, M={m})"
        )));
    }
    // binom[j] = C(n, j) / 2^n, built in log space
    let mut ln = -(n as f64) * std::f64::consts::LN_2;
    let mut binom = vec![ln.exp()];
    for j in 1..=n {
        ln += ((n - j + 1) as f64).ln() - (j as f64).ln();
        binom.push(ln.exp());
    }
    let (mut zero, mut tail) = (0.0, 0.0);
    for (a, pa) in binom.iter().enumerate() {
        let u = 2 * a as i64 - n as i64;
        for (b, pb) in binom.iter().enumerate() {
            let v = 2 * b as i64 - n as i64;
            let x = AbelianVector(vec![(u + v) / 2, (u - v) / 2]).gamma();
            if x == 0 {
                zero += pa * pb;
            } else if x > m {
                tail += pa * pb;
            }
        }
    }
    Ok(PlanarGcdLaw {
        n,
        m,
        zero,
        tail,
        tail_or_zero: zero + tail,
    })
}
