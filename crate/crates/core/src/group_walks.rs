//! Random walks `S_1 ⋯ S_n` on finite groups with i.i.d. steps drawn from a
//! weighted step set, which need not be symmetric.
//!
//! Without a cyclic obstruction (a surjection onto a nontrivial cyclic group
//! that is constant on the steps) a generating step set mixes to uniform.
//! With one, the walk is periodic and the law cycles through cosets.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::generation::power_generators;
use crate::groups::{closure_indices, Group, GroupElement, Idx, Quotient, STRUCTURE_CAP};
use crate::measure::{big_ratio_f64, Distance, Distribution, Mode};
use crate::words::{sample_word, SamplingModel, Word};
use crate::{exec, rng, Error, Result};

/// A weighted multiset of steps; weights are positive integers and the
/// probability of a step is its weight over the total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSet {
    group: u64,
    steps: Vec<(Idx, u64)>,
    total: u64,
}

impl StepSet {
    pub fn uniform(g: &Group, elems: &[GroupElement]) -> Result<Self> {
        let weighted: Vec<(GroupElement, u64)> = elems.iter().map(|&e| (e, 1)).collect();
        StepSet::weighted(g, &weighted)
    }

    /// Repeated elements have their weights added.
    pub fn weighted(g: &Group, elems: &[(GroupElement, u64)]) -> Result<Self> {
        if elems.is_empty() || elems.iter().any(|&(_, w)| w == 0) {
            return Err(Error::UnsupportedParameter(
                "step set must be nonempty with positive weights".into(),
            ));
        }
        let mut steps: Vec<(Idx, u64)> = Vec::new();
        for &(e, w) in elems {
            let i = g.indices(&[e])?[0];
            match steps.iter_mut().find(|(x, _)| *x == i) {
                Some(slot) => slot.1 += w,
                None => steps.push((i, w)),
            }
        }
        let total = steps.iter().map(|&(_, w)| w).sum();
        Ok(StepSet {
            group: g.id(),
            steps,
            total,
        })
    }

    pub fn support(&self) -> Vec<Idx> {
        self.steps.iter().map(|&(i, _)| i).collect()
    }

    pub fn steps(&self) -> &[(Idx, u64)] {
        &self.steps
    }

    pub fn probability(&self, i: Idx) -> Ratio<u64> {
        let w = self
            .steps
            .iter()
            .find(|(x, _)| *x == i)
            .map_or(0, |&(_, w)| w);
        Ratio::new(w, self.total)
    }

    fn check(&self, g: &Group) -> Result<()> {
        if self.group == g.id() {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

/// A surjection `G → Z/c` that sends every step to residue 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub modulus: u64,
    /// Residue of each element of `G`.
    pub residues: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRecord {
    pub modulus: u64,
    pub residue_digest: String,
}

impl Obstruction {
    /// SHA-256 over the residues as little-endian `u32`s.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for r in &self.residues {
            h.update(r.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn record(&self) -> ObstructionRecord {
        ObstructionRecord {
            modulus: self.modulus,
            residue_digest: self.digest(),
        }
    }

    /// Checks the homomorphism property on random pairs and constancy on
    /// the steps.
    pub fn verify(&self, g: &Group, steps: &StepSet, pairs: usize, seed: u64) -> bool {
        let c = self.modulus as u32;
        let res = |x: Idx| self.residues[x as usize];
        let mut r = rng::stream(seed, 0);
        let homomorphic = (0..pairs).all(|_| {
            let (a, b) = (r.random_range(0..g.order()), r.random_range(0..g.order()));
            res(g.op(a, b)) == (res(a) + res(b)) % c
        });
        homomorphic && steps.support().iter().all(|&s| res(s) == 1 % c)
    }
}

/// Finds the largest cyclic quotient of `G` on which all steps agree:
/// `A = G/[G,G]`, `D = ⟨π(s)π(s₀)⁻¹⟩ ≤ A`, and the obstruction exists iff
/// `A/D` is nontrivial. `A/D` is then cyclic, generated by the common image
/// of the steps.
pub fn cyclic_obstruction(g: &Arc<Group>, steps: &StepSet) -> Result<Option<Obstruction>> {
    steps.check(g)?;
    let support = steps.support();
    if !g.is_generated_by(&support) {
        return Err(Error::NotGenerating);
    }
    let derived = g.commutator_subgroup()?;
    if derived.is_full() {
        return Ok(None);
    }
    let ab = Quotient::by_normal_subgroup(g.clone(), &derived, format!("{}^ab", g.name()));
    let images: Vec<Idx> = support.iter().map(|&s| ab.project(s)).collect();
    let a = Arc::new(ab.group);
    let first_inv = a.inv(images[0]);
    let diffs: Vec<Idx> = images.iter().map(|&x| a.op(x, first_inv)).collect();
    let d_sub = closure_indices(&a, &diffs);
    let modulus = u64::from(a.order()) / d_sub.len() as u64;
    if modulus == 1 {
        return Ok(None);
    }
    let cyc = Quotient::by_normal_subgroup(a.clone(), &d_sub, "C".into());
    let x = cyc.project(images[0]);
    let mut residue_of = vec![u32::MAX; cyc.group.order() as usize];
    let mut y = 0;
    for r in 0..modulus as u32 {
        residue_of[y as usize] = r;
        y = cyc.group.op(y, x);
    }
    let residues = (0..g.order())
        .map(|e| residue_of[cyc.project(ab.projection[e as usize]) as usize])
        .collect();
    Ok(Some(Obstruction { modulus, residues }))
}

enum Counts {
    Small(Vec<u128>, u128),
    Big(Vec<BigUint>, BigUint),
}

/// Exact law of the walk as integer counts scaled by `total^n`; switches to
/// big integers once the scale no longer fits in 128 bits.
struct LawStepper<'a> {
    g: &'a Group,
    steps: &'a [(Idx, u64)],
    weight: u64,
    counts: Counts,
}

impl<'a> LawStepper<'a> {
    fn new(g: &'a Group, s: &'a StepSet) -> Self {
        let mut c = vec![0u128; g.order() as usize];
        c[0] = 1;
        LawStepper {
            g,
            steps: &s.steps,
            weight: s.total,
            counts: Counts::Small(c, 1),
        }
    }

    fn step(&mut self) {
        let n = self.g.order() as usize;
        if let Counts::Small(c, total) = &self.counts {
            if total.checked_mul(u128::from(self.weight)).is_none() {
                let big = c.iter().map(|&x| BigUint::from(x)).collect();
                self.counts = Counts::Big(big, BigUint::from(*total));
            }
        }
        match &mut self.counts {
            Counts::Small(c, total) => {
                let mut next = vec![0u128; n];
                for (x, &cx) in c.iter().enumerate() {
                    if cx == 0 {
                        continue;
                    }
                    for &(s, w) in self.steps {
                        next[self.g.op(x as Idx, s) as usize] += cx * u128::from(w);
                    }
                }
                *c = next;
                *total *= u128::from(self.weight);
            }
            Counts::Big(c, total) => {
                let mut next = vec![BigUint::zero(); n];
                for (x, cx) in c.iter().enumerate() {
                    if cx.is_zero() {
                        continue;
                    }
                    for &(s, w) in self.steps {
                        let slot = &mut next[self.g.op(x as Idx, s) as usize];
                        if w == 1 {
                            *slot += cx;
                        } else {
                            *slot += cx * w;
                        }
                    }
                }
                *c = next;
                *total *= self.weight;
            }
        }
    }

    fn l1_parts(&self) -> (BigUint, BigUint) {
        let n = self.g.order() as u128;
        match &self.counts {
            Counts::Small(c, total) if total.checked_mul(n).is_some() => {
                let num: BigUint = c
                    .iter()
                    .map(|&x| BigUint::from((x * n).abs_diff(*total)))
                    .sum();
                (num, BigUint::from(*total) * BigUint::from(n))
            }
            _ => {
                let dist = self.distribution();
                let nb = BigUint::from(n);
                let num = dist
                    .counts
                    .iter()
                    .map(|x| {
                        let s = x * &nb;
                        if s >= dist.total {
                            s - &dist.total
                        } else {
                            &dist.total - s
                        }
                    })
                    .sum();
                (num, &dist.total * nb)
            }
        }
    }

    fn distance(&self) -> Distance {
        let (num, den) = self.l1_parts();
        Distance::Exact(Ratio::new(num, den))
    }

    fn distance_f64(&self) -> f64 {
        let (num, den) = self.l1_parts();
        big_ratio_f64(&num, &den)
    }

    fn distribution(&self) -> Distribution {
        let (counts, total) = match &self.counts {
            Counts::Small(c, t) => (
                c.iter().map(|&x| BigUint::from(x)).collect(),
                BigUint::from(*t),
            ),
            Counts::Big(c, t) => (c.clone(), t.clone()),
        };
        Distribution {
            group: self.g.name().to_string(),
            counts,
            total,
            mode: Mode::Exact,
        }
    }
}

fn walk_cap(g: &Group) -> Result<()> {
    if g.order() > STRUCTURE_CAP {
        Err(Error::TooLarge {
            order: u64::from(g.order()),
            cap: u64::from(STRUCTURE_CAP),
        })
    } else {
        Ok(())
    }
}

/// Exact law of `S_1 ⋯ S_n`.
pub fn exact_walk_law(g: &Group, steps: &StepSet, n: usize) -> Result<Distribution> {
    steps.check(g)?;
    walk_cap(g)?;
    let mut law = LawStepper::new(g, steps);
    for _ in 0..n {
        law.step();
    }
    Ok(law.distribution())
}

/// Exact L1 distance to uniform after each step `0..=n_max`.
pub fn mixing_profile(g: &Group, steps: &StepSet, n_max: usize) -> Result<Vec<Distance>> {
    steps.check(g)?;
    walk_cap(g)?;
    let mut law = LawStepper::new(g, steps);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(law.distance());
    for _ in 0..n_max {
        law.step();
        out.push(law.distance());
    }
    Ok(out)
}

/// First `n <= n_max` with distance below `eps`, if any.
pub fn mixing_time(g: &Group, steps: &StepSet, eps: f64, n_max: usize) -> Result<Option<usize>> {
    steps.check(g)?;
    walk_cap(g)?;
    let mut law = LawStepper::new(g, steps);
    for n in 0..=n_max {
        if law.distance_f64() < eps {
            return Ok(Some(n));
        }
        law.step();
    }
    Ok(None)
}

/// Comparison of two samplers on `G^N`: a random positive word of length
/// `n` evaluated at `N` fixed `d`-tuples, and the `n`-step walk on `G^N`
/// whose `i`-th step is `(g_{1i}, …, g_{Ni})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerWalkReport {
    pub factors: usize,
    pub rank: usize,
    pub n: usize,
    pub samples: u64,
    /// L1 distance between the two samplers' empirical marginals.
    pub marginal_l1_between: Vec<f64>,
    pub marginal_l1_uniform_words: Vec<f64>,
    pub marginal_l1_uniform_walk: Vec<f64>,
    /// Two-sample chi-square statistic per marginal and its degrees of
    /// freedom (cells with mass in either sample, minus one).
    pub marginal_chi_square: Vec<(f64, usize)>,
    pub joint_l1_between: Option<f64>,
    pub joint_l1_uniform_words: Option<f64>,
    pub joint_l1_uniform_walk: Option<f64>,
    /// Exact L1 distance of the walk law on `G^N` to uniform.
    pub exact_joint_l1_uniform: Option<f64>,
    /// Whether the steps generate `G^N` (by closure in `G^N`).
    pub steps_generate_power: Option<bool>,
}

const JOINT_CAP: u64 = 1_000_000;

fn l1_between(a: &[u64], b: &[u64], samples: u64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.abs_diff(y) as f64)
        .sum::<f64>()
        / samples as f64
}

fn l1_uniform(a: &[u64], samples: u64) -> f64 {
    let u = 1.0 / a.len() as f64;
    a.iter()
        .map(|&x| (x as f64 / samples as f64 - u).abs())
        .sum()
}

fn chi_square(a: &[u64], b: &[u64]) -> (f64, usize) {
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        cells += 1;
        let d = x as f64 - y as f64;
        stat += d * d / (x + y) as f64;
    }
    (stat, cells.saturating_sub(1))
}

struct SampleCounts {
    marginals: Vec<Vec<u64>>,
    joint: Option<Vec<u64>>,
}

fn tally(
    g: &Group,
    factors: usize,
    joint: bool,
    samples: u64,
    seed: u64,
    draw: impl Fn(&mut rng::StreamRng, &mut [Idx]) + Sync,
) -> SampleCounts {
    let n = g.order() as usize;
    let joint_size = if joint { n.pow(factors as u32) } else { 0 };
    let batches: Vec<(u64, u64)> = rng::batches(samples).collect();
    let parts = exec::map_chunks(batches.len(), |i| {
        let (b, size) = batches[i];
        let mut r = rng::stream(seed, b);
        let mut marginals = vec![vec![0u64; n]; factors];
        let mut jc = vec![0u64; joint_size];
        let mut values = vec![0 as Idx; factors];
        for _ in 0..size {
            draw(&mut r, &mut values);
            for (m, &v) in marginals.iter_mut().zip(&values) {
                m[v as usize] += 1;
            }
            if joint {
                let idx = values.iter().fold(0usize, |acc, &v| acc * n + v as usize);
                jc[idx] += 1;
            }
        }
        (marginals, jc)
    });
    let mut marginals = vec![vec![0u64; n]; factors];
    let mut jc = vec![0u64; joint_size];
    for (m, j) in parts {
        for (acc, part) in marginals.iter_mut().zip(m) {
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        }
        for (a, p) in jc.iter_mut().zip(j) {
            *a += p;
        }
    }
    SampleCounts {
        marginals,
        joint: joint.then_some(jc),
    }
}

pub fn power_walk_equivalence(
    g: &Arc<Group>,
    tuples: &[Vec<GroupElement>],
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<PowerWalkReport> {
    let factors = tuples.len();
    let rank = tuples.first().map_or(0, Vec::len);
    if factors == 0 || rank == 0 || tuples.iter().any(|t| t.len() != rank) {
        return Err(Error::DimensionMismatch(format!(
            "need N >= 1 tuples of equal length d >= 1 (got lengths {:?})",
            tuples.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let t: Vec<Vec<Idx>> = tuples.iter().map(|x| g.indices(x)).collect::<Result<_>>()?;
    let power_order = u64::from(g.order()).checked_pow(factors as u32);
    let joint = power_order.is_some_and(|o| o <= JOINT_CAP);

    let words = tally(
        g,
        factors,
        joint,
        samples,
        rng::derive_seed(seed, &[1]),
        |r, out| {
            let w: Word = sample_word(SamplingModel::Positive, rank, n, r);
            for (o, tuple) in out.iter_mut().zip(&t) {
                *o = w.evaluate_indices(g, tuple);
            }
        },
    );
    let walk = tally(
        g,
        factors,
        joint,
        samples,
        rng::derive_seed(seed, &[2]),
        |r, out| {
            out.fill(0);
            for _ in 0..n {
                let i = r.random_range(0..rank);
                for (o, tuple) in out.iter_mut().zip(&t) {
                    *o = g.op(*o, tuple[i]);
                }
            }
        },
    );

    let mut exact_joint = None;
    let mut generated = None;
    if power_order.is_some_and(|o| o <= 10_000_000) {
        let (power, step_idx) = power_generators(g, tuples)?;
        let step_elems: Vec<GroupElement> = step_idx
            .iter()
            .map(|&i| power.element(i))
            .collect::<Result<_>>()?;
        generated = Some(power.is_generated_by(&step_idx));
        if power.order() <= STRUCTURE_CAP {
            let steps = StepSet::uniform(&power, &step_elems)?;
            exact_joint = Some(
                exact_walk_law(&power, &steps, n)?
                    .l1_uniform_distance()
                    .to_f64(),
            );
        }
    }

    let between = |a: &Option<Vec<u64>>, b: &Option<Vec<u64>>| match (a, b) {
        (Some(a), Some(b)) => Some(l1_between(a, b, samples)),
        _ => None,
    };
    Ok(PowerWalkReport {
        factors,
        rank,
        n,
        samples,
        marginal_l1_between: words
            .marginals
            .iter()
            .zip(&walk.marginals)
            .map(|(a, b)| l1_between(a, b, samples))
            .collect(),
        marginal_l1_uniform_words: words
            .marginals
            .iter()
            .map(|a| l1_uniform(a, samples))
            .collect(),
        marginal_l1_uniform_walk: walk
            .marginals
            .iter()
            .map(|a| l1_uniform(a, samples))
            .collect(),
        marginal_chi_square: words
            .marginals
            .iter()
            .zip(&walk.marginals)
            .map(|(a, b)| chi_square(a, b))
            .collect(),
        joint_l1_between: between(&words.joint, &walk.joint),
        joint_l1_uniform_words: words.joint.as_ref().map(|a| l1_uniform(a, samples)),
        joint_l1_uniform_walk: walk.joint.as_ref().map(|a| l1_uniform(a, samples)),
        exact_joint_l1_uniform: exact_joint,
        steps_generate_power: generated,
    })
}
