//! Pushforward measures of word maps.
//!
//! [`exact_distribution`] counts `#{t ∈ G^d : w(t) = g}` by enumerating the
//! tuple space in mixed radix with the last coordinate varying fastest. For
//! each prefix `(t_1, …, t_{d-1})` the word is split at the occurrences of
//! `x_d` into constant blocks, so the inner loop over `t_d` costs one
//! multiplication per block and per `x_d`-run instead of one per letter.

use std::fmt;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exec;
use crate::groups::{ElementSet, Group, GroupSpec, Idx};
use crate::rng;
use crate::words::{Letter, Word};
use crate::{Error, Result};

/// Largest tuple space enumerated by [`exact_distribution`].
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

const MAX_CHUNKS: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

/// How a word measure is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pub group: String,
    pub counts: Vec<BigUint>,
    pub total: BigUint,
    pub mode: Mode,
}

/// L1 distance `Σ_g |P(g) - 1/|G||`, in `[0, 2)`. Exact distributions give
/// a reduced rational; sampled ones a float. Total variation is half of it.
#[derive(Clone, Debug, PartialEq)]
pub enum Distance {
    Exact(Ratio<BigUint>),
    Sampled(f64),
}

impl Distance {
    pub fn to_f64(&self) -> f64 {
        match self {
            Distance::Exact(r) => ratio_to_f64(r),
            Distance::Sampled(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Ratio<BigUint>> {
        match self {
            Distance::Exact(r) => Some(r),
            Distance::Sampled(_) => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(r) => write!(f, "{r}"),
            Distance::Sampled(x) => write!(f, "{x}"),
        }
    }
}

/// Converts a ratio of big integers to the nearest-ish `f64` without
/// overflowing on huge numerators and denominators.
pub fn ratio_to_f64(r: &Ratio<BigUint>) -> f64 {
    big_ratio_f64(r.numer(), r.denom())
}

pub(crate) fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits().max(num.bits()).saturating_sub(1000);
    let (n, d) = (num >> shift, den >> shift);
    let (nb, db) = (n.bits(), d.bits());
    // bring both into f64 range while keeping 64 significant bits
    let ns = nb.saturating_sub(64);
    let ds = db.saturating_sub(64);
    let nf = (&n >> ns).to_f64().unwrap_or(f64::INFINITY);
    let df = (&d >> ds).to_f64().unwrap_or(f64::INFINITY);
    nf / df * 2f64.powi(ns as i32 - ds as i32)
}

impl Distribution {
    pub(crate) fn from_u64(group: &Group, counts: Vec<u64>, mode: Mode) -> Self {
        let total: u64 = counts.iter().sum();
        Distribution {
            group: group.name().to_string(),
            counts: counts.into_iter().map(BigUint::from).collect(),
            total: BigUint::from(total),
            mode,
        }
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, i: Idx) -> &BigUint {
        &self.counts[i as usize]
    }

    pub fn probability(&self, i: Idx) -> f64 {
        big_ratio_f64(&self.counts[i as usize], &self.total)
    }

    pub fn exact_probability(&self, i: Idx) -> Ratio<BigUint> {
        Ratio::new(self.counts[i as usize].clone(), self.total.clone())
    }

    pub fn support(&self) -> ElementSet {
        ElementSet::from_indices(
            self.counts.len() as u32,
            (0..self.counts.len())
                .filter(|&i| !self.counts[i].is_zero())
                .map(|i| i as Idx),
        )
    }

    pub fn l1_uniform_distance(&self) -> Distance {
        let n = BigUint::from(self.counts.len());
        let mut num = BigUint::zero();
        for c in &self.counts {
            let scaled = c * &n;
            num += if scaled >= self.total {
                &scaled - &self.total
            } else {
                &self.total - &scaled
            };
        }
        let den = &n * &self.total;
        match self.mode {
            Mode::Exact => Distance::Exact(Ratio::new(num, den)),
            Mode::Sampled => Distance::Sampled(big_ratio_f64(&num, &den)),
        }
    }

    /// Writes `element_index,count,probability` rows after `# key: value`
    /// comment lines.
    pub fn write_csv(&self, path: &Path, meta: &[(&str, String)]) -> Result<()> {
        let mut out = Vec::new();
        for (k, v) in meta {
            writeln!(out, "# {k}: {v}").expect("write to vec");
        }
        writeln!(
            out,
            "# mode: {}",
            if self.mode == Mode::Exact {
                "exact"
            } else {
                "sampled"
            }
        )
        .expect("write to vec");
        writeln!(out, "# total: {}", self.total).expect("write to vec");
        writeln!(out, "element_index,count,probability").expect("write to vec");
        for (i, c) in self.counts.iter().enumerate() {
            writeln!(out, "{i},{c},{}", self.probability(i as Idx)).expect("write to vec");
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// A word split at the occurrences of its last generator:
/// `B_0 · x_d^{e_1} · B_1 ⋯ x_d^{e_k} · B_k`.
struct Segmented {
    blocks: Vec<Vec<Letter>>,
    exponents: Vec<i64>,
}

impl Segmented {
    fn new(w: &Word) -> Self {
        let last = w.rank() as Letter;
        let mut blocks = vec![Vec::new()];
        let mut exponents = Vec::new();
        let mut run = 0i64;
        for &l in w.letters() {
            if l.abs() == last {
                run += i64::from(l.signum());
            } else {
                if run != 0 {
                    exponents.push(run);
                    blocks.push(Vec::new());
                    run = 0;
                }
                blocks.last_mut().expect("nonempty").push(l);
            }
        }
        if run != 0 {
            exponents.push(run);
            blocks.push(Vec::new());
        }
        Segmented { blocks, exponents }
    }
}

fn eval_block(g: &Group, block: &[Letter], prefix: &[Idx]) -> Idx {
    block.iter().fold(0, |acc, &l| {
        let x = prefix[l.unsigned_abs() as usize - 1];
        g.op(acc, if l > 0 { x } else { g.inv(x) })
    })
}

fn check_budget(order: u32, rank: usize) -> Result<u128> {
    let needed = (order as u128)
        .checked_pow(rank as u32)
        .unwrap_or(u128::MAX);
    if needed > ENUMERATION_BUDGET {
        Err(Error::BudgetExceeded {
            needed,
            budget: ENUMERATION_BUDGET,
        })
    } else {
        Ok(needed)
    }
}

/// Exact pushforward of the uniform measure on `G^d` under the word map.
pub fn exact_distribution(w: &Word, g: &Group) -> Result<Distribution> {
    let d = w.rank();
    check_budget(g.order(), d)?;
    let n = g.order();
    let seg = Segmented::new(w);
    let mut distinct: Vec<i64> = seg.exponents.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let power_tables: Vec<Vec<Idx>> = distinct
        .iter()
        .map(|&e| (0..n).map(|x| g.pow(x, e)).collect())
        .collect();
    let tables: Vec<&[Idx]> = seg
        .exponents
        .iter()
        .map(|e| power_tables[distinct.binary_search(e).expect("present")].as_slice())
        .collect();

    let prefixes = u64::from(n).pow(d as u32 - 1);
    let ranges = exec::split_range(prefixes, MAX_CHUNKS);
    let partials = exec::map_chunks(ranges.len(), |c| {
        let range = ranges[c].clone();
        let mut counts = vec![0u64; n as usize];
        let mut digits = vec![0 as Idx; d.saturating_sub(1)];
        let mut rest = range.start;
        for digit in digits.iter_mut().rev() {
            *digit = (rest % u64::from(n)) as Idx;
            rest /= u64::from(n);
        }
        let mut values = vec![0 as Idx; seg.blocks.len()];
        for _ in range {
            for (v, block) in values.iter_mut().zip(&seg.blocks) {
                *v = eval_block(g, block, &digits);
            }
            if tables.is_empty() {
                counts[values[0] as usize] += u64::from(n);
            } else {
                for t in 0..n as usize {
                    let mut acc = values[0];
                    for (table, &block) in tables.iter().zip(&values[1..]) {
                        acc = g.op(acc, table[t]);
                        if block != 0 {
                            acc = g.op(acc, block);
                        }
                    }
                    counts[acc as usize] += 1;
                }
            }
            for digit in digits.iter_mut().rev() {
                *digit += 1;
                if *digit < n {
                    break;
                }
                *digit = 0;
            }
        }
        counts
    });
    let mut counts = vec![0u64; n as usize];
    for part in partials {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(Distribution::from_u64(g, counts, Mode::Exact))
}

/// Word values at i.i.d. uniform tuples. Batch `b` of [`rng::BATCH`]
/// samples draws from stream `b` of `seed`.
pub fn monte_carlo_distribution(
    w: &Word,
    g: &Group,
    samples: u64,
    seed: u64,
) -> Result<Distribution> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let n = g.order();
    let batches: Vec<(u64, u64)> = rng::batches(samples).collect();
    let groups = exec::split_range(batches.len() as u64, MAX_CHUNKS);
    let partials = exec::map_chunks(groups.len(), |c| {
        let mut counts = vec![0u64; n as usize];
        let mut tuple = vec![0 as Idx; w.rank()];
        for &(b, size) in &batches[groups[c].start as usize..groups[c].end as usize] {
            let mut r = rng::stream(seed, b);
            for _ in 0..size {
                for t in tuple.iter_mut() {
                    *t = r.random_range(0..n);
                }
                counts[w.evaluate_indices(g, &tuple) as usize] += 1;
            }
        }
        counts
    });
    let mut counts = vec![0u64; n as usize];
    for part in partials {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(Distribution::from_u64(g, counts, Mode::Sampled))
}

pub fn distribution(w: &Word, g: &Group, method: Method) -> Result<Distribution> {
    match method {
        Method::Exact => exact_distribution(w, g),
        Method::Sampled { samples, seed } => monte_carlo_distribution(w, g, samples, seed),
    }
}

pub fn mth_powers(g: &Group, m: u64) -> ElementSet {
    ElementSet::from_indices(g.order(), (0..g.order()).map(|x| g.pow(x, m as i64)))
}

#[derive(Clone, Debug)]
pub struct ImageReport {
    pub image: ElementSet,
    pub m: u64,
    pub mth_powers: ElementSet,
    pub covers_powers: bool,
    /// Smallest image element that is not an `m`-th power.
    pub non_power_witness: Option<Idx>,
}

impl ImageReport {
    /// Re-derives the flag and the witness from the stored sets.
    pub fn is_consistent(&self) -> bool {
        let covers = self.mth_powers.is_subset(&self.image);
        let witness_ok = match self.non_power_witness {
            Some(x) => self.image.contains(x) && !self.mth_powers.contains(x),
            None => self.image.is_subset(&self.mth_powers),
        };
        covers == self.covers_powers && witness_ok
    }
}

/// Image of the word map (exact, or sampled and then completed by the
/// values `g^m` forced by a Bezout certificate) compared with the `m`-th
/// powers, `m = γ(w̄)`. For `γ = 0` an explicit `m` must be given; the Bezout
/// completion is skipped in that case.
pub fn image_and_power_coverage(
    w: &Word,
    g: &Group,
    method: Method,
    explicit_m: Option<u64>,
) -> Result<ImageReport> {
    let image = distribution(w, g, method)?.support();
    power_coverage(
        w,
        g,
        image,
        matches!(method, Method::Sampled { .. }),
        explicit_m,
    )
}

/// Coverage check on an already computed image; `complete` adds the
/// Bezout values first.
pub fn power_coverage(
    w: &Word,
    g: &Group,
    mut image: ElementSet,
    complete: bool,
    explicit_m: Option<u64>,
) -> Result<ImageReport> {
    let gamma = w.abelianize().gamma();
    let m = match (gamma, explicit_m) {
        (0, Some(m)) if m > 0 => m,
        (0, _) => return Err(Error::GammaZeroWithoutExplicitM),
        (gamma, _) => gamma,
    };
    let powers = mth_powers(g, m);
    if complete && gamma > 0 {
        let (_, b) = w.abelianize().bezout_certificate()?;
        for x in 0..g.order() {
            let tuple: Vec<Idx> = b.iter().map(|&bi| g.pow(x, bi)).collect();
            image.insert(w.evaluate_indices(g, &tuple));
        }
    }
    let covers_powers = powers.is_subset(&image);
    let non_power_witness = image.iter().find(|&x| !powers.contains(x));
    Ok(ImageReport {
        image,
        m,
        mth_powers: powers,
        covers_powers,
        non_power_witness,
    })
}

#[derive(Clone, Debug)]
pub struct TrendRow {
    pub spec: GroupSpec,
    pub order: Option<u32>,
    pub distance: std::result::Result<Distance, String>,
    pub budget_error: bool,
}

/// Distance to uniform across a family of groups, one row per group ordered
/// by group order. A group that cannot be built or enumerated yields a
/// failed row rather than an error.
pub fn family_trend(w: &Word, family: &[GroupSpec], method: Method) -> Vec<TrendRow> {
    let mut rows: Vec<TrendRow> = family
        .iter()
        .map(|spec| {
            let built = Group::construct(spec);
            let order = built.as_ref().ok().map(Group::order);
            let result = built
                .and_then(|g| distribution(w, &g, method))
                .map(|d| d.l1_uniform_distance());
            TrendRow {
                spec: spec.clone(),
                order,
                budget_error: matches!(&result, Err(e) if e.is_budget()),
                distance: result.map_err(|e| e.to_string()),
            }
        })
        .collect();
    rows.sort_by_key(|r| r.order.unwrap_or(u32::MAX));
    rows
}
