//! Experiment runner behind the `wordlab` binary.
//!
//! A run turns an [`ExperimentConfig`] into an [`ExperimentReport`], written
//! as `report.json` plus one CSV per table. Reports are a pure function of
//! the config: random words come from stream `r` of the seed for word `r`,
//! sampled measures use seeds derived from `(word, group)`, and every
//! parallel loop folds its results in a fixed order. Wall-clock time is only
//! recorded when `timing = true`.

mod config;
mod output;

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{parse_config_text, read_config_file, ExperimentConfig, Kind, MeasureMode, KEYS};
pub use output::{report_json, write_outputs};

use crate::generation::{hall_max_power, HallReport};
use crate::group_walks::{cyclic_obstruction, mixing_profile, ObstructionRecord, StepSet};
use crate::groups::{read_cayley_table, Group, GroupElement, GroupSpec};
use crate::lattice::{
    exact_mod_law, gcd_tail_estimate, gcd_tail_prediction, planar_gcd_law, GcdTailEstimate,
    PlanarGcdLaw, TailPrediction, PLANAR_MAX_N,
};
use crate::measure::{distribution, power_coverage, Distance, Method};
use crate::words::{sample_word, Word};
use crate::{exec, rng, Error, Result};

pub const TOOL: &str = "wordlab";

/// Wording attached to density reports.
pub const PROXY_NOTE: &str =
    "all_below_tau counts words whose L1 distance to uniform is below tau in every \
     listed group; this is a finite-size proxy, not the asymptotic almost-uniform property";

const HEURISTIC_NOTE: &str =
    "independence heuristic: multiplies exact per-prime laws as if divisibility by \
     different primes were independent; it overstates the tail";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub results: Results,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_clock_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Results {
    Density(DensityResults),
    Trend(TrendResults),
    WalkGcd(WalkGcdResults),
    Mixing(MixingResults),
    Generation(GenerationResults),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub spec: GroupSpec,
    pub order: u32,
}

/// Distance of one word measure to uniform, or why it is missing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub group: GroupSpec,
    pub distance: Option<f64>,
    /// Reduced fraction, exact mode only.
    pub exact_distance: Option<String>,
    /// Whether every `γ`-th power lies in the image; absent for `γ = 0`.
    pub covers_powers: Option<bool>,
    pub error: Option<String>,
    pub budget_error: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordRecord {
    pub index: usize,
    /// Reduced word as signed letters.
    pub word: String,
    pub sampled_length: usize,
    pub reduced_length: usize,
    pub abelianization: Vec<i64>,
    pub gamma: u64,
    pub bezout: Option<Vec<i64>>,
    /// `k` when the word is a conjugate of a proper power `u^k`.
    pub power_exponent: Option<u32>,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub gamma: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityAggregates {
    pub words: usize,
    pub gamma_in_range: usize,
    pub gamma_in_range_fraction: f64,
    pub gamma_zero_or_above_cap: usize,
    pub gamma_zero_or_above_cap_fraction: f64,
    pub all_below_tau: usize,
    pub all_below_tau_fraction: f64,
    pub failed_cells: usize,
    /// Bins `0, 1, …, M` and `>M`.
    pub gamma_histogram: Vec<HistogramBin>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResults {
    pub note: String,
    pub groups: Vec<GroupInfo>,
    pub records: Vec<WordRecord>,
    pub aggregates: DensityAggregates,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendRecord {
    pub group: GroupSpec,
    pub order: Option<u32>,
    pub distance: Option<f64>,
    pub exact_distance: Option<String>,
    pub error: Option<String>,
    pub budget_error: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendResults {
    pub word: String,
    pub gamma: u64,
    /// `(root, k)` when the word is a conjugate of a proper power.
    pub power: Option<(String, u32)>,
    pub rows: Vec<TrendRecord>,
}

/// Empirical `Pr[p | γ]` against the exact mod-`p` law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DpCheck {
    pub p: u64,
    pub empirical: f64,
    pub dp_probability: Option<f64>,
    /// Standardized difference under the DP probability.
    pub z: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkGcdResults {
    pub estimate: GcdTailEstimate,
    /// Sampled `Pr[γ = 0 or γ > M]`.
    pub tail_or_zero: f64,
    pub dp_cross_check: Vec<DpCheck>,
    pub heuristic_note: String,
    pub heuristic: Option<TailPrediction>,
    pub heuristic_error: Option<String>,
    /// Exact law for `d = 2`.
    pub planar_exact: Option<PlanarGcdLaw>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingResults {
    pub group: GroupSpec,
    pub order: u32,
    pub steps: Vec<String>,
    pub obstruction: Option<ObstructionRecord>,
    pub obstruction_verified: Option<bool>,
    pub tau: f64,
    pub first_below_tau: Option<usize>,
    /// L1 distance to uniform after `n = 0, 1, …, n_max` steps.
    pub profile: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub group: GroupSpec,
    pub report: Option<HallReport>,
    pub error: Option<String>,
    pub budget_error: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationResults {
    pub d: u32,
    pub rows: Vec<GenerationRecord>,
}

/// Validates a Cayley-table file and returns the spec that refers to it.
pub fn ingest_cayley_table(path: &Path) -> Result<(GroupSpec, u32)> {
    let table = read_cayley_table(path)?;
    let order = (table.len() as f64).sqrt().round() as u32;
    Ok((GroupSpec::CayleyFile(path.to_path_buf()), order))
}

/// Runs the configured experiment, on `threads` workers if set.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config.threads {
        Some(t) => exec::with_threads(t, || run_inner(config)),
        None => run_inner(config),
    }
}

fn run_inner(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let results = match config.kind {
        Kind::Density => Results::Density(run_density_experiment(config)?),
        Kind::Trend => Results::Trend(run_trend(config)?),
        Kind::WalkGcd => Results::WalkGcd(run_walk_gcd(config)?),
        Kind::Mixing => Results::Mixing(run_mixing(config)?),
        Kind::Generation => Results::Generation(run_generation(config)?),
    };
    Ok(ExperimentReport {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        results,
        wall_clock_seconds: config.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

fn build_groups(specs: &[GroupSpec]) -> Result<Vec<Arc<Group>>> {
    specs
        .iter()
        .map(|s| Group::construct(s).map(Arc::new))
        .collect()
}

fn method(config: &ExperimentConfig, path: &[u64]) -> Method {
    match config.mode {
        MeasureMode::Exact => Method::Exact,
        MeasureMode::Sampled => Method::Sampled {
            samples: config.samples.unwrap_or(1),
            seed: rng::derive_seed(config.seed, path),
        },
    }
}

fn distance_fields(d: &Distance) -> (Option<f64>, Option<String>) {
    (Some(d.to_f64()), d.exact().map(ToString::to_string))
}

fn cell(w: &Word, g: &Group, spec: &GroupSpec, method: Method) -> Cell {
    let computed = distribution(w, g, method).and_then(|dist| {
        let covers = if w.abelianize().is_zero() {
            None
        } else {
            let sampled = matches!(method, Method::Sampled { .. });
            Some(power_coverage(w, g, dist.support(), sampled, None)?.covers_powers)
        };
        Ok((dist.l1_uniform_distance(), covers))
    });
    match computed {
        Ok((d, covers_powers)) => {
            let (distance, exact_distance) = distance_fields(&d);
            Cell {
                group: spec.clone(),
                distance,
                exact_distance,
                covers_powers,
                error: None,
                budget_error: false,
            }
        }
        Err(e) => Cell {
            group: spec.clone(),
            distance: None,
            exact_distance: None,
            covers_powers: None,
            budget_error: e.is_budget(),
            error: Some(e.to_string()),
        },
    }
}

pub fn run_density_experiment(config: &ExperimentConfig) -> Result<DensityResults> {
    let d = config.rank();
    let n = config.length.unwrap_or(1);
    let count = config.words.unwrap_or(1);
    let groups = build_groups(&config.groups)?;
    let words: Vec<Word> = (0..count)
        .map(|r| sample_word(config.model, d, n, &mut rng::stream(config.seed, r as u64)))
        .collect();
    let ng = groups.len();
    let cells = exec::map_chunks(count * ng, |i| {
        let (r, gi) = (i / ng, i % ng);
        cell(
            &words[r],
            &groups[gi],
            &config.groups[gi],
            method(config, &[r as u64, gi as u64]),
        )
    });
    let mut cells = cells.into_iter();
    let records = words
        .iter()
        .enumerate()
        .map(|(index, w)| {
            let ab = w.abelianize();
            Ok(WordRecord {
                index,
                word: w.to_string(),
                sampled_length: n,
                reduced_length: w.len(),
                gamma: ab.gamma(),
                bezout: if ab.is_zero() {
                    None
                } else {
                    Some(ab.bezout_certificate()?.1)
                },
                abelianization: ab.0,
                power_exponent: w.power_decomposition()?.map(|(_, k)| k),
                cells: cells.by_ref().take(ng).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregates = aggregate(&records, config.gcd_cap, config.tau);
    Ok(DensityResults {
        note: PROXY_NOTE.into(),
        groups: config
            .groups
            .iter()
            .zip(&groups)
            .map(|(s, g)| GroupInfo {
                spec: s.clone(),
                order: g.order(),
            })
            .collect(),
        records,
        aggregates,
    })
}

/// Recomputes the density aggregates from per-word records.
pub fn aggregate(records: &[WordRecord], m: u64, tau: f64) -> DensityAggregates {
    let words = records.len();
    let frac = |c: usize| {
        if words == 0 {
            0.0
        } else {
            c as f64 / words as f64
        }
    };
    let in_range = records
        .iter()
        .filter(|r| (1..=m).contains(&r.gamma))
        .count();
    let outside = words - in_range;
    let below = records
        .iter()
        .filter(|r| r.cells.iter().all(|c| c.distance.is_some_and(|x| x < tau)))
        .count();
    let failed_cells = records
        .iter()
        .flat_map(|r| &r.cells)
        .filter(|c| c.error.is_some())
        .count();
    let mut bins = vec![0usize; m as usize + 2];
    for r in records {
        bins[(r.gamma.min(m + 1)) as usize] += 1;
    }
    let gamma_histogram = bins
        .into_iter()
        .enumerate()
        .map(|(g, count)| HistogramBin {
            gamma: if g as u64 == m + 1 {
                format!(">{m}")
            } else {
                g.to_string()
            },
            count,
        })
        .collect();
    DensityAggregates {
        words,
        gamma_in_range: in_range,
        gamma_in_range_fraction: frac(in_range),
        gamma_zero_or_above_cap: outside,
        gamma_zero_or_above_cap_fraction: frac(outside),
        all_below_tau: below,
        all_below_tau_fraction: frac(below),
        failed_cells,
        gamma_histogram,
    }
}

pub fn run_trend(config: &ExperimentConfig) -> Result<TrendResults> {
    let w = config.parsed_word()?;
    let method = method(config, &[0]);
    let mut rows: Vec<TrendRecord> = exec::map_chunks(config.groups.len(), |i| {
        let spec = &config.groups[i];
        let built = Group::construct(spec);
        let order = built.as_ref().ok().map(Group::order);
        match built.and_then(|g| distribution(&w, &g, method)) {
            Ok(dist) => {
                let (distance, exact_distance) = distance_fields(&dist.l1_uniform_distance());
                TrendRecord {
                    group: spec.clone(),
                    order,
                    distance,
                    exact_distance,
                    error: None,
                    budget_error: false,
                }
            }
            Err(e) => TrendRecord {
                group: spec.clone(),
                order,
                distance: None,
                exact_distance: None,
                budget_error: e.is_budget(),
                error: Some(e.to_string()),
            },
        }
    });
    rows.sort_by_key(|r| r.order.unwrap_or(u32::MAX));
    Ok(TrendResults {
        word: w.to_string(),
        gamma: w.abelianize().gamma(),
        power: w
            .power_decomposition()?
            .map(|(root, k)| (root.to_string(), k)),
        rows,
    })
}

pub fn run_walk_gcd(config: &ExperimentConfig) -> Result<WalkGcdResults> {
    let d = config.rank();
    let n = config.length.unwrap_or(1);
    let m = config.gcd_cap;
    let samples = config.samples.unwrap_or(1);
    let estimate = gcd_tail_estimate(d, n, m, samples, config.seed)?;
    let dp_cross_check = exec::map_chunks(estimate.divisibility.len(), |i| {
        let emp = &estimate.divisibility[i];
        match exact_mod_law(d, emp.p, 1, n) {
            Ok(law) => {
                let p0 = law.prob_zero();
                let sigma = (p0 * (1.0 - p0) / samples as f64).sqrt();
                let z = if sigma > 0.0 {
                    (emp.frequency - p0) / sigma
                } else {
                    0.0
                };
                DpCheck {
                    p: emp.p,
                    empirical: emp.frequency,
                    dp_probability: Some(p0),
                    z: Some(z),
                    error: None,
                }
            }
            Err(e) => DpCheck {
                p: emp.p,
                empirical: emp.frequency,
                dp_probability: None,
                z: None,
                error: Some(e.to_string()),
            },
        }
    });
    let (heuristic, heuristic_error) = match gcd_tail_prediction(d, n, m) {
        Ok(h) => (Some(h), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let planar_exact = if d == 2 && n <= PLANAR_MAX_N {
        Some(planar_gcd_law(n, m)?)
    } else {
        None
    };
    Ok(WalkGcdResults {
        tail_or_zero: (estimate.tail_count + estimate.zero_count) as f64 / samples as f64,
        estimate,
        dp_cross_check,
        heuristic_note: HEURISTIC_NOTE.into(),
        heuristic,
        heuristic_error,
        planar_exact,
    })
}

pub fn run_mixing(config: &ExperimentConfig) -> Result<MixingResults> {
    let spec = &config.groups[0];
    let g = Arc::new(Group::construct(spec)?);
    let elems: Vec<GroupElement> = config
        .steps
        .iter()
        .map(|s| g.parse_element(s))
        .collect::<Result<_>>()?;
    let steps = StepSet::uniform(&g, &elems)?;
    let obstruction = cyclic_obstruction(&g, &steps)?;
    let verified = obstruction
        .as_ref()
        .map(|o| o.verify(&g, &steps, 10_000, config.seed));
    let profile: Vec<f64> = mixing_profile(&g, &steps, config.n_max.unwrap_or(1))?
        .iter()
        .map(Distance::to_f64)
        .collect();
    Ok(MixingResults {
        group: spec.clone(),
        order: g.order(),
        steps: elems.iter().map(|&e| g.label(e.index())).collect(),
        obstruction: obstruction.as_ref().map(|o| o.record()),
        obstruction_verified: verified,
        tau: config.tau,
        first_below_tau: profile.iter().position(|&x| x < config.tau),
        profile,
    })
}

pub fn run_generation(config: &ExperimentConfig) -> Result<GenerationResults> {
    let d = u32::try_from(config.rank()).map_err(|_| Error::Config("rank too large".into()))?;
    let rows = config
        .groups
        .iter()
        .map(
            |spec| match Group::construct(spec).and_then(|g| hall_max_power(&g, d)) {
                Ok(r) => GenerationRecord {
                    group: spec.clone(),
                    report: Some(r),
                    error: None,
                    budget_error: false,
                },
                Err(e) => GenerationRecord {
                    group: spec.clone(),
                    report: None,
                    budget_error: e.is_budget(),
                    error: Some(e.to_string()),
                },
            },
        )
        .collect();
    Ok(GenerationResults { d, rows })
}

fn diff<T: PartialEq + std::fmt::Debug>(
    out: &mut Vec<String>,
    what: &str,
    stored: &T,
    recomputed: &T,
) {
    if stored != recomputed {
        out.push(format!(
            "{what}: stored {stored:?}, recomputed {recomputed:?}"
        ));
    }
}

/// Recomputes every aggregate and derived field of a report from its
/// records and lists the mismatches.
pub fn audit(report: &ExperimentReport) -> Vec<String> {
    let mut out = Vec::new();
    let cfg = &report.config;
    match &report.results {
        Results::Density(res) => {
            for r in &res.records {
                let what = |f: &str| format!("record {} {f}", r.index);
                match Word::parse(&r.word, Some(cfg.rank())) {
                    Ok(w) => {
                        diff(
                            &mut out,
                            &what("reduced_length"),
                            &r.reduced_length,
                            &w.len(),
                        );
                        diff(
                            &mut out,
                            &what("abelianization"),
                            &r.abelianization,
                            &w.abelianize().0,
                        );
                    }
                    Err(e) => out.push(format!("{}: {e}", what("word"))),
                }
                let gamma = crate::words::AbelianVector(r.abelianization.clone()).gamma();
                diff(&mut out, &what("gamma"), &r.gamma, &gamma);
                if let Some(b) = &r.bezout {
                    let dot: i64 = b.iter().zip(&r.abelianization).map(|(x, y)| x * y).sum();
                    diff(&mut out, &what("bezout"), &r.gamma, &dot.unsigned_abs());
                }
                for c in &r.cells {
                    if let (Some(x), Some(q)) = (c.distance, &c.exact_distance) {
                        let parsed = parse_fraction(q);
                        if parsed.is_none_or(|p| (p - x).abs() > 1e-12 * x.max(1.0)) {
                            out.push(format!(
                                "{} {}: exact {q} does not match {x}",
                                what("cell"),
                                c.group
                            ));
                        }
                    }
                }
            }
            diff(
                &mut out,
                "aggregates",
                &res.aggregates,
                &aggregate(&res.records, cfg.gcd_cap, cfg.tau),
            );
        }
        Results::Trend(res) => {
            let mut sorted = res.rows.clone();
            sorted.sort_by_key(|r| r.order.unwrap_or(u32::MAX));
            diff(&mut out, "row order", &res.rows, &sorted);
        }
        Results::WalkGcd(res) => {
            let e = &res.estimate;
            let f = |c: u64| c as f64 / e.samples as f64;
            diff(&mut out, "tail", &e.tail, &f(e.tail_count));
            diff(&mut out, "zero", &e.zero, &f(e.zero_count));
            diff(
                &mut out,
                "tail_or_zero",
                &res.tail_or_zero,
                &f(e.tail_count + e.zero_count),
            );
            for (c, dv) in res.dp_cross_check.iter().zip(&e.divisibility) {
                diff(
                    &mut out,
                    &format!("divisibility p={}", dv.p),
                    &dv.frequency,
                    &f(dv.count),
                );
                diff(
                    &mut out,
                    &format!("dp check p={}", c.p),
                    &c.empirical,
                    &dv.frequency,
                );
            }
        }
        Results::Mixing(res) => {
            let first = res.profile.iter().position(|&x| x < res.tau);
            diff(&mut out, "first_below_tau", &res.first_below_tau, &first);
        }
        Results::Generation(res) => {
            for r in res.rows.iter().filter_map(|r| r.report.as_ref()) {
                diff(
                    &mut out,
                    &format!("{} aut_classes", r.group),
                    &r.aut_classes,
                    &(r.generating_tuples / r.aut_order),
                );
                diff(
                    &mut out,
                    &format!("{} free_action", r.group),
                    &r.free_action,
                    &(r.generating_tuples % r.aut_order == 0),
                );
                diff(
                    &mut out,
                    &format!("{} mt_bound", r.group),
                    &r.mt_bound,
                    &(4 * r.order).isqrt(),
                );
            }
        }
    }
    out
}

fn parse_fraction(q: &str) -> Option<f64> {
    use num_bigint::BigUint;
    use num_rational::Ratio;
    let (n, d) = q.split_once('/').unwrap_or((q, "1"));
    let r = Ratio::new(n.parse::<BigUint>().ok()?, d.parse::<BigUint>().ok()?);
    Some(crate::measure::ratio_to_f64(&r))
}

pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
