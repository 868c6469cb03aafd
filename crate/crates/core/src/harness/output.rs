//! Report files: `report.json` plus one CSV per table.

use std::path::{Path, PathBuf};

use super::{ExperimentReport, Results};
use crate::{Error, Result};

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to vec");
    for row in rows {
        w.write_record(&row).expect("write to vec");
    }
    String::from_utf8(w.into_inner().expect("flush to vec")).expect("utf-8 fields")
}

fn tables(report: &ExperimentReport) -> Vec<(&'static str, String)> {
    match &report.results {
        Results::Density(res) => {
            let words = table(
                &[
                    "index",
                    "sampled_length",
                    "reduced_length",
                    "gamma",
                    "abelianization",
                    "power_exponent",
                    "word",
                ],
                res.records.iter().map(|r| {
                    let ab: Vec<String> = r.abelianization.iter().map(i64::to_string).collect();
                    vec![
                        r.index.to_string(),
                        r.sampled_length.to_string(),
                        r.reduced_length.to_string(),
                        r.gamma.to_string(),
                        ab.join(" "),
                        opt(&r.power_exponent),
                        r.word.clone(),
                    ]
                }),
            );
            let cells = table(
                &[
                    "index",
                    "group",
                    "distance",
                    "exact_distance",
                    "covers_powers",
                    "error",
                ],
                res.records.iter().flat_map(|r| {
                    r.cells.iter().map(move |c| {
                        vec![
                            r.index.to_string(),
                            c.group.to_string(),
                            opt(&c.distance),
                            opt(&c.exact_distance),
                            opt(&c.covers_powers),
                            opt(&c.error),
                        ]
                    })
                }),
            );
            let hist = table(
                &["gamma", "count"],
                res.aggregates
                    .gamma_histogram
                    .iter()
                    .map(|b| vec![b.gamma.clone(), b.count.to_string()]),
            );
            vec![
                ("words.csv", words),
                ("cells.csv", cells),
                ("gamma_histogram.csv", hist),
            ]
        }
        Results::Trend(res) => vec![(
            "trend.csv",
            table(
                &["group", "order", "distance", "exact_distance", "error"],
                res.rows.iter().map(|r| {
                    vec![
                        r.group.to_string(),
                        opt(&r.order),
                        opt(&r.distance),
                        opt(&r.exact_distance),
                        opt(&r.error),
                    ]
                }),
            ),
        )],
        Results::WalkGcd(res) => vec![(
            "dp_cross_check.csv",
            table(
                &["p", "empirical", "dp_probability", "z"],
                res.dp_cross_check.iter().map(|c| {
                    vec![
                        c.p.to_string(),
                        c.empirical.to_string(),
                        opt(&c.dp_probability),
                        opt(&c.z),
                    ]
                }),
            ),
        )],
        Results::Mixing(res) => vec![(
            "mixing.csv",
            table(
                &["n", "l1_distance"],
                res.profile
                    .iter()
                    .enumerate()
                    .map(|(n, d)| vec![n.to_string(), d.to_string()]),
            ),
        )],
        Results::Generation(res) => vec![(
            "generation.csv",
            table(
                &[
                    "group",
                    "d",
                    "generating_tuples",
                    "aut_order",
                    "aut_classes",
                    "mt_bound",
                    "consistent",
                    "error",
                ],
                res.rows.iter().map(|r| {
                    let h = r.report.as_ref();
                    vec![
                        r.group.to_string(),
                        res.d.to_string(),
                        opt(&h.map(|h| h.generating_tuples)),
                        opt(&h.map(|h| h.aut_order)),
                        opt(&h.map(|h| h.aut_classes)),
                        opt(&h.map(|h| h.mt_bound)),
                        opt(&h.and_then(|h| h.consistent)),
                        opt(&r.error),
                    ]
                }),
            ),
        )],
    }
}

pub fn report_json(report: &ExperimentReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Writes `report.json` and the CSV tables into `dir`, returning the paths.
pub fn write_outputs(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![("report.json", report_json(report))];
    files.extend(tables(report));
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}
