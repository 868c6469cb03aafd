//! Flat `key = value` experiment configs.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are
//! comma-separated, except `steps`, whose entries are separated by `;`
//! because permutation cycles may themselves contain commas. Unknown keys
//! are errors and `seed` is mandatory.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::groups::GroupSpec;
use crate::words::{SamplingModel, Word};
use crate::{Error, Result};

/// Every key a config file or command line may set.
pub const KEYS: &[&str] = &[
    "kind", "model", "rank", "length", "words", "groups", "mode", "samples", "tau", "gcd_cap",
    "seed", "output", "word", "steps", "n_max", "threads", "timing",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Density,
    Trend,
    WalkGcd,
    Mixing,
    Generation,
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(Kind::Density),
            "trend" => Ok(Kind::Trend),
            "walk-gcd" => Ok(Kind::WalkGcd),
            "mixing" => Ok(Kind::Mixing),
            "generation" => Ok(Kind::Generation),
            _ => Err(Error::Config(format!("unknown experiment kind {s:?}"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Density => "density",
            Kind::Trend => "trend",
            Kind::WalkGcd => "walk-gcd",
            Kind::Mixing => "mixing",
            Kind::Generation => "generation",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    Exact,
    Sampled,
}

/// A validated experiment description. The output directory and thread
/// count are not part of the echo written into reports, so reports do not
/// depend on where or how wide a run was.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub model: SamplingModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words: Option<usize>,
    pub groups: Vec<GroupSpec>,
    pub mode: MeasureMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub tau: f64,
    pub gcd_cap: u64,
    pub seed: u64,
    #[serde(skip)]
    pub output: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub steps: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip)]
    pub threads: Option<usize>,
    pub timing: bool,
}

/// Parses config text into a raw key map, rejecting unknown and repeated
/// keys.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        let key = k.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "line {}: unknown key {key:?}",
                i + 1
            )));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!(
                "line {}: key {key:?} given twice",
                i + 1
            )));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_text(&text)
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn positive<T: FromStr + PartialOrd + Default + Copy>(key: &str, v: &str) -> Result<T> {
    let x: T = parse(key, v)?;
    if x > T::default() {
        Ok(x)
    } else {
        Err(Error::Config(format!("{key} must be positive")))
    }
}

impl ExperimentConfig {
    /// Builds a config from a raw key map; `kind` may come from the map or
    /// from the caller (the CLI subcommand).
    pub fn from_map(map: &BTreeMap<String, String>, kind: Option<Kind>) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key {k:?}")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let kind = match (kind, get("kind")) {
            (Some(k), None) => k,
            (Some(k), Some(v)) if parse::<Kind>("kind", v)? == k => k,
            (Some(k), Some(v)) => {
                return Err(Error::Config(format!(
                    "kind {v} conflicts with subcommand {k}"
                )))
            }
            (None, Some(v)) => v.parse()?,
            (None, None) => return Err(Error::Config("missing key kind".into())),
        };
        let seed = get("seed")
            .ok_or_else(|| Error::Config("seed is mandatory".into()))
            .and_then(|v| parse::<u64>("seed", v))?;
        let opt_pos_usize = |k: &str| get(k).map(|v| positive::<usize>(k, v)).transpose();
        let groups = match get("groups") {
            Some(v) => v
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let spec: GroupSpec = s.parse()?;
                    spec.validate()?;
                    Ok(spec)
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let tau = get("tau").map_or(Ok(0.1), |v| parse::<f64>("tau", v))?;
        if !(tau > 0.0 && tau < 2.0) {
            return Err(Error::Config(format!("tau must lie in (0, 2), got {tau}")));
        }
        let mode = match get("mode") {
            None | Some("exact") => MeasureMode::Exact,
            Some("sampled") => MeasureMode::Sampled,
            Some(v) => {
                return Err(Error::Config(format!(
                    "mode must be exact or sampled, got {v:?}"
                )))
            }
        };
        let timing = match get("timing") {
            None | Some("false") => false,
            Some("true") => true,
            Some(v) => {
                return Err(Error::Config(format!(
                    "timing must be true or false, got {v:?}"
                )))
            }
        };
        let cfg = ExperimentConfig {
            kind,
            model: get("model").map_or(Ok(SamplingModel::default()), |v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("model: cannot parse {v:?}")))
            })?,
            rank: opt_pos_usize("rank")?,
            length: opt_pos_usize("length")?,
            words: opt_pos_usize("words")?,
            groups,
            mode,
            samples: get("samples")
                .map(|v| positive::<u64>("samples", v))
                .transpose()?,
            tau,
            gcd_cap: get("gcd_cap").map_or(Ok(30), |v| positive::<u64>("gcd_cap", v))?,
            seed,
            output: PathBuf::from(get("output").unwrap_or("wordlab-out")),
            word: get("word").map(str::to_string),
            steps: get("steps")
                .map(|v| {
                    v.split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect()
                })
                .unwrap_or_default(),
            n_max: opt_pos_usize("n_max")?,
            threads: opt_pos_usize("threads")?,
            timing,
        };
        cfg.check_kind()?;
        Ok(cfg)
    }

    fn need<T: Copy>(&self, key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| Error::Config(format!("{} experiments need {key}", self.kind)))
    }

    fn check_kind(&self) -> Result<()> {
        let need_groups = |min: usize, max: usize| {
            if self.groups.len() < min || self.groups.len() > max {
                Err(Error::Config(format!(
                    "{} experiments need {min}..={max} groups, got {}",
                    self.kind,
                    self.groups.len()
                )))
            } else {
                Ok(())
            }
        };
        if self.mode == MeasureMode::Sampled && matches!(self.kind, Kind::Density | Kind::Trend) {
            self.need("samples", self.samples)?;
        }
        match self.kind {
            Kind::Density => {
                self.need("length", self.length)?;
                self.need("words", self.words)?;
                need_groups(1, usize::MAX)
            }
            Kind::Trend => {
                self.parsed_word()?;
                need_groups(1, usize::MAX)
            }
            Kind::WalkGcd => {
                if self.rank() < 2 {
                    return Err(Error::Config("walk-gcd needs rank >= 2".into()));
                }
                self.need("length", self.length)?;
                self.need("samples", self.samples)?;
                Ok(())
            }
            Kind::Mixing => {
                if self.steps.is_empty() {
                    return Err(Error::Config("mixing experiments need steps".into()));
                }
                self.need("n_max", self.n_max)?;
                need_groups(1, 1)
            }
            Kind::Generation => {
                if self.rank() < 2 {
                    return Err(Error::Config(
                        "generation experiments need rank >= 2".into(),
                    ));
                }
                need_groups(1, usize::MAX)
            }
        }
    }

    /// `d`, defaulting to 2.
    pub fn rank(&self) -> usize {
        self.rank.unwrap_or(2)
    }

    pub fn parsed_word(&self) -> Result<Word> {
        let text = self
            .word
            .as_deref()
            .ok_or_else(|| Error::Config(format!("{} experiments need word", self.kind)))?;
        let w = Word::parse(text, self.rank)?;
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_map(&parse_config_text(text)?, None)
    }

    #[test]
    fn parses_density_config() {
        let c = cfg("# comment\nkind = density\nseed = 7\nlength = 10\nwords = 5\ngroups = alternating:5, psl2:7\nmodel = positive\n").unwrap();
        assert_eq!(c.kind, Kind::Density);
        assert_eq!(c.groups.len(), 2);
        assert_eq!(c.model, SamplingModel::Positive);
        assert_eq!(c.tau, 0.1);
        assert_eq!(c.gcd_cap, 30);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            cfg("kind = density\nsede = 7\n"),
            Err(Error::Config(_))
        ));
        assert!(
            matches!(cfg("kind = density\nlength = 3\nwords = 2\ngroups = cyclic:3\n"), Err(Error::Config(m)) if m.contains("seed"))
        );
        assert!(cfg(
            "kind = density\nseed = 1\nlength = 3\nwords = 2\ngroups = cyclic:3\ntau = 2\n"
        )
        .is_err());
        assert!(
            cfg("kind = density\nseed = 1\nlength = 0\nwords = 2\ngroups = cyclic:3\n").is_err()
        );
        assert!(cfg("kind = density\nseed = 1\nseed = 2\n").is_err());
        assert!(cfg("kind = trend\nseed = 1\ngroups = psl2:4\nword = 1 1\n").is_err());
        assert!(cfg("kind = mixing\nseed = 1\ngroups = symmetric:3\nn_max = 5\n").is_err());
        assert!(cfg(
            "kind = density\nseed = 1\nlength = 3\nwords = 2\ngroups = cyclic:3\nmode = sampled\n"
        )
        .is_err());
    }

    #[test]
    fn subcommand_kind_must_agree() {
        let map = parse_config_text("kind = trend\nseed = 1\n").unwrap();
        assert!(ExperimentConfig::from_map(&map, Some(Kind::Density)).is_err());
    }

    #[test]
    fn steps_split_on_semicolons() {
        let c =
            cfg("kind = mixing\nseed = 1\ngroups = symmetric:3\nn_max = 5\nsteps = (1,2); (2 3)\n")
                .unwrap();
        assert_eq!(c.steps, vec!["(1,2)", "(2 3)"]);
    }
}
