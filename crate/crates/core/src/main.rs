use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wordlab::harness::{self, ExperimentConfig, Kind};
use wordlab::{Error, Result};

/// Word maps, random walks and generation statistics on small finite groups.
#[derive(Parser)]
#[command(name = "wordlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random words and measure their word maps on each group.
    Density(ConfigArgs),
    /// Distance to uniform of one word across a family of groups.
    Trend(ConfigArgs),
    /// Gcd statistics of the simple random walk on Z^d.
    WalkGcd(ConfigArgs),
    /// Exact mixing profile of a random walk on a group.
    Mixing(ConfigArgs),
    /// Hall counts of generating tuples for catalog simple groups.
    Generation(ConfigArgs),
    /// Recompute every aggregate of a report and list mismatches.
    Audit { report: PathBuf },
    /// Validate a Cayley-table file and print the group spec for it.
    Ingest { path: PathBuf },
}

/// Flags mirror the config-file keys and override values from `--config`.
#[derive(Args)]
struct ConfigArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    rank: Option<String>,
    #[arg(long)]
    length: Option<String>,
    #[arg(long)]
    words: Option<String>,
    /// Comma-separated group specs such as `alternating:5,psl2:7`.
    #[arg(long)]
    groups: Option<String>,
    /// `exact` or `sampled`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    gcd_cap: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory for report.json and the CSV tables.
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    word: Option<String>,
    /// Step elements separated by `;`.
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    timing: Option<String>,
}

impl ConfigArgs {
    fn into_map(self) -> Result<BTreeMap<String, String>> {
        let mut map = match &self.config {
            Some(path) => harness::read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("model", self.model),
            ("rank", self.rank),
            ("length", self.length),
            ("words", self.words),
            ("groups", self.groups),
            ("mode", self.mode),
            ("samples", self.samples),
            ("tau", self.tau),
            ("gcd_cap", self.gcd_cap),
            ("seed", self.seed),
            ("output", self.output),
            ("word", self.word),
            ("steps", self.steps),
            ("n_max", self.n_max),
            ("threads", self.threads),
            ("timing", self.timing),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        Ok(map)
    }
}

fn run_experiment(kind: Kind, args: ConfigArgs) -> Result<()> {
    let config = ExperimentConfig::from_map(&args.into_map()?, Some(kind))?;
    let report = harness::run(&config)?;
    let files = harness::write_outputs(&report, &config.output)?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Density(a) => run_experiment(Kind::Density, a)?,
        Command::Trend(a) => run_experiment(Kind::Trend, a)?,
        Command::WalkGcd(a) => run_experiment(Kind::WalkGcd, a)?,
        Command::Mixing(a) => run_experiment(Kind::Mixing, a)?,
        Command::Generation(a) => run_experiment(Kind::Generation, a)?,
        Command::Audit { report } => {
            let diffs = harness::audit(&harness::read_report(&report)?);
            for d in &diffs {
                println!("{d}");
            }
            println!("audit: {} diffs", diffs.len());
            if !diffs.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Ingest { path } => {
            let (spec, order) = harness::ingest_cayley_table(&path)?;
            println!("{spec} (order {order})");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_budget() {
        2
    } else {
        1
    }
}
