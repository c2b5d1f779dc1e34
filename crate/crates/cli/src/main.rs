use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qmla_core::orchestrator::{champion_summary, preset, run_qmla, Preset, RunConfig};

mod artifact;
mod report;

#[derive(Parser)]
#[command(name = "qmla", version, about = "Quantum model learning: search, train, compare and report")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full model search and write the ledger and champion summary.
    Search(SearchArgs),
    /// Learn the parameters of one model against a simulated target.
    Train(artifact::TrainArgs),
    /// Bayes factor between two trained-model artifacts.
    Compare(artifact::CompareArgs),
    /// Aggregate one or more run ledgers into CSV plot data.
    Report(ReportArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// TOML run configuration.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration.
    #[arg(long)]
    preset: Option<Preset>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed_override: Option<u64>,
    /// Worker threads; QMLA_WORKERS takes precedence.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    out: PathBuf,
    /// Run directories (containing ledger.ndjson) or ledger files.
    #[arg(required = true)]
    ledgers: Vec<PathBuf>,
}

pub(crate) fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config: RunConfig = toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
    config.validate().with_context(|| format!("invalid config {}", path.display()))?;
    Ok(config)
}

fn workers_override(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var("QMLA_WORKERS") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("QMLA_WORKERS={v:?} is not a count"))?)),
        Err(_) => Ok(flag),
    }
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn search(args: SearchArgs) -> Result<()> {
    let mut config = match (&args.config, args.preset) {
        (Some(path), _) => load_config(path)?,
        (None, Some(p)) => preset(p, 0)?,
        (None, None) => bail!("either --config or --preset is required"),
    };
    if let Some(seed) = args.seed_override {
        config.seed = seed;
    }
    if let Some(w) = workers_override(args.workers)? {
        config.workers = Some(w);
    }
    config.validate()?;
    fs::create_dir_all(&args.out)?;
    let outcome = run_qmla(config)?;
    let ledger_path = args.out.join("ledger.ndjson");
    let file = fs::File::create(&ledger_path).with_context(|| format!("writing {}", ledger_path.display()))?;
    outcome.ledger.write_ndjson(BufWriter::new(file))?;
    let summary = champion_summary(&outcome.ledger)?;
    write_json(&args.out.join("champion.json"), &summary)?;
    println!(
        "champion {} (f1 {:.3}, exact {})",
        summary.key, summary.f1, summary.exact_match
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Search(a) => search(a),
        Command::Train(a) => artifact::train(a),
        Command::Compare(a) => artifact::compare(a),
        Command::Report(a) => report::report(&a.ledgers, &a.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

