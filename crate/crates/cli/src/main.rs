use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use credence::engine::TraceWriter;
use credence::sim::{ingest_epinions, report, run_scenario, ScenarioResult};

mod config;

use config::{resolve, ScenarioFlags};

#[derive(Parser, Debug)]
#[command(
    name = "credence",
    version,
    about = "Simulate trust recommendation under dishonest advisors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one attack scenario and write its results to a directory
    Simulate(Box<ScenarioFlags>),
    /// Convert an Epinions ratings file into per-user datasets
    Ingest {
        #[arg(long, value_name = "PATH")]
        ratings: PathBuf,
        #[arg(long, value_name = "PATH")]
        trust: Option<PathBuf>,
        #[arg(long, value_name = "DIR", default_value = "credence-ingest")]
        out: PathBuf,
        /// Ratings at or above this count as satisfied
        #[arg(long, value_name = "N", default_value_t = 4)]
        satisfied_rating: u8,
    },
    /// Merge the summaries of several simulate runs into one table
    Report {
        /// Output directories of `simulate`
        dirs: Vec<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<credence::Error> for Failure {
    fn from(e: credence::Error) -> Self {
        use credence::Error as E;
        match e {
            E::InvalidConfig { .. } | E::Ingest { .. } | E::Parse { .. } => {
                Failure::Usage(e.to_string())
            }
            E::Io(ref io) if io.kind() == std::io::ErrorKind::NotFound => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(flags) => simulate(&flags),
        Command::Ingest {
            ratings,
            trust,
            out,
            satisfied_rating,
        } => ingest(&ratings, trust.as_deref(), &out, satisfied_rating),
        Command::Report { dirs } => merge_reports(&dirs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn simulate(flags: &ScenarioFlags) -> Result<(), Failure> {
    let effective = resolve(flags).map_err(Failure::Usage)?;
    let result = run_scenario(&effective.scenario)?;
    let out = &effective.out;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_outputs(out, &result)?;
    print!("{}", report::summary_table(&result));
    Ok(())
}

fn write_outputs(out: &Path, result: &ScenarioResult) -> anyhow::Result<()> {
    let config = toml::to_string(&result.config).context("serializing the effective config")?;
    write_file(out, "config.toml", &config)?;
    write_file(out, "summary.txt", &report::summary_table(result))?;
    write_file(out, "series.tsv", &report::series_table(result))?;
    write_file(out, "item_mae.tsv", &report::item_table(result))?;
    write_file(
        out,
        "credibility_trajectories.tsv",
        &report::trajectory_table(result),
    )?;

    let mut traces = TraceWriter::new(create(out, "trace.jsonl")?);
    for t in &result.traces {
        traces.write(t)?;
    }
    traces.into_inner().flush()?;

    let mut w = create(out, "credibility.tsv")?;
    result.credibility.write_snapshot(&mut w)?;
    w.flush()?;
    let mut w = create(out, "inquiries.tsv")?;
    result.inquiries.write_snapshot(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Keeps user names usable as file names.
fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn ingest(ratings: &Path, trust: Option<&Path>, out: &Path, satisfied: u8) -> Result<(), Failure> {
    if !(1..=5).contains(&satisfied) {
        return Err(Failure::Usage(
            "invalid configuration `satisfied-rating`: must be between 1 and 5".into(),
        ));
    }
    let corpus = ingest_epinions(ratings, trust)?;
    let users_dir = out.join("users");
    fs::create_dir_all(&users_dir).with_context(|| format!("creating {}", users_dir.display()))?;

    let mut index = String::from("user\tfile\trecords\n");
    for (i, (name, data)) in corpus
        .user_datasets(&Default::default(), satisfied)
        .iter()
        .enumerate()
    {
        let file = format!("{i:06}-{}.csv", file_stem(name));
        let mut w = create(&users_dir, &file)?;
        data.write_delimited(&mut w, b',')?;
        w.flush().context("flushing user dataset")?;
        index.push_str(&format!("{name}\tusers/{file}\t{}\n", data.len()));
    }
    write_file(out, "users.tsv", &index)?;

    let mut items = String::from("item\tground_truth\n");
    for (name, truth) in corpus.item_ground_truths(satisfied) {
        items.push_str(&format!("{name}\t{truth:.6}\n"));
    }
    write_file(out, "items.tsv", &items)?;

    let stats = corpus.stats;
    let mut text = format!("{stats}\n");
    if trust.is_some() {
        text.push_str(&format!(
            "{} trust edges, {} skipped\n",
            stats.trust_edges, stats.trust_skipped
        ));
    }
    write_file(out, "stats.txt", &text)?;
    print!("{text}");
    Ok(())
}

fn merge_reports(dirs: &[PathBuf]) -> Result<(), Failure> {
    if dirs.is_empty() {
        return Err(Failure::Usage(
            "report needs at least one output directory".into(),
        ));
    }
    let mut runs = Vec::new();
    for dir in dirs {
        let path = dir.join("summary.txt");
        let text = fs::read_to_string(&path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let rows = report::parse_summary(&text, &path.to_string_lossy())?;
        let run_id = dir.file_name().map_or_else(
            || dir.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        runs.push((run_id, rows));
    }
    print!("{}", report::comparison_table(&runs));
    Ok(())
}
