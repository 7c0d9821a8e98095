//! Text renderings of scenario results.
//!
//! All numbers are printed with fixed precision so that identical runs
//! produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::metrics::Summary;
use super::scenario::ScenarioResult;

pub const SUMMARY_HEADER: &str =
    "attack\tmae_mean\tmae_std\tconventional_mae_mean\tconventional_mae_std\tcells\tskipped";
pub const SERIES_HEADER: &str =
    "iteration\tmean_mae\tmean_attacker_credibility\tmean_honest_credibility\tmean_conventional_mae\tmean_responders";

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        "NA".to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), num)
}

/// One row per scenario: `attack`, then mean and standard deviation of the
/// per-consulted-advisor MAE and of the plain absolute error.
pub fn summary_table(result: &ScenarioResult) -> String {
    let (s, c) = (&result.summary, &result.conventional_summary);
    format!(
        "{SUMMARY_HEADER}\n{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        result.attack(),
        num(s.mean),
        num(s.std),
        num(c.mean),
        num(c.std),
        s.cells,
        s.skipped
    )
}

pub fn series_table(result: &ScenarioResult) -> String {
    let mut out = format!("{SERIES_HEADER}\n");
    for s in &result.per_iteration {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.iteration,
            opt(s.mean_mae),
            opt(s.mean_attacker_credibility),
            opt(s.mean_honest_credibility),
            opt(s.mean_conventional_mae),
            num(s.mean_responders)
        )
        .expect("writing to a String");
    }
    out
}

/// Per-item MAE matrix: one row per iteration, one column per item.
pub fn item_table(result: &ScenarioResult) -> String {
    let n_items = result.per_item_mae.first().map_or(0, Vec::len);
    let mut out = String::from("iteration");
    for i in 0..n_items {
        write!(out, "\titem{i}").expect("writing to a String");
    }
    out.push('\n');
    for (row, iteration) in result.per_item_mae.iter().zip(1..) {
        out.push_str(&iteration.to_string());
        for cell in row {
            out.push('\t');
            out.push_str(&opt(*cell));
        }
        out.push('\n');
    }
    out
}

/// Credibility of every identity at the end of each iteration (`NA` when
/// the identity did not exist yet or had been retired).
pub fn trajectory_table(result: &ScenarioResult) -> String {
    let n = result.config.n_iterations;
    let mut out = String::from("agent");
    for i in 1..=n {
        write!(out, "\tit{i}").expect("writing to a String");
    }
    out.push('\n');
    for (id, points) in &result.credibility_trajectories {
        let by_iter: BTreeMap<u32, f64> = points.iter().copied().collect();
        out.push_str(&id.to_string());
        for i in 1..=n {
            out.push('\t');
            out.push_str(&opt(by_iter.get(&i).copied()));
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub attack: String,
    pub mae: Summary,
    pub conventional: Summary,
}

fn parse_num(s: &str) -> Option<f64> {
    if s == "NA" {
        Some(f64::NAN)
    } else {
        s.parse().ok()
    }
}

/// Parses a table written by [`summary_table`].
pub fn parse_summary(text: &str, origin: &str) -> Result<Vec<SummaryRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == SUMMARY_HEADER => {}
        _ => {
            return Err(Error::Parse {
                path: origin.into(),
                line: 1,
                reason: "not a summary table".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse {
            path: origin.into(),
            line: i + 1,
            reason: "malformed summary row".into(),
        };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 7 {
            return Err(bad());
        }
        let n = |s: &str| parse_num(s).ok_or_else(bad);
        let c = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let (cells, skipped) = (c(f[5])?, c(f[6])?);
        rows.push(SummaryRow {
            attack: f[0].to_string(),
            mae: Summary {
                mean: n(f[1])?,
                std: n(f[2])?,
                cells,
                skipped,
            },
            conventional: Summary {
                mean: n(f[3])?,
                std: n(f[4])?,
                cells,
                skipped,
            },
        });
    }
    Ok(rows)
}

/// Merges summaries of several runs into one comparison table. Attack kinds
/// that occur more than once get the run id appended.
pub fn comparison_table(runs: &[(String, Vec<SummaryRow>)]) -> String {
    let mut occurrences: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, rows) in runs {
        for r in rows {
            *occurrences.entry(r.attack.as_str()).or_default() += 1;
        }
    }
    let mut out =
        String::from("attack\tMAE (mean ± std)\tconventional MAE (mean ± std)\tcells\tskipped\n");
    for (run_id, rows) in runs {
        for r in rows {
            let label = if occurrences[r.attack.as_str()] > 1 {
                format!("{}#{}", r.attack, run_id)
            } else {
                r.attack.clone()
            };
            writeln!(
                out,
                "{label}\t{} ± {}\t{} ± {}\t{}\t{}",
                num(r.mae.mean),
                num(r.mae.std),
                num(r.conventional.mean),
                num(r.conventional.std),
                r.mae.cells,
                r.mae.skipped
            )
            .expect("writing to a String");
        }
    }
    out
}
