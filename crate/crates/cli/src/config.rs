//! Effective scenario configuration: flags over config file over defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use credence::adversary::AttackKind;
use credence::sim::ScenarioConfig;
use toml::{Table, Value};

/// Key under which a config file may name the output directory.
const OUT_KEY: &str = "out";

#[derive(Args, Debug, Default)]
pub struct ScenarioFlags {
    /// TOML file whose keys mirror the flag names
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "KIND")]
    pub attack: Option<AttackKind>,
    #[arg(long, value_name = "F")]
    pub attacker_fraction: Option<f64>,
    #[arg(long, value_name = "N")]
    pub advisors: Option<usize>,
    #[arg(long, value_name = "N")]
    pub items: Option<usize>,
    #[arg(long, value_name = "N")]
    pub iterations: Option<u32>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "N")]
    pub sybil_count: Option<u32>,
    #[arg(long, value_name = "N")]
    pub switch_iteration: Option<u32>,
    #[arg(long, value_name = "N")]
    pub reset_period: Option<u32>,
    #[arg(long, value_name = "F")]
    pub participation_threshold: Option<f64>,
    #[arg(long, value_name = "N")]
    pub k_folds: Option<usize>,
    #[arg(long, value_name = "N")]
    pub max_depth: Option<usize>,
    #[arg(long, value_name = "N")]
    pub min_leaf: Option<usize>,
    #[arg(long, value_name = "F")]
    pub initial_credibility: Option<f64>,
    #[arg(long, value_name = "N")]
    pub initial_budget: Option<u64>,
    /// Rounds between inquiry-budget replenishments
    #[arg(long, value_name = "N")]
    pub budget_period: Option<u64>,
    /// Label-flip probability of the synthetic population
    #[arg(long, value_name = "F")]
    pub noise: Option<f64>,
    #[arg(long, value_name = "N")]
    pub records_per_advisor: Option<usize>,
    #[arg(long, value_name = "N")]
    pub ratings_per_item: Option<usize>,
    #[arg(long, value_name = "N")]
    pub satisfied_rating: Option<u8>,
    /// Epinions ratings file; a synthetic population is used otherwise
    #[arg(long, value_name = "PATH")]
    pub ratings: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub trust: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

fn int<T: TryInto<i64>>(v: T) -> Value {
    Value::Integer(v.try_into().unwrap_or(i64::MAX))
}

fn path(p: &Path) -> Value {
    Value::String(p.to_string_lossy().into_owned())
}

impl ScenarioFlags {
    fn overrides(&self) -> Table {
        let mut t = Table::new();
        let mut put = |key: &str, v: Option<Value>| {
            if let Some(v) = v {
                t.insert(key.to_string(), v);
            }
        };
        put(
            "attack",
            self.attack.map(|a| Value::String(a.name().to_string())),
        );
        put(
            "attacker-fraction",
            self.attacker_fraction.map(Value::Float),
        );
        put("advisors", self.advisors.map(int));
        put("items", self.items.map(int));
        put("iterations", self.iterations.map(int));
        put("seed", self.seed.map(int));
        put("sybil-count", self.sybil_count.map(int));
        put("switch-iteration", self.switch_iteration.map(int));
        put("reset-period", self.reset_period.map(int));
        put(
            "participation-threshold",
            self.participation_threshold.map(Value::Float),
        );
        put("k-folds", self.k_folds.map(int));
        put("max-depth", self.max_depth.map(int));
        put("min-leaf", self.min_leaf.map(int));
        put(
            "initial-credibility",
            self.initial_credibility.map(Value::Float),
        );
        put("initial-budget", self.initial_budget.map(int));
        put("budget-period", self.budget_period.map(int));
        put("noise", self.noise.map(Value::Float));
        put("records-per-advisor", self.records_per_advisor.map(int));
        put("ratings-per-item", self.ratings_per_item.map(int));
        put("satisfied-rating", self.satisfied_rating.map(int));
        put("ratings", self.ratings.as_deref().map(path));
        put("trust", self.trust.as_deref().map(path));
        put(OUT_KEY, self.out.as_deref().map(path));
        t
    }
}

#[derive(Debug)]
pub struct Effective {
    pub scenario: ScenarioConfig,
    pub out: PathBuf,
}

pub const DEFAULT_OUT: &str = "credence-out";

/// Merges defaults, the config file and the flags, then validates.
/// Errors are meant for the user and name the offending key.
pub fn resolve(flags: &ScenarioFlags) -> Result<Effective, String> {
    let mut merged =
        Table::try_from(ScenarioConfig::new(0, AttackKind::None)).map_err(|e| e.to_string())?;
    merged.remove("seed");

    if let Some(file) = &flags.config {
        let text =
            fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
        let table: Table = text
            .parse()
            .map_err(|e| format!("{}: {e}", file.display()))?;
        merged.extend(table);
    }
    merged.extend(flags.overrides());

    if !merged.contains_key("seed") {
        return Err(
            "invalid configuration `seed`: missing; pass --seed or set it in the config file"
                .into(),
        );
    }
    let out = match merged.remove(OUT_KEY) {
        Some(Value::String(s)) => PathBuf::from(s),
        Some(_) => return Err("invalid configuration `out`: must be a path".into()),
        None => PathBuf::from(DEFAULT_OUT),
    };
    let scenario: ScenarioConfig = merged
        .try_into()
        .map_err(|e: toml::de::Error| e.message().to_string())?;
    scenario.validate().map_err(|e| e.to_string())?;
    Ok(Effective { scenario, out })
}
