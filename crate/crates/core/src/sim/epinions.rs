//! Reader for Epinions-style rating dumps.
//!
//! Ratings files hold one `user item rating` triple per line, separated by
//! commas, tabs or spaces, with integer ratings in 1..=5. The optional trust
//! file holds `truster trustee value` triples. Blank lines and lines starting
//! with `#` or `%` are ignored. Other lines that fail to parse are counted
//! and skipped; if more than 10% of a file is skipped the ingest fails.
//!
//! Each user becomes an advisor whose records are the items they rated.
//! Record features, in schema order:
//! - `others_mean`: mean rating given to the item by other users
//!   (the corpus-wide mean when nobody else rated it),
//! - `others_count`: number of other users who rated it,
//! - `others_variance`: population variance of those ratings (0 when fewer
//!   than two).
//!
//! The label is Trustworthy when the user's own rating reaches the
//! satisfaction threshold.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::identity::Verdict;
use crate::learner::{AdvisorDataset, InteractionRecord};

use super::metrics::ground_truth_trust;
use super::population::{Item, Population};

pub const EPINIONS_SCHEMA: [&str; 3] = ["others_mean", "others_count", "others_variance"];
pub const MAX_SKIP_RATIO: f64 = 0.10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub users: usize,
    pub items: usize,
    pub reviews: usize,
    pub skipped: usize,
    pub trust_edges: usize,
    pub trust_skipped: usize,
}

impl fmt::Display for IngestStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} users, {} items, {} reviews, {} skipped",
            self.users, self.items, self.reviews, self.skipped
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Rating {
    user: usize,
    item: usize,
    value: u8,
}

/// Parsed ratings with interned user and item names.
#[derive(Clone, Debug)]
pub struct RatingsCorpus {
    users: Vec<String>,
    items: Vec<String>,
    ratings: Vec<Rating>,
    pub stats: IngestStats,
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
        .collect()
}

fn parse_rating(s: &str) -> Option<u8> {
    let v: f64 = s.parse().ok()?;
    (v.fract() == 0.0 && (1.0..=5.0).contains(&v)).then_some(v as u8)
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#') && !l.starts_with('%')).then_some((i + 1, l))
    })
}

fn check_skip_ratio(path: &Path, good: usize, skipped: usize) -> Result<()> {
    let total = good + skipped;
    if total > 0 && skipped as f64 / total as f64 > MAX_SKIP_RATIO {
        return Err(Error::Ingest {
            path: path.to_path_buf(),
            reason: format!("{skipped} of {total} lines are malformed"),
        });
    }
    Ok(())
}

fn intern(names: &mut Vec<String>, index: &mut BTreeMap<String, usize>, name: &str) -> usize {
    if let Some(&i) = index.get(name) {
        return i;
    }
    names.push(name.to_string());
    index.insert(name.to_string(), names.len() - 1);
    names.len() - 1
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Ingest {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Reads the ratings file and, if given, the trust file.
pub fn ingest_epinions(ratings_path: &Path, trust_path: Option<&Path>) -> Result<RatingsCorpus> {
    let text = read(ratings_path)?;
    let mut users = Vec::new();
    let mut items = Vec::new();
    let mut user_index = BTreeMap::new();
    let mut item_index = BTreeMap::new();
    let mut ratings = Vec::new();
    let mut skipped = 0;
    for (_, line) in meaningful_lines(&text) {
        match fields(line).as_slice() {
            [user, item, rating] => match parse_rating(rating) {
                Some(value) => ratings.push(Rating {
                    user: intern(&mut users, &mut user_index, user),
                    item: intern(&mut items, &mut item_index, item),
                    value,
                }),
                None => skipped += 1,
            },
            _ => skipped += 1,
        }
    }
    if ratings.is_empty() {
        return Err(Error::Ingest {
            path: ratings_path.to_path_buf(),
            reason: "no usable ratings".into(),
        });
    }
    check_skip_ratio(ratings_path, ratings.len(), skipped)?;

    let mut stats = IngestStats {
        users: users.len(),
        items: items.len(),
        reviews: ratings.len(),
        skipped,
        ..IngestStats::default()
    };

    if let Some(path) = trust_path {
        let text = read(path)?;
        for (_, line) in meaningful_lines(&text) {
            match fields(line).as_slice() {
                [_, _, value] if value.parse::<f64>().is_ok_and(f64::is_finite) => {
                    stats.trust_edges += 1
                }
                _ => stats.trust_skipped += 1,
            }
        }
        check_skip_ratio(path, stats.trust_edges, stats.trust_skipped)?;
    }

    Ok(RatingsCorpus {
        users,
        items,
        ratings,
        stats,
    })
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn add(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    fn without(&self, v: f64) -> Self {
        Self {
            count: self.count - 1,
            sum: self.sum - v,
            sum_sq: self.sum_sq - v * v,
        }
    }

    fn features(&self, fallback_mean: f64) -> Vec<f64> {
        if self.count == 0 {
            return vec![fallback_mean, 0.0, 0.0];
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        let variance = if self.count < 2 {
            0.0
        } else {
            (self.sum_sq / n - mean * mean).max(0.0)
        };
        vec![mean, n, variance]
    }
}

impl RatingsCorpus {
    pub fn schema() -> Vec<String> {
        EPINIONS_SCHEMA.iter().map(|s| s.to_string()).collect()
    }

    fn moments(&self) -> Vec<Moments> {
        let mut m = vec![Moments::default(); self.items.len()];
        for r in &self.ratings {
            m[r.item].add(r.value as f64);
        }
        m
    }

    fn global_mean(&self) -> f64 {
        self.ratings.iter().map(|r| r.value as f64).sum::<f64>() / self.ratings.len() as f64
    }

    /// Ground truth per item name.
    pub fn item_ground_truths(&self, satisfied: u8) -> BTreeMap<String, f64> {
        let mut per_item: Vec<Vec<u8>> = vec![Vec::new(); self.items.len()];
        for r in &self.ratings {
            per_item[r.item].push(r.value);
        }
        per_item
            .iter()
            .enumerate()
            .filter_map(|(i, rs)| {
                ground_truth_trust(rs, satisfied).map(|t| (self.items[i].clone(), t))
            })
            .collect()
    }

    /// One dataset per user that rated at least one item outside `exclude`.
    pub fn user_datasets(
        &self,
        exclude: &BTreeSet<String>,
        satisfied: u8,
    ) -> Vec<(String, AdvisorDataset)> {
        let moments = self.moments();
        let fallback = self.global_mean();
        let mut per_user: BTreeMap<usize, Vec<InteractionRecord>> = BTreeMap::new();
        for r in &self.ratings {
            if exclude.contains(&self.items[r.item]) {
                continue;
            }
            let others = moments[r.item].without(r.value as f64);
            let label = if r.value >= satisfied {
                Verdict::Trustworthy
            } else {
                Verdict::Untrustworthy
            };
            per_user
                .entry(r.user)
                .or_default()
                .push(InteractionRecord::new(others.features(fallback), label));
        }
        per_user
            .into_iter()
            .map(|(u, records)| {
                let data = AdvisorDataset::from_records(Self::schema(), records)
                    .expect("features match schema");
                (self.users[u].clone(), data)
            })
            .collect()
    }

    /// Picks the `n_items` most-rated items as subjects and the `n_advisors`
    /// users with the most remaining ratings as advisors. Ties break by name.
    pub fn population(
        &self,
        n_advisors: usize,
        n_items: usize,
        satisfied: u8,
    ) -> Result<Population> {
        let moments = self.moments();
        let mut by_popularity: Vec<usize> = (0..self.items.len()).collect();
        by_popularity.sort_by(|&a, &b| {
            moments[b]
                .count
                .cmp(&moments[a].count)
                .then_with(|| self.items[a].cmp(&self.items[b]))
        });
        let chosen: Vec<usize> = by_popularity.into_iter().take(n_items).collect();
        let exclude: BTreeSet<String> = chosen.iter().map(|&i| self.items[i].clone()).collect();

        let mut advisors = self.user_datasets(&exclude, satisfied);
        advisors.sort_by(|(na, a), (nb, b)| b.len().cmp(&a.len()).then_with(|| na.cmp(nb)));
        advisors.truncate(n_advisors);
        if advisors.is_empty() {
            return Err(Error::InvalidConfig {
                key: "ratings",
                reason: "no user has ratings outside the evaluated items".into(),
            });
        }

        let fallback = self.global_mean();
        let mut per_item: Vec<Vec<u8>> = vec![Vec::new(); self.items.len()];
        for r in &self.ratings {
            per_item[r.item].push(r.value);
        }
        let items = chosen
            .into_iter()
            .map(|i| Item {
                name: self.items[i].clone(),
                features: moments[i].features(fallback),
                ground_truth: ground_truth_trust(&per_item[i], satisfied)
                    .expect("chosen items have ratings"),
                ratings: per_item[i].clone(),
            })
            .collect();
        Ok(Population {
            schema: Self::schema(),
            advisors,
            items,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn toy_file() {
        let f = file("u1,i1,5\nu2,i1,4\nu1,i2,1\n");
        let corpus = ingest_epinions(f.path(), None).unwrap();
        assert_eq!(
            corpus.stats.to_string(),
            "2 users, 2 items, 3 reviews, 0 skipped"
        );
        let truths = corpus.item_ground_truths(4);
        assert_eq!(truths["i1"], 1.0);
        assert_eq!(truths["i2"], 0.0);
    }

    #[test]
    fn out_of_range_rating_is_skipped() {
        let mut text = String::from("u1,i1,7\n");
        for i in 0..9 {
            text.push_str(&format!("u{i} i{i} 3\n"));
        }
        let corpus = ingest_epinions(file(&text).path(), None).unwrap();
        assert_eq!(corpus.stats.skipped, 1);
        assert_eq!(corpus.stats.reviews, 9);
    }

    #[test]
    fn too_many_malformed_lines_abort() {
        let f = file("u1,i1,7\nu2,i1,x\nu1,i2,1\n");
        assert!(matches!(
            ingest_epinions(f.path(), None),
            Err(Error::Ingest { .. })
        ));
    }

    #[test]
    fn empty_file_is_an_error() {
        let f = file("");
        assert!(ingest_epinions(f.path(), None).is_err());
        let f = file("# only a comment\n\n");
        assert!(ingest_epinions(f.path(), None).is_err());
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = ingest_epinions(Path::new("/nonexistent/ratings.txt"), None).unwrap_err();
        assert!(matches!(err, Error::Ingest { .. }));
        assert!(err.to_string().starts_with("/nonexistent/ratings.txt"));
    }

    #[test]
    fn trust_file_edges_counted() {
        let ratings = file("u1 i1 5\nu2 i1 4\n");
        let trust = file("u1\tu2\t1\nu2\tu1\t1\n");
        let corpus = ingest_epinions(ratings.path(), Some(trust.path())).unwrap();
        assert_eq!(corpus.stats.trust_edges, 2);
    }

    #[test]
    fn user_records_use_other_raters() {
        let f = file("a,x,5\nb,x,3\nc,x,1\na,y,2\n");
        let corpus = ingest_epinions(f.path(), None).unwrap();
        let datasets = corpus.user_datasets(&BTreeSet::new(), 4);
        let (name, a) = &datasets[0];
        assert_eq!(name, "a");
        assert_eq!(a.len(), 2);
        // item x seen by a: others rated 3 and 1
        assert_eq!(a.records()[0].features, vec![2.0, 2.0, 1.0]);
        assert_eq!(a.records()[0].label, Verdict::Trustworthy);
        // item y: nobody else, impute corpus mean 11/4
        assert_eq!(a.records()[1].features, vec![2.75, 0.0, 0.0]);
        assert_eq!(a.records()[1].label, Verdict::Untrustworthy);
    }

    #[test]
    fn population_excludes_evaluated_items() {
        let f = file("a,x,5\nb,x,4\nc,x,5\na,y,2\nb,y,1\na,z,4\n");
        let corpus = ingest_epinions(f.path(), None).unwrap();
        let pop = corpus.population(5, 1, 4).unwrap();
        assert_eq!(pop.items.len(), 1);
        assert_eq!(pop.items[0].name, "x");
        assert_eq!(pop.items[0].ground_truth, 1.0);
        let total: usize = pop.advisors.iter().map(|(_, d)| d.len()).sum();
        assert_eq!(total, 3);
        assert_eq!(pop.advisors[0].0, "a");
    }
}
