//! Inquiry budgets: how many requests an agent may still send to another.
//!
//! An agent spends one unit of its budget toward a provider for every request
//! it sends there. At each period boundary the budget of `x` toward `s` grows
//! by `|E| + ceil(|E| * Cr) + 1`, where `|E|` counts the inquiries from `s`
//! that `x` answered during the period and `Cr` is the credibility `s`
//! assigns to `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::credibility::CredibilityLedger;
use crate::error::{Error, Result};
use crate::identity::{AgentId, Probability};
use crate::scalar::Scalar;

pub const DEFAULT_INITIAL_BUDGET: u64 = 10;
pub const DEFAULT_PERIOD_LENGTH: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InquiryLedger {
    /// (asker, provider) -> remaining inquiries
    budget: BTreeMap<(AgentId, AgentId), u64>,
    /// (answerer, requester) -> answers given this period
    answered: BTreeMap<(AgentId, AgentId), u64>,
    initial_budget: u64,
    period_length: u64,
}

impl Default for InquiryLedger {
    fn default() -> Self {
        Self::new(DEFAULT_INITIAL_BUDGET, DEFAULT_PERIOD_LENGTH)
    }
}

/// Budget gain for one pair over one period.
pub fn replenishment<T: Scalar>(answered: u64, credibility: Probability<T>) -> u64 {
    let scaled = T::from_u64(answered).expect("answer count representable") * credibility.value();
    answered + scaled.ceil_u64() + 1
}

impl InquiryLedger {
    /// `period_length` is measured in rounds and must be positive.
    pub fn new(initial_budget: u64, period_length: u64) -> Self {
        assert!(period_length >= 1, "period length must be positive");
        Self {
            budget: BTreeMap::new(),
            answered: BTreeMap::new(),
            initial_budget,
            period_length,
        }
    }

    pub fn initial_budget(&self) -> u64 {
        self.initial_budget
    }

    pub fn period_length(&self) -> u64 {
        self.period_length
    }

    /// Pairs without an entry hold the initial budget and are not
    /// replenished until they interact or are opened.
    pub fn remaining(&self, asker: AgentId, provider: AgentId) -> u64 {
        self.budget
            .get(&(asker, provider))
            .copied()
            .unwrap_or(self.initial_budget)
    }

    /// Starts tracking a pair at the initial budget. No-op if already tracked.
    pub fn open(&mut self, asker: AgentId, provider: AgentId) {
        self.budget
            .entry((asker, provider))
            .or_insert(self.initial_budget);
    }

    pub fn answered(&self, answerer: AgentId, requester: AgentId) -> u64 {
        self.answered
            .get(&(answerer, requester))
            .copied()
            .unwrap_or(0)
    }

    pub fn consume_inquiry(&mut self, asker: AgentId, provider: AgentId) -> Result<u64> {
        let left = self.remaining(asker, provider);
        if left == 0 {
            return Err(Error::BudgetExhausted { asker, provider });
        }
        self.budget.insert((asker, provider), left - 1);
        Ok(left - 1)
    }

    pub fn record_answer(&mut self, answerer: AgentId, requester: AgentId) {
        *self.answered.entry((answerer, requester)).or_insert(0) += 1;
        self.open(answerer, requester);
    }

    /// Period-boundary replenishment. `credibility(s, x)` is the credibility
    /// that `s` assigns to `x`.
    pub fn replenish<T, F>(&mut self, credibility: F)
    where
        T: Scalar,
        F: Fn(AgentId, AgentId) -> Probability<T>,
    {
        let pairs: BTreeSet<(AgentId, AgentId)> = self
            .budget
            .keys()
            .chain(self.answered.keys())
            .copied()
            .collect();
        for (x, s) in pairs {
            let answered = self.answered(x, s);
            let gain = replenishment(answered, credibility(s, x));
            let entry = self.budget.entry((x, s)).or_insert(self.initial_budget);
            *entry = entry.saturating_add(gain);
        }
        self.answered.clear();
    }

    /// Replenishment when every provider's view of the askers is a single
    /// recommender's ledger.
    pub fn replenish_from_ledger<T: Scalar>(&mut self, ledger: &CredibilityLedger<T>) {
        self.replenish(|_, x| ledger.score(x));
    }

    /// Writes `asker<TAB>provider<TAB>budget` rows.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "asker\tprovider\tbudget")?;
        for ((asker, provider), left) in &self.budget {
            writeln!(out, "{asker}\t{provider}\t{left}")?;
        }
        Ok(())
    }
}
