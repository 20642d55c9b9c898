//! Ordered group models, families `m_i` with supports along a cofinite
//! filter, and the counting-density family as the reference instance.

mod evaluator;
mod fragment;
mod group;
mod limit;

use serde::{Deserialize, Serialize};

use crate::density::DensityError;

pub use evaluator::{check_mi_axioms, check_supports, Counting, CountingVariant, Evaluator};
pub use fragment::{Fragment, PowerSet};
pub use group::{GroupElem, GroupModel};
pub use limit::{
    counting_class_assumptions, filter_limit, lemma_premises_check, GammaEntry, LemmaReport,
    LimitEstimate, Subject,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameworkError {
    #[error("premise failed: {0}")]
    PremiseFailed(String),
    #[error("oscillation undecided at horizon {0}")]
    HorizonTooSmall(u64),
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// A truncated index set `{1, …, i_max}` with the cofinite filter base
/// `F_n = {i : n ≤ i ≤ i_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterInstance {
    pub group: GroupModel,
    pub i_max: u64,
}

impl FilterInstance {
    pub fn new(group: GroupModel, i_max: u64) -> Self {
        FilterInstance { group, i_max }
    }

    pub fn filter_base(&self, n: u64) -> Vec<u64> {
        (n.max(1)..=self.i_max).collect()
    }
}

/// One checked assumption: how many instances were examined, how many
/// failed, and the first failing instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomLine {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub witness: Option<String>,
}

impl AxiomLine {
    pub fn new(name: impl Into<String>) -> Self {
        AxiomLine {
            name: name.into(),
            checked: 0,
            violations: 0,
            witness: None,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}
