use std::fmt;
use std::sync::Arc;

use super::oracle::NullOracle;
use super::upset::UPSet;
use super::DensityError;
use crate::rational::Rational;

/// `(core ∪ ⋃plus) ∖ ⋃minus` for an ultimately periodic core and null
/// oracles. Its density is the density of the core.
#[derive(Debug, Clone)]
pub struct DensitySet {
    core: UPSet,
    plus: Vec<NullOracle>,
    minus: Vec<NullOracle>,
    label: String,
}

impl PartialEq for DensitySet {
    fn eq(&self, other: &Self) -> bool {
        self.core == other.core && self.plus == other.plus && self.minus == other.minus
    }
}

impl From<UPSet> for DensitySet {
    fn from(core: UPSet) -> Self {
        let label = core.to_string();
        DensitySet {
            core,
            plus: Vec::new(),
            minus: Vec::new(),
            label,
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Union,
    Intersection,
    Difference,
}

impl Op {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Op::Union => a || b,
            Op::Intersection => a && b,
            Op::Difference => a && !b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Op::Union => "|",
            Op::Intersection => "&",
            Op::Difference => "\\",
        }
    }
}

impl DensitySet {
    pub fn null(oracle: NullOracle) -> Self {
        let label = oracle.name().to_string();
        DensitySet {
            core: UPSet::empty(),
            plus: vec![oracle],
            minus: Vec::new(),
            label,
        }
    }

    pub fn core(&self) -> &UPSet {
        &self.core
    }

    pub fn plus(&self) -> &[NullOracle] {
        &self.plus
    }

    pub fn minus(&self) -> &[NullOracle] {
        &self.minus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_periodic(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.core.contains(n) || self.plus.iter().any(|o| o.contains(n)))
            && !self.minus.iter().any(|o| o.contains(n))
    }

    pub fn density(&self) -> Rational {
        self.core.density()
    }

    /// `|A ∩ [1, n]|`.
    pub fn count(&self, n: u64) -> u64 {
        if self.is_periodic() {
            return self.core.count(n);
        }
        (1..=n).filter(|&k| self.contains(k)).count() as u64
    }

    /// Upper bound on `|count(A, n) − n·d(A)|`.
    pub fn count_error_bound(&self, n: u64) -> u64 {
        self.core.convergence_constant()
            + self
                .plus
                .iter()
                .chain(&self.minus)
                .map(|o| o.certificate(n))
                .sum::<u64>()
    }

    pub fn equiv(&self, other: &DensitySet) -> bool {
        self.core.equiv_mod_null(&other.core)
    }

    pub fn leq_mod_null(&self, other: &DensitySet) -> bool {
        self.core.leq_mod_null(&other.core)
    }

    pub fn complement(&self) -> DensitySet {
        let label = format!("~{}", self.wrapped());
        if self.is_periodic() {
            return DensitySet::from(self.core.complement()).with_label(label);
        }
        // ℕ ∖ ((C ∪ P) ∖ M) = (¬C ∪ M) ∖ (P ∖ M).
        let minus_sets = self.minus.clone();
        let plus_sets = self.plus.clone();
        let ms = minus_sets.clone();
        let ps = plus_sets.clone();
        let without_m = NullOracle::derived(
            format!("({} without minus)", self.label),
            move |n| ps.iter().any(|o| o.contains(n)) && !ms.iter().any(|o| o.contains(n)),
            &plus_sets,
        );
        DensitySet {
            core: self.core.complement(),
            plus: minus_sets,
            minus: if self.plus.is_empty() {
                Vec::new()
            } else {
                vec![without_m]
            },
            label,
        }
    }

    pub fn union(&self, other: &DensitySet) -> Result<DensitySet, DensityError> {
        self.combine(other, Op::Union)
    }

    pub fn intersection(&self, other: &DensitySet) -> Result<DensitySet, DensityError> {
        self.combine(other, Op::Intersection)
    }

    pub fn difference(&self, other: &DensitySet) -> Result<DensitySet, DensityError> {
        self.combine(other, Op::Difference)
    }

    fn wrapped(&self) -> String {
        if self.label.contains(' ') {
            format!("({})", self.label)
        } else {
            self.label.clone()
        }
    }

    fn pure_oracle(&self) -> Option<&NullOracle> {
        (self.core.is_null()
            && self.core.add().is_empty()
            && self.minus.is_empty()
            && self.plus.len() == 1)
            .then(|| &self.plus[0])
    }

    fn combine(&self, other: &DensitySet, op: Op) -> Result<DensitySet, DensityError> {
        let label = format!("{} {} {}", self.wrapped(), op.symbol(), other.wrapped());
        let core = self.core.combine(&other.core, |a, b| op.apply(a, b))?;
        if self.is_periodic() && other.is_periodic() {
            return Ok(DensitySet::from(core).with_label(label));
        }
        if let (Op::Intersection, Some(a), Some(b)) = (op, self.pure_oracle(), other.pure_oracle())
        {
            return Ok(DensitySet::null(NullOracle::conjunction(a, b)).with_label(label));
        }
        // The result differs from `core` only on the oracle sets involved.
        let sources: Vec<NullOracle> = self
            .plus
            .iter()
            .chain(&self.minus)
            .chain(&other.plus)
            .chain(&other.minus)
            .cloned()
            .collect();
        let a = Arc::new(self.clone());
        let b = Arc::new(other.clone());
        let shared_core = Arc::new(core.clone());
        let in_sources = {
            let s = sources.clone();
            Arc::new(move |n: u64| s.iter().any(|o| o.contains(n)))
        };
        let make = |want: bool| {
            let (a, b, c, src) = (
                a.clone(),
                b.clone(),
                shared_core.clone(),
                in_sources.clone(),
            );
            move |n: u64| {
                src(n) && op.apply(a.contains(n), b.contains(n)) == want && c.contains(n) != want
            }
        };
        let mut plus = NullOracle::derived(format!("+({label})"), make(true), &sources);
        let minus = NullOracle::derived(format!("-({label})"), make(false), &sources);
        // An intersection stays inside a null operand.
        if let Op::Intersection = op {
            for side in [self, other] {
                if side.core.is_null() && side.core.add().is_empty() && !side.plus.is_empty() {
                    let bound = NullOracle::derived("bound", |_| false, &side.plus);
                    plus = plus.with_bound(&bound);
                }
            }
        }
        Ok(DensitySet {
            core,
            plus: vec![plus],
            minus: vec![minus],
            label,
        })
    }
}

impl fmt::Display for DensitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}
