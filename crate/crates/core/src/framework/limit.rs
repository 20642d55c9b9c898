use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::group::GroupElem;
use super::{AxiomLine, FilterInstance, FrameworkError};
use crate::density::{diagonal_join_with_cutoffs, DensitySet, DiagonalReport};
use crate::rational::{format_rational, ratio, Rational};

/// A subset of ℕ handed to the counting instance.
#[derive(Clone)]
pub enum Subject {
    Set(DensitySet),
    Predicate {
        name: String,
        member: Arc<dyn Fn(u64) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subject({})", self.name())
    }
}

impl From<DensitySet> for Subject {
    fn from(set: DensitySet) -> Self {
        Subject::Set(set)
    }
}

impl Subject {
    /// `⋃_k [4^k, 2·4^k)`, whose counting ratio oscillates between about
    /// 1/3 and 2/3.
    pub fn doubling_blocks() -> Self {
        Subject::Predicate {
            name: "BLOCKS".into(),
            member: Arc::new(|n: u64| n >= 1 && (63 - n.leading_zeros()).is_multiple_of(2)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Subject::Set(s) => s.label().to_string(),
            Subject::Predicate { name, .. } => name.clone(),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Subject::Set(s) => s.contains(n),
            Subject::Predicate { member, .. } => member(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LimitEstimate {
    /// `|m_i(x) − value| ≤ bound` for every `i ≥ horizon` when `exact`,
    /// otherwise the tail oscillation observed up to the horizon.
    Converged {
        value: String,
        bound: f64,
        horizon: u64,
        exact: bool,
    },
    /// Ratios at dyadic horizons that stay apart by more than the tolerance.
    Divergent {
        low: f64,
        high: f64,
        witnesses: Vec<(u64, f64)>,
    },
}

impl LimitEstimate {
    pub fn value(&self) -> Option<Rational> {
        match self {
            LimitEstimate::Converged { value, .. } => crate::rational::parse_rational(value).ok(),
            LimitEstimate::Divergent { .. } => None,
        }
    }
}

/// Limit of `m_i(x) = |x ∩ [1, i]|/i` along the cofinite filter.
///
/// Density sets get the exact density with the bound
/// `(m + |exceptions| + Σ certificates(i))/i` at the horizon. Other subjects
/// are sampled at dyadic horizons: a tail window whose oscillation is below
/// `tolerance` converges; alternating extremes apart by more than
/// `tolerance`, each seen at least twice, diverge; anything else is
/// undecided.
pub fn filter_limit(
    x: &Subject,
    tolerance: f64,
    horizon: u64,
) -> Result<LimitEstimate, FrameworkError> {
    if horizon < 16 {
        return Err(FrameworkError::HorizonTooSmall(horizon));
    }
    if let Subject::Set(set) = x {
        let bound = set.count_error_bound(horizon) as f64 / horizon as f64;
        if set.is_periodic() || bound <= tolerance {
            return Ok(LimitEstimate::Converged {
                value: format_rational(&set.density()),
                bound,
                horizon,
                exact: true,
            });
        }
        return Err(FrameworkError::HorizonTooSmall(horizon));
    }
    let mut ratios = Vec::new();
    let mut count = 0u64;
    let mut next = 1u64;
    for n in 1..=horizon {
        if x.contains(n) {
            count += 1;
        }
        if n == next {
            ratios.push((n, count as f64 / n as f64));
            next *= 2;
        }
    }
    let tail = &ratios[ratios.len() / 2..];
    let low = tail.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let high = tail.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    if high - low < tolerance {
        let last = tail.last().expect("nonempty tail").1;
        return Ok(LimitEstimate::Converged {
            value: format!("{last}"),
            bound: high - low,
            horizon,
            exact: false,
        });
    }
    let mid = (low + high) / 2.0;
    let near_low: Vec<_> = tail
        .iter()
        .filter(|r| r.1 < mid && mid - r.1 > tolerance / 2.0)
        .collect();
    let near_high: Vec<_> = tail
        .iter()
        .filter(|r| r.1 > mid && r.1 - mid > tolerance / 2.0)
        .collect();
    if near_low.len() >= 2 && near_high.len() >= 2 {
        let mut witnesses: Vec<(u64, f64)> =
            near_low.into_iter().chain(near_high).copied().collect();
        witnesses.sort_by_key(|w| w.0);
        return Ok(LimitEstimate::Divergent {
            low,
            high,
            witnesses,
        });
    }
    Err(FrameworkError::HorizonTooSmall(horizon))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaEntry {
    pub n: usize,
    pub limit: String,
    /// Least `t` with `[t, truncation] ⊆ Γ_n`.
    pub threshold: u64,
    /// `⌈(m + |exceptions|)·2^n⌉`, past which `Γ_n` is guaranteed.
    pub proven_threshold: u64,
    pub truncation: u64,
    pub in_filter: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub group: String,
    pub gammas: Vec<GammaEntry>,
    pub sup: String,
    pub join_limit: String,
    pub join_matches_sup: bool,
    pub diagonal: DiagonalReport,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.join_matches_sup && self.gammas.iter().all(|g| g.in_filter) && self.diagonal.passed()
    }
}

/// Runs the selection of the index sets `Γ_n ⊆ Γ_{n−1} ∩ F_n` of indices
/// with `m_i(x_n) ∈ m(x_n)·U_n`, then builds the join with the diagonal
/// construction using the thresholds of the `Γ_n` as cutoffs.
pub fn lemma_premises_check(
    inst: &FilterInstance,
    chain: &[Subject],
    horizon: u64,
) -> Result<LemmaReport, FrameworkError> {
    if chain.is_empty() {
        return Err(FrameworkError::PremiseFailed("nonempty chain".into()));
    }
    let mut sets = Vec::with_capacity(chain.len());
    for x in chain {
        match (x, filter_limit(x, 1e-3, horizon)) {
            (Subject::Set(s), Ok(LimitEstimate::Converged { .. })) => sets.push(s.clone()),
            _ => {
                return Err(FrameworkError::PremiseFailed(format!(
                    "{} has no density (Λ membership)",
                    x.name()
                )))
            }
        }
    }
    for pair in sets.windows(2) {
        if !pair[0].leq_mod_null(&pair[1]) {
            return Err(FrameworkError::PremiseFailed(
                "increasing modulo null".into(),
            ));
        }
    }
    let g = &inst.group;
    let limits: Vec<Rational> = sets.iter().map(DensitySet::density).collect();
    // Bounded and monotone, so the supremum is the last limit.
    let sup = limits.iter().max().cloned().unwrap_or_else(Rational::zero);

    let mut gammas = Vec::with_capacity(sets.len());
    let mut prev = 1u64;
    for (idx, set) in sets.iter().enumerate() {
        let n = idx + 1;
        let radius = g.radius(n as u32);
        let constant = Rational::from_integer(set.core().convergence_constant().into()) / &radius;
        let proven = constant.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
        let truncation = inst.i_max.max(2 * proven.max(prev)).max(n as u64 + 1);
        let center = GroupElem(limits[idx].clone());
        // Γ_n within the truncation, nested in Γ_{n−1} ∩ F_n.
        let mut threshold = prev.max(n as u64);
        let mut count = 0u64;
        for i in 1..=truncation {
            if set.contains(i) {
                count += 1;
            }
            if i < threshold {
                continue;
            }
            let value = GroupElem(ratio(count as i64, i as i64));
            if !g.in_translate(n as u32, &center, &value) {
                threshold = i + 1;
            }
        }
        let in_filter = threshold <= truncation && threshold <= proven.max(prev).max(n as u64);
        gammas.push(GammaEntry {
            n,
            limit: format_rational(&limits[idx]),
            threshold,
            proven_threshold: proven,
            truncation,
            in_filter,
        });
        prev = threshold;
    }

    let cutoffs: Vec<u64> = gammas.iter().skip(1).map(|g| g.threshold).collect();
    let join = diagonal_join_with_cutoffs(sets, cutoffs)?;
    let diagonal = join.report(&[horizon], 50)?;
    let join_limit = join.periodic_core()?.density();
    Ok(LemmaReport {
        group: inst.group.to_string(),
        gammas,
        sup: format_rational(&sup),
        join_matches_sup: join_limit == sup,
        join_limit: format_rational(&join_limit),
        diagonal,
    })
}

/// The last two standing assumptions on a family of density sets:
/// `x ⊑ y` gives `[x ∧ y] = [x]` with `x ∧ y` in Λ, and `x ⊑ y` with
/// `m(x) = m(y)` gives `[x] = [y]`.
pub fn counting_class_assumptions(family: &[DensitySet]) -> Result<Vec<AxiomLine>, FrameworkError> {
    let mut meet = AxiomLine::new("x ⊑ y implies x ∧ y ∈ Λ and [x ∧ y] = [x]");
    let mut separation = AxiomLine::new("x ⊑ y and m(x) = m(y) implies [x] = [y]");
    for x in family {
        for y in family {
            if !x.leq_mod_null(y) {
                continue;
            }
            let both = x.intersection(y)?;
            meet.record(both.equiv(x), || format!("x = {x}, y = {y}"));
            if x.density() == y.density() {
                separation.record(x.equiv(y), || format!("x = {x}, y = {y}"));
            }
        }
    }
    Ok(vec![meet, separation])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{dyadic_chain, parse_set};
    use crate::framework::GroupModel;

    #[test]
    fn limits() {
        let evens = Subject::from(parse_set("AP(2,0)").unwrap());
        match filter_limit(&evens, 1e-3, 1000).unwrap() {
            LimitEstimate::Converged { value, exact, .. } => assert!(exact && value == "1/2"),
            other => panic!("{other:?}"),
        }
        let squares = Subject::from(parse_set("SQUARES").unwrap());
        match filter_limit(&squares, 1e-2, 1_000_000).unwrap() {
            LimitEstimate::Converged { value, bound, .. } => {
                assert!(value == "0/1" && bound <= 2e-3)
            }
            other => panic!("{other:?}"),
        }
        match filter_limit(&Subject::doubling_blocks(), 0.1, 1 << 20).unwrap() {
            LimitEstimate::Divergent { low, high, .. } => {
                assert!(
                    (low - 1.0 / 3.0).abs() < 0.01 && (high - 2.0 / 3.0).abs() < 0.01,
                    "{low} {high}"
                )
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            filter_limit(&squares, 1e-6, 1000),
            Err(FrameworkError::HorizonTooSmall(_))
        ));
    }

    #[test]
    fn class_assumptions() {
        let alg = crate::density::generate_algebra(&[
            parse_set("AP(2,0)").unwrap(),
            parse_set("AP(3,0)").unwrap(),
        ])
        .unwrap();
        let mut family: Vec<DensitySet> = alg
            .members()
            .unwrap()
            .into_iter()
            .map(DensitySet::from)
            .collect();
        family.push(parse_set("AP(2,0) | SQUARES").unwrap());
        let lines = counting_class_assumptions(&family).unwrap();
        assert!(
            lines.iter().all(|l| l.passed() && l.checked > 0),
            "{lines:?}"
        );
    }

    #[test]
    fn dyadic_lemma() {
        let chain: Vec<Subject> = dyadic_chain(8)
            .unwrap()
            .into_iter()
            .map(Subject::from)
            .collect();
        let r = lemma_premises_check(
            &FilterInstance::new(GroupModel::Additive, 32),
            &chain,
            1_000_000,
        )
        .unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.sup, "255/256");
        assert!(r.diagonal.horizon_ratios[0] >= 0.97);
    }

    #[test]
    fn constant_and_failing_chains() {
        let evens = Subject::from(parse_set("AP(2,0)").unwrap());
        let r = lemma_premises_check(
            &FilterInstance::new(GroupModel::Multiplicative, 32),
            &[evens.clone(), evens.clone()],
            10_000,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.join_limit, "1/2");
        let err = lemma_premises_check(
            &FilterInstance::new(GroupModel::Additive, 32),
            &[evens, Subject::doubling_blocks()],
            1 << 20,
        )
        .unwrap_err();
        assert_eq!(
            err,
            FrameworkError::PremiseFailed("BLOCKS has no density (Λ membership)".into())
        );
    }
}
