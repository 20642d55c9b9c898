use serde::Serialize;

use super::diagonal::{default_schedule, diagonal_join};
use super::set::DensitySet;
use super::upset::UPSet;
use super::DensityError;

/// Maximal chains examined for the increasing-union condition.
const CHAIN_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DSystemViolation {
    /// One of `"i"`, `"ii"`, `"iii"`, `"iv"`.
    pub condition: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DSystemReport {
    pub family_size: usize,
    pub classes: usize,
    pub pairs_checked: usize,
    pub chains_checked: usize,
    pub chains_truncated: bool,
    pub violations: Vec<DSystemViolation>,
}

impl DSystemReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, condition: &str) -> bool {
        !self.violations.iter().any(|v| v.condition == condition)
    }
}

/// Closure of a finite family of classes under the Dynkin conditions:
///
/// * (i) `[ℕ]` belongs to the family;
/// * (ii) `[A] ⪯ [B]` implies `[B ∖ A]` belongs;
/// * (iii) `A ∩ B` null implies `[A ∪ B]` belongs;
/// * (iv) every increasing chain has its least upper bound in the family,
///   built with [`diagonal_join`] along each maximal chain.
pub fn dsystem_check(family: &[DensitySet]) -> Result<DSystemReport, DensityError> {
    let mut classes: Vec<(UPSet, String)> = Vec::new();
    for set in family {
        let core = set.core().periodic_part();
        if !classes.iter().any(|(c, _)| c.equiv_mod_null(&core)) {
            classes.push((core, set.label().to_string()));
        }
    }
    let has = |s: &UPSet| classes.iter().any(|(c, _)| c.equiv_mod_null(s));
    let mut violations = Vec::new();
    let mut push = |condition: &str, detail: String| {
        violations.push(DSystemViolation {
            condition: condition.into(),
            detail,
        })
    };

    if !has(&UPSet::naturals()) {
        push("i", "N is missing".into());
    }
    let mut pairs = 0;
    for (a, la) in &classes {
        for (b, lb) in &classes {
            pairs += 1;
            if a.leq_mod_null(b) {
                let d = b.difference(a)?;
                if !has(&d) {
                    push("ii", format!("{lb} \\ {la} = {d} is missing"));
                }
            }
            if a.intersection(b)?.is_null() && la <= lb {
                let u = a.union(b)?;
                if !has(&u) {
                    push("iii", format!("{la} | {lb} = {u} is missing"));
                }
            }
        }
    }

    // Strictly increasing maximal chains in the class order.
    let n = classes.len();
    let below: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && classes[i].0.leq_mod_null(&classes[j].0))
                .collect()
        })
        .collect();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<Vec<usize>> = (0..n)
        .filter(|&i| !(0..n).any(|j| below[j][i]))
        .map(|i| vec![i])
        .collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        let covers: Vec<usize> = (0..n)
            .filter(|&j| below[last][j] && !(0..n).any(|k| below[last][k] && below[k][j]))
            .collect();
        if covers.is_empty() {
            if chains.len() == CHAIN_CAP {
                truncated = true;
                break;
            }
            chains.push(chain);
            continue;
        }
        for j in covers {
            let mut next = chain.clone();
            next.push(j);
            stack.push(next);
        }
    }
    for chain in &chains {
        let sets: Vec<DensitySet> = chain
            .iter()
            .map(|&i| DensitySet::from(classes[i].0.clone()))
            .collect();
        let join = diagonal_join(sets, &default_schedule(chain.len()))?;
        let top = &classes[*chain.last().unwrap()];
        let w = join.periodic_core()?;
        if !w.equiv_mod_null(&top.0) || !has(&w) {
            let names: Vec<&str> = chain.iter().map(|&i| classes[i].1.as_str()).collect();
            push(
                "iv",
                format!("join of [{}] is {w}, not in the family", names.join(", ")),
            );
        }
    }

    Ok(DSystemReport {
        family_size: family.len(),
        classes: n,
        pairs_checked: pairs,
        chains_checked: chains.len(),
        chains_truncated: truncated,
        violations,
    })
}
