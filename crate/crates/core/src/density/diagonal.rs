use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::set::DensitySet;
use super::upset::UPSet;
use super::DensityError;
use crate::rational::{format_rational, Rational};

/// `ε_j = 2^{−j}` for `j = 1..=len`.
pub fn default_schedule(len: usize) -> Vec<Rational> {
    (1..=len)
        .map(|j| Rational::new(1.into(), num_bigint::BigInt::from(2).pow(j as u32)))
        .collect()
}

/// `x_j = {n : n mod 2^j ≠ 2^j − 1}` for `j = 1..=depth`, of density `1 − 2^{−j}`.
pub fn dyadic_chain(depth: usize) -> Result<Vec<DensitySet>, DensityError> {
    (1..=depth)
        .map(|j| {
            let m = 1u64 << j;
            let set = UPSet::progression(m, &(0..m - 1).collect::<Vec<_>>())?;
            Ok(DensitySet::from(set).with_label(format!("x_{j}")))
        })
        .collect()
}

/// `w = ⋃_{j=1}^{n−1} x_{j+1} ∩ (k_j, ∞)` for an increasing chain `x_1 ⪯ … ⪯ x_n`.
#[derive(Debug, Clone)]
pub struct DiagonalJoin {
    chain: Vec<DensitySet>,
    cutoffs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub depth: usize,
    pub cutoffs: Vec<u64>,
    pub chain_densities: Vec<String>,
    pub sup_density: String,
    pub w_density: String,
    /// `[N, |w ∩ [1, N]|]`.
    pub horizon_counts: Vec<(u64, u64)>,
    pub horizon_ratios: Vec<f64>,
    /// `[w] ⊒ [x_j]` decided exactly on the periodic parts.
    pub tail_inclusion: Vec<bool>,
    /// `x_{j+1} ∩ (k_j, ∞) ⊆ w`, sampled, and exact for periodic chains.
    pub sampled_inclusion: bool,
    pub samples_checked: usize,
    /// Whether every cutoff comes from an exact convergence bound.
    pub certified: bool,
}

impl DiagonalReport {
    pub fn passed(&self) -> bool {
        self.tail_inclusion.iter().all(|&b| b) && self.sampled_inclusion
    }
}

fn check_chain(chain: &[DensitySet]) -> Result<(), DensityError> {
    if chain.is_empty() {
        return Err(DensityError::InvalidSet("chain is empty".into()));
    }
    for (j, pair) in chain.windows(2).enumerate() {
        if !pair[0].leq_mod_null(&pair[1]) {
            return Err(DensityError::NotIncreasing(j + 1));
        }
    }
    Ok(())
}

fn ceil_div(num: u64, eps: &Rational) -> u64 {
    let q = Rational::from_integer(num.into()) / eps;
    q.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Cutoffs `k_j = max(k_{j−1}, ⌈(m + |exceptions|)/ε_j⌉)` from the bound for
/// `x_{j+1}`, so that `|count(x_{j+1}, i)/i − d(x_{j+1})| ≤ ε_j` for `i > k_j`.
pub fn diagonal_join(
    chain: Vec<DensitySet>,
    schedule: &[Rational],
) -> Result<DiagonalJoin, DensityError> {
    check_chain(&chain)?;
    let need = chain.len() - 1;
    if schedule.len() < need {
        return Err(DensityError::ScheduleInvalid(format!(
            "needs {need} values, got {}",
            schedule.len()
        )));
    }
    for (j, eps) in schedule.iter().enumerate() {
        if !eps.is_positive() {
            return Err(DensityError::ScheduleInvalid(format!(
                "ε_{} is not positive",
                j + 1
            )));
        }
        if j > 0 && eps > &schedule[j - 1] {
            return Err(DensityError::ScheduleInvalid(format!(
                "ε_{} exceeds ε_{}",
                j + 1,
                j
            )));
        }
    }
    let mut cutoffs = Vec::with_capacity(need);
    let mut prev = 0u64;
    for j in 0..need {
        let k = ceil_div(chain[j + 1].core().convergence_constant(), &schedule[j]).max(prev);
        cutoffs.push(k);
        prev = k;
    }
    Ok(DiagonalJoin { chain, cutoffs })
}

/// As [`diagonal_join`] with explicitly supplied nondecreasing cutoffs.
pub fn diagonal_join_with_cutoffs(
    chain: Vec<DensitySet>,
    cutoffs: Vec<u64>,
) -> Result<DiagonalJoin, DensityError> {
    check_chain(&chain)?;
    if cutoffs.len() != chain.len() - 1 {
        return Err(DensityError::ScheduleInvalid(format!(
            "needs {} cutoffs, got {}",
            chain.len() - 1,
            cutoffs.len()
        )));
    }
    if cutoffs.windows(2).any(|w| w[0] > w[1]) {
        return Err(DensityError::ScheduleInvalid(
            "cutoffs must be nondecreasing".into(),
        ));
    }
    Ok(DiagonalJoin { chain, cutoffs })
}

impl DiagonalJoin {
    pub fn chain(&self) -> &[DensitySet] {
        &self.chain
    }

    pub fn cutoffs(&self) -> &[u64] {
        &self.cutoffs
    }

    /// `(k_j, x_{j+1})`; a one-element chain joins to itself.
    fn pieces(&self) -> Vec<(u64, &DensitySet)> {
        if self.chain.len() == 1 {
            return vec![(0, &self.chain[0])];
        }
        self.cutoffs.iter().copied().zip(&self.chain[1..]).collect()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.pieces()
            .into_iter()
            .any(|(k, x)| n > k && x.contains(n))
    }

    pub fn sup_density(&self) -> Rational {
        self.chain
            .iter()
            .map(DensitySet::density)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `w` as an ultimately periodic set, when every chain member is one.
    pub fn exact(&self) -> Result<Option<UPSet>, DensityError> {
        if !self.chain.iter().all(DensitySet::is_periodic) {
            return Ok(None);
        }
        let mut w = UPSet::empty();
        for (k, x) in self.pieces() {
            let tail = UPSet::new(1, [0], [], 1..=k)?;
            w = w.union(&x.core().intersection(&tail)?)?;
        }
        Ok(Some(w))
    }

    /// Periodic part of `w`.
    pub fn periodic_core(&self) -> Result<UPSet, DensityError> {
        let mut out = UPSet::empty();
        for (_, x) in self.pieces() {
            out = out.union(&x.core().periodic_part())?;
        }
        Ok(out)
    }

    pub fn count(&self, n: u64) -> Result<u64, DensityError> {
        Ok(match self.exact()? {
            Some(w) => w.count(n),
            None => (1..=n).filter(|&k| self.contains(k)).count() as u64,
        })
    }

    pub fn report(&self, horizons: &[u64], samples: usize) -> Result<DiagonalReport, DensityError> {
        let exact = self.exact()?;
        let core = self.periodic_core()?;
        let tail_inclusion = self
            .chain
            .iter()
            .map(|x| x.core().leq_mod_null(&core))
            .collect();
        let mut horizon_counts = Vec::new();
        let mut horizon_ratios = Vec::new();
        for &h in horizons {
            let c = self.count(h)?;
            horizon_counts.push((h, c));
            horizon_ratios.push(if h == 0 { 0.0 } else { c as f64 / h as f64 });
        }
        let mut checked = 0;
        let mut sampled = true;
        for (k, x) in self.pieces() {
            let stride = (k / 7).max(1) | 1;
            for s in 1..=samples as u64 {
                let n = k + s * stride;
                if x.contains(n) {
                    checked += 1;
                    if !self.contains(n) {
                        sampled = false;
                    }
                }
            }
            if let Some(w) = &exact {
                let piece = x.core().difference(w)?;
                if !piece.is_null() || piece.add().iter().any(|&n| n > k) {
                    sampled = false;
                }
            }
        }
        Ok(DiagonalReport {
            depth: self.chain.len(),
            cutoffs: self.cutoffs.clone(),
            chain_densities: self
                .chain
                .iter()
                .map(|x| format_rational(&x.density()))
                .collect(),
            sup_density: format_rational(&self.sup_density()),
            w_density: format_rational(&core.density()),
            horizon_counts,
            horizon_ratios,
            tail_inclusion,
            sampled_inclusion: sampled,
            samples_checked: checked,
            certified: self.chain.iter().all(DensitySet::is_periodic),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::parse_set;
    use crate::rational::ratio;

    #[test]
    fn constant_chain() {
        let chain = vec![parse_set("AP(2,0)").unwrap(); 5];
        let w = diagonal_join(chain, &default_schedule(4)).unwrap();
        let r = w.report(&[1_000_000], 50).unwrap();
        assert!(r.passed());
        assert!((r.horizon_ratios[0] - 0.5).abs() <= 2e-3);
        assert_eq!(r.w_density, "1/2");
    }

    #[test]
    fn dyadic_depth_8() {
        let w = diagonal_join(dyadic_chain(8).unwrap(), &default_schedule(7)).unwrap();
        assert_eq!(w.sup_density(), ratio(255, 256));
        let r = w.report(&[1_000_000], 50).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.horizon_ratios[0] >= 0.97, "{r:?}");
        // Brute-force count agrees with the exact form.
        let brute = (1..=100_000).filter(|&n| w.contains(n)).count() as u64;
        assert_eq!(w.count(100_000).unwrap(), brute);
    }

    #[test]
    fn three_quarters() {
        let chain = vec![
            parse_set("AP(2,0)").unwrap(),
            parse_set("AP(2,0) | AP(4,1)").unwrap(),
        ];
        let w = diagonal_join(chain, &default_schedule(1)).unwrap();
        let r = w.report(&[1_000_000], 20).unwrap();
        assert_eq!(r.sup_density, "3/4");
        assert!((r.horizon_ratios[0] - 0.75).abs() <= 0.01);
    }

    #[test]
    fn rejects_bad_input() {
        let chain = vec![parse_set("AP(2,0)").unwrap(), parse_set("AP(2,1)").unwrap()];
        assert_eq!(
            diagonal_join(chain, &default_schedule(1)).unwrap_err(),
            DensityError::NotIncreasing(1)
        );
        let chain = vec![parse_set("AP(2,0)").unwrap(); 3];
        assert!(matches!(
            diagonal_join(chain.clone(), &[ratio(1, 4), ratio(1, 2)]),
            Err(DensityError::ScheduleInvalid(_))
        ));
        assert!(matches!(
            diagonal_join(chain.clone(), &[ratio(0, 1), ratio(0, 1)]),
            Err(DensityError::ScheduleInvalid(_))
        ));
        assert!(matches!(
            diagonal_join(chain, &[ratio(1, 4)]),
            Err(DensityError::ScheduleInvalid(_))
        ));
    }

    #[test]
    fn oracle_members() {
        let chain = vec![
            parse_set("AP(3,0) \\ SQUARES").unwrap(),
            parse_set("AP(3,0) | PRIMES").unwrap(),
        ];
        let w = diagonal_join(chain, &default_schedule(1)).unwrap();
        let r = w.report(&[10_000], 20).unwrap();
        assert!(!r.certified && r.passed());
        assert!(w.contains(10_007));
    }
}
