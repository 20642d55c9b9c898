use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::DensityError;
use crate::rational::{ratio, Rational};

/// Largest modulus a combination may produce.
pub const MODULUS_CAP: u64 = 1 << 22;

/// An ultimately periodic subset of `{1, 2, …}`: the residue classes
/// `residues` modulo `modulus`, plus the finite set `add`, minus the finite
/// set `remove`.
///
/// Values are kept canonical: the modulus is the least period of the
/// residue pattern, `add` avoids the periodic part and `remove` lies inside
/// it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UPSet {
    modulus: u64,
    residues: Vec<u64>,
    add: BTreeSet<u64>,
    remove: BTreeSet<u64>,
}

impl UPSet {
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        add: impl IntoIterator<Item = u64>,
        remove: impl IntoIterator<Item = u64>,
    ) -> Result<Self, DensityError> {
        if modulus == 0 {
            return Err(DensityError::InvalidSet("modulus must be positive".into()));
        }
        if modulus > MODULUS_CAP {
            return Err(DensityError::UnsupportedCombination(format!(
                "modulus {modulus} exceeds {MODULUS_CAP}"
            )));
        }
        let mut pattern = vec![false; modulus as usize];
        for r in residues {
            if r >= modulus {
                return Err(DensityError::InvalidSet(format!(
                    "residue {r} is not below {modulus}"
                )));
            }
            pattern[r as usize] = true;
        }
        let add: BTreeSet<u64> = add.into_iter().collect();
        let remove: BTreeSet<u64> = remove.into_iter().filter(|n| !add.contains(n)).collect();
        Ok(Self::from_pattern(pattern, &add, &remove))
    }

    /// Canonical form of `(pattern ∪ add) ∖ remove`.
    fn from_pattern(pattern: Vec<bool>, add: &BTreeSet<u64>, remove: &BTreeSet<u64>) -> Self {
        let m = pattern.len();
        let period = divisors(m as u64)
            .into_iter()
            .find(|&d| (0..m).all(|i| pattern[i] == pattern[i % d as usize]))
            .unwrap_or(m as u64);
        let residues: Vec<u64> = (0..period).filter(|&r| pattern[r as usize]).collect();
        let periodic = |n: u64| pattern[(n % m as u64) as usize];
        UPSet {
            modulus: period,
            residues,
            add: add
                .iter()
                .copied()
                .filter(|&n| n >= 1 && !periodic(n))
                .collect(),
            remove: remove
                .iter()
                .copied()
                .filter(|&n| n >= 1 && periodic(n))
                .collect(),
        }
    }

    pub fn empty() -> Self {
        UPSet {
            modulus: 1,
            residues: Vec::new(),
            add: BTreeSet::new(),
            remove: BTreeSet::new(),
        }
    }

    pub fn naturals() -> Self {
        UPSet {
            modulus: 1,
            residues: vec![0],
            add: BTreeSet::new(),
            remove: BTreeSet::new(),
        }
    }

    /// `{n ≥ 1 : n ≡ r (mod m)}` for each listed `r`.
    pub fn progression(modulus: u64, residues: &[u64]) -> Result<Self, DensityError> {
        Self::new(modulus, residues.iter().copied(), [], [])
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        let add: BTreeSet<u64> = elements.into_iter().filter(|&n| n >= 1).collect();
        UPSet {
            add,
            ..Self::empty()
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn add(&self) -> &BTreeSet<u64> {
        &self.add
    }

    pub fn remove(&self) -> &BTreeSet<u64> {
        &self.remove
    }

    pub fn periodic_contains(&self, n: u64) -> bool {
        self.residues.binary_search(&(n % self.modulus)).is_ok()
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 || self.remove.contains(&n) {
            return false;
        }
        self.add.contains(&n) || self.periodic_contains(n)
    }

    pub fn density(&self) -> Rational {
        ratio(self.residues.len() as i64, self.modulus as i64)
    }

    pub fn is_null(&self) -> bool {
        self.residues.is_empty()
    }

    /// `m + |add| + |remove|`: bounds `|count(A, i) − i·d(A)|` for every `i`.
    pub fn convergence_constant(&self) -> u64 {
        self.modulus + self.add.len() as u64 + self.remove.len() as u64
    }

    /// `|A ∩ [1, n]|`.
    pub fn count(&self, n: u64) -> u64 {
        let m = self.modulus;
        let periodic: u64 = self
            .residues
            .iter()
            .map(|&r| {
                let first = if r == 0 { m } else { r };
                if first > n {
                    0
                } else {
                    (n - first) / m + 1
                }
            })
            .sum();
        periodic + self.add.range(..=n).count() as u64 - self.remove.range(..=n).count() as u64
    }

    fn pattern(&self, modulus: u64) -> Vec<bool> {
        (0..modulus).map(|i| self.periodic_contains(i)).collect()
    }

    /// Pointwise combination under `f`.
    pub fn combine(
        &self,
        other: &UPSet,
        f: impl Fn(bool, bool) -> bool,
    ) -> Result<UPSet, DensityError> {
        let m = self.modulus.lcm(&other.modulus);
        if m > MODULUS_CAP {
            return Err(DensityError::UnsupportedCombination(format!(
                "combined modulus {m} exceeds {MODULUS_CAP}"
            )));
        }
        let a = self.pattern(m);
        let b = other.pattern(m);
        let pattern: Vec<bool> = a.iter().zip(&b).map(|(&x, &y)| f(x, y)).collect();
        let mut add = BTreeSet::new();
        let mut remove = BTreeSet::new();
        let special = self
            .add
            .iter()
            .chain(&self.remove)
            .chain(&other.add)
            .chain(&other.remove);
        for &n in special {
            let actual = f(self.contains(n), other.contains(n));
            let periodic = pattern[(n % m) as usize];
            if actual && !periodic {
                add.insert(n);
            } else if !actual && periodic {
                remove.insert(n);
            }
        }
        Ok(Self::from_pattern(pattern, &add, &remove))
    }

    pub fn union(&self, other: &UPSet) -> Result<UPSet, DensityError> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &UPSet) -> Result<UPSet, DensityError> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &UPSet) -> Result<UPSet, DensityError> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &UPSet) -> Result<UPSet, DensityError> {
        self.combine(other, |a, b| a != b)
    }

    pub fn complement(&self) -> UPSet {
        let pattern: Vec<bool> = self.pattern(self.modulus).into_iter().map(|b| !b).collect();
        Self::from_pattern(pattern, &self.remove, &self.add)
    }

    /// `A ∖ B` is null.
    pub fn leq_mod_null(&self, other: &UPSet) -> bool {
        let m = self.modulus.lcm(&other.modulus);
        (0..m).all(|i| !self.periodic_contains(i) || other.periodic_contains(i))
    }

    /// The symmetric difference is null.
    pub fn equiv_mod_null(&self, other: &UPSet) -> bool {
        self.modulus == other.modulus && self.residues == other.residues
    }

    /// The same set without its finite exceptions.
    pub fn periodic_part(&self) -> UPSet {
        UPSet {
            add: BTreeSet::new(),
            remove: BTreeSet::new(),
            ..self.clone()
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &mut dyn Iterator<Item = &u64>| {
            xs.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        // `\` binds tighter than `|` when parsed back
        let both = !self.add.is_empty() && !self.remove.is_empty();
        if both {
            write!(f, "(")?;
        }
        if self.residues.is_empty() {
            write!(f, "EMPTY")?;
        } else if self.residues.len() as u64 == self.modulus {
            write!(f, "N")?;
        } else {
            write!(
                f,
                "AP({},{{{}}})",
                self.modulus,
                list(&mut self.residues.iter())
            )?;
        }
        if !self.add.is_empty() {
            write!(f, " | {{{}}}", list(&mut self.add.iter()))?;
        }
        if both {
            write!(f, ")")?;
        }
        if !self.remove.is_empty() {
            write!(f, " \\ {{{}}}", list(&mut self.remove.iter()))?;
        }
        Ok(())
    }
}
