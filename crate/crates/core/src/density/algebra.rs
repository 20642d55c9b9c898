use serde::Serialize;
use serde_json::{json, Value};

use super::set::DensitySet;
use super::upset::UPSet;
use super::DensityError;
use crate::rational::{format_rational, Rational};

/// Atom limit for [`generate_algebra`].
pub const MAX_ATOMS: usize = 4096;

/// Members are only enumerated up to this many atoms.
pub const MAX_MEMBER_ATOMS: usize = 16;

/// The finite algebra of classes generated by a family of density sets,
/// represented by its atoms. Atoms are pairwise disjoint periodic sets
/// covering ℕ and none of them is null.
#[derive(Debug, Clone)]
pub struct GeneratedAlgebra {
    atoms: Vec<UPSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityFailure {
    pub a: String,
    pub b: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub members: usize,
    pub pairs_checked: usize,
    pub disjoint_pairs: usize,
    pub failures: Vec<AdditivityFailure>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Refines `{ℕ}` by every core in turn, keeping only non-null pieces.
pub fn generate_algebra(family: &[DensitySet]) -> Result<GeneratedAlgebra, DensityError> {
    let mut atoms = vec![UPSet::naturals()];
    for set in family {
        let core = set.core().periodic_part();
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for atom in &atoms {
            for piece in [atom.intersection(&core)?, atom.difference(&core)?] {
                if !piece.is_null() {
                    next.push(piece);
                }
            }
        }
        if next.len() > MAX_ATOMS {
            return Err(DensityError::AtomExplosion { count: next.len() });
        }
        atoms = next;
    }
    Ok(GeneratedAlgebra { atoms })
}

impl GeneratedAlgebra {
    pub fn atoms(&self) -> &[UPSet] {
        &self.atoms
    }

    pub fn atom_densities(&self) -> Vec<Rational> {
        self.atoms.iter().map(UPSet::density).collect()
    }

    pub fn member_count(&self) -> Option<u64> {
        1u64.checked_shl(self.atoms.len() as u32)
    }

    /// Union of the atoms selected by `mask`.
    pub fn member(&self, mask: u64) -> Result<UPSet, DensityError> {
        let mut out = UPSet::empty();
        for (i, atom) in self.atoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out = out.union(atom)?;
            }
        }
        Ok(out)
    }

    /// Density of a member as the sum of its atom densities.
    pub fn member_density(&self, mask: u64) -> Rational {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.density())
            .sum()
    }

    pub fn members(&self) -> Result<Vec<UPSet>, DensityError> {
        if self.atoms.len() > MAX_MEMBER_ATOMS {
            return Err(DensityError::AtomExplosion {
                count: self.atoms.len(),
            });
        }
        (0..1u64 << self.atoms.len())
            .map(|mask| self.member(mask))
            .collect()
    }

    /// The member equivalent to `set`, as an atom mask.
    pub fn locate(&self, set: &DensitySet) -> Result<Option<u64>, DensityError> {
        let core = set.core().periodic_part();
        let mut mask = 0u64;
        for (i, atom) in self.atoms.iter().enumerate() {
            let inside = atom.intersection(&core)?;
            if inside.equiv_mod_null(atom) {
                mask |= 1 << i;
            } else if !inside.is_null() {
                return Ok(None);
            }
        }
        Ok(Some(mask))
    }

    /// For every unordered pair of distinct members: the union, intersection
    /// and complement computed on the sets agree with the atom masks, the
    /// density of each agrees with the sum over its atoms, and
    /// `d(A ∪ B) + d(A ∩ B) = d(A) + d(B)`.
    pub fn additivity_report(&self) -> Result<AdditivityReport, DensityError> {
        let members = self.members()?;
        let n = members.len() as u64;
        let mut failures = Vec::new();
        let mut pairs = 0;
        let mut disjoint = 0;
        for (mask, m) in members.iter().enumerate() {
            if m.density() != self.member_density(mask as u64) {
                failures.push(AdditivityFailure {
                    a: m.to_string(),
                    b: String::new(),
                    detail: "density differs from the sum over atoms".into(),
                });
            }
            if !m
                .complement()
                .equiv_mod_null(&members[(n - 1) as usize ^ mask])
            {
                failures.push(AdditivityFailure {
                    a: m.to_string(),
                    b: String::new(),
                    detail: "complement is not the complementary member".into(),
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                pairs += 1;
                let (a, b) = (&members[i as usize], &members[j as usize]);
                let union = a.union(b)?;
                let meet = a.intersection(b)?;
                let mut fail = |detail: &str| {
                    failures.push(AdditivityFailure {
                        a: a.to_string(),
                        b: b.to_string(),
                        detail: detail.into(),
                    })
                };
                if !union.equiv_mod_null(&members[(i | j) as usize]) {
                    fail("union is not the join of masks");
                }
                if !meet.equiv_mod_null(&members[(i & j) as usize]) {
                    fail("intersection is not the meet of masks");
                }
                if union.density() + meet.density() != a.density() + b.density() {
                    fail("inclusion-exclusion fails");
                }
                if i & j == 0 {
                    disjoint += 1;
                    if !meet.is_null() || union.density() != a.density() + b.density() {
                        fail("not additive on a disjoint pair");
                    }
                }
            }
        }
        Ok(AdditivityReport {
            members: n as usize,
            pairs_checked: pairs,
            disjoint_pairs: disjoint,
            failures,
        })
    }

    pub fn to_json(&self, horizons: &[u64]) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|a| {
                json!({
                    "set": a.to_string(),
                    "density": format_rational(&a.density()),
                    "horizon_counts": horizons.iter().map(|&h| json!([h, a.count(h)])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "density": format_rational(&self.atom_densities().into_iter().sum()),
            "horizon_counts": horizons.iter().map(|&h| json!([h, h])).collect::<Vec<_>>(),
            "atoms": atoms,
            "members": self.member_count(),
        })
    }
}
