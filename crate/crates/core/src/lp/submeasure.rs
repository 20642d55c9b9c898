use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::NormError;
use crate::lattice::{catalog, Elem, Lattice};
use crate::rational::{format_rational, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubmeasureFlags {
    pub order_preserving: bool,
    pub subadditive: bool,
    /// `N ≤ M⊥ ⇒ φ(M ∨ N) = φ(M) + φ(N)`; false without an ortho map.
    pub orthoadditive: bool,
    /// `φ(0) = 0` and `φ(1) = 1`.
    pub normalized: bool,
}

/// A `[0, 1]`-valued map on a lattice. Flags are always recomputed from the
/// values.
#[derive(Debug, Clone, PartialEq)]
pub struct Submeasure {
    lattice: Lattice,
    values: Vec<Rational>,
    flags: SubmeasureFlags,
}

impl Submeasure {
    /// Wraps values without endpoint validation (used for derived maps).
    pub fn from_values(lattice: &Lattice, values: Vec<Rational>) -> Self {
        assert_eq!(values.len(), lattice.len());
        let flags = compute_flags(lattice, &values);
        Submeasure {
            lattice: lattice.clone(),
            values,
            flags,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn value(&self, e: Elem) -> &Rational {
        &self.values[e]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn flags(&self) -> SubmeasureFlags {
        self.flags
    }

    pub fn is_null(&self, e: Elem) -> bool {
        self.values[e].is_zero()
    }

    /// Values keyed by element name, rendered as `num/den`.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.lattice
            .elements()
            .map(|e| {
                (
                    self.lattice.name(e).to_string(),
                    format_rational(&self.values[e]),
                )
            })
            .collect()
    }
}

fn compute_flags(l: &Lattice, v: &[Rational]) -> SubmeasureFlags {
    let mut order_preserving = true;
    let mut subadditive = true;
    let mut orthoadditive = l.has_ortho();
    for a in l.elements() {
        for b in l.elements() {
            if l.leq(a, b) && v[a] > v[b] {
                order_preserving = false;
            }
            if v[l.join(a, b)] > &v[a] + &v[b] {
                subadditive = false;
            }
            if let Some(ap) = l.ortho(a) {
                if l.leq(b, ap) && v[l.join(a, b)] != &v[a] + &v[b] {
                    orthoadditive = false;
                }
            }
        }
    }
    SubmeasureFlags {
        order_preserving,
        subadditive,
        orthoadditive,
        normalized: v[l.bottom()].is_zero() && v[l.top()].is_one(),
    }
}

/// Validates a user-supplied map: every element present, values in
/// `[0, 1]`, `φ(0) = 0`, `φ(1) = 1`. Structural flags may be false.
pub fn check_submeasure(
    lattice: &Lattice,
    values: &BTreeMap<String, Rational>,
) -> Result<Submeasure, NormError> {
    let mut out = Vec::with_capacity(lattice.len());
    for e in lattice.elements() {
        let name = lattice.name(e);
        let v = values
            .get(name)
            .cloned()
            .or_else(|| {
                // The bounds may be left implicit.
                if e == lattice.bottom() {
                    Some(Rational::zero())
                } else if e == lattice.top() {
                    Some(Rational::one())
                } else {
                    None
                }
            })
            .ok_or_else(|| NormError::MissingElement(name.to_string()))?;
        if v < Rational::zero() || v > Rational::one() {
            return Err(NormError::ValueOutOfRange {
                element: name.to_string(),
                value: format_rational(&v),
            });
        }
        out.push(v);
    }
    for name in values.keys() {
        lattice.elem(name)?;
    }
    if !out[lattice.bottom()].is_zero() || !out[lattice.top()].is_one() {
        return Err(NormError::BadEndpoints);
    }
    Ok(Submeasure::from_values(lattice, out))
}

/// The reference submeasure paired with each catalog lattice.
///
/// Boolean algebras carry the uniform measure, chains the rank measure,
/// `n5` uses `φ(A) = 1/2, φ(B) = 1/4, φ(C) = 1/2` and the remaining
/// lattices put `1/2` on every element strictly between the bounds.
pub fn catalog_submeasure(name: &str) -> Result<(Lattice, Submeasure), NormError> {
    let l = catalog(name)?;
    let values: Vec<Rational> = if let Some(k) = name.strip_prefix("boolean_") {
        let n: i64 = k.parse().expect("validated by catalog");
        l.elements()
            .map(|e| {
                let size = if e == l.top() {
                    n
                } else if e == l.bottom() {
                    0
                } else {
                    l.name(e).matches(|c: char| c.is_ascii_lowercase()).count() as i64
                };
                ratio(size, n)
            })
            .collect()
    } else if name.starts_with("chain_") {
        let n = l.len() as i64;
        (0..n).map(|i| ratio(i, n - 1)).collect()
    } else if name == "n5" {
        l.elements()
            .map(|e| match l.name(e) {
                "0" => ratio(0, 1),
                "A" => ratio(1, 2),
                "B" => ratio(1, 4),
                "C" => ratio(1, 2),
                _ => ratio(1, 1),
            })
            .collect()
    } else {
        l.elements()
            .map(|e| {
                if e == l.bottom() {
                    ratio(0, 1)
                } else if e == l.top() {
                    ratio(1, 1)
                } else {
                    ratio(1, 2)
                }
            })
            .collect()
    };
    let phi = Submeasure::from_values(&l, values);
    Ok((l, phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn diamond_half_half() {
        let l = catalog("diamond").unwrap();
        let phi = check_submeasure(&l, &map(&[("A", ratio(1, 2)), ("B", ratio(1, 2))])).unwrap();
        let f = phi.flags();
        assert!(f.order_preserving && f.subadditive && f.orthoadditive && f.normalized);
    }

    #[test]
    fn m3_half_on_atoms() {
        let l = catalog("m3").unwrap();
        let phi = check_submeasure(
            &l,
            &map(&[("A", ratio(1, 2)), ("B", ratio(1, 2)), ("C", ratio(1, 2))]),
        )
        .unwrap();
        assert!(phi.flags().order_preserving && phi.flags().subadditive);
        assert!(!phi.flags().orthoadditive);
    }

    #[test]
    fn boolean_three_quarters_not_orthoadditive() {
        let l = catalog("boolean_2").unwrap();
        let phi =
            check_submeasure(&l, &map(&[("{a}", ratio(3, 4)), ("{b}", ratio(3, 4))])).unwrap();
        assert!(phi.flags().subadditive);
        assert!(!phi.flags().orthoadditive);
    }

    #[test]
    fn errors() {
        let l = catalog("diamond").unwrap();
        assert_eq!(
            check_submeasure(&l, &map(&[("A", ratio(1, 2))])),
            Err(NormError::MissingElement("B".into()))
        );
        assert!(matches!(
            check_submeasure(&l, &map(&[("A", ratio(3, 2)), ("B", ratio(1, 2))])),
            Err(NormError::ValueOutOfRange { .. })
        ));
        assert_eq!(
            check_submeasure(
                &l,
                &map(&[("A", ratio(1, 2)), ("B", ratio(1, 2)), ("1", ratio(1, 2))])
            ),
            Err(NormError::BadEndpoints)
        );
    }

    #[test]
    fn catalog_measures() {
        let (_, b3) = catalog_submeasure("boolean_3").unwrap();
        assert_eq!(b3.values()[4], ratio(2, 3));
        assert!(b3.flags().orthoadditive);
        let (_, n5) = catalog_submeasure("n5").unwrap();
        assert!(n5.flags().order_preserving);
        assert!(!n5.flags().subadditive);
        for name in crate::lattice::catalog_names() {
            let (_, phi) = catalog_submeasure(name).unwrap();
            assert!(
                phi.flags().normalized && phi.flags().order_preserving,
                "{name}"
            );
        }
    }
}
