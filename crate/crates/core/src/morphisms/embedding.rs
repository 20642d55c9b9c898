use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::MorphismError;
use crate::lattice::{Elem, Lattice, LatticeFile};
use crate::lp::{
    check_submeasure, Exponent, NormContext, NormResult, Semantics, Submeasure, WitnessTerm,
    P_GT1_TOLERANCE,
};
use crate::quotient::QuotientSpace;
use crate::rational::{format_rational, to_f64, Rational, RationalString};
use crate::sample::deterministic_sample;

/// On-disk form of an [`Embedding`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub source: LatticeFile,
    pub mu: BTreeMap<String, RationalString>,
    pub target: LatticeFile,
    pub phi: BTreeMap<String, RationalString>,
    pub j: BTreeMap<String, String>,
}

/// A map `j: Σ₀ → L` from a finite Boolean algebra with measure `μ` into a
/// submeasured lattice.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub source: Lattice,
    pub mu: Vec<Rational>,
    pub target: Lattice,
    pub phi: Submeasure,
    pub j: Vec<Elem>,
}

impl Embedding {
    pub fn new(
        source: Lattice,
        mu: Vec<Rational>,
        phi: Submeasure,
        j: Vec<Elem>,
    ) -> Result<Self, MorphismError> {
        assert_eq!(mu.len(), source.len());
        assert_eq!(j.len(), source.len());
        let target = phi.lattice().clone();
        Ok(Embedding {
            source,
            mu,
            target,
            phi,
            j,
        })
    }

    pub fn from_file(file: &EmbeddingFile) -> Result<Self, MorphismError> {
        let source = Lattice::from_file(&file.source)?;
        let target = Lattice::from_file(&file.target)?;
        let mut mu = Vec::with_capacity(source.len());
        for e in source.elements() {
            let v = file
                .mu
                .get(source.name(e))
                .map(|q| q.0.clone())
                .or_else(|| (e == source.bottom()).then(Rational::zero))
                .ok_or_else(|| {
                    MorphismError::HypothesisUnmet(vec![format!(
                        "μ undefined at {}",
                        source.name(e)
                    )])
                })?;
            mu.push(v);
        }
        let phi_values: BTreeMap<String, Rational> = file
            .phi
            .iter()
            .map(|(k, v)| (k.clone(), v.0.clone()))
            .collect();
        let phi = check_submeasure(&target, &phi_values)?;
        let mut j = Vec::with_capacity(source.len());
        for e in source.elements() {
            let name = file.j.get(source.name(e)).map(String::as_str).or_else(|| {
                if e == source.bottom() {
                    Some(target.name(target.bottom()))
                } else if e == source.top() {
                    Some(target.name(target.top()))
                } else {
                    None
                }
            });
            let name = name.ok_or_else(|| {
                MorphismError::HypothesisUnmet(vec![format!("j undefined at {}", source.name(e))])
            })?;
            j.push(target.elem(name)?);
        }
        Embedding::new(source, mu, phi, j)
    }

    /// Every violated hypothesis of the embedding theorem, as text.
    pub fn unmet_hypotheses(&self) -> Vec<String> {
        let (s, t) = (&self.source, &self.target);
        let mut out = Vec::new();
        let report = s.analyze();
        if !(report.is_distributive && report.is_ortholattice) {
            out.push("source is not a Boolean algebra".to_string());
        }
        for a in s.elements() {
            for b in s.elements() {
                if s.leq(a, b) != t.leq(self.j[a], self.j[b]) {
                    out.push(format!(
                        "j is not an order embedding at ({}, {})",
                        s.name(a),
                        s.name(b)
                    ));
                }
                if s.meet(a, b) == s.bottom() && self.mu[s.join(a, b)] != &self.mu[a] + &self.mu[b]
                {
                    out.push(format!(
                        "μ is not additive at ({}, {})",
                        s.name(a),
                        s.name(b)
                    ));
                }
            }
            if &self.mu[a] != self.phi.value(self.j[a]) {
                out.push(format!(
                    "μ({}) = {} differs from φ(j({})) = {}",
                    s.name(a),
                    format_rational(&self.mu[a]),
                    s.name(a),
                    format_rational(self.phi.value(self.j[a]))
                ));
            }
        }
        if !self.phi.flags().orthoadditive {
            out.push("φ is not orthoadditive".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingFailure {
    /// Coefficients on the source atoms.
    pub coefficients: Vec<String>,
    pub lattice_norm: String,
    pub classical: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub p: String,
    pub atoms: Vec<String>,
    pub samples_checked: usize,
    pub failures: Vec<EmbeddingFailure>,
    /// Orthogonal-refinement cross-checks run (p = 1, orthomodular target).
    pub refinements_checked: usize,
    pub refinement_mismatches: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.refinement_mismatches.is_empty()
    }
}

/// Compares `‖Σ aᵢ ⊗ j(Aᵢ)‖` with `(Σ |aᵢ|^p μ(Aᵢ))^{1/p}` over the atoms
/// `Aᵢ` of the source, on all sign patterns plus `sample_size` seeded
/// vectors.
pub fn check_embedding_isometry(
    e: &Embedding,
    p: Exponent,
    sample_size: usize,
    seed: u64,
) -> Result<EmbeddingReport, MorphismError> {
    let unmet = e.unmet_hypotheses();
    if !unmet.is_empty() {
        return Err(MorphismError::HypothesisUnmet(unmet));
    }
    let space = QuotientSpace::build(&e.target);
    let ctx = NormContext::new(&space, &e.phi, p.clone(), Semantics::Disjoint)?;
    let atoms = e.source.atoms();
    let pf = p.as_f64();
    let mut report = EmbeddingReport {
        p: p.to_string(),
        atoms: atoms
            .iter()
            .map(|&a| e.source.name(a).to_string())
            .collect(),
        samples_checked: 0,
        failures: Vec::new(),
        refinements_checked: 0,
        refinement_mismatches: Vec::new(),
    };
    let refine = p.is_one() && e.target.is_orthomodular();
    for coefs in deterministic_sample(atoms.len(), sample_size, seed) {
        let terms: Vec<(Rational, Elem)> = coefs
            .iter()
            .zip(&atoms)
            .map(|(c, &a)| (c.clone(), e.j[a]))
            .collect();
        let x = space.vector(terms);
        let got = ctx.norm(&x)?;
        let (ok, classical) = if p.is_one() {
            let classical = coefs
                .iter()
                .zip(&atoms)
                .fold(Rational::zero(), |acc, (c, &a)| acc + c.abs() * &e.mu[a]);
            (
                got.value.exact() == Some(&classical),
                format_rational(&classical),
            )
        } else {
            let sum: f64 = coefs
                .iter()
                .zip(&atoms)
                .map(|(c, &a)| to_f64(c).abs().powf(pf) * to_f64(&e.mu[a]))
                .sum();
            let classical = sum.powf(1.0 / pf);
            let v = got.value.to_f64();
            let ok = if classical == 0.0 {
                got.value.upper() <= 1e-12
            } else {
                (v - classical).abs() <= P_GT1_TOLERANCE * classical
            };
            (ok, format!("{classical:.12}"))
        };
        report.samples_checked += 1;
        if !ok {
            report.failures.push(EmbeddingFailure {
                coefficients: coefs.iter().map(format_rational).collect(),
                lattice_norm: match got.value.exact() {
                    Some(q) => format_rational(q),
                    None => format!("{:.12}", got.value.to_f64()),
                },
                classical,
            });
        }
        if refine && !got.witness.is_empty() {
            report.refinements_checked += 1;
            if let Some(problem) = refinement_mismatch(&ctx, &x.terms, &got) {
                report.refinement_mismatches.push(problem);
            }
        }
    }
    Ok(report)
}

/// Refines the optimal witness to pairwise orthogonal elements and checks
/// that it still dominates `±x` at the optimal cost, with every refined
/// element below some element of the refinement of `x` plus witness.
fn refinement_mismatch(
    ctx: &NormContext,
    x_terms: &[(Rational, Elem)],
    result: &NormResult,
) -> Option<String> {
    let space = ctx.space();
    let l = ctx.lattice();
    let witness: Vec<(Rational, Elem)> = result
        .witness
        .iter()
        .map(|t| (t.coef.clone(), t.element))
        .collect();
    let mut combined: Vec<(Rational, Elem)> = x_terms.to_vec();
    combined.extend(witness.iter().cloned());
    let common = match space.disjointify(&space.vector(combined)) {
        Ok(v) => v,
        Err(err) => return Some(err.to_string()),
    };
    let refined = match space.disjointify(&space.vector(witness)) {
        Ok(v) => v,
        Err(err) => return Some(err.to_string()),
    };
    let cost = refined.terms.iter().fold(Rational::zero(), |acc, (c, e)| {
        acc + c * ctx.phi().value(*e)
    });
    let direct = result.value.exact()?;
    if &cost != direct {
        return Some(format!(
            "refined cost {} differs from optimum {}",
            format_rational(&cost),
            format_rational(direct)
        ));
    }
    if refined.terms.iter().any(|(c, _)| c.is_negative()) {
        return Some("refined witness has a negative coefficient".into());
    }
    let family: Vec<Elem> = refined.terms.iter().map(|(_, e)| *e).collect();
    let orthogonal = family.iter().enumerate().all(|(i, &a)| {
        family[i + 1..]
            .iter()
            .all(|&b| l.ortho(a).is_some_and(|ap| l.leq(b, ap)))
    });
    if !orthogonal {
        return Some("refined witness is not orthogonal".into());
    }
    let common_family: Vec<Elem> = common.terms.iter().map(|(_, e)| *e).collect();
    let common_orthogonal = common_family.iter().enumerate().all(|(i, &a)| {
        common_family[i + 1..]
            .iter()
            .all(|&b| l.ortho(a).is_some_and(|ap| l.leq(b, ap)))
    });
    if !common_orthogonal {
        return Some("common refinement is not orthogonal".into());
    }
    let refined_witness: Vec<WitnessTerm> = refined
        .terms
        .iter()
        .map(|(c, e)| WitnessTerm {
            coef: c.clone(),
            element: *e,
        })
        .collect();
    let x = space.vector(x_terms.to_vec());
    if !ctx.dominates(&refined_witness, &x.coords) {
        return Some("refined witness does not dominate".into());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use crate::lp::catalog_submeasure;
    use crate::rational::ratio;

    fn boolean_into(target: &str, images: &[&str], mu: &[Rational]) -> Embedding {
        let source = catalog("boolean_2").unwrap();
        let (t, phi) = catalog_submeasure(target).unwrap();
        let j = source
            .elements()
            .map(|e| match source.name(e) {
                "0" => t.bottom(),
                "1" => t.top(),
                "{a}" => t.elem(images[0]).unwrap(),
                _ => t.elem(images[1]).unwrap(),
            })
            .collect();
        Embedding::new(source, mu.to_vec(), phi, j).unwrap()
    }

    #[test]
    fn boolean_1_into_anything() {
        let source = catalog("boolean_1").unwrap();
        let (t, phi) = catalog_submeasure("diamond").unwrap();
        let e = Embedding::new(
            source,
            vec![ratio(0, 1), ratio(1, 1)],
            phi,
            vec![t.bottom(), t.top()],
        )
        .unwrap();
        let r = check_embedding_isometry(&e, Exponent::one(), 5, 0).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn boolean_2_into_boolean_3() {
        let mu = [ratio(0, 1), ratio(1, 3), ratio(2, 3), ratio(1, 1)];
        let e = boolean_into("boolean_3", &["{a}", "{b,c}"], &mu);
        for p in [1, 2] {
            let r = check_embedding_isometry(&e, Exponent::integer(p).unwrap(), 20, 0).unwrap();
            assert!(r.passed(), "p={p}: {r:?}");
        }
    }

    #[test]
    fn hypotheses_are_reported() {
        let mu = [ratio(0, 1), ratio(1, 3), ratio(2, 3), ratio(1, 1)];
        let e = boolean_into("boolean_3", &["{a}", "{b}"], &mu);
        match check_embedding_isometry(&e, Exponent::one(), 5, 0) {
            Err(MorphismError::HypothesisUnmet(list)) => assert!(!list.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mo2_antisymmetric_vector_collapses() {
        // a and a' have the same class in X, so 1⊗a − 1⊗a' is zero.
        let half = ratio(1, 2);
        let e = boolean_into(
            "mo2",
            &["a", "a'"],
            &[ratio(0, 1), half.clone(), half, ratio(1, 1)],
        );
        assert!(e.unmet_hypotheses().is_empty());
        let r = check_embedding_isometry(&e, Exponent::one(), 0, 0).unwrap();
        assert!(r
            .failures
            .iter()
            .any(|f| f.lattice_norm == "0/1" && f.classical == "1/1"));
    }
}
