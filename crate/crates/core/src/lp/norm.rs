use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::convex::{solve_power_program, PowerProgram};
use super::{Exponent, NormError, Semantics, Submeasure};
use crate::lattice::{Elem, Lattice};
use crate::linalg::{self, Vector};
use crate::quotient::{QuotientSpace, XVector};
use crate::rational::{format_rational, to_f64, Rational};
use crate::simplex::{self, LinearProgram, LpOutcome};

pub const DEFAULT_FAMILY_CAP: usize = 100_000;

/// Target relative duality gap for p > 1.
pub const P_GT1_RELATIVE_GAP: f64 = 1e-9;

/// Environment variable overriding [`DEFAULT_FAMILY_CAP`].
pub const FAMILY_CAP_ENV: &str = "LATTICELP_FAMILY_CAP";

/// The family cap from `LATTICELP_FAMILY_CAP` when set to a positive
/// integer, else [`DEFAULT_FAMILY_CAP`].
pub fn default_family_cap() -> usize {
    std::env::var(FAMILY_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(DEFAULT_FAMILY_CAP)
}

/// Gaps larger than this are reported as a solver failure.
const P_GT1_GAP_LIMIT: f64 = 1e-6;

/// Witness coefficients for p > 1 are rounded up to this grid.
const WITNESS_GRID_BITS: u32 = 40;

/// Maximal sets of non-zero elements with pairwise meet `0`, each sorted,
/// in lexicographic order.
pub fn meet_zero_families(l: &Lattice, cap: usize) -> Result<Vec<Vec<Elem>>, NormError> {
    let n = l.len();
    let bottom = l.bottom();
    let mut adj = vec![0u64; n];
    for a in l.elements() {
        for b in l.elements() {
            if a != b && a != bottom && b != bottom && l.meet(a, b) == bottom {
                adj[a] |= 1 << b;
            }
        }
    }
    let all: u64 = l
        .elements()
        .filter(|&e| e != bottom)
        .fold(0, |m, e| m | (1 << e));
    let mut out = Vec::new();
    bron_kerbosch(0, all, 0, &adj, &mut out, cap)?;
    let mut families: Vec<Vec<Elem>> = out
        .into_iter()
        .map(|mask| (0..n).filter(|&e| mask >> e & 1 == 1).collect())
        .collect();
    families.sort();
    Ok(families)
}

fn bron_kerbosch(
    r: u64,
    mut p: u64,
    mut x: u64,
    adj: &[u64],
    out: &mut Vec<u64>,
    cap: usize,
) -> Result<(), NormError> {
    if p == 0 && x == 0 {
        out.push(r);
        if out.len() > cap {
            return Err(NormError::FamilyExplosion { cap });
        }
        return Ok(());
    }
    let pivot = (0..adj.len())
        .filter(|&u| (p | x) >> u & 1 == 1)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p or x is non-empty");
    let mut candidates = p & !adj[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        bron_kerbosch(r | 1 << v, p & adj[v], x & adj[v], adj, out, cap)?;
        p &= !(1 << v);
        x |= 1 << v;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormValue {
    Exact(Rational),
    /// `value` is the upper end of the certified bracket.
    Approx {
        value: f64,
        lower: f64,
        upper: f64,
    },
}

impl NormValue {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            NormValue::Exact(q) => Some(q),
            NormValue::Approx { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(q) => to_f64(q),
            NormValue::Approx { value, .. } => *value,
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            NormValue::Exact(q) => to_f64(q),
            NormValue::Approx { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            NormValue::Exact(q) => to_f64(q),
            NormValue::Approx { upper, .. } => *upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTerm {
    pub coef: Rational,
    pub element: Elem,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormResult {
    pub value: NormValue,
    /// Nonnegative coefficients on distinct elements dominating `±x`.
    pub witness: Vec<WitnessTerm>,
    pub semantics: Semantics,
}

impl NormResult {
    pub fn to_json(&self, lattice: &Lattice) -> Value {
        let witness: Vec<Value> = self
            .witness
            .iter()
            .map(|t| json!({"b": format_rational(&t.coef), "B": lattice.name(t.element)}))
            .collect();
        match &self.value {
            NormValue::Exact(q) => json!({
                "value": format_rational(q),
                "witness": witness,
                "semantics": self.semantics,
            }),
            NormValue::Approx {
                value,
                lower,
                upper,
            } => json!({
                "value": value,
                "bracket": [lower, upper],
                "witness": witness,
                "semantics": self.semantics,
            }),
        }
    }
}

/// Everything needed to evaluate `‖·‖_{L^p(L, φ)}` on one quotient space.
#[derive(Debug, Clone)]
pub struct NormContext {
    space: QuotientSpace,
    phi: Submeasure,
    p: Exponent,
    semantics: Semantics,
    family_cap: usize,
    families: Vec<Vec<Elem>>,
    /// `facet_images[j][e] = h_j · q(e_e)`.
    facet_images: Vec<Vec<Rational>>,
}

impl NormContext {
    pub fn new(
        space: &QuotientSpace,
        phi: &Submeasure,
        p: Exponent,
        semantics: Semantics,
    ) -> Result<Self, NormError> {
        Self::with_family_cap(space, phi, p, semantics, default_family_cap())
    }

    pub fn with_family_cap(
        space: &QuotientSpace,
        phi: &Submeasure,
        p: Exponent,
        semantics: Semantics,
        cap: usize,
    ) -> Result<Self, NormError> {
        if !p.is_one() && semantics == Semantics::Any {
            return Err(NormError::SemanticsUnsupported);
        }
        let l = space.lattice();
        if phi.lattice() != l {
            return Err(NormError::MissingElement(
                "submeasure lattice differs".into(),
            ));
        }
        let families = match semantics {
            Semantics::Disjoint => meet_zero_families(l, cap)?,
            Semantics::Any => vec![l.elements().filter(|&e| e != l.bottom()).collect()],
        };
        let facet_images = space
            .facets()
            .iter()
            .map(|h| {
                l.elements()
                    .map(|e| linalg::dot(h, space.image(e)))
                    .collect()
            })
            .collect();
        Ok(NormContext {
            space: space.clone(),
            phi: phi.clone(),
            p,
            semantics,
            family_cap: cap,
            families,
            facet_images,
        })
    }

    /// Same space and semantics with another submeasure.
    pub fn with_phi(&self, phi: &Submeasure) -> Result<Self, NormError> {
        Self::with_family_cap(
            &self.space,
            phi,
            self.p.clone(),
            self.semantics,
            self.family_cap,
        )
    }

    /// Same space and submeasure with another exponent.
    pub fn with_p(&self, p: Exponent, semantics: Semantics) -> Result<Self, NormError> {
        Self::with_family_cap(&self.space, &self.phi, p, semantics, self.family_cap)
    }

    pub fn family_cap(&self) -> usize {
        self.family_cap
    }

    pub fn space(&self) -> &QuotientSpace {
        &self.space
    }

    pub fn lattice(&self) -> &Lattice {
        self.space.lattice()
    }

    pub fn phi(&self) -> &Submeasure {
        &self.phi
    }

    pub fn p(&self) -> &Exponent {
        &self.p
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn families(&self) -> &[Vec<Elem>] {
        &self.families
    }

    pub fn norm(&self, x: &XVector) -> Result<NormResult, NormError> {
        self.norm_coords(&x.coords)
    }

    pub fn norm_coords(&self, x: &[Rational]) -> Result<NormResult, NormError> {
        self.space.check_dim(x)?;
        if linalg::is_zero(x) {
            return Ok(NormResult {
                value: NormValue::Exact(Rational::zero()),
                witness: Vec::new(),
                semantics: self.semantics,
            });
        }
        let result = if self.p.is_one() {
            self.norm_p1(x)
        } else {
            self.norm_convex(x)?
        };
        if !self.dominates(&result.witness, x) {
            return Err(NormError::SolverStalled);
        }
        Ok(result)
    }

    /// Whether `Σ b_k q(e_{B_k}) ∓ x ∈ C`, checked exactly on the facets.
    pub fn dominates(&self, witness: &[WitnessTerm], x: &[Rational]) -> bool {
        self.space
            .facets()
            .iter()
            .zip(&self.facet_images)
            .all(|(h, hi)| {
                let cover = witness
                    .iter()
                    .fold(Rational::zero(), |acc, t| acc + &t.coef * &hi[t.element]);
                cover >= linalg::dot(h, x).abs()
            })
    }

    fn norm_p1(&self, x: &[Rational]) -> NormResult {
        let mut best: Option<(Rational, Vec<WitnessTerm>)> = None;
        for family in &self.families {
            if let Some((value, witness)) = self.family_lp(family, x) {
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    best = Some((value, witness));
                }
            }
        }
        let (value, witness) = best.expect("the family {1} always dominates");
        NormResult {
            value: NormValue::Exact(value),
            witness,
            semantics: self.semantics,
        }
    }

    /// `min Σ φ(B) c_B` over `c ≥ 0, λ± ≥ 0` with
    /// `Σ c_B q(e_B) − G λ± = ±x` (`G` the cone generators).
    fn family_lp(&self, family: &[Elem], x: &[Rational]) -> Option<(Rational, Vec<WitnessTerm>)> {
        let gens = self.space.cone_generators();
        let d = x.len();
        let k = family.len();
        let g = gens.len();
        let nvars = k + 2 * g;
        let mut rows = Vec::with_capacity(2 * d);
        let mut rhs = Vec::with_capacity(2 * d);
        for (sign, offset) in [(1i64, k), (-1i64, k + g)] {
            for i in 0..d {
                let mut row = vec![Rational::zero(); nvars];
                for (col, &b) in family.iter().enumerate() {
                    row[col] = self.space.image(b)[i].clone();
                }
                for (j, gen) in gens.iter().enumerate() {
                    row[offset + j] = -gen[i].clone();
                }
                rows.push(row);
                rhs.push(if sign > 0 {
                    x[i].clone()
                } else {
                    -x[i].clone()
                });
            }
        }
        let mut objective = vec![Rational::zero(); nvars];
        for (col, &b) in family.iter().enumerate() {
            objective[col] = self.phi.value(b).clone();
        }
        match simplex::solve(&LinearProgram {
            objective,
            rows,
            rhs,
        }) {
            LpOutcome::Optimal { x: sol, value } => {
                let witness = family
                    .iter()
                    .zip(&sol)
                    .filter(|(_, c)| c.is_positive())
                    .map(|(&b, c)| WitnessTerm {
                        coef: c.clone(),
                        element: b,
                    })
                    .collect();
                Some((value, witness))
            }
            _ => None,
        }
    }

    /// p = 1 value computed on the facet description instead of the cone
    /// generators: `min Σ φ(B) c_B` over `c ≥ 0` with
    /// `Σ_B c_B h·q(e_B) ≥ |h·x|` for every facet normal `h`.
    pub fn norm_p1_via_facets(&self, x: &[Rational]) -> Result<Rational, NormError> {
        self.space.check_dim(x)?;
        let targets: Vec<Rational> = self
            .space
            .facets()
            .iter()
            .map(|h| linalg::dot(h, x).abs())
            .collect();
        let mut best: Option<Rational> = None;
        for family in &self.families {
            let j = targets.len();
            let rows: Vec<Vector> = (0..j)
                .map(|r| {
                    let mut row: Vector = family
                        .iter()
                        .map(|&b| self.facet_images[r][b].clone())
                        .collect();
                    row.extend((0..j).map(|s| {
                        if s == r {
                            -Rational::one()
                        } else {
                            Rational::zero()
                        }
                    }));
                    row
                })
                .collect();
            let mut objective: Vector = family.iter().map(|&b| self.phi.value(b).clone()).collect();
            objective.extend(std::iter::repeat_n(Rational::zero(), j));
            let lp = LinearProgram {
                objective,
                rows,
                rhs: targets.clone(),
            };
            if let LpOutcome::Optimal { value, .. } = simplex::solve(&lp) {
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
        }
        Ok(best.expect("the family {1} always dominates"))
    }

    fn norm_convex(&self, x: &[Rational]) -> Result<NormResult, NormError> {
        let p = self.p.as_f64();
        let targets: Vec<Rational> = self
            .space
            .facets()
            .iter()
            .map(|h| linalg::dot(h, x).abs())
            .collect();
        let mut best: Option<(f64, Vec<WitnessTerm>)> = None;
        let mut best_lower = f64::INFINITY;
        for family in &self.families {
            let Some((upper, lower, witness)) = self.family_convex(family, &targets, p)? else {
                continue;
            };
            best_lower = best_lower.min(lower);
            if best.as_ref().is_none_or(|(b, _)| upper < *b) {
                best = Some((upper, witness));
            }
        }
        let (upper, witness) = best.expect("the family {1} always dominates");
        let lower = best_lower.max(0.0).min(upper);
        if upper > 0.0 && (upper - lower) / upper > P_GT1_GAP_LIMIT {
            return Err(NormError::SolverStalled);
        }
        let value = upper.powf(1.0 / p);
        Ok(NormResult {
            value: NormValue::Approx {
                value,
                lower: lower.powf(1.0 / p),
                upper: value,
            },
            witness,
            semantics: self.semantics,
        })
    }

    /// Returns `(upper, lower, witness)` for `Σ φ c^p`, or `None` when the
    /// family cannot dominate `x`.
    #[allow(clippy::type_complexity)]
    fn family_convex(
        &self,
        family: &[Elem],
        targets: &[Rational],
        p: f64,
    ) -> Result<Option<(f64, f64, Vec<WitnessTerm>)>, NormError> {
        let active: Vec<usize> = (0..targets.len())
            .filter(|&j| targets[j].is_positive())
            .collect();
        let (null, weighted): (Vec<usize>, Vec<usize>) =
            (0..family.len()).partition(|&k| self.phi.is_null(family[k]));
        let entry = |j: usize, k: usize| &self.facet_images[j][family[k]];

        // Rows met by a null element are satisfied at zero cost.
        let mut coef = vec![Rational::zero(); family.len()];
        let mut rows = Vec::new();
        for &j in &active {
            let mut covered = false;
            for &k in &null {
                if entry(j, k).is_positive() {
                    covered = true;
                    let need = &targets[j] / entry(j, k);
                    if need > coef[k] {
                        coef[k] = need;
                    }
                }
            }
            if !covered {
                if weighted.iter().all(|&k| entry(j, k).is_zero()) {
                    return Ok(None);
                }
                rows.push(j);
            }
        }

        let mut lower = 0.0;
        if !rows.is_empty() {
            let prog = PowerProgram {
                weights: weighted
                    .iter()
                    .map(|&k| to_f64(self.phi.value(family[k])))
                    .collect(),
                matrix: rows
                    .iter()
                    .map(|&j| {
                        let scale = &targets[j];
                        weighted
                            .iter()
                            .map(|&k| to_f64(&(entry(j, k) / scale)))
                            .collect()
                    })
                    .collect(),
                rhs: vec![1.0; rows.len()],
                p,
            };
            let Some(sol) = solve_power_program(&prog, P_GT1_RELATIVE_GAP) else {
                return Ok(None);
            };
            lower = sol.lower;
            let grid = Rational::from_integer(BigInt::from(1u64) << WITNESS_GRID_BITS);
            let mut approx: Vec<Rational> = sol
                .c
                .iter()
                .map(|&c| {
                    let q = Rational::from_float(c.max(0.0)).unwrap_or_else(Rational::zero);
                    (q * &grid).ceil() / &grid
                })
                .collect();
            let satisfied = |c: &[Rational]| {
                rows.iter().all(|&j| {
                    weighted
                        .iter()
                        .zip(c)
                        .fold(Rational::zero(), |acc, (&k, ck)| acc + entry(j, k) * ck)
                        >= targets[j]
                })
            };
            let mut bump = Rational::one() + Rational::new(BigInt::one(), BigInt::from(1u64) << 36);
            let mut tries = 0;
            while !satisfied(&approx) {
                tries += 1;
                if tries > 40 {
                    return Err(NormError::SolverStalled);
                }
                approx = approx
                    .iter()
                    .map(|c| (c * &bump * &grid).ceil() / &grid)
                    .collect();
                bump = &bump * &bump;
            }
            for (&k, c) in weighted.iter().zip(approx) {
                coef[k] = c;
            }
        }
        let upper: f64 = weighted
            .iter()
            .map(|&k| to_f64(self.phi.value(family[k])) * to_f64(&coef[k]).powf(p))
            .sum();
        let witness = family
            .iter()
            .zip(coef)
            .filter(|(_, c)| c.is_positive())
            .map(|(&b, c)| WitnessTerm {
                coef: c,
                element: b,
            })
            .collect();
        Ok(Some((upper, lower.min(upper), witness)))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::lattice::catalog;
    use crate::lp::{catalog_submeasure, check_submeasure};
    use crate::rational::ratio;

    fn ctx(name: &str, p: i64, semantics: Semantics) -> NormContext {
        let (l, phi) = catalog_submeasure(name).unwrap();
        NormContext::new(
            &QuotientSpace::build(&l),
            &phi,
            Exponent::integer(p).unwrap(),
            semantics,
        )
        .unwrap()
    }

    #[test]
    fn families_of_boolean_are_partitions() {
        let l = catalog("boolean_3").unwrap();
        assert_eq!(meet_zero_families(&l, 100).unwrap().len(), 5);
        let l4 = catalog("boolean_4").unwrap();
        assert_eq!(meet_zero_families(&l4, 100).unwrap().len(), 15);
        assert_eq!(
            meet_zero_families(&l4, 10),
            Err(NormError::FamilyExplosion { cap: 10 })
        );
    }

    #[test]
    fn diamond_values() {
        let c = ctx("diamond", 1, Semantics::Disjoint);
        let a = c.lattice().elem("A").unwrap();
        let x = c.space().unit_vector(a);
        assert_eq!(c.norm(&x).unwrap().value, NormValue::Exact(ratio(1, 2)));
        let zero = c.norm(&c.space().zero()).unwrap();
        assert_eq!(zero.value, NormValue::Exact(ratio(0, 1)));
        assert!(zero.witness.is_empty());
    }

    #[test]
    fn diamond_p2_is_l2_of_two_points() {
        let c = ctx("diamond", 2, Semantics::Disjoint);
        for (a, b) in [(1, 0), (3, -4), (2, 5), (-1, -1)] {
            let x = c.space().parse_vector(&format!("{a}*A + {b}*B")).unwrap();
            let got = c.norm(&x).unwrap().value;
            let want = (((a * a + b * b) as f64) / 2.0).sqrt();
            assert!(
                (got.to_f64() - want).abs() < 1e-7,
                "{a},{b}: {got:?} vs {want}"
            );
            assert!(got.lower() <= want + 1e-12 && want <= got.upper() + 1e-12);
        }
    }

    #[test]
    fn n5_prefers_b() {
        let c = ctx("n5", 1, Semantics::Disjoint);
        let x = c.space().parse_vector("1*A + 1*B").unwrap();
        let r = c.norm(&x).unwrap();
        assert_eq!(r.value, NormValue::Exact(ratio(3, 4)));
        let names: Vec<&str> = r
            .witness
            .iter()
            .map(|t| c.lattice().name(t.element))
            .collect();
        assert!(names.contains(&"B") && !names.contains(&"C"), "{names:?}");
    }

    #[test]
    fn facet_route_agrees() {
        for name in ["diamond", "m3", "n5", "boolean_3", "mo2", "o6", "chain_3"] {
            let c = ctx(name, 1, Semantics::Disjoint);
            for e in c.lattice().elements() {
                let x = c.space().unit_vector(e);
                let v = c.norm(&x).unwrap().value.exact().unwrap().clone();
                assert_eq!(v, c.norm_p1_via_facets(&x.coords).unwrap(), "{name} {e}");
            }
        }
    }

    #[test]
    fn any_semantics_rejected_above_one() {
        let (l, phi) = catalog_submeasure("m3").unwrap();
        let err = NormContext::new(
            &QuotientSpace::build(&l),
            &phi,
            Exponent::integer(2).unwrap(),
            Semantics::Any,
        );
        assert_eq!(err.err(), Some(NormError::SemanticsUnsupported));
    }

    #[test]
    fn json_shape() {
        let c = ctx("diamond", 1, Semantics::Disjoint);
        let x = c.space().parse_vector("1*A").unwrap();
        let v = c.norm(&x).unwrap().to_json(c.lattice());
        assert_eq!(v["value"], "1/2");
        assert_eq!(v["semantics"], "disjoint");
        assert_eq!(v["witness"][0]["B"], "A");
    }

    #[test]
    fn degenerate_phi() {
        let l = catalog("boolean_2").unwrap();
        let values: BTreeMap<String, Rational> = [
            ("{a}".to_string(), ratio(0, 1)),
            ("{b}".to_string(), ratio(1, 1)),
        ]
        .into();
        let phi = check_submeasure(&l, &values).unwrap();
        for p in [1, 2] {
            let c = NormContext::new(
                &QuotientSpace::build(&l),
                &phi,
                Exponent::integer(p).unwrap(),
                Semantics::Disjoint,
            )
            .unwrap();
            let x = c.space().parse_vector("5*{a}").unwrap();
            assert_eq!(c.norm(&x).unwrap().value.upper(), 0.0);
        }
    }
}
