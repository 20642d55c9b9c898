use serde::Serialize;

use super::{require_orthomodular, NormContext, NormError, NormResult, P_GT1_TOLERANCE};
use crate::lattice::Elem;
use crate::linalg::{self, Matrix, Vector};
use crate::quotient::QuotientSpace;
use crate::rational::{format_rational, Rational};
use crate::sample::{deterministic_sample, RANDOM_VECTORS};

/// `P_M` and `Q_M` as matrices acting on X coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub m: Elem,
    /// Elements `N_α ≤ M` or `N_α ≤ M⊥` whose images form a basis of X.
    pub basis: Vec<Elem>,
    pub p_matrix: Matrix,
    pub q_matrix: Matrix,
}

impl ProjectionPair {
    pub fn apply_p(&self, x: &[Rational]) -> Vector {
        linalg::mat_vec(&self.p_matrix, x)
    }

    pub fn apply_q(&self, x: &[Rational]) -> Vector {
        linalg::mat_vec(&self.q_matrix, x)
    }

    /// `P + Q = I`, `PQ = QP = 0`, `P² = P`, `Q² = Q`.
    pub fn identities_hold(&self) -> bool {
        let d = self.p_matrix.len();
        let zero = vec![linalg::zeros(d); d];
        let sum: Matrix = self
            .p_matrix
            .iter()
            .zip(&self.q_matrix)
            .map(|(a, b)| linalg::add(a, b))
            .collect();
        sum == linalg::identity(d)
            && linalg::mat_mul(&self.p_matrix, &self.q_matrix) == zero
            && linalg::mat_mul(&self.q_matrix, &self.p_matrix) == zero
            && linalg::mat_mul(&self.p_matrix, &self.p_matrix) == self.p_matrix
            && linalg::mat_mul(&self.q_matrix, &self.q_matrix) == self.q_matrix
    }
}

/// Picks the basis greedily in element order and defines
/// `P q(e_N) = q(e_{M∧N})`, `Q q(e_N) = q(e_{M⊥∧N})` on it.
pub fn build_projections(space: &QuotientSpace, m: Elem) -> Result<ProjectionPair, NormError> {
    let l = space.lattice();
    require_orthomodular(l)?;
    let mp = l.try_ortho(m)?;
    let d = space.x_dim();
    let mut basis = Vec::new();
    let mut rows: Vec<Vector> = Vec::new();
    for n in l.elements() {
        if rows.len() == d {
            break;
        }
        if !(l.leq(n, m) || l.leq(n, mp)) {
            continue;
        }
        let mut trial = rows.clone();
        trial.push(space.image(n).clone());
        if linalg::rank(&trial, d) > rows.len() {
            rows = trial;
            basis.push(n);
        }
    }
    if rows.len() < d {
        return Err(NormError::NoSplitBasis(l.name(m).to_string()));
    }
    // Columns of `b` are the basis images.
    let b = linalg::transpose(&rows, d);
    let b_inv = linalg::inverse(&b).expect("basis images are independent");
    let image_columns = |target: Elem| -> Matrix {
        let cols: Vec<Vector> = basis
            .iter()
            .map(|&n| space.image(l.meet(target, n)).clone())
            .collect();
        linalg::transpose(&cols, d)
    };
    let p_matrix = linalg::mat_mul(&image_columns(m), &b_inv);
    let q_matrix = linalg::mat_mul(&image_columns(mp), &b_inv);
    let pair = ProjectionPair {
        m,
        basis,
        p_matrix,
        q_matrix,
    };
    assert!(
        pair.identities_hold(),
        "projection identities follow from N ≤ M or N ≤ M⊥"
    );
    Ok(pair)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisEntry {
    pub element: String,
    /// `φ(A∧M) + φ(A∧M⊥)`.
    pub lhs: String,
    /// `φ(A)`.
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleFailure {
    /// X coordinates.
    pub x: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PythagorasReport {
    pub m: String,
    pub p: String,
    pub basis: Vec<String>,
    pub hypothesis: Vec<HypothesisEntry>,
    pub hypothesis_holds: bool,
    pub samples_checked: usize,
    pub failures: Vec<SampleFailure>,
}

impl PythagorasReport {
    pub fn passed(&self) -> bool {
        self.hypothesis_holds && self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractivityReport {
    pub m: String,
    pub p: String,
    pub samples_checked: usize,
    pub failures: Vec<SampleFailure>,
}

impl ContractivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn coords_strings(x: &[Rational]) -> Vec<String> {
    x.iter().map(format_rational).collect()
}

fn show(r: &NormResult) -> String {
    match r.value.exact() {
        Some(q) => format_rational(q),
        None => format!("{:.12}", r.value.to_f64()),
    }
}

/// Checks `‖x‖^p = ‖P_M x‖^p + ‖Q_M x‖^p` on the deterministic sample once
/// the hypothesis `φ(A∧M) + φ(A∧M⊥) = φ(A)` has been confirmed for all `A`.
pub fn check_pythagoras(
    ctx: &NormContext,
    m: Elem,
    seed: u64,
) -> Result<PythagorasReport, NormError> {
    let pair = build_projections(ctx.space(), m)?;
    let l = ctx.lattice();
    let mp = l.try_ortho(m)?;
    let phi = ctx.phi();
    let hypothesis: Vec<HypothesisEntry> = l
        .elements()
        .map(|a| {
            let lhs = phi.value(l.meet(a, m)) + phi.value(l.meet(a, mp));
            let rhs = phi.value(a).clone();
            HypothesisEntry {
                element: l.name(a).to_string(),
                holds: lhs == rhs,
                lhs: format_rational(&lhs),
                rhs: format_rational(&rhs),
            }
        })
        .collect();
    let hypothesis_holds = hypothesis.iter().all(|h| h.holds);
    let mut report = PythagorasReport {
        m: l.name(m).to_string(),
        p: ctx.p().to_string(),
        basis: pair.basis.iter().map(|&n| l.name(n).to_string()).collect(),
        hypothesis,
        hypothesis_holds,
        samples_checked: 0,
        failures: Vec::new(),
    };
    if !hypothesis_holds {
        return Ok(report);
    }
    let p = ctx.p().as_f64();
    for x in deterministic_sample(ctx.space().x_dim(), RANDOM_VECTORS, seed) {
        let nx = ctx.norm_coords(&x)?;
        let np = ctx.norm_coords(&pair.apply_p(&x))?;
        let nq = ctx.norm_coords(&pair.apply_q(&x))?;
        let ok = match (nx.value.exact(), np.value.exact(), nq.value.exact()) {
            (Some(a), Some(b), Some(c)) => *a == b + c,
            _ => {
                let lhs = nx.value.to_f64().powf(p);
                let rhs = np.value.to_f64().powf(p) + nq.value.to_f64().powf(p);
                (lhs - rhs).abs() <= P_GT1_TOLERANCE * lhs.max(f64::MIN_POSITIVE)
            }
        };
        report.samples_checked += 1;
        if !ok {
            report.failures.push(SampleFailure {
                x: coords_strings(&x),
                detail: format!(
                    "‖x‖ = {}, ‖Px‖ = {}, ‖Qx‖ = {}",
                    show(&nx),
                    show(&np),
                    show(&nq)
                ),
            });
        }
    }
    Ok(report)
}

/// Checks `‖P_M x‖ ≤ ‖x‖` and `‖Q_M x‖ ≤ ‖x‖` on the deterministic sample.
pub fn check_contractivity(
    ctx: &NormContext,
    m: Elem,
    seed: u64,
) -> Result<ContractivityReport, NormError> {
    let pair = build_projections(ctx.space(), m)?;
    let l = ctx.lattice();
    let mut report = ContractivityReport {
        m: l.name(m).to_string(),
        p: ctx.p().to_string(),
        samples_checked: 0,
        failures: Vec::new(),
    };
    for x in deterministic_sample(ctx.space().x_dim(), RANDOM_VECTORS, seed) {
        let nx = ctx.norm_coords(&x)?;
        for (label, y) in [("P", pair.apply_p(&x)), ("Q", pair.apply_q(&x))] {
            let ny = ctx.norm_coords(&y)?;
            let ok = match (ny.value.exact(), nx.value.exact()) {
                (Some(a), Some(b)) => a <= b,
                _ => ny.value.lower() <= nx.value.upper() * (1.0 + P_GT1_TOLERANCE),
            };
            if !ok {
                report.failures.push(SampleFailure {
                    x: coords_strings(&x),
                    detail: format!("‖{label}x‖ = {} > ‖x‖ = {}", show(&ny), show(&nx)),
                });
            }
        }
        report.samples_checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::lp::{catalog_submeasure, Exponent, Semantics};
    use crate::rational::ratio;

    fn is_zero_matrix(m: &Matrix) -> bool {
        m.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    fn ctx(name: &str, p: i64) -> NormContext {
        let (l, phi) = catalog_submeasure(name).unwrap();
        NormContext::new(
            &QuotientSpace::build(&l),
            &phi,
            Exponent::integer(p).unwrap(),
            Semantics::Disjoint,
        )
        .unwrap()
    }

    #[test]
    fn boolean_coordinate_projections() {
        let c = ctx("boolean_2", 1);
        let l = c.lattice();
        let a = l.elem("{a}").unwrap();
        let b = l.elem("{b}").unwrap();
        let pair = build_projections(c.space(), a).unwrap();
        let qa = c.space().image(a).clone();
        let qb = c.space().image(b).clone();
        assert_eq!(pair.apply_p(&qa), qa);
        assert!(linalg::is_zero(&pair.apply_p(&qb)));
        assert_eq!(pair.apply_q(&qb), qb);
    }

    #[test]
    fn top_and_bottom() {
        for name in ["boolean_3", "mo2", "diamond", "chain_2"] {
            let c = ctx(name, 1);
            let l = c.lattice();
            let d = c.space().x_dim();
            let top = build_projections(c.space(), l.top()).unwrap();
            assert_eq!(top.p_matrix, linalg::identity(d), "{name}");
            assert!(is_zero_matrix(&top.q_matrix));
            let bottom = build_projections(c.space(), l.bottom()).unwrap();
            assert_eq!(bottom.q_matrix, linalg::identity(d));
        }
    }

    #[test]
    fn m3_is_rejected() {
        let c = ctx("m3", 1);
        assert!(matches!(
            build_projections(c.space(), c.lattice().top()),
            Err(NormError::NotOrthomodular | NormError::Lattice(_))
        ));
    }

    #[test]
    fn boolean_3_identity_exact() {
        let c = ctx("boolean_3", 1);
        let a = c.lattice().elem("{a}").unwrap();
        let r = check_pythagoras(&c, a, 0).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.samples_checked, 26 + RANDOM_VECTORS);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn boolean_2_contractive() {
        let c = ctx("boolean_2", 1);
        let a = c.lattice().elem("{a}").unwrap();
        let pair = build_projections(c.space(), a).unwrap();
        let one = c.space().unit_vector(c.lattice().top());
        let px = c.norm_coords(&pair.apply_p(&one.coords)).unwrap();
        assert_eq!(px.value.exact(), Some(&ratio(1, 2)));
        assert!(check_contractivity(&c, a, 0).unwrap().passed());
    }

    #[test]
    fn mo2_hypothesis_reported() {
        let c = ctx("mo2", 1);
        let a = c.lattice().elem("a").unwrap();
        let r = check_pythagoras(&c, a, 0).unwrap();
        assert!(!r.hypothesis_holds);
        assert!(r.hypothesis.iter().any(|h| h.element == "a" && h.holds));
        assert!(r.hypothesis.iter().any(|h| h.element == "b" && !h.holds));
    }
}
