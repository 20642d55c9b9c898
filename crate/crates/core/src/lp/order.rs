use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::{NormContext, NormError, P_GT1_TOLERANCE};
use crate::cone;
use crate::linalg::{self, Vector};
use crate::rational::{format_rational, ratio, Rational};
use crate::sample::{rng, RANDOM_VECTORS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFailure {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderedSpaceReport {
    pub pairs_checked: usize,
    pub monotonicity_failures: Vec<OrderFailure>,
    /// Basis of `C ∩ −C` in X coordinates.
    pub lineality_basis: Vec<Vec<String>>,
    /// Lineality vectors with nonzero norm.
    pub lineality_failures: Vec<Vec<String>>,
}

impl OrderedSpaceReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_failures.is_empty() && self.lineality_failures.is_empty()
    }
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn random_cone_point(gens: &[Vector], dim: usize, r: &mut impl Rng) -> Vector {
    let mut out = linalg::zeros(dim);
    for g in gens {
        if r.gen_bool(0.5) {
            linalg::axpy(&mut out, &ratio(r.gen_range(0..=4), r.gen_range(1..=3)), g);
        }
    }
    out
}

/// Monotonicity `0 ⊑ x ⊑ y ⇒ ‖x‖ ≤ ‖y‖` on the pairs `(q(e_A), q(e_B))`
/// with `A ≤ B` plus seeded random pairs, and `‖z‖ = 0` on the lineality
/// space of the cone.
pub fn ordered_space_check(ctx: &NormContext, seed: u64) -> Result<OrderedSpaceReport, NormError> {
    let space = ctx.space();
    let l = ctx.lattice();
    let dim = space.x_dim();
    let mut pairs: Vec<(Vector, Vector)> = Vec::new();
    for a in l.elements() {
        for b in l.elements() {
            if l.leq(a, b) {
                pairs.push((space.image(a).clone(), space.image(b).clone()));
            }
        }
    }
    let gens = space.cone_generators();
    let mut r = rng(seed);
    for _ in 0..RANDOM_VECTORS {
        let x = random_cone_point(gens, dim, &mut r);
        let y = linalg::add(&x, &random_cone_point(gens, dim, &mut r));
        pairs.push((x, y));
    }

    let mut report = OrderedSpaceReport {
        pairs_checked: 0,
        monotonicity_failures: Vec::new(),
        lineality_basis: Vec::new(),
        lineality_failures: Vec::new(),
    };
    for (x, y) in pairs {
        let nx = ctx.norm_coords(&x)?;
        let ny = ctx.norm_coords(&y)?;
        let ok = match (nx.value.exact(), ny.value.exact()) {
            (Some(a), Some(b)) => a <= b,
            _ => nx.value.lower() <= ny.value.upper() * (1.0 + P_GT1_TOLERANCE),
        };
        report.pairs_checked += 1;
        if !ok {
            report.monotonicity_failures.push(OrderFailure {
                detail: format!("‖x‖ = {} > ‖y‖ = {}", nx.value.to_f64(), ny.value.to_f64()),
                x: strings(&x),
                y: strings(&y),
            });
        }
    }
    for z in cone::lineality_basis(gens, dim) {
        let nz = ctx.norm_coords(&z)?;
        let zero = match nz.value.exact() {
            Some(q) => q.is_zero(),
            None => nz.value.lower() == 0.0 && nz.value.upper() <= 1e-12,
        };
        if !zero {
            report.lineality_failures.push(strings(&z));
        }
        report.lineality_basis.push(strings(&z));
    }
    Ok(report)
}
