use super::NormContext;
use crate::cone;
use crate::linalg::{self, Vector};
use crate::quotient::XVector;

/// Basis of `{x : ‖x‖ = 0}`.
///
/// A zero-cost witness may only use φ-null elements, so within one
/// dominating family `F` the null vectors are the lineality space of
/// `cone({q(e_B) : B ∈ F, φ(B) = 0} ∪ −C)`. The result spans the union over
/// families. None of this depends on `p`.
pub fn kernel_basis(ctx: &NormContext) -> Vec<XVector> {
    let space = ctx.space();
    let dim = space.x_dim();
    let negated: Vec<Vector> = space
        .cone_generators()
        .iter()
        .map(|g| linalg::neg(g))
        .collect();
    let mut spanning: Vec<Vector> = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for family in ctx.families() {
        let null: Vec<usize> = family
            .iter()
            .copied()
            .filter(|&b| ctx.phi().is_null(b))
            .collect();
        if seen.contains(&null) {
            continue;
        }
        let mut gens = negated.clone();
        gens.extend(null.iter().map(|&b| space.image(b).clone()));
        spanning.extend(cone::lineality_basis(&gens, dim));
        seen.push(null);
    }
    linalg::span_basis(&spanning, dim)
        .into_iter()
        .map(|v| {
            space
                .from_coords(linalg::primitive(&v))
                .expect("dimension matches")
        })
        .collect()
}
