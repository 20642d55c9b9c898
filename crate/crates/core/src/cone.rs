//! Finitely generated convex cones: facet description by double
//! description, lineality spaces and exact membership.

use num_traits::{Signed, Zero};

use crate::linalg::{self, Vector};
use crate::rational::Rational;
use crate::simplex;

/// Inequality description `{y : h·y ≥ 0 for every h}` of `cone(generators)`
/// in `R^dim`.
///
/// The normals are the generators of the dual cone `{h : h·g ≥ 0}`, found
/// with the double-description method (lineality directions are emitted
/// in both orientations). Every normal is a primitive integer vector.
pub fn facets(generators: &[Vector], dim: usize) -> Vec<Vector> {
    let mut lineality: Vec<Vector> = (0..dim).map(|i| linalg::unit(dim, i)).collect();
    // Each ray carries the indices of processed constraints it is tight on.
    let mut rays: Vec<(Vector, Vec<usize>)> = Vec::new();

    for (k, a) in generators.iter().enumerate() {
        if linalg::is_zero(a) {
            for r in rays.iter_mut() {
                r.1.push(k);
            }
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !linalg::dot(a, l).is_zero()) {
            let mut l0 = lineality.remove(pos);
            if linalg::dot(a, &l0).is_negative() {
                l0 = linalg::neg(&l0);
            }
            let al0 = linalg::dot(a, &l0);
            for l in lineality.iter_mut() {
                let f = linalg::dot(a, l) / &al0;
                linalg::axpy(l, &-f, &l0);
            }
            let previous: Vec<usize> = (0..k).collect();
            for (r, tight) in rays.iter_mut() {
                let f = linalg::dot(a, r) / &al0;
                linalg::axpy(r, &-f, &l0);
                *r = linalg::primitive(r);
                tight.push(k);
            }
            rays.push((linalg::primitive(&l0), previous));
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|(r, _)| linalg::dot(a, r)).collect();
        let mut next: Vec<(Vector, Vec<usize>)> = Vec::new();
        for (i, (r, tight)) in rays.iter().enumerate() {
            if values[i].is_positive() {
                next.push((r.clone(), tight.clone()));
            } else if values[i].is_zero() {
                let mut t = tight.clone();
                t.push(k);
                next.push((r.clone(), t));
            }
        }
        for (i, (p, zp)) in rays.iter().enumerate() {
            if !values[i].is_positive() {
                continue;
            }
            for (j, (n, zn)) in rays.iter().enumerate() {
                if !values[j].is_negative() {
                    continue;
                }
                let common: Vec<usize> = zp.iter().filter(|c| zn.contains(c)).copied().collect();
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(o, (_, zo))| o == i || o == j || !common.iter().all(|c| zo.contains(c)));
                if !adjacent {
                    continue;
                }
                let mut combo = linalg::scale(n, &values[i]);
                linalg::axpy(&mut combo, &-values[j].clone(), p);
                if linalg::is_zero(&combo) {
                    continue;
                }
                let mut t = common;
                t.push(k);
                next.push((linalg::primitive(&combo), t));
            }
        }
        next.sort_by(|x, y| x.0.cmp(&y.0));
        next.dedup_by(|x, y| x.0 == y.0);
        rays = next;
    }

    let mut out: Vec<Vector> = rays.into_iter().map(|(r, _)| r).collect();
    for l in lineality {
        let l = linalg::primitive(&l);
        out.push(linalg::neg(&l));
        out.push(l);
    }
    out
}

/// Exact membership via the facet description.
pub fn satisfies(facets: &[Vector], v: &[Rational]) -> bool {
    facets.iter().all(|h| !linalg::dot(h, v).is_negative())
}

/// Exact membership via phase-one simplex on the generators.
pub fn contains(generators: &[Vector], v: &[Rational]) -> bool {
    simplex::in_cone(generators, v).is_some()
}

/// Basis of the lineality space `K ∩ −K` of `K = cone(generators)`.
///
/// Uses the identity `K ∩ −K = span{g : −g ∈ K}` over the generators.
pub fn lineality_basis(generators: &[Vector], dim: usize) -> Vec<Vector> {
    let two_sided: Vec<Vector> = generators
        .iter()
        .filter(|g| !linalg::is_zero(g) && contains(generators, &linalg::neg(g)))
        .cloned()
        .collect();
    linalg::span_basis(&two_sided, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| from_i64(x)).collect()
    }

    #[test]
    fn orthant_facets() {
        let f = facets(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])], 2);
        assert_eq!(f.len(), 2);
        assert!(f.contains(&v(&[1, 0])) && f.contains(&v(&[0, 1])));
    }

    #[test]
    fn half_plane_has_lineality_normals() {
        let gens = vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])];
        let f = facets(&gens, 2);
        assert!(satisfies(&f, &v(&[-5, 1])));
        assert!(!satisfies(&f, &v(&[0, -1])));
        let lin = lineality_basis(&gens, 2);
        assert_eq!(lin.len(), 1);
        assert!(linalg::same_span(&lin, &[v(&[1, 0])], 2));
    }

    #[test]
    fn whole_space() {
        let gens = vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])];
        let f = facets(&gens, 2);
        assert!(f.iter().all(|h| linalg::is_zero(h)) || f.is_empty());
        assert_eq!(lineality_basis(&gens, 2).len(), 2);
    }

    #[test]
    fn facets_agree_with_simplex_on_a_3d_cone() {
        let gens = vec![
            v(&[1, 0, 0]),
            v(&[0, 1, 0]),
            v(&[1, 1, 1]),
            v(&[1, 0, 2]),
            v(&[0, 0, 0]),
        ];
        let f = facets(&gens, 3);
        for x in -2..=2 {
            for y in -2..=2 {
                for z in -2..=2 {
                    let p = v(&[x, y, z]);
                    assert_eq!(satisfies(&f, &p), contains(&gens, &p), "{p:?}");
                }
            }
        }
    }
}
