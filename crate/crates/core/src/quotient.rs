//! The quotient space `X = c00(L)/Δ`, where `Δ` is spanned by `e_0` and the
//! modularity defects `e_A + e_B − e_{A∨B} − e_{A∧B}`, together with the
//! order cone and disjoint refinement of representations.

use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::cone;
use crate::lattice::{Elem, Lattice, LatticeError};
use crate::linalg::{self, Vector};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuotientError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("vector has {got} coordinates, space has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse vector expression at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("lattice is not orthomodular")]
    NotOrthomodular,
    #[error("disjoint refinement did not terminate after {steps} splits")]
    NonTermination { steps: usize },
}

/// A vector of `X`: a formal representation plus its coordinates.
#[derive(Debug, Clone)]
pub struct XVector {
    pub terms: Vec<(Rational, Elem)>,
    pub coords: Vector,
}

impl PartialEq for XVector {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

#[derive(Debug, Clone)]
pub struct QuotientSpace {
    lattice: Lattice,
    delta_basis: Vec<Vector>,
    basis_elements: Vec<Elem>,
    images: Vec<Vector>,
    cone_generators: Vec<Vector>,
    facets: Vec<Vector>,
}

impl QuotientSpace {
    pub fn build(lattice: &Lattice) -> Self {
        let n = lattice.len();
        let mut generators = vec![linalg::unit(n, lattice.bottom())];
        for a in lattice.elements() {
            for b in (a + 1)..n {
                if lattice.leq(a, b) || lattice.leq(b, a) {
                    continue;
                }
                let mut v = linalg::zeros(n);
                v[a] += Rational::one();
                v[b] += Rational::one();
                v[lattice.join(a, b)] -= Rational::one();
                v[lattice.meet(a, b)] -= Rational::one();
                if !linalg::is_zero(&v) {
                    generators.push(v);
                }
            }
        }
        // Pivoting from the highest index down leaves the lowest-index
        // independent classes as the basis of X.
        let order: Vec<usize> = (0..n).rev().collect();
        let ech = linalg::echelon(&generators, n, &order);
        let basis_elements: Vec<Elem> = (0..n).filter(|c| !ech.is_pivot(*c)).collect();
        let dim = basis_elements.len();
        let slot = |e: Elem| basis_elements.iter().position(|&b| b == e);

        let mut images = vec![linalg::zeros(dim); n];
        for e in 0..n {
            if let Some(i) = slot(e) {
                images[e][i] = Rational::one();
            }
        }
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            for (k, &b) in basis_elements.iter().enumerate() {
                images[p][k] = -row[b].clone();
            }
        }

        let mut cone_generators = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |v: Vector| {
            if !linalg::is_zero(&v) && seen.insert(v.clone()) {
                cone_generators.push(v);
            }
        };
        for a in lattice.elements() {
            push(images[a].clone());
        }
        for a in lattice.elements() {
            for b in lattice.elements() {
                if a != b && lattice.leq(a, b) {
                    push(linalg::sub(&images[b], &images[a]));
                }
            }
        }
        let facets = cone::facets(&cone_generators, dim);
        QuotientSpace {
            lattice: lattice.clone(),
            delta_basis: ech.rows,
            basis_elements,
            images,
            cone_generators,
            facets,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice.len()
    }

    pub fn x_dim(&self) -> usize {
        self.basis_elements.len()
    }

    /// Row-reduced basis of `Δ` in ambient coordinates.
    pub fn delta_basis(&self) -> &[Vector] {
        &self.delta_basis
    }

    /// Elements `N` whose classes `q(e_N)` form the coordinate basis of `X`.
    pub fn basis_elements(&self) -> &[Elem] {
        &self.basis_elements
    }

    /// Coordinates of `q(e_A)`.
    pub fn image(&self, a: Elem) -> &Vector {
        &self.images[a]
    }

    pub fn cone_generators(&self) -> &[Vector] {
        &self.cone_generators
    }

    /// Normals `h` with `C = {y : h·y ≥ 0}`.
    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    /// Coordinates of an ambient vector of `c00(L)`.
    pub fn coord_map(&self, ambient: &[Rational]) -> Vector {
        let mut out = linalg::zeros(self.x_dim());
        for (e, a) in ambient.iter().enumerate() {
            linalg::axpy(&mut out, a, &self.images[e]);
        }
        out
    }

    pub fn vector(&self, terms: Vec<(Rational, Elem)>) -> XVector {
        let mut coords = linalg::zeros(self.x_dim());
        for (a, e) in &terms {
            linalg::axpy(&mut coords, a, &self.images[*e]);
        }
        XVector { terms, coords }
    }

    pub fn zero(&self) -> XVector {
        self.vector(Vec::new())
    }

    pub fn unit_vector(&self, a: Elem) -> XVector {
        self.vector(vec![(Rational::one(), a)])
    }

    /// The vector with the given coordinates, represented on the basis elements.
    pub fn from_coords(&self, coords: Vector) -> Result<XVector, QuotientError> {
        self.check_dim(&coords)?;
        let terms = coords
            .iter()
            .zip(&self.basis_elements)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, &e)| (c.clone(), e))
            .collect();
        Ok(XVector { terms, coords })
    }

    pub fn check_dim(&self, coords: &[Rational]) -> Result<(), QuotientError> {
        if coords.len() != self.x_dim() {
            return Err(QuotientError::DimensionMismatch {
                expected: self.x_dim(),
                got: coords.len(),
            });
        }
        Ok(())
    }

    /// Parses `rational "*" element ("+" rational "*" element)*`.
    pub fn parse_vector(&self, text: &str) -> Result<XVector, QuotientError> {
        let mut terms = Vec::new();
        let mut start = 0;
        for piece in text.split('+') {
            let offset = start + piece.len() - piece.trim_start().len();
            start += piece.len() + 1;
            let body = piece.trim();
            if body.is_empty() {
                return Err(QuotientError::Parse {
                    position: offset,
                    message: "empty term".into(),
                });
            }
            let (coef, name) = body.split_once('*').ok_or_else(|| QuotientError::Parse {
                position: offset,
                message: format!("term {body:?} is not of the form rational*element"),
            })?;
            let coef: String = coef.chars().filter(|c| !c.is_whitespace()).collect();
            if coef.contains('.') {
                return Err(QuotientError::Parse {
                    position: offset,
                    message: format!("coefficient {coef:?} must be an integer or fraction"),
                });
            }
            let coef = parse_rational(&coef).map_err(|e| QuotientError::Parse {
                position: offset,
                message: e.to_string(),
            })?;
            let e = self.lattice.elem(name.trim())?;
            terms.push((coef, e));
        }
        Ok(self.vector(terms))
    }

    /// Renders a representation as `a*A + b*B`.
    pub fn format_terms(&self, terms: &[(Rational, Elem)]) -> String {
        if terms.is_empty() {
            return format!("0*{}", self.lattice.name(self.lattice.bottom()));
        }
        terms
            .iter()
            .map(|(a, e)| format!("{}*{}", a, self.lattice.name(*e)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Whether `v ∈ C`, decided by exact phase-one simplex on the generators.
    pub fn cone_contains(&self, v: &XVector) -> Result<bool, QuotientError> {
        self.cone_contains_coords(&v.coords)
    }

    pub fn cone_contains_coords(&self, coords: &[Rational]) -> Result<bool, QuotientError> {
        self.check_dim(coords)?;
        Ok(cone::contains(&self.cone_generators, coords))
    }

    /// `x ⊑ y` in the cone preorder.
    pub fn precedes(&self, x: &XVector, y: &XVector) -> Result<bool, QuotientError> {
        self.cone_contains_coords(&linalg::sub(&y.coords, &x.coords))
    }

    /// Rewrites `x` over pairwise meet-zero elements by repeatedly splitting
    /// the first overlapping pair `(A, B)` into `A ∧ (A∧B)⊥`, `A ∧ B` and
    /// `B ∧ (A∧B)⊥`. Coordinates are unchanged.
    pub fn disjointify(&self, x: &XVector) -> Result<XVector, QuotientError> {
        let l = &self.lattice;
        if !l.is_orthomodular() {
            return Err(QuotientError::NotOrthomodular);
        }
        let bottom = l.bottom();
        let mut terms: Vec<(Rational, Elem)> = Vec::new();
        for (a, e) in &x.terms {
            accumulate(&mut terms, a.clone(), *e, bottom);
        }
        let guard = l.len() * l.len() * terms.len().max(1);
        let mut steps = 0;
        loop {
            let overlap = (0..terms.len()).find_map(|i| {
                ((i + 1)..terms.len())
                    .find(|&j| l.meet(terms[i].1, terms[j].1) != bottom)
                    .map(|j| (i, j))
            });
            let Some((i, j)) = overlap else {
                break;
            };
            steps += 1;
            if steps > guard {
                return Err(QuotientError::NonTermination { steps });
            }
            let (b, eb) = terms.remove(j);
            let (a, ea) = terms.remove(i);
            let common = l.meet(ea, eb);
            let cp = l.try_ortho(common)?;
            let pieces = [
                (a.clone(), l.meet(ea, cp)),
                (&a + &b, common),
                (b, l.meet(eb, cp)),
            ];
            // Reinserting at the front keeps the scan order deterministic.
            let mut head = Vec::new();
            for (c, e) in pieces {
                accumulate(&mut head, c, e, bottom);
            }
            for t in terms.drain(..) {
                accumulate(&mut head, t.0, t.1, bottom);
            }
            terms = head;
        }
        let out = XVector {
            terms,
            coords: x.coords.clone(),
        };
        debug_assert_eq!(self.vector(out.terms.clone()).coords, x.coords);
        Ok(out)
    }
}

fn accumulate(terms: &mut Vec<(Rational, Elem)>, coef: Rational, e: Elem, bottom: Elem) {
    if e == bottom || coef.is_zero() {
        return;
    }
    if let Some(pos) = terms.iter().position(|t| t.1 == e) {
        terms[pos].0 += coef;
        if terms[pos].0.is_zero() {
            terms.remove(pos);
        }
    } else {
        terms.push((coef, e));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use crate::rational::{from_i64, ratio};

    #[test]
    fn diamond_is_two_dimensional() {
        let l = catalog("diamond").unwrap();
        let q = QuotientSpace::build(&l);
        assert_eq!(q.x_dim(), 2);
        let (a, b, t) = (l.elem("A").unwrap(), l.elem("B").unwrap(), l.top());
        assert_eq!(q.image(t), &linalg::add(q.image(a), q.image(b)));
        assert!(linalg::is_zero(q.image(l.bottom())));
    }

    #[test]
    fn m3_collapses() {
        let l = catalog("m3").unwrap();
        let q = QuotientSpace::build(&l);
        assert_eq!(q.x_dim(), 1);
        let [a, b, c] = ["A", "B", "C"].map(|n| l.elem(n).unwrap());
        assert_eq!(q.image(a), q.image(b));
        assert_eq!(q.image(b), q.image(c));
        assert_eq!(q.image(l.top()), &linalg::scale(q.image(a), &from_i64(2)));
        assert_eq!(q.basis_elements(), &[a]);
    }

    #[test]
    fn n5_identifies_b_and_c() {
        let l = catalog("n5").unwrap();
        let q = QuotientSpace::build(&l);
        assert_eq!(q.x_dim(), 2);
        assert_eq!(q.image(l.elem("B").unwrap()), q.image(l.elem("C").unwrap()));
    }

    #[test]
    fn delta_relations_vanish() {
        for name in crate::lattice::catalog_names() {
            let l = catalog(name).unwrap();
            let q = QuotientSpace::build(&l);
            assert_eq!(q.x_dim() + q.delta_basis().len(), q.ambient_dim());
            for a in l.elements() {
                for b in l.elements() {
                    let mut v = linalg::zeros(l.len());
                    v[a] += from_i64(1);
                    v[b] += from_i64(1);
                    v[l.join(a, b)] -= from_i64(1);
                    v[l.meet(a, b)] -= from_i64(1);
                    assert!(linalg::is_zero(&q.coord_map(&v)), "{name}");
                }
            }
        }
    }

    #[test]
    fn cone_examples() {
        let l = catalog("diamond").unwrap();
        let q = QuotientSpace::build(&l);
        let a = l.elem("A").unwrap();
        assert!(q.cone_contains(&q.unit_vector(a)).unwrap());
        let v = q.vector(vec![(from_i64(1), l.top()), (from_i64(-1), a)]);
        assert!(q.cone_contains(&v).unwrap());
        let b2 = catalog("boolean_2").unwrap();
        let q2 = QuotientSpace::build(&b2);
        let neg_top = q2.vector(vec![(from_i64(-1), b2.top())]);
        assert!(!q2.cone_contains(&neg_top).unwrap());
        assert!(matches!(
            q2.cone_contains_coords(&[from_i64(1)]),
            Err(QuotientError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn parse_vector_grammar() {
        let l = catalog("diamond").unwrap();
        let q = QuotientSpace::build(&l);
        let x = q.parse_vector("1*A + -1/3*B").unwrap();
        assert_eq!(x.terms.len(), 2);
        assert_eq!(x.terms[1].0, ratio(-1, 3));
        assert!(matches!(
            q.parse_vector("1*Z"),
            Err(QuotientError::Lattice(_))
        ));
        assert!(matches!(
            q.parse_vector("A"),
            Err(QuotientError::Parse { .. })
        ));
        assert!(matches!(
            q.parse_vector("1*A +"),
            Err(QuotientError::Parse { .. })
        ));
        assert!(matches!(
            q.parse_vector("0.5*A"),
            Err(QuotientError::Parse { .. })
        ));
        assert!(q.parse_vector("").is_err());
    }

    #[test]
    fn disjointify_examples() {
        let b2 = catalog("boolean_2").unwrap();
        let q = QuotientSpace::build(&b2);
        let a = b2.elem("{a}").unwrap();
        let b = b2.elem("{b}").unwrap();
        let x = q.vector(vec![(from_i64(1), a), (from_i64(1), b2.top())]);
        let d = q.disjointify(&x).unwrap();
        let mut terms = d.terms.clone();
        terms.sort_by_key(|t| t.1);
        assert_eq!(terms, vec![(from_i64(2), a), (from_i64(1), b)]);
        assert_eq!(q.vector(d.terms.clone()).coords, x.coords);

        let single = q.unit_vector(a);
        assert_eq!(q.disjointify(&single).unwrap().terms, single.terms);

        let mo2 = catalog("mo2").unwrap();
        let qm = QuotientSpace::build(&mo2);
        let (ma, map) = (mo2.elem("a").unwrap(), mo2.elem("a'").unwrap());
        let x = qm.vector(vec![(from_i64(1), ma), (from_i64(1), map)]);
        let d = qm.disjointify(&x).unwrap();
        assert_eq!(d.terms, x.terms);
        assert_eq!(&d.coords, qm.image(mo2.top()));

        let m3 = catalog("m3").unwrap();
        let q3 = QuotientSpace::build(&m3);
        assert_eq!(
            q3.disjointify(&q3.zero()),
            Err(QuotientError::NotOrthomodular)
        );
    }
}
