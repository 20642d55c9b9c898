mod common;

use num_traits::Zero;
use proptest::prelude::*;

use latticelp::lattice::{catalog, catalog_names, Lattice};
use latticelp::quotient::QuotientSpace;
use latticelp::rational::{ratio, Rational};

fn sum(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn diff(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn relations_vanish(l: &Lattice) -> bool {
    let s = QuotientSpace::build(l);
    s.image(l.bottom()).iter().all(Zero::is_zero)
        && l.elements().all(|a| {
            l.elements().all(|b| {
                sum(s.image(a), s.image(b)) == sum(s.image(l.join(a, b)), s.image(l.meet(a, b)))
            })
        })
}

fn monotone_generators(l: &Lattice) -> bool {
    let s = QuotientSpace::build(l);
    l.elements().all(|a| {
        l.elements().all(|b| {
            !l.leq(a, b)
                || s.cone_contains_coords(&diff(s.image(b), s.image(a)))
                    .unwrap()
        })
    })
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

#[test]
fn catalog_relations_and_generators() {
    for name in catalog_names() {
        let l = catalog(name).unwrap();
        assert!(relations_vanish(&l), "{name}");
        assert!(monotone_generators(&l), "{name}");
    }
}

#[test]
fn boolean_atoms_form_a_basis() {
    for n in 1..=4u32 {
        let l = catalog(&format!("boolean_{n}")).unwrap();
        let s = QuotientSpace::build(&l);
        assert_eq!(s.x_dim(), n as usize);
        let images: Vec<Vec<Rational>> = l.atoms().iter().map(|&a| s.image(a).clone()).collect();
        assert_eq!(latticelp::linalg::rank(&images, s.x_dim()), n as usize);
    }
}

#[test]
fn vector_text_round_trips() {
    let l = catalog("n5").unwrap();
    let s = QuotientSpace::build(&l);
    let x = s.parse_vector("1*A + -1/3*B").unwrap();
    let again = s.parse_vector(&s.format_terms(&x.terms)).unwrap();
    assert_eq!(x.coords, again.coords);
    assert!(s.parse_vector("1*Z").is_err());
    assert!(s.parse_vector("1/0*A").is_err());
    assert!(s.parse_vector("").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fuzzed_relations_vanish(l in common::fuzzed_lattice()) {
        prop_assert!(relations_vanish(&l));
        prop_assert!(monotone_generators(&l));
    }

    #[test]
    fn cone_closed_under_addition(
        name in prop::sample::select(catalog_names()),
        u in prop::collection::vec(coefficient(), 4),
        v in prop::collection::vec(coefficient(), 4),
    ) {
        let l = catalog(name).unwrap();
        let s = QuotientSpace::build(&l);
        let d = s.x_dim();
        let (u, v) = (&u[..d.min(4)], &v[..d.min(4)]);
        prop_assume!(u.len() == d);
        let (cu, cv) = (s.cone_contains_coords(u).unwrap(), s.cone_contains_coords(v).unwrap());
        if cu && cv {
            prop_assert!(s.cone_contains_coords(&sum(u, v)).unwrap());
        }
        if cu {
            let scaled: Vec<Rational> = u.iter().map(|x| x * ratio(5, 2)).collect();
            prop_assert!(s.cone_contains_coords(&scaled).unwrap());
        }
    }

    #[test]
    fn nonnegative_combinations_are_in_the_cone(
        name in prop::sample::select(catalog_names()),
        weights in prop::collection::vec(0i64..5, 16),
    ) {
        let l = catalog(name).unwrap();
        let s = QuotientSpace::build(&l);
        let mut v = vec![Rational::zero(); s.x_dim()];
        for (g, w) in s.cone_generators().iter().zip(&weights) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += gi * Rational::from_integer((*w).into());
            }
        }
        prop_assert!(s.cone_contains_coords(&v).unwrap());
    }

    #[test]
    fn disjointify_preserves_coords(
        name in prop::sample::select(vec!["boolean_2", "boolean_3", "mo2", "diamond"]),
        terms in prop::collection::vec((coefficient(), 0usize..64), 1..5),
    ) {
        let l = catalog(name).unwrap();
        let s = QuotientSpace::build(&l);
        let x = s.vector(terms.into_iter().map(|(c, e)| (c, e % l.len())).collect());
        let d = s.disjointify(&x).unwrap();
        prop_assert_eq!(&d.coords, &x.coords);
        for (i, (_, a)) in d.terms.iter().enumerate() {
            for (_, b) in &d.terms[i + 1..] {
                prop_assert_eq!(l.meet(*a, *b), l.bottom());
            }
        }
    }
}
