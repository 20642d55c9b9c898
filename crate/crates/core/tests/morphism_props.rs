use num_traits::Zero;

use latticelp::lattice::{Elem, Lattice};
use latticelp::lp::{
    catalog_submeasure, derive_phistar, Exponent, NormContext, Semantics, Submeasure,
};
use latticelp::morphisms::{
    check_embedding_isometry, find_algebrifications, uniqueness_probe, Algebrification, Embedding,
    MorphismError,
};
use latticelp::quotient::QuotientSpace;
use latticelp::rational::{ratio, Rational};

fn p1(l: &Lattice, phi: &Submeasure) -> NormContext {
    NormContext::new(
        &QuotientSpace::build(l),
        phi,
        Exponent::one(),
        Semantics::Disjoint,
    )
    .unwrap()
}

/// `μ(h(A)) = Σ_{i : a_i ≤ A} μ_i`.
fn image_measure(source: &Lattice, a: &Algebrification, x: Elem) -> Rational {
    a.generators
        .iter()
        .zip(&a.atom_measures)
        .filter(|(&g, _)| source.leq(g, x))
        .map(|(_, m)| m.clone())
        .sum()
}

fn revalidate(name: &str, max_atoms: usize) -> usize {
    let (l, phi) = catalog_submeasure(name).unwrap();
    let ctx = p1(&l, &phi);
    let star = derive_phistar(&ctx).unwrap();
    let found = find_algebrifications(&ctx, max_atoms, 0).unwrap();
    for a in &found {
        let t = &a.target;
        for x in l.elements() {
            for y in l.elements() {
                assert_eq!(
                    a.homomorphism[l.meet(x, y)],
                    t.meet(a.homomorphism[x], a.homomorphism[y]),
                    "{name}"
                );
                assert_eq!(
                    a.homomorphism[l.join(x, y)],
                    t.join(a.homomorphism[x], a.homomorphism[y]),
                    "{name}"
                );
            }
            // isometric on 1⊗A at p = 1
            assert_eq!(
                &image_measure(&l, a, x),
                star.value(x),
                "{name}: {}",
                l.name(x)
            );
        }
        assert_eq!(a.homomorphism[l.bottom()], t.bottom());
        assert_eq!(a.homomorphism[l.top()], t.top());
    }
    assert!(uniqueness_probe(&found, ctx.p()).passed(), "{name}");
    found.len()
}

#[test]
fn algebrifications_revalidate() {
    assert!(revalidate("boolean_2", 2) >= 1);
    assert!(revalidate("boolean_3", 3) >= 1);
    assert_eq!(revalidate("chain_3", 2), 0);
    assert_eq!(revalidate("m3", 3), 0);
    revalidate("n5", 3);
    revalidate("diamond", 2);
}

#[test]
fn chain_has_no_model() {
    // the two-atom candidate h(c1) = {1}, h(1) = {1, 2} would give
    // ‖1⊗1 − 1⊗c1‖ = 1/2, but 1⊗1 − 1⊗c1 only sits below b⊗1 with b ≥ 1
    let (l, phi) = catalog_submeasure("chain_3").unwrap();
    let ctx = p1(&l, &phi);
    let s = ctx.space();
    let x = s.parse_vector("1*1 + -1*c1").unwrap();
    assert_eq!(ctx.norm(&x).unwrap().value.exact(), Some(&ratio(1, 1)));
    assert!(find_algebrifications(&ctx, 2, 0).unwrap().is_empty());
    let any = ctx.with_p(Exponent::one(), Semantics::Any).unwrap();
    assert!(find_algebrifications(&any, 2, 0).unwrap().is_empty());
}

#[test]
fn identity_embedding_is_classical() {
    for name in ["boolean_2", "boolean_3"] {
        let (l, phi) = catalog_submeasure(name).unwrap();
        let j: Vec<Elem> = l.elements().collect();
        let e = Embedding::new(l.clone(), phi.values().to_vec(), phi.clone(), j).unwrap();
        for p in [
            Exponent::one(),
            Exponent::integer(2).unwrap(),
            Exponent::new(ratio(3, 2)).unwrap(),
        ] {
            let report = check_embedding_isometry(&e, p.clone(), 30, 1).unwrap();
            assert!(report.passed(), "{name} p={p}: {:?}", report.failures);
            assert!(report.samples_checked > 30);
            assert!(report.refinement_mismatches.is_empty());
        }
    }
}

#[test]
fn embedding_into_larger_algebra() {
    let (source, mu) = catalog_submeasure("boolean_2").unwrap();
    let (target, phi) = catalog_submeasure("boolean_4").unwrap();
    // {a} ↦ {a,b}, {b} ↦ {c,d}: both have measure 1/2
    let j: Vec<Elem> = ["0", "{a,b}", "{c,d}", "1"]
        .iter()
        .map(|n| target.elem(n).unwrap())
        .collect();
    let e = Embedding::new(source, mu.values().to_vec(), phi, j).unwrap();
    let report = check_embedding_isometry(&e, Exponent::one(), 20, 0).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    assert!(report.refinements_checked > 0);
}

#[test]
fn embedding_hypotheses_are_checked() {
    let (source, mu) = catalog_submeasure("boolean_2").unwrap();
    let (target, phi) = catalog_submeasure("boolean_3").unwrap();
    // {a} ↦ {a}, {b} ↦ {a,b}: not an order embedding of disjoint atoms, and μ mismatches
    let j: Vec<Elem> = ["0", "{a}", "{a,b}", "1"]
        .iter()
        .map(|n| target.elem(n).unwrap())
        .collect();
    let e = Embedding::new(source, mu.values().to_vec(), phi, j).unwrap();
    assert!(!e.unmet_hypotheses().is_empty());
    assert!(matches!(
        check_embedding_isometry(&e, Exponent::one(), 5, 0),
        Err(MorphismError::HypothesisUnmet(_))
    ));
}

#[test]
fn null_atoms_are_killed() {
    let (l, _) = catalog_submeasure("boolean_2").unwrap();
    let values = [("0", 0), ("{a}", 0), ("{b}", 1), ("1", 1)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), ratio(v, 1)))
        .collect();
    let phi = latticelp::lp::check_submeasure(&l, &values).unwrap();
    let found = find_algebrifications(&p1(&l, &phi), 2, 0).unwrap();
    assert!(!found.is_empty());
    for a in &found {
        assert!(a.atom_measures.iter().all(|m| !m.is_zero()));
    }
}
