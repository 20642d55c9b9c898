use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use latticelp::density::{
    diagonal_join, diagonal_join_with_cutoffs, generate_algebra, parse_set, DensityError,
    DensitySet, UPSet,
};
use latticelp::rational::{ratio, Rational};

const HORIZONS: [u64; 3] = [1_000, 10_000, 100_000];

/// Ultimately periodic sets with modulus up to 12 and a few exceptions.
fn upset() -> impl Strategy<Value = UPSet> {
    (
        1u64..=12,
        prop::collection::vec(any::<bool>(), 12),
        prop::collection::btree_set(1u64..60, 0..4),
    )
        .prop_map(|(m, picks, flips)| {
            let residues: Vec<u64> = (0..m).filter(|&r| picks[r as usize]).collect();
            let base = UPSet::progression(m, &residues).unwrap();
            base.symmetric_difference(&UPSet::finite(flips)).unwrap()
        })
}

fn brute_count(s: &UPSet, n: u64) -> u64 {
    (1..=n).filter(|&k| s.contains(k)).count() as u64
}

/// Density from one full period far beyond every exception.
fn period_density(s: &UPSet) -> Rational {
    let m = s.modulus();
    let start = 1_000 * m;
    Rational::new(
        ((start + 1)..=(start + m))
            .filter(|&n| s.contains(n))
            .count()
            .into(),
        m.into(),
    )
}

#[test]
fn parser_examples() {
    let d = |t: &str| parse_set(t).unwrap().density();
    assert_eq!(d("AP(2,0)&AP(3,0)"), ratio(1, 6));
    assert_eq!(d("AP(4,{1,3})"), ratio(1, 2));
    assert_eq!(d("~AP(5,0)"), ratio(4, 5));
    assert_eq!(d("AP(2,0) | AP(3,0)"), ratio(2, 3));
    assert_eq!(d("AP(6,0) \\ {6,12}"), ratio(1, 6));
    assert_eq!(d("N \\ (PRIMES | SQUARES)"), Rational::one());
    assert_eq!(d("EMPTY | {1,2,3}"), Rational::zero());
    assert_eq!(d("POW2 | FACTORIALS"), Rational::zero());
    assert!(matches!(
        parse_set("AP(2,0"),
        Err(DensityError::Parse { .. })
    ));
    assert!(matches!(
        parse_set("FOO"),
        Err(DensityError::Parse { position: 0, .. })
    ));
    assert!(parse_set("AP(0,1)").is_err());
}

#[test]
fn null_sets_follow_their_certificates() {
    for name in ["PRIMES", "SQUARES", "POW2", "FACTORIALS"] {
        let s = parse_set(name).unwrap();
        assert!(s.density().is_zero(), "{name}");
        for n in HORIZONS {
            let c = s.count(n);
            assert!(c <= s.count_error_bound(n), "{name} at {n}: {c}");
        }
    }
    assert_eq!(parse_set("PRIMES").unwrap().count(100), 25);
    assert_eq!(parse_set("SQUARES").unwrap().count(100), 10);
}

#[test]
fn diagonal_join_rejects_bad_input() {
    let chain = vec![parse_set("AP(2,0)").unwrap(), parse_set("AP(3,0)").unwrap()];
    assert!(matches!(
        diagonal_join(chain, &[ratio(1, 2)]),
        Err(DensityError::NotIncreasing(1))
    ));
    let inc = vec![
        parse_set("AP(4,0)").unwrap(),
        parse_set("AP(2,0)").unwrap(),
        parse_set("N").unwrap(),
    ];
    assert!(matches!(
        diagonal_join(inc.clone(), &[ratio(1, 2), ratio(1, 1)]),
        Err(DensityError::ScheduleInvalid(_))
    ));
    assert!(matches!(
        diagonal_join(inc.clone(), &[ratio(0, 1), ratio(0, 1)]),
        Err(DensityError::ScheduleInvalid(_))
    ));
    assert!(diagonal_join_with_cutoffs(inc, vec![5, 3]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_the_period_ratio(a in upset()) {
        prop_assert_eq!(a.density(), period_density(&a));
        prop_assert_eq!(a.complement().density(), Rational::one() - a.density());
    }

    #[test]
    fn counts_match_brute_force_and_bound(a in upset()) {
        for n in [1u64, 7, 59, 60, 61, 997] {
            prop_assert_eq!(a.count(n), brute_count(&a, n));
        }
        for n in HORIZONS {
            let exact = Rational::from_integer(a.count(n).into());
            let dev = (exact - a.density() * Rational::from_integer(n.into())).abs();
            prop_assert!(dev <= Rational::from_integer(a.convergence_constant().into()));
        }
    }

    #[test]
    fn inclusion_exclusion(a in upset(), b in upset()) {
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert_eq!(u.density() + i.density(), a.density() + b.density());
        if i.is_null() {
            prop_assert_eq!(u.density(), a.density() + b.density());
        }
        for n in [1u64, 50, 120, 121] {
            prop_assert_eq!(u.contains(n), a.contains(n) || b.contains(n));
            prop_assert_eq!(i.contains(n), a.contains(n) && b.contains(n));
        }
    }

    #[test]
    fn equivalence_is_a_congruence(
        a in upset(),
        b in upset(),
        fa in prop::collection::btree_set(1u64..200, 0..5),
        fb in prop::collection::btree_set(1u64..200, 0..5),
    ) {
        let a2 = a.symmetric_difference(&UPSet::finite(fa)).unwrap();
        let b2 = b.symmetric_difference(&UPSet::finite(fb)).unwrap();
        prop_assert!(a.equiv_mod_null(&a2) && b.equiv_mod_null(&b2));
        prop_assert!(a.union(&b).unwrap().equiv_mod_null(&a2.union(&b2).unwrap()));
        prop_assert!(a.intersection(&b).unwrap().equiv_mod_null(&a2.intersection(&b2).unwrap()));
        prop_assert!(a.difference(&b).unwrap().equiv_mod_null(&a2.difference(&b2).unwrap()));
    }

    #[test]
    fn printed_form_parses_back(a in upset()) {
        let back = parse_set(&a.to_string()).unwrap();
        prop_assert_eq!(back.core(), &a);
    }

    #[test]
    fn generated_algebras_are_additive(a in upset(), b in upset()) {
        let fam = [DensitySet::from(a), DensitySet::from(b)];
        let alg = generate_algebra(&fam).unwrap();
        prop_assert_eq!(alg.atom_densities().into_iter().sum::<Rational>(), Rational::one());
        let report = alg.additivity_report().unwrap();
        prop_assert!(report.passed(), "{:?}", report.failures);
        for f in &fam {
            prop_assert!(alg.locate(f).unwrap().is_some());
        }
    }

    #[test]
    fn diagonal_join_dominates_the_chain(
        m in prop::sample::select(vec![2u64, 3, 4, 6, 12]),
        order in Just((0u64..12).collect::<Vec<_>>()).prop_shuffle(),
        depth in 2usize..5,
    ) {
        // x_j: the first j + 1 residues of a random ordering, mod m
        let residues: Vec<u64> = order.into_iter().filter(|&r| r < m).collect();
        let depth = depth.min(residues.len());
        prop_assume!(depth >= 2);
        let chain: Vec<DensitySet> = (1..=depth)
            .map(|j| DensitySet::from(UPSet::progression(m, &residues[..j]).unwrap()))
            .collect();
        let schedule: Vec<Rational> = (1..depth).map(|j| ratio(1, 1 << j)).collect();
        let join = diagonal_join(chain.clone(), &schedule).unwrap();
        let report = join.report(&[10_000], 40).unwrap();
        prop_assert!(report.passed());
        let last = *join.cutoffs().last().unwrap();
        for x in &chain {
            for n in last + 1..=last + m {
                prop_assert!(!x.contains(n) || join.contains(n));
            }
        }
        prop_assert_eq!(join.exact().unwrap().unwrap().density(), chain.last().unwrap().density());
    }
}
