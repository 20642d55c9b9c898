//! The worked examples: the four-element Boolean lattice, M3 and N5 with
//! their reference submeasures, plus the classical Boolean formula.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{catalog_submeasure, Exponent, NormContext, NormError, Semantics, P_GT1_TOLERANCE};
use crate::lattice::Elem;
use crate::linalg;
use crate::quotient::QuotientSpace;
use crate::rational::{format_rational, ratio, to_f64, Rational};
use crate::sample::{self, deterministic_sample, random_rational, RANDOM_VECTORS};

/// Seeded coefficient pairs per two-dimensional example.
pub const EXAMPLE_PAIRS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleCheck {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ExampleCheck {
    fn new(name: &str) -> Self {
        ExampleCheck {
            name: name.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn contexts(name: &str) -> Result<(QuotientSpace, NormContext, NormContext), NormError> {
    let (l, phi) = catalog_submeasure(name)?;
    let space = QuotientSpace::build(&l);
    let c1 = NormContext::new(&space, &phi, Exponent::one(), Semantics::Disjoint)?;
    let c2 = c1.with_p(Exponent::integer(2)?, Semantics::Disjoint)?;
    Ok((space, c1, c2))
}

fn relative_close(got: f64, want: f64) -> bool {
    (got - want).abs() <= P_GT1_TOLERANCE * want.abs().max(1e-12)
}

fn seeded_pairs(seed: u64) -> Vec<(Rational, Rational)> {
    let mut r = sample::rng(seed);
    (0..EXAMPLE_PAIRS)
        .map(|_| (random_rational(&mut r), random_rational(&mut r)))
        .collect()
}

/// `‖a⊗A + b⊗B‖` against `(|a|^p wa + |b|^p wb)^{1/p}` at `p = 1` (exact) and `p = 2`.
fn two_atom_norms(
    out: &mut ExampleCheck,
    space: &QuotientSpace,
    c1: &NormContext,
    c2: &NormContext,
    (a_el, wa): (Elem, Rational),
    (b_el, wb): (Elem, Rational),
    avoid: Option<Elem>,
    seed: u64,
) -> Result<(), NormError> {
    for (a, b) in seeded_pairs(seed) {
        let x = space.vector(vec![(a.clone(), a_el), (b.clone(), b_el)]);
        let want1 = a.abs() * &wa + b.abs() * &wb;
        let r1 = c1.norm(&x)?;
        let label = format!("a = {}, b = {}", format_rational(&a), format_rational(&b));
        out.check(r1.value.exact() == Some(&want1), || {
            format!(
                "p=1 {label}: got {:?}, want {}",
                r1.value,
                format_rational(&want1)
            )
        });
        if let Some(c) = avoid {
            let uses = r1
                .witness
                .iter()
                .any(|t| t.element == c && !t.coef.is_zero());
            out.check(!uses, || {
                format!("p=1 {label}: witness uses {}", space.lattice().name(c))
            });
        }
        let want2 = (to_f64(&(&a * &a * &wa + &b * &b * &wb))).sqrt();
        let r2 = c2.norm(&x)?;
        out.check(relative_close(r2.value.to_f64(), want2), || {
            format!("p=2 {label}: got {}, want {want2}", r2.value.to_f64())
        });
    }
    Ok(())
}

fn example_1(seed: u64) -> Result<ExampleCheck, NormError> {
    let mut out = ExampleCheck::new("example 1: {0, A, B, 1} with φ(A) = φ(B) = 1/2");
    let (space, c1, c2) = contexts("diamond")?;
    let l = space.lattice();
    let (a, b) = (l.elem("A")?, l.elem("B")?);
    out.check(space.x_dim() == 2, || format!("x_dim = {}", space.x_dim()));
    let sum = linalg::add(space.image(a), space.image(b));
    out.check(space.image(l.top()) == &sum, || {
        "q(e_1) ≠ q(e_A) + q(e_B)".into()
    });
    two_atom_norms(
        &mut out,
        &space,
        &c1,
        &c2,
        (a, ratio(1, 2)),
        (b, ratio(1, 2)),
        None,
        seed,
    )?;
    Ok(out)
}

fn example_2() -> Result<ExampleCheck, NormError> {
    let mut out = ExampleCheck::new("example 2: M3 with φ = 1/2 on atoms");
    let (l, _) = catalog_submeasure("m3")?;
    let space = QuotientSpace::build(&l);
    out.check(space.x_dim() == 1, || format!("x_dim = {}", space.x_dim()));
    let qa = space.image(l.elem("A")?);
    for name in ["B", "C"] {
        out.check(space.image(l.elem(name)?) == qa, || {
            format!("q(e_{name}) ≠ q(e_A)")
        });
    }
    let twice = linalg::scale(qa, &ratio(2, 1));
    out.check(space.image(l.top()) == &twice, || {
        "q(e_1) ≠ 2 q(e_A)".into()
    });
    Ok(out)
}

fn example_3(seed: u64) -> Result<ExampleCheck, NormError> {
    let mut out = ExampleCheck::new("example 3: N5 with φ(A) = 1/2, φ(B) = 1/4, φ(C) = 1/2");
    let (space, c1, c2) = contexts("n5")?;
    let l = space.lattice();
    let (a, b, c) = (l.elem("A")?, l.elem("B")?, l.elem("C")?);
    out.check(space.x_dim() == 2, || format!("x_dim = {}", space.x_dim()));
    out.check(space.image(b) == space.image(c), || {
        "q(e_B) ≠ q(e_C)".into()
    });
    two_atom_norms(
        &mut out,
        &space,
        &c1,
        &c2,
        (a, ratio(1, 2)),
        (b, ratio(1, 4)),
        Some(c),
        seed,
    )?;
    Ok(out)
}

/// On `boolean_n` with the uniform measure, `‖Σ a_i ⊗ {i}‖^p = Σ |a_i|^p / n`.
fn boolean_case(seed: u64) -> Result<ExampleCheck, NormError> {
    let mut out = ExampleCheck::new("Boolean: boolean_2 and boolean_3, uniform φ");
    for n in [2usize, 3] {
        let (space, c1, c2) = contexts(&format!("boolean_{n}"))?;
        let atoms = space.lattice().atoms();
        let w = ratio(1, n as i64);
        for coeffs in deterministic_sample(n, RANDOM_VECTORS, seed) {
            let terms: Vec<(Rational, Elem)> =
                coeffs.iter().cloned().zip(atoms.iter().copied()).collect();
            let x = space.vector(terms);
            let want1: Rational = coeffs.iter().map(|a| a.abs() * &w).sum();
            let r1 = c1.norm(&x)?;
            let label = || {
                coeffs
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            out.check(r1.value.exact() == Some(&want1), || {
                format!("boolean_{n} p=1 [{}]", label())
            });
            let want2 = to_f64(&coeffs.iter().map(|a| a * a * &w).sum::<Rational>()).sqrt();
            let r2 = c2.norm(&x)?;
            out.check(relative_close(r2.value.to_f64(), want2), || {
                format!(
                    "boolean_{n} p=2 [{}]: got {}, want {want2}",
                    label(),
                    r2.value.to_f64()
                )
            });
        }
    }
    Ok(out)
}

/// All four example checks.
pub fn verify_examples(seed: u64) -> Result<Vec<ExampleCheck>, NormError> {
    Ok(vec![
        example_1(seed)?,
        example_2()?,
        example_3(seed)?,
        boolean_case(seed)?,
    ])
}
