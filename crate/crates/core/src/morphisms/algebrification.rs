use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::MorphismError;
use crate::lattice::{boolean, subset_name, Elem, Lattice};
use crate::linalg::{self, Matrix, Vector};
use crate::lp::{
    derive_phistar, kernel_basis, NormContext, NormValue, Semantics, Submeasure, P_GT1_TOLERANCE,
};
use crate::quotient::QuotientSpace;
use crate::rational::{format_rational, to_f64, Rational};
use crate::sample::{deterministic_sample, RANDOM_VECTORS};

/// Largest Boolean algebra searched (`2^6` elements).
pub const MAX_SEARCH_ATOMS: usize = 6;

/// Maximum size of the atom-measure grid.
pub const MEASURE_GRID_CAP: usize = 512;

/// Candidate homomorphisms examined before giving up.
const CANDIDATE_CAP: usize = 100_000;

/// An isometric Boolean model of `(L, φ)` at a fixed exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebrification {
    /// The algebra `2^k`.
    pub target: Lattice,
    /// Measure of each atom, in atom order.
    pub atom_measures: Vec<Rational>,
    /// `h(A)` for every element `A` of the source, as a target element.
    pub homomorphism: Vec<Elem>,
    /// Join-prime elements `a_i` with `h(A) = {i : a_i ≤ A}`.
    pub generators: Vec<Elem>,
    /// `T` on X coordinates (rows: target X, columns: source X).
    pub t_matrix: Matrix,
}

impl Algebrification {
    pub fn atoms(&self) -> usize {
        self.atom_measures.len()
    }

    /// Atom measures in ascending order, the isomorphism invariant of a
    /// finite measure algebra.
    pub fn measure_multiset(&self) -> Vec<Rational> {
        let mut m = self.atom_measures.clone();
        m.sort();
        m
    }

    pub fn to_json(&self, source: &Lattice) -> serde_json::Value {
        let h: serde_json::Map<String, serde_json::Value> = source
            .elements()
            .map(|e| {
                (
                    source.name(e).to_string(),
                    self.target.name(self.homomorphism[e]).into(),
                )
            })
            .collect();
        serde_json::json!({
            "atoms": self.atoms(),
            "atom_measures": self.atom_measures.iter().map(format_rational).collect::<Vec<_>>(),
            "h": h,
            "t_matrix": self
                .t_matrix
                .iter()
                .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Nonzero join-prime elements `a` (`a ≤ B ∨ C ⇒ a ≤ B or a ≤ C`). Each
/// one gives the two-valued homomorphism `A ↦ [a ≤ A]`, and every
/// two-valued homomorphism of a finite lattice arises this way.
pub fn join_prime_elements(l: &Lattice) -> Vec<Elem> {
    l.elements()
        .filter(|&a| a != l.bottom())
        .filter(|&a| {
            l.elements().all(|b| {
                l.elements()
                    .all(|c| !l.leq(a, l.join(b, c)) || l.leq(a, b) || l.leq(a, c))
            })
        })
        .collect()
}

fn measure_grid(values: &[Rational]) -> BTreeSet<Rational> {
    let zero = Rational::zero();
    let one = Rational::one();
    let seeds: BTreeSet<Rational> = values.iter().cloned().collect();
    let mut grid = seeds.clone();
    let mut queue: VecDeque<Rational> = seeds.iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        for s in &seeds {
            for candidate in [&v + s, &v - s] {
                if candidate < zero || candidate > one || grid.contains(&candidate) {
                    continue;
                }
                if grid.len() >= MEASURE_GRID_CAP {
                    return grid;
                }
                grid.insert(candidate.clone());
                queue.push_back(candidate);
            }
        }
    }
    grid
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Searches `2^k`, `k ≤ max_atoms`, for algebrifications of `ctx`.
///
/// A homomorphism `L → 2^k` is a `k`-set of distinct join-prime generators
/// (atoms are unlabelled, so each set is tried once). Atom measures are
/// solved from `μ(h(A)) = ‖1⊗A‖^p` and must lie in the closure of the
/// values of `φ` under `±` within `[0, 1]`. The candidate is kept when `h`
/// kills `φ*`-null elements, `T` factors through the kernel, is bijective,
/// and is isometric on the deterministic sample.
pub fn find_algebrifications(
    ctx: &NormContext,
    max_atoms: usize,
    seed: u64,
) -> Result<Vec<Algebrification>, MorphismError> {
    if max_atoms > MAX_SEARCH_ATOMS {
        return Err(MorphismError::SearchSpaceExceeded(format!(
            "max atoms {max_atoms} exceeds {MAX_SEARCH_ATOMS}"
        )));
    }
    let l = ctx.lattice();
    let primes = join_prime_elements(l);
    let total: usize = (1..=max_atoms).map(|k| binomial(primes.len(), k)).sum();
    if total > CANDIDATE_CAP {
        return Err(MorphismError::SearchSpaceExceeded(format!(
            "{total} candidate homomorphisms exceed {CANDIDATE_CAP}"
        )));
    }
    let phistar = derive_phistar(ctx)?;
    let grid = measure_grid(ctx.phi().values());
    let kernel = kernel_basis(ctx);
    let rank = ctx.space().x_dim() - kernel.len();
    let mut sample: Vec<Vector> = ctx
        .space()
        .basis_elements()
        .iter()
        .map(|&b| ctx.space().image(b).clone())
        .collect();
    sample.extend(deterministic_sample(
        ctx.space().x_dim(),
        RANDOM_VECTORS,
        seed,
    ));

    let mut found = Vec::new();
    for k in 1..=max_atoms.min(primes.len()) {
        if k != rank {
            // T must be a bijection between spaces of dimensions `rank` and `k`.
            continue;
        }
        let algebra = boolean(k as u32)?;
        for choice in combinations(primes.len(), k) {
            let generators: Vec<Elem> = choice.iter().map(|&i| primes[i]).collect();
            if let Some(found_one) =
                try_candidate(ctx, &phistar, &grid, &kernel, &sample, &algebra, generators)?
            {
                found.push(found_one);
            }
        }
    }
    Ok(found)
}

fn try_candidate(
    ctx: &NormContext,
    phistar: &Submeasure,
    grid: &BTreeSet<Rational>,
    kernel: &[crate::quotient::XVector],
    sample: &[Vector],
    algebra: &Lattice,
    generators: Vec<Elem>,
) -> Result<Option<Algebrification>, MorphismError> {
    let l = ctx.lattice();
    let k = generators.len();
    let masks: Vec<u32> = l
        .elements()
        .map(|e| {
            generators
                .iter()
                .enumerate()
                .filter(|(_, &g)| l.leq(g, e))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let homomorphism: Vec<Elem> = masks
        .iter()
        .map(|&m| {
            algebra
                .elem(&subset_name(m, k as u32))
                .expect("subset of the atoms")
        })
        .collect();

    // Two-valued homomorphisms combine to a lattice homomorphism; recheck.
    for a in l.elements() {
        for b in l.elements() {
            if masks[l.meet(a, b)] != masks[a] & masks[b]
                || masks[l.join(a, b)] != masks[a] | masks[b]
            {
                return Ok(None);
            }
        }
    }
    if l.elements().any(|e| phistar.is_null(e) && masks[e] != 0) {
        return Ok(None);
    }

    // Measures from μ(h(A)) = ‖1⊗A‖^p.
    let p = ctx.p().clone();
    let mut rows: Vec<Vector> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut rhs_f: Vec<f64> = Vec::new();
    for e in l.elements() {
        rows.push(
            (0..k)
                .map(|i| {
                    if masks[e] >> i & 1 == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
        if p.is_one() {
            rhs.push(phistar.value(e).clone());
        } else {
            let v = ctx
                .norm(&ctx.space().unit_vector(e))?
                .value
                .to_f64()
                .powf(p.as_f64());
            rhs_f.push(v);
        }
    }
    let ech = linalg::echelon(&rows, k, &(0..k).collect::<Vec<_>>());
    if ech.rank() < k {
        return Ok(None);
    }
    // Pick rows spanning the atoms and solve that square system.
    let mut picked: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis_rows.clone();
        trial.push(r.clone());
        if linalg::rank(&trial, k) > basis_rows.len() {
            basis_rows = trial;
            picked.push(i);
        }
        if picked.len() == k {
            break;
        }
    }
    let mu: Vec<Rational> = if p.is_one() {
        let b: Vector = picked.iter().map(|&i| rhs[i].clone()).collect();
        let Some(mu) = linalg::solve(&basis_rows, &b) else {
            return Ok(None);
        };
        if rows
            .iter()
            .zip(&rhs)
            .any(|(r, v)| &linalg::dot(r, &mu) != v)
        {
            return Ok(None);
        }
        mu
    } else {
        let a = nalgebra::DMatrix::from_fn(k, k, |i, j| to_f64(&basis_rows[i][j]));
        let b = nalgebra::DVector::from_iterator(k, picked.iter().map(|&i| rhs_f[i]));
        let Some(sol) = a.lu().solve(&b) else {
            return Ok(None);
        };
        // Snap to the grid; the grid is exact.
        let mut mu = Vec::with_capacity(k);
        for v in sol.iter() {
            let Some(g) = grid.iter().find(|g| (to_f64(g) - v).abs() <= 1e-7) else {
                return Ok(None);
            };
            mu.push(g.clone());
        }
        let consistent = rows.iter().zip(&rhs_f).all(|(r, v)| {
            (to_f64(&linalg::dot(r, &mu)) - v).abs() <= P_GT1_TOLERANCE * v.max(1e-12)
        });
        if !consistent {
            return Ok(None);
        }
        mu
    };
    if mu.iter().any(|m| !m.is_positive() || !grid.contains(m)) {
        return Ok(None);
    }

    // Target space and measure.
    let target_space = QuotientSpace::build(algebra);
    let target_values: Vec<Rational> = algebra
        .elements()
        .map(|e| {
            (0..k)
                .filter(|&i| {
                    algebra.leq(
                        algebra.elem(&subset_name(1 << i, k as u32)).expect("atom"),
                        e,
                    )
                })
                .fold(Rational::zero(), |acc, i| acc + &mu[i])
        })
        .collect();
    let target_phi = Submeasure::from_values(algebra, target_values);
    let target_ctx = NormContext::new(&target_space, &target_phi, p.clone(), Semantics::Disjoint)?;

    // T on the source basis, then check it is well defined on every element.
    let source = ctx.space();
    let d = source.x_dim();
    let columns: Vec<Vector> = source
        .basis_elements()
        .iter()
        .map(|&b| target_space.image(homomorphism[b]).clone())
        .collect();
    let apply = |x: &[Rational]| -> Vector {
        (0..target_space.x_dim())
            .map(|i| (0..d).fold(Rational::zero(), |acc, j| acc + &columns[j][i] * &x[j]))
            .collect()
    };
    for e in l.elements() {
        if apply(source.image(e)) != *target_space.image(homomorphism[e]) {
            return Ok(None);
        }
    }
    if kernel.iter().any(|z| !linalg::is_zero(&apply(&z.coords))) {
        return Ok(None);
    }
    if linalg::rank(&columns, target_space.x_dim()) != target_space.x_dim() {
        return Ok(None);
    }
    for x in sample {
        let a = ctx.norm_coords(x)?;
        let b = target_ctx.norm_coords(&apply(x))?;
        let same = match (&a.value, &b.value) {
            (NormValue::Exact(u), NormValue::Exact(v)) => u == v,
            (u, v) => {
                let (u, v) = (u.to_f64(), v.to_f64());
                (u - v).abs() <= P_GT1_TOLERANCE * u.max(v).max(1e-12)
            }
        };
        if !same {
            return Ok(None);
        }
    }
    let t_matrix: Matrix = (0..target_space.x_dim())
        .map(|i| (0..d).map(|j| columns[j][i].clone()).collect())
        .collect();
    Ok(Some(Algebrification {
        target: algebra.clone(),
        atom_measures: mu,
        homomorphism,
        generators,
        t_matrix,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub p: String,
    /// False at `p = 2`, where uniqueness is not claimed.
    pub applicable: bool,
    pub compared: usize,
    /// Pairs of result indices with different atom-measure multisets.
    pub counterexamples: Vec<(usize, usize)>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Compares every pair of results up to measure-algebra isomorphism.
pub fn uniqueness_probe(results: &[Algebrification], p: &crate::lp::Exponent) -> UniquenessReport {
    let applicable = p.value() != &Rational::from_integer(2.into());
    let mut report = UniquenessReport {
        p: p.to_string(),
        applicable,
        compared: 0,
        counterexamples: Vec::new(),
    };
    if !applicable {
        return report;
    }
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            report.compared += 1;
            if results[i].measure_multiset() != results[j].measure_multiset() {
                report.counterexamples.push((i, j));
            }
        }
    }
    report
}
