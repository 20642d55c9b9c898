//! Exact two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Problems are given in equality form: minimise `c·x` subject to
//! `A x = b`, `x ≥ 0`. All arithmetic is over [`Rational`], so feasibility
//! and optimality verdicts carry no tolerance.

use num_traits::{Signed, Zero};

use crate::linalg::{Matrix, Vector};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vector,
    pub rows: Matrix,
    pub rhs: Vector,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vector, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    body: Matrix,
    rhs: Vector,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.body[row][col].recip();
        for x in self.body[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let prow = self.body[row].clone();
        let prhs = self.rhs[row].clone();
        for r in 0..self.body.len() {
            if r == row || self.body[r][col].is_zero() {
                continue;
            }
            let f = self.body[r][col].clone();
            for (x, p) in self.body[r].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[r] -= &f * &prhs;
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[Rational], col: usize) -> Rational {
        let mut rc = cost[col].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            let a = &self.body[r][col];
            if !a.is_zero() && !cost[b].is_zero() {
                rc -= &cost[b] * a;
            }
        }
        rc
    }

    /// Runs simplex iterations over columns `allowed`; returns false if unbounded.
    fn optimise(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|c| !self.basis.contains(c))
                .find(|&c| self.reduced_cost(cost, c).is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.body.len() {
                let a = &self.body[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Solves the program exactly.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let m = lp.rows.len();
    let n = lp.objective.len();
    debug_assert!(lp.rows.iter().all(|r| r.len() == n));
    debug_assert_eq!(lp.rhs.len(), m);

    let mut body = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
        let flip = b.is_negative();
        let mut r: Vector = row
            .iter()
            .map(|x| if flip { -x } else { x.clone() })
            .collect();
        r.extend((0..m).map(|j| {
            if i == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        }));
        body.push(r);
        rhs.push(if flip { -b } else { b.clone() });
    }
    let mut t = Tableau {
        body,
        rhs,
        basis: (n..n + m).collect(),
    };

    let mut phase1 = vec![Rational::zero(); n + m];
    for c in phase1.iter_mut().skip(n) {
        *c = Rational::from_integer(1.into());
    }
    t.optimise(&phase1, n + m);
    let infeasibility = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(b, _)| **b >= n)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.body.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&c| !t.body[r][c].is_zero()) {
                Some(c) => t.pivot(r, c),
                None => {
                    t.body.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut cost = lp.objective.clone();
    cost.extend(std::iter::repeat_n(Rational::zero(), m));
    if !t.optimise(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[row].clone();
        }
    }
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .fold(Rational::zero(), |acc, (c, v)| acc + c * v);
    LpOutcome::Optimal { x, value }
}

/// Finds some `x ≥ 0` with `rows · x = rhs`.
pub fn feasible_point(rows: &Matrix, rhs: &[Rational], nvars: usize) -> Option<Vector> {
    let lp = LinearProgram {
        objective: vec![Rational::zero(); nvars],
        rows: rows.clone(),
        rhs: rhs.to_vec(),
    };
    match solve(&lp) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Whether `target` is a nonnegative combination of `generators`.
pub fn in_cone(generators: &[Vector], target: &[Rational]) -> Option<Vector> {
    let dim = target.len();
    if generators.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let rows: Matrix = (0..dim)
        .map(|i| generators.iter().map(|g| g[i].clone()).collect())
        .collect();
    feasible_point(&rows, target, generators.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| from_i64(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let lp = LinearProgram {
            objective: v(&[-1, -1, 0, 0]),
            rows: vec![v(&[1, 2, 1, 0]), v(&[3, 1, 0, 1])],
            rhs: v(&[4, 6]),
        };
        match solve(&lp) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, ratio(-14, 5));
                assert_eq!(x[0], ratio(8, 5));
                assert_eq!(x[1], ratio(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: v(&[1]),
            rows: vec![v(&[1]), v(&[1])],
            rhs: v(&[1, 2]),
        };
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
        let lp = LinearProgram {
            objective: v(&[-1, 0]),
            rows: vec![v(&[1, -1])],
            rhs: v(&[1]),
        };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_and_negative_rhs() {
        let lp = LinearProgram {
            objective: v(&[1, 1]),
            rows: vec![v(&[1, 1]), v(&[2, 2]), v(&[-1, 0])],
            rhs: v(&[3, 6, -1]),
        };
        assert_eq!(solve(&lp).value(), Some(&from_i64(3)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance (in equality form with slacks).
        let lp = LinearProgram {
            objective: vec![
                ratio(-3, 4),
                from_i64(150),
                ratio(-1, 50),
                from_i64(6),
                from_i64(0),
                from_i64(0),
                from_i64(0),
            ],
            rows: vec![
                vec![
                    ratio(1, 4),
                    from_i64(-60),
                    ratio(-1, 25),
                    from_i64(9),
                    from_i64(1),
                    from_i64(0),
                    from_i64(0),
                ],
                vec![
                    ratio(1, 2),
                    from_i64(-90),
                    ratio(-1, 50),
                    from_i64(3),
                    from_i64(0),
                    from_i64(1),
                    from_i64(0),
                ],
                vec![
                    from_i64(0),
                    from_i64(0),
                    from_i64(1),
                    from_i64(0),
                    from_i64(0),
                    from_i64(0),
                    from_i64(1),
                ],
            ],
            rhs: v(&[0, 0, 1]),
        };
        assert_eq!(solve(&lp).value(), Some(&ratio(-1, 20)));
    }

    #[test]
    fn cone_membership() {
        let gens = vec![v(&[1, 0]), v(&[1, 1])];
        assert!(in_cone(&gens, &v(&[3, 1])).is_some());
        assert!(in_cone(&gens, &v(&[0, 1])).is_none());
        assert!(in_cone(&[], &v(&[0, 0])).is_some());
    }
}
