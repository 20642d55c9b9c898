//! Separable power programs
//!
//! ```text
//! minimise  Σ_k w_k c_k^p   subject to  M c ≥ r,  c ≥ 0
//! ```
//!
//! with `w > 0`, `M ≥ 0`, `r > 0` and `p > 1`, solved by a log-barrier path
//! with damped Newton centering. The Lagrange dual
//! `g(y) = y·r − Σ_k (p−1) w_k ĉ_k^p`, `ĉ_k = ((Mᵀy)_k⁺ / (p w_k))^{1/(p−1)}`,
//! evaluated at the central-path multipliers gives a lower bound.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct PowerProgram {
    pub weights: Vec<f64>,
    /// Row-major `rows × weights.len()` matrix.
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub p: f64,
}

#[derive(Debug, Clone)]
pub struct PowerSolution {
    pub c: Vec<f64>,
    /// Objective at `c`.
    pub upper: f64,
    /// Dual lower bound on the optimum.
    pub lower: f64,
}

impl PowerSolution {
    pub fn relative_gap(&self) -> f64 {
        if self.upper <= 0.0 {
            0.0
        } else {
            (self.upper - self.lower.max(0.0)) / self.upper
        }
    }
}

const MAX_OUTER: usize = 80;
const MAX_NEWTON: usize = 200;
const GROWTH: f64 = 8.0;

impl PowerProgram {
    fn objective(&self, c: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(c)
            .map(|(w, x)| w * x.powf(self.p))
            .sum()
    }

    fn slacks(&self, c: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, r)| row.iter().zip(c).map(|(m, x)| m * x).sum::<f64>() - r)
            .collect()
    }

    fn barrier(&self, t: f64, c: &[f64]) -> Option<f64> {
        if c.iter().any(|&x| x <= 0.0) {
            return None;
        }
        let s = self.slacks(c);
        if s.iter().any(|&x| x <= 0.0) {
            return None;
        }
        Some(
            t * self.objective(c)
                - c.iter().map(|x| x.ln()).sum::<f64>()
                - s.iter().map(|x| x.ln()).sum::<f64>(),
        )
    }

    /// Dual bound at multipliers `y ≥ 0`.
    pub fn dual_bound(&self, y: &[f64]) -> f64 {
        let p = self.p;
        let mut value: f64 = y.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        for (k, w) in self.weights.iter().enumerate() {
            let s: f64 = self.matrix.iter().zip(y).map(|(row, yj)| row[k] * yj).sum();
            if s > 0.0 {
                let c = (s / (p * w)).powf(1.0 / (p - 1.0));
                value -= (p - 1.0) * w * c.powf(p);
            }
        }
        value
    }

    fn center(&self, t: f64, c: &mut [f64]) {
        let n = c.len();
        let p = self.p;
        for _ in 0..MAX_NEWTON {
            let s = self.slacks(c);
            let mut grad = DVector::<f64>::zeros(n);
            let mut hess = DMatrix::<f64>::zeros(n, n);
            for k in 0..n {
                grad[k] = t * p * self.weights[k] * c[k].powf(p - 1.0) - 1.0 / c[k];
                hess[(k, k)] =
                    t * p * (p - 1.0) * self.weights[k] * c[k].powf(p - 2.0) + 1.0 / (c[k] * c[k]);
            }
            for (row, sj) in self.matrix.iter().zip(&s) {
                for k in 0..n {
                    if row[k] == 0.0 {
                        continue;
                    }
                    grad[k] -= row[k] / sj;
                    for l in 0..n {
                        hess[(k, l)] += row[k] * row[l] / (sj * sj);
                    }
                }
            }
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match hess.lu().solve(&(-&grad)) {
                    Some(d) => d,
                    None => return,
                },
            };
            let decrement = -grad.dot(&step);
            if !(decrement > 1e-14) {
                return;
            }
            let Some(phi0) = self.barrier(t, c) else {
                return;
            };
            let mut alpha = 1.0f64;
            for (k, d) in step.iter().enumerate() {
                if *d < 0.0 {
                    alpha = alpha.min(-0.99 * c[k] / d);
                }
            }
            let trial = |a: f64| -> Vec<f64> {
                c.iter().zip(step.iter()).map(|(x, d)| x + a * d).collect()
            };
            let mut accepted = false;
            for _ in 0..60 {
                let next = trial(alpha);
                if let Some(phi) = self.barrier(t, &next) {
                    if phi <= phi0 - 0.25 * alpha * decrement {
                        c.copy_from_slice(&next);
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted || decrement < 1e-12 {
                return;
            }
        }
    }
}

/// Solves the program to the requested relative gap. Returns `None` when
/// some row has no positive entry (infeasible).
pub fn solve_power_program(prog: &PowerProgram, rel_gap: f64) -> Option<PowerSolution> {
    let n = prog.weights.len();
    if prog.rhs.is_empty() {
        return Some(PowerSolution {
            c: vec![0.0; n],
            upper: 0.0,
            lower: 0.0,
        });
    }
    let mut alpha = 0.0f64;
    for (row, r) in prog.matrix.iter().zip(&prog.rhs) {
        let total: f64 = row.iter().sum();
        if total <= 0.0 {
            return None;
        }
        alpha = alpha.max(2.0 * r / total);
    }
    let mut c = vec![alpha; n];
    let m = (n + prog.rhs.len()) as f64;
    let mut t = m / prog.objective(&c).max(f64::MIN_POSITIVE);
    let mut best: Option<PowerSolution> = None;
    for _ in 0..MAX_OUTER {
        prog.center(t, &mut c);
        let s = prog.slacks(&c);
        let y: Vec<f64> = s.iter().map(|sj| 1.0 / (t * sj)).collect();
        let candidate = PowerSolution {
            c: c.clone(),
            upper: prog.objective(&c),
            lower: prog.dual_bound(&y),
        };
        let lower = best
            .as_ref()
            .map_or(f64::NEG_INFINITY, |b| b.lower)
            .max(candidate.lower);
        let better = best.as_ref().is_none_or(|b| candidate.upper <= b.upper);
        if better {
            best = Some(PowerSolution { lower, ..candidate });
        } else if let Some(b) = best.as_mut() {
            b.lower = lower;
        }
        if best.as_ref().is_some_and(|b| b.relative_gap() <= rel_gap) {
            break;
        }
        t *= GROWTH;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_constraint_closed_form() {
        // minimise c1² + c2² s.t. c1 + c2 ≥ 1: optimum 1/2 at (1/2, 1/2).
        let prog = PowerProgram {
            weights: vec![1.0, 1.0],
            matrix: vec![vec![1.0, 1.0]],
            rhs: vec![1.0],
            p: 2.0,
        };
        let sol = solve_power_program(&prog, 1e-9).unwrap();
        assert!((sol.upper - 0.5).abs() < 1e-8, "{sol:?}");
        assert!(sol.lower <= sol.upper && sol.relative_gap() <= 1e-9);
    }

    #[test]
    fn weighted_bounds() {
        // c_k ≥ r_k separately: optimum Σ w_k r_k^p.
        let prog = PowerProgram {
            weights: vec![0.5, 0.25],
            matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            rhs: vec![2.0, 3.0],
            p: 3.0,
        };
        let sol = solve_power_program(&prog, 1e-9).unwrap();
        let exact = 0.5 * 8.0 + 0.25 * 27.0;
        assert!((sol.upper - exact).abs() <= 1e-8 * exact);
        assert!(sol.lower <= exact + 1e-12);
    }

    #[test]
    fn fractional_exponent() {
        let prog = PowerProgram {
            weights: vec![1.0, 2.0],
            matrix: vec![vec![1.0, 1.0]],
            rhs: vec![1.0],
            p: 1.5,
        };
        // Stationarity: c1^{1/2} = 2 c2^{1/2}, so c1 = 4 c2 = 4/5.
        let exact = 0.8f64.powf(1.5) + 2.0 * 0.2f64.powf(1.5);
        let sol = solve_power_program(&prog, 1e-9).unwrap();
        assert!(
            (sol.upper - exact).abs() <= 1e-8 * exact,
            "{} vs {exact}",
            sol.upper
        );
    }

    #[test]
    fn infeasible_row() {
        let prog = PowerProgram {
            weights: vec![1.0],
            matrix: vec![vec![0.0]],
            rhs: vec![1.0],
            p: 2.0,
        };
        assert!(solve_power_program(&prog, 1e-9).is_none());
    }
}
