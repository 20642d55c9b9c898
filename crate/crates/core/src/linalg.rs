//! Dense exact linear algebra over [`Rational`].

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form of `rows`, pivoting columns in `column_order`.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Nonzero rows, each with a unit entry at its pivot column.
    pub rows: Matrix,
    /// Pivot column of each row in `rows`.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains(&col)
    }
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit(n, i)).collect()
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `acc += s * v`
pub fn axpy(acc: &mut [Rational], s: &Rational, v: &[Rational]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

/// Matrix-vector product, `m` stored row-major.
pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Rational::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Scales a nonzero vector to the primitive integer vector on the same ray.
pub fn primitive(v: &[Rational]) -> Vector {
    use num_integer::Integer;
    let mut lcm = num_bigint::BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

/// Row-reduces `rows` (all of length `ncols`), choosing pivots by scanning
/// columns in `column_order`.
pub fn echelon(rows: &[Vector], ncols: usize, column_order: &[usize]) -> Echelon {
    let mut work: Matrix = rows.iter().filter(|r| !is_zero(r)).cloned().collect();
    let mut pivots = Vec::new();
    let mut done = 0;
    for &col in column_order {
        if done == work.len() {
            break;
        }
        let Some(found) = (done..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(done, found);
        let inv = work[done][col].recip();
        for x in work[done].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = work[done].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != done && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(col);
        done += 1;
    }
    work.truncate(done);
    Echelon {
        rows: work,
        pivots,
        ncols,
    }
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    let order: Vec<usize> = (0..ncols).collect();
    echelon(rows, ncols, &order).rank()
}

/// Solves `a x = b` for square invertible `a`; `None` if singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    let n = a.len();
    let augmented: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let order: Vec<usize> = (0..n).collect();
    let e = echelon(&augmented, n + 1, &order);
    if e.rank() < n || e.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(e.rows.iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let augmented: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit(n, i));
            r
        })
        .collect();
    let order: Vec<usize> = (0..n).collect();
    let e = echelon(&augmented, 2 * n, &order);
    if e.rank() < n || e.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(e.rows.iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &Matrix, ncols: usize) -> Vec<Vector> {
    let order: Vec<usize> = (0..ncols).collect();
    let e = echelon(a, ncols, &order);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.is_pivot(*c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = unit(ncols, f);
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Coefficients expressing `v` in terms of the linearly independent `basis`,
/// or `None` if `v` is outside their span.
pub fn coordinates_in(basis: &[Vector], v: &[Rational]) -> Option<Vector> {
    let k = basis.len();
    let n = v.len();
    // Columns are basis vectors; augment with v.
    let rows: Matrix = (0..n)
        .map(|i| {
            let mut r: Vector = basis.iter().map(|b| b[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect();
    let order: Vec<usize> = (0..=k).collect();
    let e = echelon(&rows, k + 1, &order);
    if e.pivots.contains(&k) {
        return None;
    }
    let mut coeffs = zeros(k);
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        coeffs[p] = row[k].clone();
    }
    Some(coeffs)
}

/// Basis of the span of `vectors`, taken greedily in order.
pub fn span_basis(vectors: &[Vector], dim: usize) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&trial, dim) > basis.len() {
            basis.push(v.clone());
        }
    }
    basis
}

/// True iff the two families span the same subspace.
pub fn same_span(a: &[Vector], b: &[Vector], dim: usize) -> bool {
    let ra = rank(a, dim);
    let rb = rank(b, dim);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && rank(&both, dim) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| from_i64(x)).collect()
    }

    #[test]
    fn solve_and_inverse() {
        let a = vec![v(&[2, 1]), v(&[1, 3])];
        let x = solve(&a, &v(&[3, 5])).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(solve(&vec![v(&[1, 2]), v(&[2, 4])], &v(&[1, 1])).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = vec![v(&[1, 1, 0, -1]), v(&[0, 1, 1, 0])];
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for z in &ns {
            assert!(is_zero(&mat_vec(&a, z)));
        }
    }

    #[test]
    fn coordinates_and_span() {
        let basis = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(coordinates_in(&basis, &v(&[2, 3, 5])).unwrap(), v(&[2, 3]));
        assert!(coordinates_in(&basis, &v(&[1, 0, 0])).is_none());
        assert!(same_span(&basis, &[v(&[1, 1, 2]), v(&[1, -1, 0])], 3));
        assert_eq!(primitive(&[ratio(1, 2), ratio(-3, 4)]), v(&[2, -3]));
    }
}
