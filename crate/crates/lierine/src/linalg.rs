//! Exact linear algebra over the rationals, for flattened cochain complexes:
//! rank via fraction-free (Bareiss) elimination on cleared integers, and a
//! particular solution via rational Gauss-Jordan with deterministic pivoting.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> QMatrix
    where
        F: FnMut(usize, usize) -> Rational,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    /// Exact rank by one-step Bareiss elimination. Rows are first scaled to
    /// integers (scaling does not change rank); the fraction-free update
    /// keeps every intermediate an exact minor of the integer matrix, so the
    /// division is exact. Pivoting is deterministic: first nonzero row in
    /// column order.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row: Vec<&Rational> = (0..self.cols).map(|j| self.get(i, j)).collect();
                let mut lcm = BigInt::one();
                for r in &row {
                    let d = r.denom();
                    let g = gcd(&lcm, d);
                    lcm = lcm / g * d;
                }
                row.iter()
                    .map(|r| r.numer() * (&lcm / r.denom()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            for i in rank + 1..self.rows {
                for j in col + 1..self.cols {
                    let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                    debug_assert!((&num % &prev).is_zero(), "Bareiss division is exact");
                    m[i][j] = num / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// A particular solution of `self`·x = rhs, or `None` when inconsistent.
    /// Gauss-Jordan with deterministic pivoting (first nonzero row per
    /// column); free variables are set to zero, so the answer is canonical.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length");
        let width = self.cols + 1;
        let mut a: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Rational> =
                    (0..self.cols).map(|j| self.get(i, j).clone()).collect();
                row.push(rhs[i].clone());
                row
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][col].clone();
            for j in col..width {
                a[r][j] = &a[r][j] / &inv;
            }
            for i in 0..self.rows {
                if i == r || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in col..width {
                    let delta = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &delta;
                }
            }
            pivots.push((r, col));
            r += 1;
        }
        if a[r..self.rows].iter().any(|row| !row[self.cols].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, col) in pivots {
            x[col] = a[row][self.cols].clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn q(rows: usize, cols: usize, vals: &[(i64, i64)]) -> QMatrix {
        let mut it = vals.iter();
        QMatrix::from_fn(rows, cols, |_, _| {
            let &(n, d) = it.next().unwrap();
            rat(n, d)
        })
    }

    /// Naive rational elimination, as an independent rank oracle.
    fn naive_rank(m: &QMatrix) -> usize {
        let mut a: Vec<Vec<Rational>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(p) = (rank..m.rows()).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..m.rows() {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] / &a[rank][col];
                for j in col..m.cols() {
                    let delta = &f * &a[rank][j];
                    a[i][j] = &a[i][j] - &delta;
                }
            }
            rank += 1;
            if rank == m.rows() {
                break;
            }
        }
        rank
    }

    #[test]
    fn rank_of_fixed_matrices() {
        let m = q(2, 2, &[(1, 1), (2, 1), (2, 1), (4, 1)]);
        assert_eq!(m.rank(), 1);
        let id = QMatrix::from_fn(3, 3, |i, j| if i == j { rat(1, 1) } else { rat(0, 1) });
        assert_eq!(id.rank(), 3);
        assert_eq!(QMatrix::zero(4, 2).rank(), 0);
        // Rationals with mixed denominators.
        let m = q(2, 3, &[(1, 2), (1, 3), (0, 1), (1, 1), (2, 3), (5, 7)]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_finds_canonical_solutions() {
        // x + y = 3 with a free variable: canonical answer sets y = 0.
        let m = q(1, 2, &[(1, 1), (1, 1)]);
        assert_eq!(m.solve(&[rat(3, 1)]), Some(vec![rat(3, 1), rat(0, 1)]));
        // Inconsistent system.
        let m = q(2, 1, &[(1, 1), (1, 1)]);
        assert_eq!(m.solve(&[rat(1, 1), rat(2, 1)]), None);
        // Unique solution with fractions.
        let m = q(2, 2, &[(1, 2), (0, 1), (1, 1), (1, 3)]);
        let sol = m.solve(&[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(m.mul_vec(&sol), vec![rat(1, 1), rat(0, 1)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn bareiss_rank_matches_naive_elimination(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in proptest::collection::vec((-4i64..5, 1i64..4), 36),
        ) {
            let mut it = seed.iter().cycle();
            let m = QMatrix::from_fn(rows, cols, |_, _| {
                let &(n, d) = it.next().unwrap();
                rat(n, d)
            });
            prop_assert_eq!(m.rank(), naive_rank(&m));
        }

        #[test]
        fn solutions_actually_solve(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-3i64..4, 25),
            xs in proptest::collection::vec(-3i64..4, 5),
        ) {
            let mut it = seed.iter().cycle();
            let m = QMatrix::from_fn(rows, cols, |_, _| rat(*it.next().unwrap(), 1));
            // Build a consistent right-hand side from a known solution.
            let x0: Vec<Rational> = xs.iter().take(cols).map(|&n| rat(n, 1)).collect();
            let rhs = m.mul_vec(&x0);
            let sol = m.solve(&rhs).expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&sol), rhs);
        }
    }
}
