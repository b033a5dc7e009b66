//! Small exact dense linear algebra: Bareiss determinants over the integers
//! and Gaussian elimination over the rationals.

use num::bigint::BigInt;
use num::{One, Zero};

use crate::rat::Rat;

/// Fraction-free Bareiss determinant of a square integer matrix.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Solve `A x = b` exactly over the rationals. Returns None for singular A.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot);
        let p = m[k][k].clone();
        for j in k..=n {
            m[k][j] = &m[k][j] / &p;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..=n {
                    let t = &m[k][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Laplace cofactor expansion, used as an independent oracle.
    pub fn det_naive(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[i][c].clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det_naive(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_matches_naive() {
        let m = vec![
            vec![bi(2), bi(-1), bi(3)],
            vec![bi(0), bi(4), bi(1)],
            vec![bi(-5), bi(2), bi(2)],
        ];
        assert_eq!(det_bareiss(&m), det_naive(&m));
        let singular = vec![
            vec![bi(1), bi(2), bi(3)],
            vec![bi(2), bi(4), bi(6)],
            vec![bi(0), bi(1), bi(1)],
        ];
        assert_eq!(det_bareiss(&singular), bi(0));
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)]];
        let b = vec![rat(5, 1), rat(1, 1)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        let sing = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        assert!(solve_rational(&sing, &b).is_none());
    }
}
