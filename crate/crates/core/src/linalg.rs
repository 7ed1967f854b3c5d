//! Exact dense linear algebra: fraction-free elimination over the integers,
//! Gaussian elimination over the rationals, and elimination over GF(2).
//!
//! Pivots are always the first nonzero entry in the pivot column, so results
//! are deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Fraction-free (Bareiss) row reduction; returns the rank and, for a square
/// matrix, the determinant.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (usize, Option<BigInt>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let square = rows == cols;
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k];
                m[r][k] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    let det = square.then(|| if rank == rows { prev * sign } else { BigInt::zero() });
    (rank, det)
}

pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == m.len()), "determinant of a non-square matrix");
    bareiss(m.to_vec()).1.expect("square")
}

pub fn rank(m: &[Vec<BigInt>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    bareiss(m.to_vec()).0
}

/// Solves `A x = b` for square `A`; `None` if `A` is singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for k in c..=n {
            m[c][k] = &m[c][k] / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Rank over GF(2) of vectors given as bit masks.
pub fn rank_f2(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// A nontrivial GF(2) dependency among `vectors`, as a mask over their
/// indices, or `None` if they are independent.
pub fn dependency_f2(vectors: &[u64]) -> Option<u64> {
    assert!(vectors.len() <= 64);
    // (reduced vector, combination of inputs producing it), keyed by leading bit
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (i, &v) in vectors.iter().enumerate() {
        let mut v = v;
        let mut combo = 1u64 << i;
        for &(b, bc) in &basis {
            if v ^ b < v {
                v ^= b;
                combo ^= bc;
            }
        }
        if v == 0 {
            return Some(combo);
        }
        basis.push((v, combo));
        basis.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    }
    None
}
