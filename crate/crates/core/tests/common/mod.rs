//! Ground truth computed the slow, obvious way, sharing nothing with the
//! library beyond the `Graph` adjacency predicate.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polyrecon::Graph;

pub type Matrix = Vec<Vec<BigInt>>;

pub fn adjacency(g: &Graph) -> Matrix {
    let n = g.order();
    (0..n).map(|i| (0..n).map(|j| BigInt::from(g.has_edge(i, j) as u8)).collect()).collect()
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.order();
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !g.has_edge(i, j)))
        .unwrap()
}

pub fn without(g: &Graph, v: usize) -> Graph {
    let keep: Vec<usize> = (0..g.order()).filter(|&u| u != v).collect();
    let edges: Vec<(usize, usize)> = keep
        .iter()
        .enumerate()
        .flat_map(|(a, &u)| keep.iter().enumerate().skip(a + 1).map(move |(b, &w)| (a, b, u, w)))
        .filter(|&(_, _, u, w)| g.has_edge(u, w))
        .map(|(a, b, _, _)| (a, b))
        .collect();
    Graph::from_edges(keep.len(), edges).unwrap()
}

/// Fraction-free Gaussian elimination.
pub fn det(mut m: Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `det(xI − A)` at `x = 0, …, n`, interpolated. Coefficients leading first.
pub fn charpoly(g: &Graph) -> Vec<BigInt> {
    let n = g.order();
    let a = adjacency(g);
    let values: Vec<BigRational> = (0..=n)
        .map(|x| {
            let m: Matrix = (0..n)
                .map(|i| (0..n).map(|j| if i == j { BigInt::from(x) - &a[i][j] } else { -a[i][j].clone() }).collect())
                .collect();
            BigRational::from_integer(det(m))
        })
        .collect();
    // Lagrange, accumulating coefficients lowest degree first
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (k, yk) in values.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in (0..=n).filter(|&j| j != k) {
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * BigRational::from_integer(BigInt::from(j));
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(k as i64 - j as i64));
        }
        for (d, c) in basis.iter().enumerate() {
            coeffs[d] += c * yk / &denom;
        }
    }
    coeffs.iter().rev().map(|c| {
        assert!(c.is_integer());
        c.to_integer()
    }).collect()
}

pub fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    let d = p.len() - 1;
    p[..d].iter().enumerate().map(|(i, c)| c * BigInt::from(d - i)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

/// `A^0, …, A^kmax`.
pub fn powers(g: &Graph, kmax: usize) -> Vec<Matrix> {
    let n = g.order();
    let a = adjacency(g);
    let id: Matrix = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect();
    let mut out = vec![id];
    for _ in 0..kmax {
        let next = mat_mul(out.last().unwrap(), &a);
        out.push(next);
    }
    out
}

pub fn trace(m: &Matrix) -> BigInt {
    (0..m.len()).map(|i| m[i][i].clone()).sum()
}

pub fn total(m: &Matrix) -> BigInt {
    m.iter().flatten().sum()
}

pub fn row_sums(m: &Matrix) -> Vec<BigInt> {
    m.iter().map(|r| r.iter().sum()).collect()
}

/// Walk matrix `[1, A1, …, A^{n−1}1]` as rows indexed by vertex.
pub fn walk_rows(g: &Graph) -> Matrix {
    let n = g.order();
    let cols: Vec<Vec<BigInt>> = powers(g, n.saturating_sub(1)).iter().map(row_sums).collect();
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

pub fn rank_q(rows: &Matrix) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let v = &f * &m[rank][k];
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank_f2(rows: &Matrix) -> usize {
    let two = BigInt::from(2);
    let mut m: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|v| v.mod_floor(&two).is_one()).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] {
                for k in c..cols {
                    let v = m[rank][k];
                    m[r][k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Number of 4-cycles, by trying every vertex quadruple.
pub fn four_cycles(g: &Graph) -> u64 {
    let n = g.order();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    // the three ways to arrange four vertices in a cycle
                    for [w, x, y, z] in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                        if g.has_edge(w, x) && g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(z, w) {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    count
}

/// `b_k` where `φ = x^n − b_1 x^{n−1} + b_2 x^{n−2} − …`.
pub fn b(phi: &[BigInt], k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        phi[k].clone()
    } else {
        -phi[k].clone()
    }
}

pub fn residue(v: &BigInt, m: u64) -> u8 {
    u8::try_from(v.mod_floor(&BigInt::from(m))).unwrap()
}

pub fn residues(p: &[BigInt], m: u64) -> Vec<u8> {
    p.iter().map(|v| residue(v, m)).collect()
}

/// Smallest adjacency code over all vertex orders: an isomorphism
/// invariant that separates classes, usable up to `n = 7` or so.
pub fn brute_canonical(g: &Graph) -> Vec<bool> {
    let n = g.order();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    loop {
        let code: Vec<bool> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| g.has_edge(perm[i], perm[j])).collect();
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best.unwrap_or_default()
}

