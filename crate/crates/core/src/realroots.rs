//! Real-rootedness and interlacing for integer polynomials.
//!
//! The exact tests run Sturm sequences over `Q`; a floating-point root
//! finder only supplies search windows, never verdicts. Coefficient vectors
//! are leading-first, as everywhere else in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

type QPoly = Vec<BigRational>;

fn to_q(p: &[BigInt]) -> QPoly {
    trim(p.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn trim(mut p: QPoly) -> QPoly {
    let lead = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..lead);
    p
}

fn deg(p: &QPoly) -> usize {
    p.len().saturating_sub(1)
}

fn derivative(p: &QPoly) -> QPoly {
    let d = deg(p);
    trim(p[..d].iter().enumerate().map(|(i, c)| c * BigRational::from_integer(BigInt::from(d - i))).collect())
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let at = |p: &QPoly, i: usize| if i + p.len() >= n { p[i + p.len() - n].clone() } else { BigRational::zero() };
    trim((0..n).map(|i| at(a, i) - at(b, i)).collect())
}

fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` nonzero.
fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    for i in 0..q.len() {
        let f = &r[i] / &b[0];
        for (j, c) in b.iter().enumerate() {
            r[i + j] -= &f * c;
        }
        q[i] = f;
    }
    let rem = trim(r[q.len()..].to_vec());
    (q, rem)
}

fn monic_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem(&a, &b).1;
        a = b;
        b = r;
    }
    let lead = a[0].clone();
    a.iter().map(|c| c / &lead).collect()
}

/// Yun's square-free factorisation: `(f, k)` with `p = c·Π f^k`.
fn squarefree_factors(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    let dp = derivative(p);
    let a0 = monic_gcd(p, &dp);
    let mut b = divrem(p, &a0).0;
    let mut c = divrem(&dp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut k = 1;
    while deg(&b) > 0 {
        let a = monic_gcd(&b, &d);
        if deg(&a) > 0 {
            out.push((a.clone(), k));
        }
        b = divrem(&b, &a).0;
        c = divrem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        k += 1;
    }
    out
}

fn sign_at_infinity(p: &QPoly, negative: bool) -> i8 {
    let s = if p[0].is_positive() { 1 } else { -1 };
    if negative && deg(p) % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Number of distinct real roots.
fn distinct_real_roots(p: &QPoly) -> usize {
    if deg(p) == 0 {
        return 0;
    }
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let r = divrem(&seq[seq.len() - 2], &seq[seq.len() - 1]).1;
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |negative: bool| {
        let signs: Vec<i8> = seq.iter().map(|q| sign_at_infinity(q, negative)).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(true) - changes(false)
}

/// Every root of the (nonconstant) polynomial is real.
pub fn is_real_rooted(p: &[BigInt]) -> bool {
    let p = to_q(p);
    squarefree_factors(&p).iter().all(|(f, _)| distinct_real_roots(f) == deg(f))
}

fn nonnegative_on_reals(w: &QPoly) -> bool {
    if w.is_empty() {
        return true;
    }
    if w[0].is_negative() {
        return false;
    }
    squarefree_factors(w).iter().all(|(f, k)| k % 2 == 0 || distinct_real_roots(f) == 0)
}

/// `q` (degree `deg p − 1`, positive leading coefficient) interlaces the
/// real-rooted `p`: equivalently `p'q − pq' ≥ 0` on the whole real line.
pub fn interlaces(q: &[BigInt], p: &[BigInt]) -> bool {
    let (p, q) = (to_q(p), to_q(q));
    if deg(&q) + 1 != deg(&p) {
        return false;
    }
    let w = sub(&mul(&derivative(&p), &q), &mul(&p, &derivative(&q)));
    nonnegative_on_reals(&w)
}

fn eval_f64(p: &[f64], x: f64) -> f64 {
    p.iter().fold(0.0, |acc, c| acc * x + c)
}

/// Roots of a real-rooted square-free polynomial, descending. The roots of
/// the derivative separate them, so each one is found by bisection.
fn simple_real_roots(p: &[f64]) -> Vec<f64> {
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let bound = 1.0 + p[1..].iter().map(|c| (c / p[0]).abs()).fold(0.0, f64::max);
    let dp: Vec<f64> = p[..d].iter().enumerate().map(|(i, c)| c * (d - i) as f64).collect();
    let mut fences = vec![bound];
    fences.extend(simple_real_roots(&dp));
    fences.push(-bound);
    fences
        .windows(2)
        .map(|w| {
            let (mut hi, mut lo) = (w[0], w[1]);
            let up = eval_f64(p, hi) > 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if (eval_f64(p, mid) > 0.0) == up {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Roots with multiplicity, descending. `None` unless real-rooted.
fn real_roots(p: &[BigInt]) -> Option<Vec<f64>> {
    let mut roots = Vec::new();
    for (f, k) in squarefree_factors(&to_q(p)) {
        if distinct_real_roots(&f) != deg(&f) {
            return None;
        }
        let ff: Vec<f64> = f.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        for r in simple_real_roots(&ff) {
            roots.extend(std::iter::repeat_n(r, k));
        }
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Some(roots)
}

/// Approximate range of integers `t` for which every card interlaces
/// `p + t`: at the roots `μ_1 ≥ μ_2 ≥ …` of a card, `p + t` must be `≤ 0`
/// at odd positions and `≥ 0` at even ones. The window is padded; callers
/// still have to test each integer exactly.
pub fn constant_shift_window(p: &[BigInt], cards: &[Vec<BigInt>]) -> Option<(i64, i64)> {
    let pf: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for q in cards {
        for (j, mu) in real_roots(q)?.into_iter().enumerate() {
            let v = -eval_f64(&pf, mu);
            if j % 2 == 0 {
                hi = hi.min(v);
            } else {
                lo = lo.max(v);
            }
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    let slack = 1e-6 * (1.0 + lo.abs().max(hi.abs()));
    Some(((lo - slack).floor() as i64 - 1, (hi + slack).ceil() as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::poly::{charpoly, deck};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn real_rootedness() {
        assert!(is_real_rooted(&ints(&[1, 0, -1])));
        assert!(!is_real_rooted(&ints(&[1, 0, 1])));
        assert!(is_real_rooted(&ints(&[1, 0, 0, 0])));
        // (x^2 + 1)^2 has no real roots at all
        assert!(!is_real_rooted(&ints(&[1, 0, 2, 0, 1])));
        for g in [Graph::path(5), Graph::complete(4), Graph::empty(5), Graph::cycle(6)] {
            assert!(is_real_rooted(charpoly(&g).coeffs()));
        }
    }

    #[test]
    fn cards_interlace() {
        for g in [Graph::path(5), Graph::complete(4), Graph::empty(4), Graph::star(6)] {
            let p = charpoly(&g);
            let d = deck(&g, false, None).unwrap();
            for c in d.full_cards().unwrap() {
                assert!(interlaces(c.coeffs(), p.coeffs()));
            }
            let (lo, hi) = constant_shift_window(
                p.coeffs(),
                &d.full_cards().unwrap().iter().map(|c| c.coeffs().to_vec()).collect::<Vec<_>>(),
            )
            .unwrap();
            assert!(lo <= 0 && 0 <= hi, "{lo} {hi}");
        }
        assert!(!interlaces(&ints(&[1, 0]), &ints(&[1, -3, 2])));
        assert!(interlaces(&ints(&[1, -2]), &ints(&[1, -3, 2])));
    }
}
