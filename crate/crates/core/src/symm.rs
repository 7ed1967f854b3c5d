//! Power sums versus elementary symmetric functions of the eigenvalues, at
//! prime-power precision.
//!
//! With `φ^G(x) = x^n − b_1 x^{n−1} + b_2 x^{n−2} − …`, the `b_k` are the
//! elementary symmetric functions of the eigenvalues and `tr A^m` the power
//! sums:
//!
//! ```text
//! tr A^m = Σ_{λ ⊢ m} (−1)^{m+k(λ)} · m (k(λ)−1)! / Π_j r_j(λ)! · Π_j b_j^{r_j(λ)}
//! ```
//!
//! Knowing the `b_j` modulo `p^l` pins `tr A^m` down modulo `p^{v_p(m)+l}`,
//! and conversely. Mod 4 this is enough to evaluate the congruence
//! `1^T A^m 1 ≡ tr(A^{2m})/2^t + Σ_{l=0}^{t} tr(A^{2^l u})/2^l` (`m = 2^t u`,
//! `u` odd), which in turn yields `φ^Ḡ mod 4` from `φ^G mod 4`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{inconsistent, Error, Result};
use crate::poly::Poly;
use crate::ring::{pow_u, valuation_u64, Modular, ResiduePadic, Ring};
use crate::series::SeriesPrefix;

/// A partition `λ_1 ≥ λ_2 ≥ … ≥ λ_k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(j, r_j)` pairs with `r_j > 0`, by increasing `j`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((j, r)) if *j == p => *r += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// All partitions of `m` in reverse-lexicographic order: `(m)` first,
/// `(1, …, 1)` last.
pub fn partitions(m: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        go(m, m, &mut Vec::new(), &mut out);
    }
    out
}

/// One term of the power-sum formula: `coeff · Π b_j^{r_j}`.
#[derive(Debug)]
pub(crate) struct Term {
    pub mults: Vec<(usize, u32)>,
    /// `(−1)^{m+k} m (k−1)! / Π r_j!`, an integer.
    pub coeff: BigInt,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn build_terms(m: usize) -> Vec<Term> {
    partitions(m)
        .into_iter()
        .map(|lambda| {
            let k = lambda.len();
            let mults = lambda.multiplicities();
            let num = BigInt::from(m) * factorial(k - 1);
            let den = mults.iter().fold(BigInt::one(), |acc, &(_, r)| acc * factorial(r));
            let (q, r) = num.div_rem(&den);
            assert!(r.is_zero(), "partition coefficient for {:?} is not an integer", lambda.parts);
            let coeff = if (m + k) % 2 == 1 { -q } else { q };
            Term { mults: mults.into_iter().map(|(j, r)| (j, r as u32)).collect(), coeff }
        })
        .collect()
}

/// Memoised terms for `m`; safe to call from many threads.
pub(crate) fn terms(m: usize) -> Arc<Vec<Term>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<Term>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("partition cache poisoned").get(&m) {
        return Arc::clone(t);
    }
    let built = Arc::new(build_terms(m));
    let mut w = cache.write().expect("partition cache poisoned");
    Arc::clone(w.entry(m).or_insert(built))
}

/// `tr A^m` as a polynomial in `b_1, b_2, …` evaluated in `ring`;
/// `b[j − 1]` holds `b_j` and missing entries count as zero.
pub fn trace_from_coeffs<R: Ring>(ring: &R, m: usize, b: &[R::Elem]) -> R::Elem {
    let get = |j: usize| b.get(j - 1).filter(|v| !ring.is_zero(v));
    terms(m).iter().fold(ring.zero(), |acc, t| {
        let mut prod = ring.from_bigint(&t.coeff);
        for &(j, r) in &t.mults {
            let Some(bj) = get(j) else { return acc };
            for _ in 0..r {
                prod = ring.mul(&prod, bj);
            }
        }
        ring.add(&acc, &prod)
    })
}

/// Exact `tr A^m` from integer `b`'s.
pub fn power_sum(m: usize, b: &[BigInt]) -> BigInt {
    trace_from_coeffs(&crate::ring::Integers, m, b)
}

/// The sign-alternating coefficients `b_1, …, b_n` of a polynomial.
pub fn b_coeffs<R: Ring>(p: &Poly<R>) -> Vec<R::Elem> {
    (1..p.coeffs().len()).map(|k| p.b(k)).collect()
}

/// `tr A^m (mod p^{v_p(m)+l})` for `m = 1, …, b.len()`, from `b_j (mod p^l)`.
///
/// The residues are lifted to integers as given; the result does not depend
/// on the lift.
pub fn traces_mod(b: &[BigInt], p: u64, l: u32) -> Vec<ResiduePadic> {
    (1..=b.len())
        .map(|m| {
            let e = valuation_u64(m as u64, p) + l;
            let z = Modular::new(pow_u(p, e));
            let lifted: Vec<BigInt> = b[..m].iter().map(|v| z.reduce(v)).collect();
            ResiduePadic::new(&trace_from_coeffs(&z, m, &lifted), p, e)
        })
        .collect()
}

/// Inverse of [`traces_mod`]: `b_1, …, b_k (mod p^l)` from the traces
/// `tr A^m (mod p^{v_p(m)+l})`, `m = 1, …, k`.
pub fn coeffs_from_traces(traces: &[ResiduePadic], p: u64, l: u32) -> Result<Vec<BigInt>> {
    let pl = pow_u(p, l);
    let mut b: Vec<BigInt> = Vec::with_capacity(traces.len());
    for (idx, tr) in traces.iter().enumerate() {
        let m = idx + 1;
        let v = valuation_u64(m as u64, p);
        let e = v + l;
        if tr.p() != p || tr.precision() < e {
            return Err(Error::InvalidInput(format!("trace {m} needs precision {p}^{e}, has {tr}")));
        }
        let z = Modular::new(pow_u(p, e));
        // tr A^m = rest + (−1)^{m+1} m b_m, where rest is the sum with b_m = 0
        let mut padded = b.clone();
        padded.push(BigInt::zero());
        let rest = trace_from_coeffs(&z, m, &padded);
        let mut x = z.sub(tr.value(), &rest);
        if m % 2 == 0 {
            x = z.neg(&x);
        }
        let scaled = ResiduePadic::new(&x, p, e)
            .div_p_pow(v)
            .ok_or_else(|| inconsistent(format!("trace {m} is not consistent with the lower traces")))?;
        let unit = BigInt::from(m as u64 / p.pow(v));
        let inv = Modular::new(pl.clone()).inverse(&unit).expect("unit part is invertible");
        b.push((scaled.value() * inv).mod_floor(&pl));
    }
    Ok(b)
}

/// `1^T A^m 1 (mod 4)` from traces, for `m ≥ 1`.
///
/// With `m = 2^t u`, `u` odd, this is
/// `tr(A^{2m})/2^t + Σ_{l=0}^{t} tr(A^{2^l u})/2^l (mod 4)`; the summands
/// need not be integers, only the total. `trace(k)` must return `tr A^k`
/// to at least `v_2(k) + 2` bits (`tr A^{2m}` to `t + 2` bits).
pub fn gram_walk_mod4(m: usize, trace: impl Fn(usize) -> Option<ResiduePadic>) -> Result<u8> {
    if m == 0 {
        return Err(Error::InvalidInput("gram_walk_mod4 needs m >= 1".into()));
    }
    let t = m.trailing_zeros();
    let u = m >> t;
    let e = t + 1;
    let modulus = pow_u(2, e + 2);
    let mut total = BigInt::zero();
    let mut add = |k: usize, needed: u32, weight: u32| -> Result<()> {
        let tr = trace(k).ok_or_else(|| Error::InvalidInput(format!("trace of A^{k} unavailable")))?;
        if tr.p() != 2 || tr.precision() < needed {
            return Err(Error::InvalidInput(format!("tr A^{k} needs 2^{needed}, has {tr}")));
        }
        total += tr.value() << weight;
        Ok(())
    };
    for l in 0..=t {
        add(u << l, l + 2, e - l)?;
    }
    add(2 * m, t + 2, 1)?;
    let total = total.mod_floor(&modulus);
    let (q, r) = total.div_rem(&pow_u(2, e));
    if !r.is_zero() {
        return Err(inconsistent(format!("walk congruence for m = {m} is not 2-integral")));
    }
    Ok(q.to_u8().expect("residue mod 4"))
}

/// Exact trace as a residue (for feeding [`gram_walk_mod4`] with known traces).
pub fn exact_residue(v: &BigInt, precision: u32) -> ResiduePadic {
    ResiduePadic::two_adic(v, precision)
}

/// `φ^Ḡ (mod 4)` from `φ^G (mod 4)`.
///
/// The input must be a monic polynomial modulo 4 whose nominal degree is the
/// vertex count.
pub fn complement_charpoly_mod4(phi: &Poly<Modular>) -> Result<Poly<Modular>> {
    let z4 = Modular::new(4);
    if phi.ring() != &z4 {
        return Err(Error::RingMismatch(phi.ring().spec().to_string(), z4.spec().to_string()));
    }
    if phi.coeffs().is_empty() || !phi.coeffs()[0].is_one() {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    let n = phi.coeffs().len() - 1;
    if n == 0 {
        return Err(Error::OutOfRange(0));
    }
    let mut b = b_coeffs(phi);
    b.resize(2 * n, BigInt::zero());
    let traces = traces_mod(&b[..2 * n - 2], 2, 2);
    let mut w = vec![z4.from_i64(n as i64)];
    for k in 1..n {
        let wk = gram_walk_mod4(k, |j| traces.get(j - 1).cloned())
            .map_err(|e| inconsistent(format!("not the mod-4 polynomial of a graph: {e}")))?;
        w.push(BigInt::from(wk));
    }
    let num = SeriesPrefix::new(z4.clone(), w).numerator(&phi.coeffs()[..n], n)?;
    let mut shifted = vec![BigInt::one()];
    shifted.extend((1..=n).map(|j| z4.add(&phi.coeffs()[j], &num[j - 1])));
    Ok(Poly::new(z4, shifted).substitute_neg_shift(n))
}
