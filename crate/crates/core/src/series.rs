//! Truncated series in powers of `1/x`.
//!
//! A [`SeriesPrefix`] holds the first `m` coefficients `s_0, …, s_{m−1}` of
//! `S(x) = Σ_{k≥0} s_k / x^{k+1}`. Every operation states how many output
//! coefficients its inputs determine and never pads beyond that.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{truncated, Error, Result};
use crate::linalg;
use crate::poly::TopCoeffs;
use crate::ring::{Integers, Modular, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPrefix<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> SeriesPrefix<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        let coeffs = coeffs.iter().map(|c| ring.add(c, &ring.zero())).collect();
        SeriesPrefix { ring, coeffs }
    }

    pub fn from_i64s(ring: R, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| ring.from_i64(v)).collect();
        SeriesPrefix { ring, coeffs: c }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&R::Elem> {
        self.coeffs.get(k)
    }

    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m > self.len() {
            return Err(truncated(m, self.len()));
        }
        Ok(SeriesPrefix { ring: self.ring.clone(), coeffs: self.coeffs[..m].to_vec() })
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.spec().to_string(), other.ring.spec().to_string()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.check_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Ok(SeriesPrefix { ring: self.ring.clone(), coeffs })
    }

    /// Length `min(len S, len T)`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    /// Product of two length-`m` prefixes is known to `m + 1` coefficients
    /// (the product has no `1/x` term).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let m = self.len().min(other.len());
        let r = &self.ring;
        let mut coeffs = Vec::with_capacity(m + 1);
        coeffs.push(r.zero());
        for k in 1..=m {
            let c = (0..k).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(&self.coeffs[i], &other.coeffs[k - 1 - i])));
            coeffs.push(c);
        }
        Ok(SeriesPrefix { ring: r.clone(), coeffs })
    }

    /// Given the first `m` coefficients of `S²` and the nonzero `s_0`,
    /// recovers the first `m − 1` coefficients of `S`.
    ///
    /// Each step divides by `2 s_0`, which must divide exactly in the ring.
    pub fn sqrt_prefix(&self, s0: &R::Elem) -> Result<Self> {
        let r = &self.ring;
        let u = &self.coeffs;
        if r.is_zero(s0) {
            return Err(Error::InvalidInput("s0 must be nonzero".into()));
        }
        if u.is_empty() {
            return Err(truncated(1, 0));
        }
        if !r.is_zero(&u[0]) {
            return Err(Error::NotSquare("first coefficient of a square must be zero".into()));
        }
        let m = u.len();
        let mut s: Vec<R::Elem> = Vec::with_capacity(m - 1);
        if m >= 2 {
            if u[1] != r.mul(s0, s0) {
                return Err(Error::NotSquare(format!("u_1 = {:?} is not s0^2", u[1])));
            }
            s.push(s0.clone());
        }
        let two_s0 = r.scale(s0, 2);
        for k in 2..m {
            // 2 s0 s_{k-1} = u_k - Σ_{i=1}^{k-2} s_i s_{k-1-i}
            let rest = (1..k - 1).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(&s[i], &s[k - 1 - i])));
            let rhs = r.sub(&u[k], &rest);
            let next = r
                .div_exact(&rhs, &two_s0)
                .ok_or_else(|| Error::NotSquare(format!("coefficient {k}: 2·s0 does not divide {rhs:?}")))?;
            s.push(next);
        }
        Ok(SeriesPrefix { ring: r.clone(), coeffs: s })
    }

    /// Given the first `m + 1` coefficients of `S·T` (`self`) and `m`
    /// coefficients of `S` with `s_0` a unit, recovers `m` coefficients of `T`.
    pub fn deconvolve(&self, divisor: &Self) -> Result<Self> {
        self.check_ring(divisor)?;
        let r = &self.ring;
        let u = &self.coeffs;
        let s = &divisor.coeffs;
        let m = (u.len().saturating_sub(1)).min(s.len());
        if u.first().is_some_and(|u0| !r.is_zero(u0)) {
            return Err(Error::InvalidInput("product series must have zero first coefficient".into()));
        }
        let s0 = s.first().ok_or_else(|| truncated(1, 0))?;
        let inv_check = r.div_exact(&r.one(), s0).ok_or_else(|| Error::NotInvertible(format!("{s0:?}")))?;
        let mut t: Vec<R::Elem> = Vec::with_capacity(m);
        for k in 1..=m {
            // s0 t_{k-1} = u_k - Σ_{i=1}^{k-1} s_i t_{k-1-i}
            let rest = (1..k).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(&s[i], &t[k - 1 - i])));
            t.push(r.mul(&r.sub(&u[k], &rest), &inv_check));
        }
        Ok(SeriesPrefix { ring: r.clone(), coeffs: t })
    }

    /// Expansion of `p/q`: `p` has degree `n − 1` (leading coefficient
    /// possibly zero) and `q` is monic of degree `n`. The top `m` coefficients
    /// of each determine `s_0, …, s_{m−1}` through a unit lower-triangular
    /// Toeplitz system. Full (untruncated) inputs give any number of
    /// coefficients.
    pub fn ratio(p: &TopCoeffs<R>, q: &TopCoeffs<R>, m: usize) -> Result<Self> {
        if p.degree() + 1 != q.degree() {
            return Err(Error::InvalidInput(format!(
                "numerator degree {} must be one less than denominator degree {}",
                p.degree(),
                q.degree()
            )));
        }
        if !q.is_monic() {
            return Err(Error::InvalidInput("denominator must be monic".into()));
        }
        let pad = |t: &TopCoeffs<R>| {
            let mut c = t.coeffs().to_vec();
            if t.is_full() && c.len() < m {
                c.resize(m, t.ring().zero());
            }
            c
        };
        Self::ratio_unchecked(q.ring(), &pad(p), &pad(q), m)
    }

    /// Like [`ratio`](Self::ratio) without degree bookkeeping: `a` and `b`
    /// are leading-first coefficient runs with `b[0] = 1`. Coefficients of
    /// `a` or `b` past the end of a polynomial must be supplied as zeros.
    pub fn ratio_unchecked(ring: &R, a: &[R::Elem], b: &[R::Elem], m: usize) -> Result<Self> {
        if a.len() < m {
            return Err(truncated(m, a.len()));
        }
        if b.len() < m {
            return Err(truncated(m, b.len()));
        }
        let mut s: Vec<R::Elem> = Vec::with_capacity(m);
        for k in 0..m {
            // Σ_{j=0}^{k} b_j s_{k-j} = a_k
            let rest = (1..=k).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&b[j], &s[k - j])));
            s.push(ring.sub(&a[k], &rest));
        }
        Ok(SeriesPrefix { ring: ring.clone(), coeffs: s })
    }

    /// Numerator coefficients `a_0, …, a_{m−1}` of `S · q` where `q` is monic
    /// with top coefficients `b`: the inverse of [`ratio_unchecked`](Self::ratio_unchecked).
    pub fn numerator(&self, b: &[R::Elem], m: usize) -> Result<Vec<R::Elem>> {
        if self.len() < m {
            return Err(truncated(m, self.len()));
        }
        if b.len() < m {
            return Err(truncated(m, b.len()));
        }
        let r = &self.ring;
        Ok((0..m)
            .map(|k| (0..=k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&b[j], &self.coeffs[k - j]))))
            .collect())
    }
}

impl SeriesPrefix<Integers> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        SeriesPrefix::from_i64s(Integers, coeffs)
    }

    pub fn reduce(&self, ring: &Modular) -> SeriesPrefix<Modular> {
        SeriesPrefix { ring: ring.clone(), coeffs: self.coeffs.iter().map(|c| ring.reduce(c)).collect() }
    }

    /// The `l × l` Hankel block `[s_{l−1} … s_0; …; s_{2l−2} … s_{l−1}]`.
    fn hankel_block(&self, l: usize) -> Result<Vec<Vec<BigInt>>> {
        if l == 0 {
            return Ok(Vec::new());
        }
        if self.len() < 2 * l - 1 {
            return Err(truncated(2 * l - 1, self.len()));
        }
        Ok((0..l).map(|r| (0..l).map(|c| self.coeffs[r + l - 1 - c].clone()).collect()).collect())
    }

    /// Whether the `l × l` Hankel block is invertible over `Q`. For a
    /// rational series this holds exactly when `l` is at most the degree of
    /// its reduced denominator.
    pub fn hankel_invertible(&self, l: usize) -> Result<bool> {
        Ok(!linalg::determinant(&self.hankel_block(l)?).is_zero())
    }

    /// Largest `l` for which the Hankel block is invertible, using every
    /// available coefficient.
    pub fn hankel_rank(&self) -> usize {
        let mut best = 0;
        for l in 1..=self.len().div_ceil(2) {
            if self.hankel_invertible(l).unwrap_or(false) {
                best = l;
            }
        }
        best
    }

    /// Completes a monic denominator `q = x^n + c_1 x^{n−1} + … + c_n` of
    /// degree `n` from its known coefficients `c_1, …, c_{t−1}`, using the
    /// Hankel rows `Σ_j c_j s_{r−j} = 0` for `r ≥ n`.
    ///
    /// Needs `2n − t + 1` coefficients. Returns `c_t, …, c_n`. Every row
    /// beyond the square block is checked as well.
    pub fn hankel_tail_solve(&self, n: usize, known: &[BigInt]) -> Result<Vec<BigInt>> {
        let t = known.len() + 1;
        if t > n + 1 {
            return Err(Error::InvalidInput("more known coefficients than the degree".into()));
        }
        let unknowns = n + 1 - t;
        if unknowns == 0 {
            return Ok(Vec::new());
        }
        let needed = 2 * n - t + 1;
        if self.len() < needed {
            return Err(truncated(needed, self.len()));
        }
        let s = &self.coeffs;
        let mut c: Vec<BigInt> = std::iter::once(BigInt::one()).chain(known.iter().cloned()).collect();
        let q = |v: &BigInt| BigRational::from_integer(v.clone());
        let row = |r: usize| -> (Vec<BigRational>, BigRational) {
            let lhs = (t..=n).map(|j| q(&s[r - j])).collect();
            let rhs: BigInt = (0..t).map(|j| &c[j] * &s[r - j]).sum();
            (lhs, q(&-rhs))
        };
        let (a, b): (Vec<_>, Vec<_>) = (n..n + unknowns).map(row).unzip();
        let x = linalg::solve(&a, &b).ok_or(Error::Singular { size: unknowns })?;
        for (j, v) in x.iter().enumerate() {
            if !v.is_integer() {
                return Err(Error::Inconsistent(format!("coefficient c_{} = {v} is not an integer", t + j)));
            }
        }
        c.extend(x.into_iter().map(|v| v.to_integer()));
        for r in n..self.len() {
            let v: BigInt = (0..=n).map(|j| &c[j] * &s[r - j]).sum();
            if !v.is_zero() {
                return Err(Error::Inconsistent(format!("Hankel row {r} not satisfied")));
            }
        }
        Ok(c.split_off(t))
    }
}

/// `S² (mod 4)` from `S (mod 2)`; `m` coefficients in, `m + 1` out.
pub fn square_mod2_to_mod4(s: &[u8]) -> Vec<u8> {
    let m = s.len();
    let mut t = vec![0u8; m + 1];
    for (k, slot) in t.iter_mut().enumerate().skip(1) {
        // pairs (i, k-1-i) with i < k-1-i counted twice, the middle once
        let mut v = 0u32;
        for i in 0..k {
            let j = k - 1 - i;
            if i < j {
                v += 2 * (s[i] & s[j] & 1) as u32;
            } else if i == j {
                v += (s[i] & 1) as u32;
            }
        }
        *slot = (v % 4) as u8;
    }
    t
}

/// Inverse of [`square_mod2_to_mod4`]: `m + 1` coefficients of `S² (mod 4)`
/// with `s_0` odd give `m` coefficients of `S (mod 2)`.
pub fn sqrt_mod4_to_mod2(u: &[u8]) -> Result<Vec<u8>> {
    let Some(&u0) = u.first() else {
        return Err(truncated(1, 0));
    };
    if u0 % 4 != 0 {
        return Err(Error::NotSquare("u_0 must be 0 mod 4".into()));
    }
    let m = u.len() - 1;
    let mut s: Vec<u8> = Vec::with_capacity(m);
    if m == 0 {
        return Ok(s);
    }
    if u[1] % 4 != 1 {
        return Err(Error::NotSquare(format!("u_1 = {} is not an odd square mod 4", u[1] % 4)));
    }
    s.push(1);
    for k in 2..=m {
        // 2 s0 s_{k-1} = t_k - [s_{(k-1)/2}^2] - 2 Σ_{i=1}^{..} s_i s_{k-1-i}   (mod 4)
        let mut rest = 0u32;
        for i in 1..k - 1 {
            let j = k - 1 - i;
            if i < j {
                rest += 2 * (s[i] & s[j]) as u32;
            } else if i == j {
                rest += s[i] as u32;
            }
        }
        let two_s = (u[k] as u32 + 4 * 4 - rest % 4) % 4;
        if !two_s.is_multiple_of(2) {
            return Err(Error::NotSquare(format!("coefficient {k}: residue {two_s} is odd")));
        }
        s.push((two_s / 2) as u8);
    }
    Ok(s)
}
