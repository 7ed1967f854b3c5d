//! Coefficient rings.
//!
//! Every polynomial and series in this crate is parameterised by a [`Ring`]
//! value that owns the arithmetic. Three rings are provided: the integers,
//! the integers modulo `M`, and the rationals. Elements are plain
//! arbitrary-precision numbers; the ring keeps them canonical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arithmetic over a commutative ring with identity.
pub trait Ring: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// The unique `q` with `b * q = a`, if there is one.
    ///
    /// Over the integers this is exact division; modulo `M` it requires `b`
    /// to be a unit so that the quotient is unique.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Description used in error messages and serialized output.
    fn spec(&self) -> RingSpec;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    /// `a * k` for a machine integer `k`.
    fn scale(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(k))
    }
}

/// Which ring a value lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Modulo(BigInt),
    Rationals,
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Modulo(m) => write!(f, "Z/{m}"),
            RingSpec::Rationals => write!(f, "Q"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn spec(&self) -> RingSpec {
        RingSpec::Integers
    }
}

/// Integers modulo `M`, with residues kept in `[0, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modular {
    modulus: BigInt,
}

impl Modular {
    /// Panics if `modulus < 2`.
    pub fn new(modulus: impl Into<BigInt>) -> Self {
        let modulus = modulus.into();
        assert!(modulus >= BigInt::from(2), "modulus must be at least 2");
        Modular { modulus }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, v: &BigInt) -> BigInt {
        v.mod_floor(&self.modulus)
    }

    pub fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        let g = a.extended_gcd(&self.modulus);
        g.gcd.is_one().then(|| self.reduce(&g.x))
    }
}

impl Ring for Modular {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        self.reduce(v)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(&-a)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        self.reduce(a).is_zero()
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        self.inverse(b).map(|inv| self.mul(a, &inv))
    }
    fn spec(&self) -> RingSpec {
        RingSpec::Modulo(self.modulus.clone())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }
    fn spec(&self) -> RingSpec {
        RingSpec::Rationals
    }
}

/// Exponent of the prime `p` in `m`; `None` stands for `v_p(0) = ∞`.
pub fn valuation(m: &BigInt, p: u64) -> Option<u32> {
    if m.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = m.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn valuation_u64(m: u64, p: u64) -> u32 {
    assert!(m != 0, "valuation of zero");
    let mut m = m;
    let mut v = 0;
    while m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

/// An integer known modulo `p^precision`.
///
/// Dividing by a power of `p` lowers the precision by the same amount and is
/// only allowed when the held residue is divisible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePadic {
    p: u64,
    precision: u32,
    value: BigInt,
}

impl ResiduePadic {
    pub fn new(value: &BigInt, p: u64, precision: u32) -> Self {
        let value = value.mod_floor(&pow_u(p, precision));
        ResiduePadic { p, precision, value }
    }

    /// Two-adic shorthand.
    pub fn two_adic(value: &BigInt, precision: u32) -> Self {
        Self::new(value, 2, precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Canonical residue in `[0, p^precision)`.
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        pow_u(self.p, self.precision)
    }

    pub fn with_precision(&self, precision: u32) -> Option<Self> {
        (precision <= self.precision).then(|| Self::new(&self.value, self.p, precision))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let e = self.precision.min(other.precision);
        Self::new(&(&self.value + &other.value), self.p, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let e = self.precision.min(other.precision);
        Self::new(&(&self.value - &other.value), self.p, e)
    }

    /// Divides by `p^j`, returning `None` if the residue is not divisible or
    /// the precision would go negative.
    pub fn div_p_pow(&self, j: u32) -> Option<Self> {
        if j > self.precision {
            return None;
        }
        let d = pow_u(self.p, j);
        let (q, r) = self.value.div_rem(&d);
        r.is_zero().then(|| Self::new(&q, self.p, self.precision - j))
    }

    /// True when `v` agrees with this residue at the held precision.
    pub fn matches(&self, v: &BigInt) -> bool {
        v.mod_floor(&self.modulus()) == self.value
    }
}

impl fmt::Display for ResiduePadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.p, self.precision)
    }
}

pub fn pow_u(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_is_canonical() {
        let z4 = Modular::new(4);
        assert_eq!(z4.from_i64(-3), BigInt::from(1));
        assert_eq!(z4.sub(&BigInt::from(1), &BigInt::from(3)), BigInt::from(2));
        assert_eq!(z4.div_exact(&BigInt::from(1), &BigInt::from(3)), Some(BigInt::from(3)));
        assert_eq!(z4.div_exact(&BigInt::from(2), &BigInt::from(2)), None);
    }

    #[test]
    fn integer_exact_division() {
        assert_eq!(Integers.div_exact(&BigInt::from(12), &BigInt::from(-4)), Some(BigInt::from(-3)));
        assert_eq!(Integers.div_exact(&BigInt::from(7), &BigInt::from(2)), None);
        assert_eq!(Integers.div_exact(&BigInt::from(7), &BigInt::from(0)), None);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(48), 2), Some(4));
        assert_eq!(valuation(&BigInt::from(-9), 3), Some(2));
        assert_eq!(valuation(&BigInt::from(0), 2), None);
        assert_eq!(valuation_u64(10, 5), 1);
    }

    #[test]
    fn residue_division_lowers_precision() {
        let r = ResiduePadic::two_adic(&BigInt::from(18), 4);
        assert_eq!(r.value(), &BigInt::from(2));
        let h = r.div_p_pow(1).unwrap();
        assert_eq!(h.precision(), 3);
        assert_eq!(h.value(), &BigInt::from(1));
        assert!(h.div_p_pow(1).is_none());
        assert!(r.div_p_pow(5).is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }
}
