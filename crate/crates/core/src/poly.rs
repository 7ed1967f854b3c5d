//! Dense univariate polynomials stored leading coefficient first, and
//! characteristic polynomials of graphs.
//!
//! A [`Poly`] carries its nominal degree as `coeffs.len() - 1`; leading
//! zeros are allowed so that a monic polynomial reduced modulo `M` keeps its
//! degree. [`TopCoeffs`] is the same thing with only a prefix known, which is
//! the unit in which decks get truncated.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{inconsistent, truncated, Error, Result};
use crate::graph::Graph;
use crate::ring::{binomial, Integers, Modular, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

pub type IntPoly = Poly<Integers>;

impl<R: Ring> Poly<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        let coeffs = coeffs.iter().map(|c| ring.add(c, &ring.zero())).collect();
        Poly { ring, coeffs }
    }

    pub fn zero(ring: R) -> Self {
        Poly { ring, coeffs: Vec::new() }
    }

    pub fn monomial(ring: R, degree: usize) -> Self {
        let mut coeffs = vec![ring.zero(); degree + 1];
        coeffs[0] = ring.one();
        Poly { ring, coeffs }
    }

    pub fn from_i64s(ring: R, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| ring.from_i64(v)).collect();
        Poly { ring, coeffs: c }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Leading-first coefficients.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Nominal degree; `None` for the empty (zero) polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.first().is_some_and(|c| *c == self.ring.one())
    }

    /// Coefficient of `x^{deg-k}`.
    pub fn coeff_from_top(&self, k: usize) -> R::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Sign-alternating view: with `φ = x^n − b_1 x^{n−1} + b_2 x^{n−2} − …`
    /// this returns `b_k` (and zero for `k` beyond the degree).
    pub fn b(&self, k: usize) -> R::Elem {
        let c = self.coeff_from_top(k);
        if k % 2 == 1 {
            self.ring.neg(&c)
        } else {
            c
        }
    }

    /// Drops leading zero coefficients.
    pub fn trimmed(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| self.ring.is_zero(c)).count();
        Poly { ring: self.ring.clone(), coeffs: self.coeffs[skip..].to_vec() }
    }

    /// Equality as polynomials, ignoring nominal degree.
    pub fn same_as(&self, other: &Self) -> bool {
        self.trimmed().coeffs == other.trimmed().coeffs
    }

    pub fn top(&self, s: usize) -> TopCoeffs<R> {
        let deg = self.degree().expect("top coefficients of the zero polynomial");
        TopCoeffs { ring: self.ring.clone(), degree: deg, coeffs: self.coeffs[..s.min(deg + 1)].to_vec() }
    }

    pub fn as_top(&self) -> TopCoeffs<R> {
        self.top(self.coeffs.len())
    }

    pub fn derivative(&self) -> Self {
        let Some(deg) = self.degree() else {
            return self.clone();
        };
        let coeffs = self.coeffs[..deg].iter().enumerate().map(|(k, c)| self.ring.scale(c, (deg - k) as i64)).collect();
        Poly { ring: self.ring.clone(), coeffs }
    }

    /// Sum with nominal degree the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| {
            let off = len - p.coeffs.len();
            if i < off {
                p.ring.zero()
            } else {
                p.coeffs[i - off].clone()
            }
        };
        let coeffs = (0..len).map(|i| self.ring.add(&get(self, i), &get(other, i))).collect();
        Poly { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect() }
    }

    /// `(−1)^parity · p(−x−1)`, degree preserved.
    pub fn substitute_neg_shift(&self, parity: usize) -> Self {
        let Some(deg) = self.degree() else {
            return self.clone();
        };
        let coeffs = neg_shift_prefix(&self.ring, deg, parity, &self.coeffs);
        Poly { ring: self.ring.clone(), coeffs }
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        self.coeffs.iter().fold(self.ring.zero(), |acc, c| self.ring.add(&self.ring.mul(&acc, x), c))
    }

    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Poly<S> {
        let coeffs = self.coeffs.iter().map(|c| ring.add(&f(c), &ring.zero())).collect();
        Poly { ring, coeffs }
    }
}

impl IntPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_i64s(Integers, coeffs)
    }

    pub fn reduce(&self, ring: &Modular) -> Poly<Modular> {
        self.map_ring(ring.clone(), |c| ring.reduce(c))
    }

    pub fn reduce_mod(&self, m: u64) -> Poly<Modular> {
        self.reduce(&Modular::new(m))
    }
}

/// Coefficient `j` (from the top) of `(−1)^parity · p(−x−1)` for a degree-`deg`
/// polynomial with top coefficients `top`.
///
/// Coefficient `j` of the result depends only on `top[..=j]`, so a prefix maps
/// to a prefix of the same length.
fn neg_shift_prefix<R: Ring>(ring: &R, deg: usize, parity: usize, top: &[R::Elem]) -> Vec<R::Elem> {
    // [x^{deg-j}] (-1)^parity Σ_i c_i (-1)^{deg-i} (x+1)^{deg-i}
    //   = Σ_{i<=j} c_i (-1)^{parity+deg+i} C(deg-i, j-i)
    (0..top.len())
        .map(|j| {
            (0..=j).fold(ring.zero(), |acc, i| {
                let b = ring.from_bigint(&binomial((deg - i) as u64, (j - i) as u64));
                let term = ring.mul(&top[i], &b);
                if (parity + deg + i) % 2 == 1 {
                    ring.sub(&acc, &term)
                } else {
                    ring.add(&acc, &term)
                }
            })
        })
        .collect()
}

/// The top `len()` coefficients of a polynomial of known nominal degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TopCoeffs<R: Ring> {
    ring: R,
    degree: usize,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> TopCoeffs<R> {
    pub fn new(ring: R, degree: usize, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.len() > degree + 1 {
            return Err(Error::InvalidInput(format!(
                "{} coefficients given for a degree-{degree} polynomial",
                coeffs.len()
            )));
        }
        let coeffs = coeffs.iter().map(|c| ring.add(c, &ring.zero())).collect();
        Ok(TopCoeffs { ring, degree, coeffs })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.coeffs.len() == self.degree + 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.first().is_some_and(|c| *c == self.ring.one())
    }

    pub fn truncate(&self, s: usize) -> Result<Self> {
        if s > self.coeffs.len() {
            return Err(truncated(s, self.coeffs.len()));
        }
        Ok(TopCoeffs { ring: self.ring.clone(), degree: self.degree, coeffs: self.coeffs[..s].to_vec() })
    }

    pub fn to_poly(&self) -> Result<Poly<R>> {
        if !self.is_full() {
            return Err(truncated(self.degree + 1, self.coeffs.len()));
        }
        Ok(Poly { ring: self.ring.clone(), coeffs: self.coeffs.clone() })
    }

    /// Completes the polynomial with a given constant term.
    pub fn with_constant(&self, c: R::Elem) -> Result<Poly<R>> {
        if self.coeffs.len() != self.degree {
            return Err(Error::InvalidInput("with_constant needs exactly the top `degree` coefficients".into()));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.push(c);
        Ok(Poly { ring: self.ring.clone(), coeffs })
    }

    /// Top coefficients of `(−1)^parity · p(−x−1)`; same length as `self`.
    pub fn substitute_neg_shift(&self, parity: usize) -> Self {
        let coeffs = neg_shift_prefix(&self.ring, self.degree, parity, &self.coeffs);
        TopCoeffs { ring: self.ring.clone(), degree: self.degree, coeffs }
    }

    pub fn b(&self, k: usize) -> Option<R::Elem> {
        let c = self.coeffs.get(k)?;
        Some(if k % 2 == 1 { self.ring.neg(c) } else { c.clone() })
    }

    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> TopCoeffs<S> {
        let coeffs = self.coeffs.iter().map(|c| ring.add(&f(c), &ring.zero())).collect();
        TopCoeffs { ring, degree: self.degree, coeffs }
    }
}

impl TopCoeffs<Integers> {
    pub fn reduce(&self, ring: &Modular) -> TopCoeffs<Modular> {
        self.map_ring(ring.clone(), |c| ring.reduce(c))
    }
}

/// `det(xI − A)` by the Faddeev–LeVerrier recurrence.
///
/// All intermediate matrices are integral and each division by `k` is exact;
/// the exactness is asserted.
pub fn charpoly(g: &Graph) -> IntPoly {
    let n = g.order();
    let a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j) as i64).collect()).collect();
    let mut coeffs = vec![BigInt::one()];
    // m holds M_k; the recurrence is M_1 = I, c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
    let mut m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    for k in 1..=n {
        let am: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).filter(|&l| a[i][l] != 0).map(|l| &m[l][j]).sum::<BigInt>())
                    .collect()
            })
            .collect();
        let tr: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let c = Integers.div_exact(&-tr, &BigInt::from(k)).expect("Faddeev-LeVerrier division is exact");
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
        coeffs.push(c);
    }
    Poly { ring: Integers, coeffs }
}

/// Polynomial deck, optionally with complement cards.
///
/// Cards are kept in vertex order; each family may be truncated to its top
/// coefficients (all cards in a family share one truncation length).
#[derive(Clone, Debug, PartialEq)]
pub struct Deck {
    n: usize,
    cards: Vec<TopCoeffs<Integers>>,
    co_cards: Option<Vec<TopCoeffs<Integers>>>,
}

impl Deck {
    pub fn new(
        n: usize,
        cards: Vec<TopCoeffs<Integers>>,
        co_cards: Option<Vec<TopCoeffs<Integers>>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("a deck needs at least two vertices".into()));
        }
        check_family(n, &cards, "cards")?;
        if let Some(co) = &co_cards {
            check_family(n, co, "co_cards")?;
        }
        Ok(Deck { n, cards, co_cards })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cards(&self) -> &[TopCoeffs<Integers>] {
        &self.cards
    }

    pub fn co_cards(&self) -> Option<&[TopCoeffs<Integers>]> {
        self.co_cards.as_deref()
    }

    pub fn is_generalized(&self) -> bool {
        self.co_cards.is_some()
    }

    /// Number of known coefficients per card.
    pub fn card_truncation(&self) -> usize {
        self.cards[0].len()
    }

    pub fn co_truncation(&self) -> Option<usize> {
        self.co_cards.as_ref().map(|c| c[0].len())
    }

    pub fn full_cards(&self) -> Result<Vec<IntPoly>> {
        self.cards.iter().map(TopCoeffs::to_poly).collect()
    }

    /// Truncates the card family to `t` and the complement family to `s`.
    pub fn truncated(&self, t: usize, s: Option<usize>) -> Result<Deck> {
        let cards = self.cards.iter().map(|c| c.truncate(t)).collect::<Result<_>>()?;
        let co_cards = match (&self.co_cards, s) {
            (Some(co), Some(s)) => Some(co.iter().map(|c| c.truncate(s)).collect::<Result<_>>()?),
            (co, None) => co.clone(),
            (None, Some(_)) => return Err(Error::InvalidInput("deck has no complement cards".into())),
        };
        Ok(Deck { n: self.n, cards, co_cards })
    }

    /// Drops the complement cards.
    pub fn plain(&self) -> Deck {
        Deck { n: self.n, cards: self.cards.clone(), co_cards: None }
    }

    /// Sorted card coefficient vectors: the deck as a multiset.
    pub fn fingerprint(&self) -> Vec<Vec<BigInt>> {
        let mut v: Vec<Vec<BigInt>> = self.cards.iter().map(|c| c.coeffs().to_vec()).collect();
        v.sort();
        v
    }
}

fn check_family(n: usize, cards: &[TopCoeffs<Integers>], name: &str) -> Result<()> {
    if cards.len() != n {
        return Err(Error::InvalidInput(format!("{name}: expected {n} cards, got {}", cards.len())));
    }
    let len = cards[0].len();
    for (i, c) in cards.iter().enumerate() {
        if c.degree() != n - 1 {
            return Err(Error::InvalidInput(format!("{name}[{i}] has degree {}, expected {}", c.degree(), n - 1)));
        }
        if !c.is_monic() {
            return Err(Error::InvalidInput(format!("{name}[{i}] is not monic")));
        }
        if c.len() != len {
            return Err(Error::InvalidInput(format!("{name}: mixed truncation lengths")));
        }
    }
    Ok(())
}

/// The polynomial deck of `g`; with `generalized`, also the complement cards,
/// optionally truncated to their top `truncate_co` coefficients.
pub fn deck(g: &Graph, generalized: bool, truncate_co: Option<usize>) -> Result<Deck> {
    let n = g.order();
    if n < 2 {
        return Err(Error::InvalidInput("deck needs at least two vertices".into()));
    }
    let subgraphs: Vec<Graph> = (0..n).map(|i| g.delete_vertex(i)).collect::<Result<_>>()?;
    let cards = subgraphs.iter().map(|h| charpoly(h).as_top()).collect();
    let co_cards = if generalized {
        let co: Vec<TopCoeffs<Integers>> = subgraphs.iter().map(|h| charpoly(&h.complement()).as_top()).collect();
        Some(match truncate_co {
            Some(s) => co.iter().map(|c| c.truncate(s.min(n))).collect::<Result<_>>()?,
            None => co,
        })
    } else {
        None
    };
    Deck::new(n, cards, co_cards)
}

/// Integrates the card sum: `φ' = Σ cards`.
///
/// Returns the top `t` coefficients of the degree-`n` characteristic
/// polynomial, where `t` is the card truncation (at most `n`: the constant
/// term is never determined).
pub fn integrate_cards(n: usize, cards: &[TopCoeffs<Integers>]) -> Result<TopCoeffs<Integers>> {
    let t = cards.first().map_or(0, TopCoeffs::len);
    let mut out = Vec::with_capacity(t);
    for k in 0..t {
        let sum: BigInt = cards.iter().map(|c| &c.coeffs()[k]).sum();
        // coefficient of x^{n-1-k} in φ' is (n-k) c_k
        let ck = Integers
            .div_exact(&sum, &BigInt::from(n - k))
            .ok_or_else(|| inconsistent(format!("card sum coefficient {k} not divisible by {}", n - k)))?;
        out.push(ck);
    }
    if out.first().is_some_and(|c| !c.is_one()) {
        return Err(inconsistent("card sum is not n times a monic polynomial"));
    }
    TopCoeffs::new(Integers, n, out)
}

/// Top `t` coefficients of φ^G from the plain cards.
pub fn integrate_deck(d: &Deck) -> Result<TopCoeffs<Integers>> {
    integrate_cards(d.order(), d.cards())
}

/// Top coefficients of φ^Ḡ from the complement cards.
pub fn integrate_co_deck(d: &Deck) -> Result<TopCoeffs<Integers>> {
    let co = d.co_cards().ok_or_else(|| Error::InvalidInput("deck has no complement cards".into()))?;
    integrate_cards(d.order(), co)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_ints(c)
    }

    #[test]
    fn charpoly_examples() {
        for n in 2..8 {
            let mut expected = vec![0i64; n + 1];
            expected[0] = 1;
            expected[2] = -(n as i64 - 1);
            assert_eq!(charpoly(&Graph::star(n)), ip(&expected), "star {n}");
        }
        assert_eq!(charpoly(&Graph::complete(3)), ip(&[1, 0, -3, -2]));
        assert_eq!(charpoly(&Graph::empty(4)), ip(&[1, 0, 0, 0, 0]));
        assert_eq!(charpoly(&Graph::path(4)), ip(&[1, 0, -3, 0, 1]));
        assert_eq!(charpoly(&Graph::complete(4)), ip(&[1, 0, -6, -8, -3]));
        assert_eq!(charpoly(&Graph::cycle(5)), ip(&[1, 0, -5, 0, 5, -2]));
    }

    #[test]
    fn neg_shift_examples() {
        assert_eq!(ip(&[1, 0, 0, 0]).substitute_neg_shift(3), ip(&[1, 3, 3, 1]));
        assert_eq!(ip(&[1, 0, 0, 0, 0]).substitute_neg_shift(4), ip(&[1, 4, 6, 4, 1]));
        assert_eq!(ip(&[1, 0, -1, 0]).substitute_neg_shift(3), ip(&[1, 3, 2, 0]));
        let p = ip(&[1, -2, 5, 7]);
        assert_eq!(p.substitute_neg_shift(3).substitute_neg_shift(3), p);
    }

    #[test]
    fn neg_shift_on_prefixes_agrees() {
        let p = ip(&[1, 4, -2, 9, 3]);
        let full = p.substitute_neg_shift(4);
        for s in 0..=5 {
            assert_eq!(p.top(s).substitute_neg_shift(4).coeffs(), &full.coeffs()[..s]);
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ip(&[1, 0, -3, 0, 1]).derivative(), ip(&[4, 0, -6, 0]));
        assert!(ip(&[5]).derivative().is_zero());
        assert_eq!(ip(&[1, 0, -2, 0]).derivative(), ip(&[3, 0, -2]));
    }

    #[test]
    fn b_view_is_sign_alternating() {
        let k3 = charpoly(&Graph::complete(3));
        assert_eq!(k3.b(1), BigInt::from(0));
        assert_eq!(k3.b(2), BigInt::from(-3));
        assert_eq!(k3.b(3), BigInt::from(2));
        assert_eq!(k3.b(7), BigInt::from(0));
    }

    fn sorted_cards(d: &Deck) -> Vec<IntPoly> {
        let mut v = d.full_cards().unwrap();
        v.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        v
    }

    #[test]
    fn deck_examples() {
        let d = deck(&Graph::path(3), false, None).unwrap();
        assert_eq!(sorted_cards(&d), vec![ip(&[1, 0, -1]), ip(&[1, 0, -1]), ip(&[1, 0, 0])]);
        let d = deck(&Graph::star(4), false, None).unwrap();
        assert_eq!(sorted_cards(&d), vec![ip(&[1, 0, -2, 0]), ip(&[1, 0, -2, 0]), ip(&[1, 0, -2, 0]), ip(&[1, 0, 0, 0])]);
        let d = deck(&Graph::complete(3), true, None).unwrap();
        assert!(d.full_cards().unwrap().iter().all(|c| *c == ip(&[1, 0, -1])));
        assert!(d.co_cards().unwrap().iter().all(|c| c.to_poly().unwrap() == ip(&[1, 0, 0])));
        assert!(deck(&Graph::empty(1), false, None).is_err());
        let d = deck(&Graph::path(5), true, Some(2)).unwrap();
        assert_eq!(d.co_truncation(), Some(2));
    }

    #[test]
    fn integrate_examples() {
        let p3 = integrate_deck(&deck(&Graph::path(3), false, None).unwrap()).unwrap();
        assert_eq!(p3.coeffs(), ip(&[1, 0, -2]).coeffs());
        let s4 = integrate_deck(&deck(&Graph::star(4), false, None).unwrap()).unwrap();
        assert_eq!(s4.coeffs(), ip(&[1, 0, -3, 0]).coeffs());
        let k4 = integrate_deck(&deck(&Graph::complete(4), false, None).unwrap()).unwrap();
        assert_eq!(k4.coeffs(), ip(&[1, 0, -6, -8]).coeffs());
        assert_eq!(k4.degree(), 4);
    }

    #[test]
    fn integrate_rejects_bad_sums() {
        let cards = vec![ip(&[1, 1, 0]).as_top(), ip(&[1, 0, 0]).as_top(), ip(&[1, 0, 0]).as_top()];
        assert!(matches!(integrate_cards(3, &cards), Err(Error::Inconsistent(_))));
    }
}
