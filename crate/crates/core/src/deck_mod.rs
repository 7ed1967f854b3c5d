//! What the plain polynomial deck determines modulo 2 and 4.
//!
//! Everything starts from [`base_mod_data`]: the mod-4 complement cards give
//! `w^{G∖i} (mod 4)`, the integrated deck gives `φ^G` up to its constant and
//! hence exact `w_{i,i}` prefixes and traces, and the Godsil–McKay identity
//! read modulo 4 gives the first `⌈n/2⌉` coefficients of `w_i (mod 2)`.
//!
//! Series are stored as `u8` residues, first coefficient first.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{inconsistent, Error, Result};
use crate::graph::Graph;
use crate::linalg;
use crate::oracle;
use crate::realroots;
use crate::poly::{charpoly, deck, integrate_deck, Deck, IntPoly, Poly, TopCoeffs};
use crate::ring::{Integers, Modular, ResiduePadic, Ring};
use crate::series::{sqrt_mod4_to_mod2, square_mod2_to_mod4, SeriesPrefix};
use crate::symm::{complement_charpoly_mod4, exact_residue, gram_walk_mod4, trace_from_coeffs};
use crate::walks::{total_walks_from_pair, trace_prefix, wii_prefix};

fn res(v: &BigInt, m: u8) -> u8 {
    v.mod_floor(&BigInt::from(m)).to_u8().expect("small residue")
}

/// Convolution modulo 4, first `len` terms.
fn conv4(a: &[u8], b: &[u8], len: usize) -> Vec<u8> {
    (0..len).map(|k| ((0..=k).map(|i| a[i] as u32 * b[k - i] as u32).sum::<u32>() % 4) as u8).collect()
}

/// `t` with `conv(d, t) = u (mod 4)`; `d_0` must be odd.
fn deconv4(u: &[u8], d: &[u8], len: usize) -> Vec<u8> {
    let inv = d[0] % 4; // 1 and 3 are their own inverses
    let mut t: Vec<u8> = Vec::with_capacity(len);
    for k in 0..len {
        let rest: u32 = (1..=k).map(|i| d[i] as u32 * t[k - i] as u32).sum();
        t.push((((u[k] as u32 + 4 * 64 - rest % 4) % 4) * inv as u32 % 4) as u8);
    }
    t
}

fn sub4(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| (x + 4 - y) % 4).collect()
}

/// `1^T A^{2k} 1 (mod 4)` from the entries of `A^k 1 (mod 2)`.
pub fn gram_rows_mod4(rows: &[u8]) -> u8 {
    (rows.iter().filter(|&&r| r % 2 == 1).count() % 4) as u8
}

/// Stage data shared by the mod-2/mod-4 pipelines.
#[derive(Clone, Debug)]
pub struct ModDeckData {
    pub n: usize,
    /// `w^{G∖i} (mod 4)`, `2n + 4` coefficients
    pub wgi_mod4: Vec<Vec<u8>>,
    /// `φ^{Ḡ∖i} (mod 4)`
    pub co_cards_mod4: Vec<Poly<Modular>>,
    /// exact `w_{i,i}`, `n` coefficients
    pub wii: Vec<Vec<BigInt>>,
    /// exact `tr A^k`, `k < n`
    pub traces: Vec<BigInt>,
    /// `w^G (mod 4)`, `⌈n/2⌉` coefficients
    pub wg_mod4: Vec<u8>,
    /// `w_i (mod 2)`, `⌈n/2⌉` coefficients
    pub wi_mod2: Vec<Vec<u8>>,
    /// top `n` coefficients of `φ^G`
    pub phi_top: TopCoeffs<Integers>,
    pub cards: Vec<Vec<BigInt>>,
}

impl ModDeckData {
    /// `b_k` for `1 ≤ k < n`.
    fn b(&self, k: usize) -> BigInt {
        self.phi_top.b(k).expect("k < n")
    }

    fn b_parity(&self, k: usize) -> u8 {
        res(&self.b(k), 2)
    }

    fn cards_mod4(&self, i: usize) -> Vec<BigInt> {
        self.cards[i].iter().map(|v| Modular::new(4).reduce(v)).collect()
    }

    fn wii_mod4(&self, i: usize) -> Vec<u8> {
        self.wii[i].iter().map(|v| res(v, 4)).collect()
    }

    /// Godsil–McKay modulo 4: `w_i (mod 2)` to `len` coefficients from
    /// `len` coefficients of `w^G (mod 4)`.
    fn walks_from_vertices(&self, wg: &[u8], len: usize) -> Result<Vec<Vec<u8>>> {
        (0..self.n)
            .map(|i| {
                let diff = sub4(&wg[..len], &self.wgi_mod4[i][..len]);
                let mut sq = vec![0u8];
                sq.extend(conv4(&diff, &self.wii_mod4(i), len));
                sqrt_mod4_to_mod2(&sq).map_err(|e| inconsistent(format!("walks from vertex {i}: {e}")))
            })
            .collect()
    }

    /// Column `k` of the walk matrix modulo 2 from the per-vertex series.
    fn column(rows: &[Vec<u8>], k: usize) -> Vec<u8> {
        rows.iter().map(|r| r[k]).collect()
    }
}

fn require_full(d: &Deck) -> Result<usize> {
    let n = d.order();
    if n < 3 {
        return Err(Error::OutOfRange(n));
    }
    if !d.cards()[0].is_full() {
        return Err(Error::InvalidInput("untruncated cards are required".into()));
    }
    Ok(n)
}

/// Everything the deck gives before any mod-2 constant is known.
pub fn base_mod_data(d: &Deck) -> Result<ModDeckData> {
    let n = require_full(d)?;
    let z4 = Modular::new(4);
    let phi_top = integrate_deck(d)?;
    let (wgi_mod4, co_cards_mod4): (Vec<Vec<u8>>, Vec<Poly<Modular>>) = d
        .cards()
        .iter()
        .map(|card| {
            let card4 = card.reduce(&z4);
            let co4 = complement_charpoly_mod4(&card4.to_poly()?)?;
            let w = total_walks_from_pair(&card4, &co4.as_top(), 2 * n + 4)?;
            Ok((w.coeffs().iter().map(|v| res(v, 4)).collect(), co4))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let wii = d
        .cards()
        .iter()
        .map(|card| Ok(wii_prefix(card, &phi_top, n)?.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let traces = trace_prefix(&phi_top, d.cards(), n)?.coeffs().to_vec();
    let h = n.div_ceil(2);
    let mut wg_mod4 = vec![(n % 4) as u8];
    for k in 1..h {
        wg_mod4.push(gram_walk_mod4(k, |j| traces.get(j).map(|t| exact_residue(t, 64)))?);
    }
    let mut data = ModDeckData { n, wgi_mod4, co_cards_mod4, wii, traces, wg_mod4, wi_mod2: Vec::new(), phi_top, cards: d.cards().iter().map(|c| c.coeffs().to_vec()).collect() };
    data.wi_mod2 = data.walks_from_vertices(&data.wg_mod4, h)?;
    Ok(data)
}

/// How the constant coefficient modulo 2 was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mod2Route {
    /// odd order: the constant is always even
    ForcedEven,
    /// `n ≡ 0 (mod 4)`: the mod-2 walk relation at column `n/2`
    WalkRelation,
    /// `n ≡ 2 (mod 4)` with some `b_k` odd, `k ≡ 2 (mod 4)`, `k ≤ n − 4`
    OddCoefficientTrace,
    /// `n ≡ 2 (mod 4)` otherwise: the trace of `A^{2n+4}`
    LongTrace,
    /// the long-trace congruence is satisfied by both parities; the parity
    /// is the one compatible with all mod-4 walk congruences
    Elimination,
    /// the mod-4 data leaves both parities; the constant is pinned down by
    /// requiring every card to interlace `φ^G`
    Interlacing,
    /// nothing above separates the parities; every graph with this deck is
    /// enumerated (small orders only)
    Realization,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantMod2 {
    pub value: u8,
    pub route: Mod2Route,
}

/// `b_n (mod 2)`, the constant coefficient of `φ^G` modulo 2.
pub fn constant_mod2(d: &Deck) -> Result<ConstantMod2> {
    let data = base_mod_data(d)?;
    constant_mod2_from(&data)
}

fn constant_mod2_from(data: &ModDeckData) -> Result<ConstantMod2> {
    let n = data.n;
    let (value, route) = if n % 2 == 1 {
        (0, Mod2Route::ForcedEven)
    } else if n.is_multiple_of(4) {
        (constant_0mod4(data)?, Mod2Route::WalkRelation)
    } else if let Some(k) = (2..=n - 4).step_by(4).find(|&k| data.b_parity(k) == 1) {
        (constant_2mod4_odd_coefficient(data, k)?, Mod2Route::OddCoefficientTrace)
    } else if let Some(v) = constant_2mod4_long_trace(data)? {
        (v, Mod2Route::LongTrace)
    } else {
        let alive: Vec<u8> = (0..4).filter(|&c| hypothesis_consistent(data, c)).collect();
        match (alive.iter().any(|c| c % 2 == 0), alive.iter().any(|c| c % 2 == 1)) {
            (true, false) => (0, Mod2Route::Elimination),
            (false, true) => (1, Mod2Route::Elimination),
            (true, true) => match interlacing_parity(data, &alive)? {
                Some(v) => (v, Mod2Route::Interlacing),
                None => (realization_parity(data)?, Mod2Route::Realization),
            },
            (false, false) => return Err(inconsistent("no value of b_n mod 4 is consistent")),
        }
    };
    Ok(ConstantMod2 { value, route })
}

fn constant_0mod4(data: &ModDeckData) -> Result<u8> {
    let n = data.n;
    let mut wg = data.wg_mod4.clone();
    wg.push(gram_rows_mod4(&ModDeckData::column(&data.wi_mod2, n / 4)));
    let rows = data.walks_from_vertices(&wg, n / 2 + 1)?;
    // A^{n/2}1 + b_2 A^{n/2−1}1 + … + b_{n−2} A1 + b_n 1 ≡ 0
    let mut value = None;
    for (i, r) in rows.iter().enumerate() {
        let v = (1..n / 2).fold(r[n / 2], |acc, j| acc ^ (data.b_parity(2 * j) & r[n / 2 - j]));
        if *value.get_or_insert(v) != v {
            return Err(inconsistent(format!("walk relation at vertex {i} gives a different constant")));
        }
    }
    Ok(value.expect("n >= 4"))
}

/// `tr A^m` with the known `b_1, …, b_{n−1}` and `b_n = beta`.
fn trace_with(data: &ModDeckData, m: usize, beta: u8) -> BigInt {
    let mut b: Vec<BigInt> = (1..data.n).map(|k| data.b(k)).collect();
    b.push(BigInt::from(beta));
    trace_from_coeffs(&Integers, m, &b)
}

/// Picks the unique `β ∈ {0, 1}` satisfying `ok`.
fn unique_candidate(what: &str, ok: impl Fn(u8) -> bool) -> Result<u8> {
    match (ok(0), ok(1)) {
        (true, false) => Ok(0),
        (false, true) => Ok(1),
        (true, true) => Err(inconsistent(format!("{what}: both parities fit"))),
        (false, false) => Err(inconsistent(format!("{what}: no parity fits"))),
    }
}

/// `m = n + k` with `b_k` odd: `tr A^m (mod 2^{v_2(m)+1})` is known from the
/// walk count `1^T A^{m/2} 1 (mod 4)`, and `b_n` enters it linearly with an
/// odd multiple of `2^{v_2(m)}`.
fn constant_2mod4_odd_coefficient(data: &ModDeckData, k: usize) -> Result<u8> {
    let n = data.n;
    let m = n + k;
    let half = m / 2;
    let w_half = gram_rows_mod4(&ModDeckData::column(&data.wi_mod2, half / 2));
    // 2^{t+1} W ≡ 2 tr A^m + Σ_{l≤t} tr A^{2^l u} 2^{t+1−l}  (mod 2^{t+3}), half = 2^t u
    let t = half.trailing_zeros();
    let u = half >> t;
    let modulus = BigInt::one() << (t + 3);
    let known: BigInt = (0..=t).map(|l| &data.traces[u << l] << (t + 1 - l)).sum();
    let target = (BigInt::from(w_half) << (t + 1)) - known;
    unique_candidate("odd-coefficient trace", |beta| {
        let diff: BigInt = trace_with(data, m, beta) * 2 - &target;
        diff.mod_floor(&modulus).is_zero()
    })
}

/// The remaining `n ≡ 2 (mod 4)` case.
///
/// With `b_2` even, `y_i = e_i^T(A^{n/2+1} + b_n A)1 (mod 2)` is a
/// combination of known walk columns, and
/// `Σ y_i^2 ≡ 1^T A^{n+2} 1 + b_n 1^T A^2 1 (mod 4)`. The walk count is
/// then rewritten through traces, of which `tr A^{n+2}` and `tr A^{2n+4}`
/// involve `b_n`.
fn constant_2mod4_long_trace(data: &ModDeckData) -> Result<Option<u8>> {
    let n = data.n;
    let y: Vec<u8> = data
        .wi_mod2
        .iter()
        .map(|r| (2..n / 2).fold(0u8, |acc, j| acc ^ (data.b_parity(2 * j) & r[n / 2 + 1 - j])))
        .collect();
    let q = gram_rows_mod4(&y) as i64;
    let w2 = degree_square_sum(data);
    let k = n + 2;
    let t = k.trailing_zeros();
    let modulus = BigInt::one() << (t + 3);
    let u = k >> t;
    let known: BigInt = (0..t).map(|l| &data.traces[u << l] << (t + 1 - l)).sum();
    let fits = |beta: u8| {
        let walks = (BigInt::from(q) - BigInt::from(beta) * &w2) << (t + 1);
        let traces = (trace_with(data, 2 * k, beta) + trace_with(data, k, beta)) * 2 + &known;
        let diff: BigInt = walks - traces;
        diff.mod_floor(&modulus).is_zero()
    };
    match (fits(0), fits(1)) {
        (true, true) => Ok(None),
        _ => unique_candidate("long trace", fits).map(Some),
    }
}

/// `1^T A^2 1 = Σ_i d_i^2`, with `d_i = e_i^T A^2 e_i`.
fn degree_square_sum(data: &ModDeckData) -> BigInt {
    data.wii.iter().map(|w| &w[2] * &w[2]).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem4Output {
    pub bn_mod2: u8,
    pub bn_route: Mod2Route,
    /// columns `A^k 1 (mod 2)`, `k < n`
    pub walk_matrix_mod2: Vec<Vec<u8>>,
    pub phibar_top_mod4: Vec<u8>,
    pub phibar_const_mod2: u8,
}

impl Theorem4Output {
    pub fn rank_f2(&self) -> usize {
        let n = self.walk_matrix_mod2.len();
        let masks: Vec<u64> = self
            .walk_matrix_mod2
            .iter()
            .map(|c| c.iter().enumerate().fold(0u64, |m, (i, &b)| m | ((b as u64 & 1) << i)))
            .collect();
        linalg::rank_f2(&masks[..n])
    }
}

/// Intermediate results reused by [`theorem5`].
struct Extended {
    out: Theorem4Output,
    /// `w_i (mod 2)`, `n + 2` coefficients
    rows: Vec<Vec<u8>>,
    /// `w^G (mod 4)`, `n` coefficients
    wg: Vec<u8>,
    /// `φ^G (mod 2)`, all coefficients
    phi_mod2: Vec<u8>,
}

/// `φ^Ḡ` (top coefficients) from `φ^G` and `w^G` prefixes, both modulo `m`.
fn complement_top(phi: &[u8], wg: &[u8], n: usize, len: usize, m: u8) -> Vec<u8> {
    let ring = Modular::new(m as u32);
    let big = |v: &[u8]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let num = SeriesPrefix::new(ring.clone(), big(wg)).numerator(&big(phi), len - 1).expect("lengths checked");
    let mut shifted = vec![BigInt::one()];
    shifted.extend((1..len).map(|j| ring.add(&BigInt::from(phi[j]), &num[j - 1])));
    let top = TopCoeffs::new(ring, n, shifted).expect("monic prefix");
    top.substitute_neg_shift(n).coeffs().iter().map(|v| res(v, m)).collect()
}

/// With `b_n ≡ bn (mod 2)`: `w_i (mod 2)` to `n + 2` coefficients through the
/// mod-2 walk relation, and `w^G (mod 4)` to `n` coefficients.
fn extend(data: &ModDeckData, bn: u8) -> Result<(Vec<Vec<u8>>, Vec<u8>)> {
    let n = data.n;
    let h = n.div_ceil(2);
    let b2 = |j: usize| if 2 * j == n { bn } else { data.b_parity(2 * j) };
    // A^{h}1 ≡ Σ_j b_{2j} A^{h−j}1 (mod 2), j = 1..⌊n/2⌋
    let mut rows = data.wi_mod2.clone();
    for r in rows.iter_mut() {
        while r.len() < n + 2 {
            let c = r.len();
            let v = (1..=n / 2).fold(0u8, |acc, j| acc ^ (b2(j) & r[c - j]));
            r.push(v);
        }
    }
    // w^G ≡ w^{G∖i} + w_i^2 / w_{i,i} (mod 4), identical for every i
    let mut wg: Option<Vec<u8>> = None;
    for i in 0..n {
        let sq = square_mod2_to_mod4(&rows[i][..n]);
        let diff = deconv4(&sq[1..], &data.wii_mod4(i), n);
        let cand: Vec<u8> = diff.iter().zip(&data.wgi_mod4[i]).map(|(a, b)| (a + b) % 4).collect();
        if wg.get_or_insert_with(|| cand.clone()) != &cand {
            return Err(inconsistent(format!("total walk series from vertex {i} disagrees")));
        }
    }
    let wg = wg.expect("n >= 3");
    if wg[..h] != data.wg_mod4[..] {
        return Err(inconsistent("total walk series disagrees with the trace congruences"));
    }
    Ok((rows, wg))
}

/// Parity of `b_n` among the integers `b ≡ c (mod 4)`, `c ∈ alive`, for which
/// `φ^G` (with constant `(−1)^n b`) is interlaced by every card, as it must
/// be by Cauchy's theorem.
fn interlacing_parity(data: &ModDeckData, alive: &[u8]) -> Result<Option<u8>> {
    let n = data.n;
    let mut phi: Vec<BigInt> = data.phi_top.coeffs().to_vec();
    phi.push(BigInt::zero());
    let (lo, hi) = realroots::constant_shift_window(&phi, &data.cards)
        .ok_or_else(|| inconsistent("cards are not real-rooted"))?;
    if hi - lo > 4096 {
        return Err(inconsistent(format!("interlacing window [{lo}, {hi}] too wide")));
    }
    let mut parities = BTreeSet::new();
    for v in lo..=hi {
        let b = if n.is_multiple_of(2) { v } else { -v };
        if !alive.contains(&(b.rem_euclid(4) as u8)) {
            continue;
        }
        phi[n] = BigInt::from(v);
        if realroots::is_real_rooted(&phi) && data.cards.iter().all(|q| realroots::interlaces(q, &phi)) {
            parities.insert(b.rem_euclid(2) as u8);
        }
    }
    match parities.len() {
        1 => Ok(parities.first().copied()),
        0 => Err(inconsistent("no interlaced candidate for the constant coefficient")),
        _ => Ok(None),
    }
}

/// Last resort for small orders: the parity shared by every graph whose deck
/// is `data`'s.
fn realization_parity(data: &ModDeckData) -> Result<u8> {
    let n = data.n;
    if n > oracle::MAX_UNLABELED {
        return Err(inconsistent(format!("both parities of b_n survive every deck-level test and n = {n} is too large to enumerate")));
    }
    let mut target = data.cards.clone();
    target.sort();
    let edges = -data.phi_top.b(2).expect("n ≥ 3");
    let mut parities = BTreeSet::new();
    for g in oracle::unlabeled_graphs(n)? {
        if BigInt::from(g.edge_count()) != edges {
            continue;
        }
        let mut cards: Vec<Vec<BigInt>> = deck(&g, false, None)?.cards().iter().map(|c| c.coeffs().to_vec()).collect();
        cards.sort();
        if cards == target {
            parities.insert(residues(&charpoly(&g), 2)[n]);
        }
    }
    match parities.len() {
        1 => Ok(*parities.first().expect("one")),
        0 => Err(inconsistent("no graph has this deck")),
        _ => Err(inconsistent("graphs with this deck disagree on the parity of b_n")),
    }
}

/// Whether `b_n ≡ c (mod 4)` is compatible with everything the deck
/// determines modulo 4. Under the hypothesis `φ^G (mod 4)` is known in full,
/// hence `φ^Ḡ (mod 4)`, `w^G (mod 4)` and `w_{i,i} (mod 4)` to any length;
/// they must agree with the complement cards, with the mod-2 walk columns
/// (Gram sums and Godsil–McKay at every vertex) and with the trace
/// congruences for `1^T A^k 1 (mod 4)`.
fn hypothesis_consistent(data: &ModDeckData, c: u8) -> bool {
    let n = data.n;
    let len = 2 * n + 4;
    let Ok((rows, wg)) = extend(data, c % 2) else { return false };
    let z4 = Modular::new(4);
    let mut phi: Vec<BigInt> = data.phi_top.coeffs().iter().map(|v| z4.reduce(v)).collect();
    phi.push(z4.reduce(&BigInt::from(if n.is_multiple_of(2) { c as i64 } else { -(c as i64) })));
    let phi = Poly::new(z4.clone(), phi);
    let Ok(phibar) = complement_charpoly_mod4(&phi) else { return false };
    // (φ^Ḡ)' = Σ_i φ^{Ḡ∖i}
    let deriv = phibar.derivative();
    for (k, d) in deriv.coeffs().iter().enumerate().take(n) {
        let sum = data.co_cards_mod4.iter().fold(BigInt::zero(), |acc, p| acc + &p.coeffs()[k]);
        if z4.reduce(&(d - sum)) != BigInt::zero() {
            return false;
        }
    }
    let Ok(w) = total_walks_from_pair(&phi.as_top(), &phibar.as_top(), len) else { return false };
    let w: Vec<u8> = w.coeffs().iter().map(|v| res(v, 4)).collect();
    if w[..n] != wg[..] {
        return false;
    }
    if (1..rows[0].len()).any(|k| 2 * k < len && w[2 * k] != gram_rows_mod4(&ModDeckData::column(&rows, k))) {
        return false;
    }
    let traces: Vec<ResiduePadic> = (0..2 * len).map(|m| exact_residue(&trace_with(data, m, c), 64)).collect();
    if (1..len).any(|k| gram_walk_mod4(k, |j| traces.get(j).cloned()).ok() != Some(w[k])) {
        return false;
    }
    let m = rows[0].len();
    (0..n).all(|i| {
        let card = data.wii[i].len(); // exact prefix length n
        let Ok(wii) = SeriesPrefix::ratio(
            &TopCoeffs::new(z4.clone(), n - 1, data.cards_mod4(i)).expect("card"),
            &phi.as_top(),
            m,
        ) else {
            return false;
        };
        let wii: Vec<u8> = wii.coeffs().iter().map(|v| res(v, 4)).collect();
        let diff = sub4(&w[..m], &data.wgi_mod4[i][..m]);
        wii[..card] == data.wii_mod4(i)[..] && square_mod2_to_mod4(&rows[i][..m])[1..] == conv4(&diff, &wii, m)[..]
    })
}

fn theorem4_from(data: &ModDeckData) -> Result<Extended> {
    let n = data.n;
    let bn = constant_mod2_from(data)?;
    let mut phi_mod2: Vec<u8> = data.phi_top.coeffs().iter().map(|v| res(v, 2)).collect();
    phi_mod2.push(bn.value);
    let (rows, wg) = extend(data, bn.value)?;
    let walk_matrix_mod2: Vec<Vec<u8>> = (0..n).map(|k| ModDeckData::column(&rows, k)).collect();
    let phi4: Vec<u8> = data.phi_top.coeffs().iter().map(|v| res(v, 4)).collect();
    let phibar_top_mod4 = complement_top(&phi4, &wg, n, n, 4);
    // 1^T A^k 1 is even for k ≥ 1
    let mut w2 = vec![0u8; n];
    w2[0] = (n % 2) as u8;
    let phibar_mod2 = complement_top(&phi_mod2, &w2, n, n + 1, 2);
    let out = Theorem4Output {
        bn_mod2: bn.value,
        bn_route: bn.route,
        walk_matrix_mod2,
        phibar_top_mod4,
        phibar_const_mod2: phibar_mod2[n],
    };
    Ok(Extended { out, rows, wg, phi_mod2 })
}

/// `b_n (mod 2)`, the mod-2 walk matrix and the top of `φ^Ḡ (mod 4)`.
pub fn theorem4(d: &Deck) -> Result<Theorem4Output> {
    Ok(theorem4_from(&base_mod_data(d)?)?.out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem5Output {
    pub phi_const_mod4: u8,
    pub phibar_mod4: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Theorem5Verdict {
    Determined(Theorem5Output),
    /// odd order with a mod-2 walk matrix of full possible rank `⌈n/2⌉`
    NotApplicable,
}

/// Both outputs of the mod-4 pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeckModReport {
    #[serde(flatten)]
    pub theorem4: Theorem4Output,
    pub theorem5: Theorem5Verdict,
}

/// Runs the mod-2 and mod-4 pipelines once, sharing the preamble.
pub fn deck_mod_report(d: &Deck) -> Result<DeckModReport> {
    let data = base_mod_data(d)?;
    let ext = theorem4_from(&data)?;
    let theorem5 = theorem5_from(&data, &ext)?;
    Ok(DeckModReport { theorem4: ext.out, theorem5 })
}

/// `φ^G (mod 4)` and `φ^Ḡ (mod 4)` in full, when `n` is even or the mod-2
/// walk matrix has rank below `⌈n/2⌉`.
pub fn theorem5(d: &Deck) -> Result<Theorem5Verdict> {
    let data = base_mod_data(d)?;
    let ext = theorem4_from(&data)?;
    theorem5_from(&data, &ext)
}

fn theorem5_from(data: &ModDeckData, ext: &Extended) -> Result<Theorem5Verdict> {
    let n = data.n;
    let h = n.div_ceil(2);
    let rank = ext.out.rank_f2();
    if n % 2 == 1 && rank >= h {
        return Ok(Theorem5Verdict::NotApplicable);
    }
    let mut wg = ext.wg.clone();
    let wn = if n.is_multiple_of(2) {
        gram_rows_mod4(&ModDeckData::column(&ext.rows, n / 2))
    } else {
        // a relation A^{h−1}1 + Σ_a d_a A^{h−1−a}1 ≡ 0 (mod 2) gives
        // 1^T A^n 1 ≡ −Σ_a d_a 1^T A^{n−2a} 1 (mod 4)
        let masks: Vec<u64> = ext.out.walk_matrix_mod2[..h]
            .iter()
            .map(|c| c.iter().enumerate().fold(0u64, |m, (i, &b)| m | ((b as u64) << i)))
            .collect();
        let dep = linalg::dependency_f2(&masks).ok_or_else(|| inconsistent("no mod-2 walk relation"))?;
        // shifting the relation up so that its top column is h − 1 keeps d_a
        let top = 63 - dep.leading_zeros() as usize;
        let sum: u32 = (1..=top).filter(|&a| (dep >> (top - a)) & 1 == 1).map(|a| wg[n - 2 * a] as u32).sum();
        ((4 * 16 - sum % 4) % 4) as u8
    };
    wg.push(wn);
    let mut phi_n: Option<u8> = None;
    let phi4: Vec<u8> = data.phi_top.coeffs().iter().map(|v| res(v, 4)).collect();
    for i in 0..n {
        let sq = square_mod2_to_mod4(&ext.rows[i][..n + 1]);
        let diff = sub4(&wg[..n + 1], &data.wgi_mod4[i][..n + 1]);
        let wii = deconv4(&sq[1..], &diff, n + 1);
        if wii[..n] != data.wii_mod4(i)[..] {
            return Err(inconsistent(format!("closed walks at vertex {i} disagree modulo 4")));
        }
        // Σ_{k≤n} φ_k w_{i,i}[n−k] = 0
        let s: u32 = (0..n).map(|k| phi4[k] as u32 * wii[n - k] as u32).sum();
        let c = ((4 * 64 - s % 4) % 4) as u8;
        if *phi_n.get_or_insert(c) != c {
            return Err(inconsistent(format!("vertex {i} gives a different constant modulo 4")));
        }
    }
    let phi_const_mod4 = phi_n.expect("n >= 3");
    if phi_const_mod4 % 2 != ext.phi_mod2[n] {
        return Err(inconsistent("constant modulo 4 disagrees with its parity"));
    }
    let mut full = phi4;
    full.push(phi_const_mod4);
    let phibar_mod4 = complement_top(&full, &wg, n, n + 1, 4);
    Ok(Theorem5Verdict::Determined(Theorem5Output { phi_const_mod4, phibar_mod4 }))
}

/// Outcome of comparing two graphs' decks and spectra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum PairVerdict {
    DecksDiffer,
    Cospectral,
    /// Equal decks, `φ^G − φ^H = 2k`.
    Counterexample { k: String },
}

/// Equal decks force `φ^G − φ^H` to be a constant `2k`, with `k` even when
/// `n` is even; a pair violating this is reported as an error.
pub fn pair_check(g: &Graph, h: &Graph) -> Result<PairVerdict> {
    let n = g.order();
    if n != h.order() || n < 3 {
        return Err(Error::InvalidInput("graphs must have the same order, at least 3".into()));
    }
    if deck(g, false, None)?.fingerprint() != deck(h, false, None)?.fingerprint() {
        return Ok(PairVerdict::DecksDiffer);
    }
    let (pg, ph) = (charpoly(g), charpoly(h));
    if pg == ph {
        return Ok(PairVerdict::Cospectral);
    }
    let diff = pg.sub(&ph);
    if diff.coeffs()[..n].iter().any(|c| !c.is_zero()) {
        return Err(inconsistent("equal decks but the polynomials differ above the constant"));
    }
    let (k, r) = diff.coeffs()[n].div_rem(&BigInt::from(2));
    if !r.is_zero() || (n.is_multiple_of(2) && k.is_odd()) {
        return Err(inconsistent(format!("equal decks with constant difference {}", diff.coeffs()[n])));
    }
    Ok(PairVerdict::Counterexample { k: k.to_string() })
}

/// `φ (mod m)` as residues.
pub fn residues(p: &IntPoly, m: u8) -> Vec<u8> {
    p.coeffs().iter().map(|v| res(v, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(g: &Graph) -> Deck {
        deck(g, false, None).unwrap()
    }

    #[test]
    fn base_examples() {
        let p4 = base_mod_data(&plain(&Graph::path(4))).unwrap();
        assert_eq!(p4.wg_mod4, vec![0, 2]);
        assert_eq!(p4.wi_mod2, vec![vec![1, 1], vec![1, 0], vec![1, 0], vec![1, 1]]);
        let k3 = base_mod_data(&plain(&Graph::complete(3))).unwrap();
        assert_eq!(k3.wg_mod4, vec![3, 2]);
        assert_eq!(k3.wi_mod2, vec![vec![1, 0]; 3]);
        let e4 = base_mod_data(&plain(&Graph::empty(4))).unwrap();
        assert_eq!(e4.wg_mod4, vec![0, 0]);
        assert_eq!(e4.wi_mod2, vec![vec![1, 0]; 4]);
    }

    #[test]
    fn gram_rows_examples() {
        assert_eq!(gram_rows_mod4(&[0, 0, 0]), 0);
        assert_eq!(gram_rows_mod4(&[1, 0, 0, 1]), 2);
        assert_eq!(gram_rows_mod4(&[1; 7]), 3);
    }

    #[test]
    fn constant_examples() {
        let c = |g: &Graph| constant_mod2(&plain(g)).unwrap();
        assert_eq!(c(&Graph::complete(4)).value, 1);
        assert_eq!(c(&Graph::cycle(4)).value, 0);
        let s6 = c(&Graph::star(6));
        assert_eq!(s6, ConstantMod2 { value: 0, route: Mod2Route::OddCoefficientTrace });
        assert_eq!(c(&Graph::cycle(5)).route, Mod2Route::ForcedEven);
        assert_eq!(c(&Graph::path(6)).value, 1);
    }

    #[test]
    fn theorem4_examples() {
        let p4 = theorem4(&plain(&Graph::path(4))).unwrap();
        assert_eq!(p4.bn_mod2, 1);
        assert_eq!(p4.walk_matrix_mod2, vec![vec![1, 1, 1, 1], vec![1, 0, 0, 1], vec![0, 1, 1, 0], vec![1, 1, 1, 1]]);
        assert_eq!(p4.phibar_top_mod4, vec![1, 0, 1, 0]);
        assert_eq!(p4.phibar_const_mod2, 1);
        let k3 = theorem4(&plain(&Graph::complete(3))).unwrap();
        assert_eq!(k3.bn_mod2, 0);
        assert_eq!(k3.walk_matrix_mod2, vec![vec![1, 1, 1], vec![0, 0, 0], vec![0, 0, 0]]);
        assert_eq!(k3.phibar_top_mod4, vec![1, 0, 0]);
        assert_eq!(k3.phibar_const_mod2, 0);
        let e4 = theorem4(&plain(&Graph::empty(4))).unwrap();
        assert_eq!(e4.phibar_top_mod4, vec![1, 0, 2, 0]);
        assert_eq!(e4.phibar_const_mod2, 1);
    }

    #[test]
    fn theorem5_examples() {
        let t = |g: &Graph| theorem5(&plain(g)).unwrap();
        assert_eq!(
            t(&Graph::cycle(4)),
            Theorem5Verdict::Determined(Theorem5Output { phi_const_mod4: 0, phibar_mod4: vec![1, 0, 2, 0, 1] })
        );
        assert_eq!(
            t(&Graph::complete(4)),
            Theorem5Verdict::Determined(Theorem5Output { phi_const_mod4: 1, phibar_mod4: vec![1, 0, 0, 0, 0] })
        );
        let c5 = charpoly(&Graph::cycle(5));
        assert_eq!(
            t(&Graph::cycle(5)),
            Theorem5Verdict::Determined(Theorem5Output { phi_const_mod4: 2, phibar_mod4: residues(&c5, 4) })
        );
    }

    #[test]
    fn star_and_empty_share_mod4_deck() {
        let (s, e) = (Graph::star(6), Graph::empty(6));
        let red = |g: &Graph| plain(g).cards().iter().map(|c| c.reduce(&Modular::new(4))).collect::<Vec<_>>();
        let mut a = red(&s);
        let mut b = red(&e);
        a.sort_by_key(|c| format!("{c:?}"));
        b.sort_by_key(|c| format!("{c:?}"));
        assert_eq!(a, b);
        assert_ne!(theorem5(&plain(&s)).unwrap(), theorem5(&plain(&e)).unwrap());
    }

    #[test]
    fn pair_examples() {
        let p3 = Graph::path(3);
        assert_eq!(pair_check(&p3, &p3).unwrap(), PairVerdict::Cospectral);
        assert_eq!(pair_check(&p3, &Graph::complete(3)).unwrap(), PairVerdict::DecksDiffer);
    }
}
