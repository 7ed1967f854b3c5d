//! Recovering `(φ^G, φ^Ḡ)` from (possibly truncated) polynomial decks.
//!
//! The general pipeline works on a generalized deck whose cards are known
//! to their top `t` coefficients and whose complement cards to their top `s`
//! coefficients, with `s ≤ t ≤ n` and `2s + t ≥ 2n + 4`:
//!
//! 1. integrate both card families;
//! 2. expand `w^G`, `w^{G∖i}` (`s − 1` terms) and `w_{i,i}` (`s` terms);
//! 3. take the square root of `(w^G − w^{G∖i}) w_{i,i}` to get `w_i`;
//! 4. extend `w^G` to `2s − 3` terms with the Gram identity;
//! 5. if the Hankel block of size `n + 1 − t` is invertible, solve the
//!    Hankel rows for the missing coefficients of `φ^G`, then read off
//!    `φ^Ḡ` from `w^G`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{inconsistent, Error, Result};
use crate::linalg;
use crate::poly::{integrate_cards, Deck, IntPoly, Poly, TopCoeffs};
use crate::ring::Integers;
use crate::series::SeriesPrefix;
use crate::walks::{gram_extend, total_walks_from_pair, trace_prefix, wi_squared_prefix, wii_prefix};

#[derive(Clone, Debug, PartialEq)]
pub enum ReconstructionOutcome {
    Success { phi: IntPoly, phi_complement: IntPoly },
    /// The walk matrix has rank below `threshold`.
    RankTooLow { threshold: usize },
    NotApplicable { reason: String },
}

impl ReconstructionOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, ReconstructionOutcome::Success { .. })
    }

    pub fn pair(&self) -> Option<(&IntPoly, &IntPoly)> {
        match self {
            ReconstructionOutcome::Success { phi, phi_complement } => Some((phi, phi_complement)),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            ReconstructionOutcome::Success { .. } => "success",
            ReconstructionOutcome::RankTooLow { .. } => "rank_too_low",
            ReconstructionOutcome::NotApplicable { .. } => "not_applicable",
        }
    }
}

fn not_applicable(reason: &str) -> ReconstructionOutcome {
    ReconstructionOutcome::NotApplicable { reason: reason.to_string() }
}

/// Data gathered by steps 1–4 of the pipeline.
struct WalkData {
    phi_top: TopCoeffs<Integers>,
    phi_bar_top: TopCoeffs<Integers>,
    /// `1^T A^k 1` for `k < 2s − 3`
    walks: Vec<BigInt>,
}

fn walk_data(d: &Deck, s: usize, t: usize) -> Result<WalkData> {
    let n = d.order();
    let d = d.truncated(t, Some(s))?;
    let co = d.co_cards().expect("generalized deck");
    let phi_top = integrate_cards(n, d.cards())?;
    let phi_bar_top = integrate_cards(n, co)?;
    let wg = total_walks_from_pair(&phi_top, &phi_bar_top, s - 1)?;
    let rows = d
        .cards()
        .iter()
        .zip(co)
        .enumerate()
        .map(|(i, (card, co_card))| {
            let wgi = total_walks_from_pair(card, co_card, s - 1)?;
            let wii = wii_prefix(card, &phi_top, s)?;
            let sq = wi_squared_prefix(&wg, &wgi, &wii)?;
            let wi = sq
                .sqrt_prefix(&BigInt::one())
                .map_err(|e| inconsistent(format!("walks from vertex {i}: {e}")))?;
            Ok(wi.coeffs().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let walks = gram_extend(&rows);
    if walks[..s - 1] != wg.coeffs()[..] {
        return Err(inconsistent("Gram identity disagrees with the total walk series"));
    }
    Ok(WalkData { phi_top, phi_bar_top, walks })
}

/// `φ^Ḡ` from `φ^G` and the first `n` coefficients of `w^G`.
pub fn complement_from_walks(phi: &IntPoly, walks: &[BigInt]) -> Result<IntPoly> {
    let n = phi.coeffs().len() - 1;
    let num = SeriesPrefix::new(Integers, walks.to_vec()).numerator(&phi.coeffs()[..n], n)?;
    let mut shifted = vec![BigInt::one()];
    shifted.extend((1..=n).map(|j| &phi.coeffs()[j] + &num[j - 1]));
    Ok(Poly::new(Integers, shifted).substitute_neg_shift(n))
}

fn check_generalized(d: &Deck, s: usize, t: usize) -> Result<()> {
    if !d.is_generalized() {
        return Err(Error::InvalidInput("a generalized deck is required".into()));
    }
    let have_t = d.card_truncation();
    let have_s = d.co_truncation().unwrap_or(0);
    if have_t < t || have_s < s {
        return Err(Error::InvalidInput(format!(
            "deck supplies {have_t} card and {have_s} complement-card coefficients; need {t} and {s}"
        )));
    }
    Ok(())
}

/// The general pipeline with `s` complement-card and `t` card coefficients.
pub fn reconstruct_general(d: &Deck, s: usize, t: usize) -> Result<ReconstructionOutcome> {
    let n = d.order();
    if !(s <= t && t <= n) {
        return Err(Error::InvalidInput(format!("need s <= t <= n, got s = {s}, t = {t}, n = {n}")));
    }
    if 2 * s + t < 2 * n + 4 {
        return Err(Error::InvalidInput(format!("s + t/2 >= n + 2 fails for s = {s}, t = {t}, n = {n}")));
    }
    check_generalized(d, s, t)?;
    let data = walk_data(d, s, t)?;
    let w = SeriesPrefix::new(Integers, data.walks.clone());
    let l = n + 1 - t;
    if !w.hankel_invertible(l)? {
        return Ok(ReconstructionOutcome::RankTooLow { threshold: l });
    }
    let tail = w.hankel_tail_solve(n, &data.phi_top.coeffs()[1..])?;
    let mut coeffs = data.phi_top.coeffs().to_vec();
    coeffs.extend(tail);
    let phi = Poly::new(Integers, coeffs);
    let phi_bar = complement_from_walks(&phi, &data.walks)?;
    if phi_bar.coeffs()[..s] != data.phi_bar_top.coeffs()[..] {
        return Err(inconsistent("recovered complement polynomial disagrees with the complement cards"));
    }
    Ok(ReconstructionOutcome::Success { phi, phi_complement: phi_bar })
}

/// Three vertices: the deck gives the edge count `m`, and a triangle is
/// present exactly when `m = 3` (in the complement, when `m = 0`).
fn reconstruct_order3(d: &Deck) -> Result<ReconstructionOutcome> {
    check_generalized(d, 3, 3)?;
    let data = walk_data(d, 3, 3)?;
    let m = -&data.phi_top.coeffs()[2];
    let tri = |e: &BigInt| if *e == BigInt::from(3) { BigInt::from(-2) } else { BigInt::zero() };
    let phi = data.phi_top.with_constant(tri(&m))?;
    let m_bar = BigInt::from(3) - &m;
    let phi_bar = data.phi_bar_top.with_constant(tri(&m_bar))?;
    let w = total_walks_from_pair(&phi.as_top(), &phi_bar.as_top(), data.walks.len())?;
    if w.coeffs() != &data.walks[..] {
        return Err(inconsistent("three-vertex deck is not consistent with any graph"));
    }
    Ok(ReconstructionOutcome::Success { phi, phi_complement: phi_bar })
}

fn check_order(d: &Deck) -> Result<usize> {
    let n = d.order();
    if n < 3 {
        return Err(Error::OutOfRange(n));
    }
    Ok(n)
}

/// Full cards plus the top `⌈(n+4)/2⌉` coefficients of each complement card.
pub fn full_parameters(n: usize) -> (usize, usize) {
    ((n + 4).div_ceil(2), n)
}

/// Both families truncated to `⌈(2n+4)/3⌉`.
pub fn controllable_parameters(n: usize) -> (usize, usize) {
    let s = (2 * n + 4).div_ceil(3);
    (s, s)
}

/// Reconstruction from full cards and `⌈(n+4)/2⌉` complement coefficients;
/// always succeeds on honest decks.
pub fn reconstruct_full(d: &Deck) -> Result<ReconstructionOutcome> {
    let n = check_order(d)?;
    if n == 3 {
        return reconstruct_order3(d);
    }
    let (s, t) = full_parameters(n);
    reconstruct_general(d, s, t)
}

/// Reconstruction from `⌈(2n+4)/3⌉` coefficients of every card; succeeds
/// exactly when the walk matrix has rank at least `⌊(n−1)/3⌋`.
pub fn reconstruct_controllable(d: &Deck) -> Result<ReconstructionOutcome> {
    let n = check_order(d)?;
    if n == 3 {
        return reconstruct_order3(d);
    }
    let (s, t) = controllable_parameters(n);
    reconstruct_general(d, s, t)
}

/// Degrees `d_i = m(G) − m(G∖i)` and the edge count, from the `x^{n−2}`
/// coefficients.
fn degrees(d: &Deck, phi_top: &TopCoeffs<Integers>) -> Result<(BigInt, Vec<BigInt>)> {
    let m = -&phi_top.coeffs()[2];
    let degs: Vec<BigInt> = d.cards().iter().map(|c| &m + &c.coeffs()[2]).collect();
    let sum: BigInt = degs.iter().sum();
    if degs.iter().any(|x| x.is_negative() || *x >= BigInt::from(d.order())) || sum != &m * 2 {
        return Err(inconsistent("degree sequence from the deck is not valid"));
    }
    Ok((m, degs))
}

fn require_full_plain(d: &Deck) -> Result<()> {
    if !d.cards()[0].is_full() {
        return Err(Error::InvalidInput("untruncated cards are required".into()));
    }
    Ok(())
}

/// Number of 4-cycles, from `tr A^4 = 8q + Σ_i d_i(2d_i − 1)`; `None` when
/// `n < 5` (the trace of `A^4` is not visible in the deck then).
pub fn count_c4_from_deck(d: &Deck) -> Result<Option<u64>> {
    let n = d.order();
    if n < 5 {
        return Ok(None);
    }
    require_full_plain(d)?;
    let phi_top = integrate_cards(n, d.cards())?;
    let traces = trace_prefix(&phi_top, d.cards(), 5)?;
    let (m, degs) = degrees(d, &phi_top)?;
    if traces.coeffs()[2] != &m * 2 {
        return Err(inconsistent("trace of A^2 is not twice the edge count"));
    }
    let corr: BigInt = degs.iter().map(|x| x * (x * 2 - 1)).sum();
    let eight = traces.coeffs()[4].clone() - corr;
    let (q, r) = eight.div_rem(&BigInt::from(8));
    if !r.is_zero() || q.is_negative() {
        return Err(inconsistent(format!("4-cycle count {eight}/8 is not a non-negative integer")));
    }
    Ok(Some(u64::try_from(&q).map_err(|_| inconsistent("4-cycle count overflows"))?))
}

/// Deck-only reconstruction for graphs without 4-cycles whose walk matrix
/// has rank at most 2.
///
/// In a C4-free graph `e_i^T A^4 e_i = d_i^2 + Σ_{j∼i}(d_j − 1)`, so
/// `e_i^T A^2 1 = e_i^T A^4 e_i − d_i(d_i − 1)`. This gives the first three
/// walk-matrix columns; a rank-2 relation `A^2 1 = α1 + βA1` then generates
/// every walk count.
pub fn reconstruct_c4free_lowrank(d: &Deck) -> Result<ReconstructionOutcome> {
    let n = d.order();
    let Some(q) = count_c4_from_deck(d)? else {
        return Ok(not_applicable("requires at least 5 vertices"));
    };
    if q > 0 {
        return Ok(not_applicable("has C4"));
    }
    let phi_top = integrate_cards(n, d.cards())?;
    let (_, degs) = degrees(d, &phi_top)?;
    let a2: Vec<BigInt> = d
        .cards()
        .iter()
        .zip(&degs)
        .map(|(card, di)| {
            let wii = wii_prefix(card, &phi_top, 5)?;
            Ok(&wii.coeffs()[4] - di * (di - 1))
        })
        .collect::<Result<_>>()?;
    let ones = vec![BigInt::one(); n];
    let rank = linalg::rank(&[ones, degs.clone(), a2.clone()]);
    let (alpha, beta) = match rank {
        3 => return Ok(not_applicable("rank > 2")),
        1 => (BigInt::zero(), degs[0].clone()),
        2 => {
            let (i, j) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| degs[i] != degs[j])
                .ok_or_else(|| inconsistent("rank 2 with constant degrees"))?;
            let q = |v: &BigInt| BigRational::from_integer(v.clone());
            let beta = (q(&a2[i]) - q(&a2[j])) / (q(&degs[i]) - q(&degs[j]));
            let alpha = q(&a2[i]) - &beta * q(&degs[i]);
            if !alpha.is_integer() || !beta.is_integer() {
                return Err(inconsistent("walk relation has non-integral coefficients"));
            }
            (alpha.to_integer(), beta.to_integer())
        }
        _ => return Err(inconsistent("zero walk matrix")),
    };
    if (0..n).any(|i| a2[i] != &alpha + &beta * &degs[i]) {
        return Err(inconsistent("walk relation fails on some vertex"));
    }
    let mut walks = vec![BigInt::from(n), degs.iter().sum()];
    while walks.len() < 2 * n + 1 {
        let k = walks.len();
        walks.push(&beta * &walks[k - 1] + &alpha * &walks[k - 2]);
    }
    let w = SeriesPrefix::new(Integers, walks.clone());
    let tail = w.hankel_tail_solve(n, &phi_top.coeffs()[1..])?;
    let mut coeffs = phi_top.coeffs().to_vec();
    coeffs.extend(tail);
    let phi = Poly::new(Integers, coeffs);
    let phi_complement = complement_from_walks(&phi, &walks)?;
    Ok(ReconstructionOutcome::Success { phi, phi_complement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::poly::{charpoly, deck};

    fn pair(g: &Graph) -> ReconstructionOutcome {
        ReconstructionOutcome::Success { phi: charpoly(g), phi_complement: charpoly(&g.complement()) }
    }

    #[test]
    fn general_examples() {
        let p4 = Graph::path(4);
        let d = deck(&p4, true, None).unwrap();
        let out = reconstruct_general(&d, 4, 4).unwrap();
        assert_eq!(out, pair(&p4));
        assert_eq!(out.pair().unwrap().0, &IntPoly::from_ints(&[1, 0, -3, 0, 1]));
        let two_k2 = Graph::path(2).disjoint_union(&Graph::path(2));
        let d = deck(&two_k2, true, None).unwrap();
        assert_eq!(reconstruct_general(&d, 4, 3), Err(Error::InvalidInput("need s <= t <= n, got s = 4, t = 3, n = 4".into())));
        // regular graphs have a rank-1 walk matrix
        let c7 = deck(&Graph::cycle(7), true, None).unwrap();
        assert_eq!(reconstruct_general(&c7, 6, 6).unwrap(), ReconstructionOutcome::RankTooLow { threshold: 2 });
        let p7 = Graph::path(7);
        assert_eq!(reconstruct_general(&deck(&p7, true, None).unwrap(), 6, 6).unwrap(), pair(&p7));
        assert!(matches!(reconstruct_general(&d, 3, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn full_examples() {
        for g in [Graph::path(4), Graph::star(4), Graph::empty(3), Graph::complete(3), Graph::path(3)] {
            let n = g.order();
            let d = deck(&g, true, Some(full_parameters(n).0)).unwrap();
            assert_eq!(reconstruct_full(&d).unwrap(), pair(&g), "{g:?}");
        }
        let s4 = reconstruct_full(&deck(&Graph::star(4), true, Some(4)).unwrap()).unwrap();
        assert_eq!(s4.pair().unwrap().1, &IntPoly::from_ints(&[1, 0, -3, -2, 0]));
    }

    #[test]
    fn controllable_examples() {
        let run = |g: &Graph| {
            let (s, _) = controllable_parameters(g.order());
            let d = deck(g, true, None).unwrap().truncated(s.min(g.order()), Some(s.min(g.order()))).unwrap();
            reconstruct_controllable(&d).unwrap()
        };
        for g in [Graph::path(4), Graph::complete(4), Graph::cycle(6), Graph::star(7)] {
            assert_eq!(run(&g), pair(&g), "{g:?}");
        }
        assert_eq!(run(&Graph::complete(7)), ReconstructionOutcome::RankTooLow { threshold: 2 });
    }

    #[test]
    fn c4_counts() {
        let count = |g: &Graph| count_c4_from_deck(&deck(g, false, None).unwrap()).unwrap();
        assert_eq!(count(&Graph::cycle(5)), Some(0));
        assert_eq!(count(&Graph::cycle(4)), None);
        assert_eq!(count(&Graph::complete(5)), Some(15));
        assert_eq!(count(&Graph::complete_bipartite(3, 3)), Some(9));
    }

    #[test]
    fn c4free_examples() {
        for g in [Graph::star(6), Graph::cycle(5), Graph::cycle(7), Graph::star(9)] {
            let d = deck(&g, false, None).unwrap();
            assert_eq!(reconstruct_c4free_lowrank(&d).unwrap(), pair(&g), "{g:?}");
        }
        assert_eq!(
            reconstruct_c4free_lowrank(&deck(&Graph::star(6), false, None).unwrap()).unwrap().pair().unwrap().0,
            &IntPoly::from_ints(&[1, 0, -5, 0, 0, 0, 0])
        );
        let k33 = deck(&Graph::complete_bipartite(3, 3), false, None).unwrap();
        assert_eq!(reconstruct_c4free_lowrank(&k33).unwrap(), not_applicable("has C4"));
        let p6 = deck(&Graph::path(6), false, None).unwrap();
        assert_eq!(reconstruct_c4free_lowrank(&p6).unwrap(), not_applicable("rank > 2"));
    }
}
