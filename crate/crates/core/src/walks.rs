//! Walk generating functions and walk matrices.
//!
//! * `w_{i,i}(x) = φ^{G∖i}(x) / φ^G(x)` counts closed walks at `i`;
//! * `w^G(x) = ((−1)^n φ^Ḡ(−x−1) − φ^G(x)) / φ^G(x)` counts all walks;
//! * `w_i(x)² = (w^G(x) − w^{G∖i}(x)) · w_{i,i}(x)` (Godsil–McKay), where
//!   `w_i` counts walks starting at `i`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{inconsistent, truncated, Error, Result};
use crate::graph::Graph;
use crate::linalg;
use crate::poly::{Deck, IntPoly, TopCoeffs};
use crate::ring::{Integers, Ring};
use crate::series::SeriesPrefix;

/// First `m` coefficients of the closed-walk series at a vertex.
pub fn wii_prefix<R: Ring>(card: &TopCoeffs<R>, phi: &TopCoeffs<R>, m: usize) -> Result<SeriesPrefix<R>> {
    if card.degree() + 1 != phi.degree() {
        return Err(Error::InvalidInput(format!(
            "card degree {} does not match polynomial degree {}",
            card.degree(),
            phi.degree()
        )));
    }
    SeriesPrefix::ratio(card, phi, m)
}

/// Top coefficients of `(−1)^n φ^Ḡ(−x−1) − φ^G(x)`, a polynomial of degree
/// below `n`. With `s` known coefficients of each input, `s − 1` come out
/// (the `x^n` terms cancel); full inputs give the full numerator.
pub fn walk_numerator<R: Ring>(phi: &TopCoeffs<R>, phi_bar: &TopCoeffs<R>) -> Result<TopCoeffs<R>> {
    let n = phi.degree();
    if phi_bar.degree() != n {
        return Err(Error::InvalidInput(format!("complement degree {} differs from {n}", phi_bar.degree())));
    }
    if !phi.is_monic() || !phi_bar.is_monic() {
        return Err(Error::InvalidInput("characteristic polynomials must be monic".into()));
    }
    let r = phi.ring();
    let shifted = phi_bar.substitute_neg_shift(n);
    let known = phi.len().min(shifted.len());
    let coeffs = (1..known).map(|j| r.sub(&shifted.coeffs()[j], &phi.coeffs()[j])).collect();
    TopCoeffs::new(r.clone(), n.saturating_sub(1), coeffs)
}

/// First `m` coefficients of `w^G` from the pair `(φ^G, φ^Ḡ)`, either of which
/// may be truncated.
pub fn total_walks_from_pair<R: Ring>(
    phi: &TopCoeffs<R>,
    phi_bar: &TopCoeffs<R>,
    m: usize,
) -> Result<SeriesPrefix<R>> {
    if phi.degree() == 0 {
        return Err(Error::InvalidInput("empty vertex set".into()));
    }
    let num = walk_numerator(phi, phi_bar)?;
    if !num.is_full() && m > num.len() {
        return Err(truncated(m + 1, num.len() + 1));
    }
    if !phi.is_full() && m > phi.len() {
        return Err(truncated(m, phi.len()));
    }
    SeriesPrefix::ratio(&num, phi, m)
}

/// `(w^G − w^{G∖i}) · w_{i,i}`, the square of the walk series starting at `i`.
pub fn wi_squared_prefix<R: Ring>(
    wg: &SeriesPrefix<R>,
    wg_minus_i: &SeriesPrefix<R>,
    wii: &SeriesPrefix<R>,
) -> Result<SeriesPrefix<R>> {
    let diff = wg.sub(wg_minus_i)?;
    let m = diff.len().min(wii.len());
    diff.truncate(m)?.mul(&wii.truncate(m)?)
}

/// The walk matrix `W = (1, A1, …, A^{n−1}1)` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkMatrix {
    /// `columns[k][i] = e_i^T A^k 1`
    columns: Vec<Vec<BigInt>>,
}

impl WalkMatrix {
    pub fn from_columns(columns: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidInput("walk matrix must be square".into()));
        }
        Ok(WalkMatrix { columns })
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("walk matrix must be square".into()));
        }
        Ok(WalkMatrix { columns: (0..n).map(|k| rows.iter().map(|r| r[k].clone()).collect()).collect() })
    }

    pub fn order(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<BigInt>] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &[BigInt] {
        &self.columns[k]
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.columns.iter().map(|c| c[i].clone()).collect()
    }

    pub fn rank_q(&self) -> usize {
        linalg::rank(&self.columns)
    }

    /// Columns reduced mod 2, as bit masks over the vertices.
    pub fn columns_mod2(&self) -> Vec<u64> {
        self.columns.iter().map(|c| bits_mod2(c)).collect()
    }

    pub fn rank_f2(&self) -> usize {
        linalg::rank_f2(&self.columns_mod2())
    }
}

pub(crate) fn bits_mod2(v: &[BigInt]) -> u64 {
    v.iter().enumerate().filter(|(_, x)| x.bit(0)).fold(0u64, |acc, (i, _)| acc | 1 << i)
}

pub fn walk_matrix(g: &Graph) -> WalkMatrix {
    let mut columns = g.walk_counts(g.order().saturating_sub(1));
    columns.truncate(g.order());
    WalkMatrix { columns }
}

/// Recovers `W^G` from a full generalized deck and the pair `(φ^G, φ^Ḡ)`.
///
/// Row `i` comes from the card pair at index `i`: the Godsil–McKay square
/// is formed to `n + 1` coefficients and its square root taken.
pub fn walk_matrix_from_generalized_deck(d: &Deck, phi: &IntPoly, phi_bar: &IntPoly) -> Result<WalkMatrix> {
    let n = d.order();
    let co = d.co_cards().ok_or_else(|| Error::InvalidInput("a generalized deck is required".into()))?;
    if !d.cards()[0].is_full() || !co[0].is_full() {
        return Err(Error::InvalidInput("walk matrix recovery needs untruncated cards".into()));
    }
    if phi.degree() != Some(n) || phi_bar.degree() != Some(n) {
        return Err(Error::InvalidInput(format!("pair must have degree {n}")));
    }
    let len = n + 1;
    let phi = phi.as_top();
    let wg = total_walks_from_pair(&phi, &phi_bar.as_top(), len)?;
    let rows = d
        .cards()
        .iter()
        .zip(co)
        .enumerate()
        .map(|(i, (card, co_card))| {
            let wgi = total_walks_from_pair(card, co_card, len)?;
            let wii = wii_prefix(card, &phi, len)?;
            let sq = wi_squared_prefix(&wg, &wgi, &wii)?;
            let wi = sq
                .sqrt_prefix(&BigInt::one())
                .map_err(|e| inconsistent(format!("walk series at vertex {i}: {e}")))?;
            Ok(wi.coeffs()[..n].to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let w = WalkMatrix::from_rows(&rows)?;
    let total: Vec<BigInt> = w.columns.iter().map(|c| c.iter().sum()).collect();
    if total[..] != wg.coeffs()[..n] {
        return Err(inconsistent("walk matrix rows do not sum to the total walk series"));
    }
    Ok(w)
}

/// Closed-walk series `Σ_i w_{i,i} = φ'/φ`: its coefficients are `tr A^k`.
pub fn trace_prefix(phi: &TopCoeffs<Integers>, cards: &[TopCoeffs<Integers>], m: usize) -> Result<SeriesPrefix<Integers>> {
    let t = cards.first().map_or(0, TopCoeffs::len);
    let sum: Vec<BigInt> = (0..t).map(|k| cards.iter().map(|c| &c.coeffs()[k]).sum()).collect();
    let sum = TopCoeffs::new(Integers, phi.degree() - 1, sum)?;
    SeriesPrefix::ratio(&sum, phi, m)
}

/// Gram identity `Σ_i w_i[k] w_i[l] = 1^T A^{k+l} 1`: from `m` coefficients
/// of every `w_i`, the first `2m − 1` coefficients of `w^G`.
pub fn gram_extend(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = rows.iter().map(Vec::len).min().unwrap_or(0);
    if m == 0 {
        return Vec::new();
    }
    (0..2 * m - 1)
        .map(|s| {
            let k = s.min(m - 1);
            let l = s - k;
            rows.iter().map(|r| &r[k] * &r[l]).sum::<BigInt>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{charpoly, deck};

    fn top(c: &[i64]) -> TopCoeffs<Integers> {
        IntPoly::from_ints(c).as_top()
    }

    fn ser(c: &[i64]) -> SeriesPrefix<Integers> {
        SeriesPrefix::from_ints(c)
    }

    #[test]
    fn closed_walk_series() {
        let k3 = top(&[1, 0, -3, -2]);
        assert_eq!(wii_prefix(&top(&[1, 0, -1]), &k3, 4).unwrap(), ser(&[1, 0, 2, 2]));
        let p3 = top(&[1, 0, -2, 0]);
        assert_eq!(wii_prefix(&top(&[1, 0, 0]), &p3, 4).unwrap(), ser(&[1, 0, 2, 0]));
        assert_eq!(wii_prefix(&top(&[1, 0, 0]), &p3, 1).unwrap(), ser(&[1]));
    }

    #[test]
    fn total_walk_series() {
        let w = total_walks_from_pair(&top(&[1, 0, -3, -2]), &top(&[1, 0, 0, 0]), 3).unwrap();
        assert_eq!(w, ser(&[3, 6, 12]));
        let w = total_walks_from_pair(&top(&[1, 0, -2, 0]), &top(&[1, 0, -1, 0]), 4).unwrap();
        assert_eq!(w, ser(&[3, 4, 6, 8]));
        let e4 = charpoly(&Graph::empty(4)).as_top();
        let k4 = charpoly(&Graph::complete(4)).as_top();
        assert_eq!(total_walks_from_pair(&e4, &k4, 5).unwrap(), ser(&[4, 0, 0, 0, 0]));
    }

    #[test]
    fn truncated_pair_limits_length() {
        let phi = top(&[1, 0, -3, -2]);
        let bar = IntPoly::from_ints(&[1, 0, 0, 0]).top(3);
        assert_eq!(total_walks_from_pair(&phi, &bar, 2).unwrap(), ser(&[3, 6]));
        assert!(matches!(total_walks_from_pair(&phi, &bar, 3), Err(Error::Truncated { .. })));
    }

    #[test]
    fn godsil_mckay_square() {
        let u = wi_squared_prefix(&ser(&[3, 6, 12]), &ser(&[2, 2, 2]), &ser(&[1, 0, 2])).unwrap();
        assert_eq!(u, ser(&[0, 1, 4, 12]));
        let u = wi_squared_prefix(&ser(&[3, 4, 6]), &ser(&[2, 0, 0]), &ser(&[1, 0, 2])).unwrap();
        assert_eq!(u, ser(&[0, 1, 4, 8]));
        let u = wi_squared_prefix(&ser(&[5, 0, 0]), &ser(&[4, 0, 0]), &ser(&[1, 0, 0])).unwrap();
        assert_eq!(u, ser(&[0, 1, 0, 0]));
    }

    fn cols(w: &WalkMatrix) -> Vec<Vec<i64>> {
        w.columns().iter().map(|c| c.iter().map(|v| i64::try_from(v).unwrap()).collect()).collect()
    }

    #[test]
    fn walk_matrices() {
        assert_eq!(cols(&walk_matrix(&Graph::complete(3))), vec![vec![1; 3], vec![2; 3], vec![4; 3]]);
        let s4 = walk_matrix(&Graph::star(4));
        assert_eq!(cols(&s4)[..3], [vec![1; 4], vec![3, 1, 1, 1], vec![3; 4]]);
        assert_eq!(cols(&walk_matrix(&Graph::path(3))), vec![vec![1, 1, 1], vec![1, 2, 1], vec![2, 2, 2]]);
        assert_eq!(walk_matrix(&Graph::complete(3)).rank_q(), 1);
        assert_eq!(s4.rank_q(), 2);
        assert_eq!(walk_matrix(&Graph::path(4)).rank_f2(), 2);
        // reversal symmetry: rows 0,3 and 1,2 coincide
        assert_eq!(walk_matrix(&Graph::path(4)).rank_q(), 2);
        assert_eq!(walk_matrix(&Graph::path(3).disjoint_union(&Graph::empty(1))).rank_q(), 3);
    }

    #[test]
    fn walk_matrix_round_trip() {
        for g in [Graph::complete(3), Graph::path(4), Graph::empty(4), Graph::star(5), Graph::cycle(6)] {
            let d = deck(&g, true, None).unwrap();
            let w = walk_matrix_from_generalized_deck(&d, &charpoly(&g), &charpoly(&g.complement())).unwrap();
            assert_eq!(w, walk_matrix(&g), "{g:?}");
        }
    }

    #[test]
    fn gram() {
        let rows = vec![vec![BigInt::from(1), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(2)], vec![
            BigInt::from(1),
            BigInt::from(1),
        ]];
        let w: Vec<i64> = gram_extend(&rows).iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(w, vec![3, 4, 6]);
    }
}
