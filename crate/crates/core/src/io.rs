//! JSON formats shared by the command-line tool and the web demo.
//!
//! Coefficients are decimal strings, leading coefficient first. A deck is
//! `{"n": 4, "cards": [["1","0","-2","0"], …], "co_cards": […],
//! "co_truncation": 4}`; truncated cards are simply shorter arrays.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::deck_mod::{DeckModReport, Theorem5Verdict};
use crate::error::{Error, Result};
use crate::poly::{Deck, TopCoeffs};
use crate::reconstruct::ReconstructionOutcome;
use crate::ring::{Integers, Modular};

#[derive(Debug, Serialize, Deserialize)]
struct DeckFile {
    n: usize,
    cards: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    co_cards: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    co_truncation: Option<usize>,
    /// present when every coefficient has been reduced modulo this number
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
}

pub fn coeff_strings(coeffs: &[BigInt]) -> Vec<String> {
    coeffs.iter().map(BigInt::to_string).collect()
}

fn parse_coeff(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))
}

/// Accepts strings or (small) JSON integers.
fn coeffs_from_value(v: &Value) -> Result<Vec<BigInt>> {
    let arr = v.as_array().ok_or_else(|| Error::InvalidInput("expected a coefficient array".into()))?;
    arr.iter()
        .map(|c| match c {
            Value::String(s) => parse_coeff(s),
            Value::Number(n) if n.is_i64() || n.is_u64() => parse_coeff(&n.to_string()),
            other => Err(Error::InvalidInput(format!("bad coefficient {other}"))),
        })
        .collect()
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { offset: e.column(), message: format!("line {}: {e}", e.line()) }
}

pub fn deck_to_json(d: &Deck) -> Value {
    let family = |cards: &[TopCoeffs<Integers>]| cards.iter().map(|c| coeff_strings(c.coeffs())).collect::<Vec<_>>();
    let file = DeckFile {
        n: d.order(),
        cards: family(d.cards()),
        co_cards: d.co_cards().map(family),
        co_truncation: d.co_truncation(),
        modulus: None,
    };
    serde_json::to_value(file).expect("plain data")
}

/// The deck with residues in `[0, m)`. Marked with `"modulus"` so that it is
/// never mistaken for an integer deck.
pub fn reduced_deck_to_json(d: &Deck, m: u64) -> Result<Value> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("modulus must be at least 2, got {m}")));
    }
    let z = Modular::new(m);
    let family = |cards: &[TopCoeffs<Integers>]| {
        cards.iter().map(|c| c.coeffs().iter().map(|v| z.reduce(v).to_string()).collect()).collect::<Vec<_>>()
    };
    let file = DeckFile {
        n: d.order(),
        cards: family(d.cards()),
        co_cards: d.co_cards().map(family),
        co_truncation: d.co_truncation(),
        modulus: Some(m),
    };
    Ok(serde_json::to_value(file).expect("plain data"))
}

pub fn deck_from_json(text: &str) -> Result<Deck> {
    let file: DeckFile = serde_json::from_str(text).map_err(json_error)?;
    let n = file.n;
    if let Some(m) = file.modulus {
        return Err(Error::InvalidInput(format!("deck is reduced modulo {m}; an integer deck is required")));
    }
    if n < 2 {
        return Err(Error::InvalidInput("n must be at least 2".into()));
    }
    let family = |cards: &[Vec<String>]| -> Result<Vec<TopCoeffs<Integers>>> {
        cards
            .iter()
            .map(|c| TopCoeffs::new(Integers, n - 1, c.iter().map(|s| parse_coeff(s)).collect::<Result<_>>()?))
            .collect()
    };
    let cards = family(&file.cards)?;
    let co_cards = file.co_cards.as_deref().map(family).transpose()?;
    let deck = Deck::new(n, cards, co_cards)?;
    if let (Some(declared), Some(actual)) = (file.co_truncation, deck.co_truncation()) {
        if declared != actual {
            return Err(Error::InvalidInput(format!("co_truncation {declared} but complement cards have {actual} coefficients")));
        }
    }
    Ok(deck)
}

/// A polynomial file: a bare coefficient array, or an object holding one
/// under `"phi"` or `"poly"`.
pub fn poly_from_json(text: &str) -> Result<Vec<BigInt>> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let arr = match &v {
        Value::Array(_) => &v,
        Value::Object(o) => o
            .get("phi")
            .or_else(|| o.get("poly"))
            .ok_or_else(|| Error::InvalidInput("expected a \"phi\" or \"poly\" field".into()))?,
        _ => return Err(Error::InvalidInput("expected a coefficient array".into())),
    };
    let coeffs = coeffs_from_value(arr)?;
    if coeffs.is_empty() {
        return Err(Error::InvalidInput("empty polynomial".into()));
    }
    Ok(coeffs)
}

pub fn outcome_to_json(o: &ReconstructionOutcome) -> Value {
    match o {
        ReconstructionOutcome::Success { phi, phi_complement } => json!({
            "status": o.status(),
            "phi": coeff_strings(phi.coeffs()),
            "phi_complement": coeff_strings(phi_complement.coeffs()),
        }),
        ReconstructionOutcome::RankTooLow { threshold } => json!({ "status": o.status(), "threshold": threshold }),
        ReconstructionOutcome::NotApplicable { reason } => json!({ "status": o.status(), "reason": reason }),
    }
}

pub fn deck_mod_to_json(r: &DeckModReport) -> Value {
    let t4 = &r.theorem4;
    let theorem5 = match &r.theorem5 {
        Theorem5Verdict::Determined(t5) => json!({
            "phi_const_mod4": t5.phi_const_mod4,
            "phibar_mod4": t5.phibar_mod4,
        }),
        Theorem5Verdict::NotApplicable => json!("not_applicable"),
    };
    json!({
        "bn_mod2": t4.bn_mod2,
        "bn_route": t4.bn_route,
        "walk_matrix_mod2": t4.walk_matrix_mod2,
        "phibar_top_mod4": t4.phibar_top_mod4,
        "phibar_const_mod2": t4.phibar_const_mod2,
        "theorem5": theorem5,
    })
}

pub fn error_json(message: &str) -> Value {
    json!({ "error": message })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::poly::deck;

    #[test]
    fn deck_round_trip() {
        for g in [Graph::path(4), Graph::complete(3)] {
            for d in [deck(&g, false, None).unwrap(), deck(&g, true, Some(2)).unwrap()] {
                let text = deck_to_json(&d).to_string();
                assert_eq!(deck_from_json(&text).unwrap(), d);
            }
        }
    }

    #[test]
    fn deck_text_shape() {
        let d = deck(&Graph::path(3), true, Some(2)).unwrap();
        assert_eq!(
            deck_to_json(&d).to_string(),
            r#"{"n":3,"cards":[["1","0","-1"],["1","0","0"],["1","0","-1"]],"co_cards":[["1","0"],["1","0"],["1","0"]],"co_truncation":2}"#
        );
    }

    #[test]
    fn rejects_bad_decks() {
        assert!(matches!(deck_from_json("{"), Err(Error::Parse { .. })));
        assert!(deck_from_json(r#"{"n":3,"cards":[["1","0","x"],["1","0","0"],["1","0","0"]]}"#).is_err());
        assert!(deck_from_json(r#"{"n":3,"cards":[["1","0","0"]]}"#).is_err());
        assert!(deck_from_json(r#"{"n":3,"cards":[["1","0"],["1","0"],["1","0"]],"co_cards":[["1"],["1"],["1"]],"co_truncation":2}"#).is_err());
    }

    #[test]
    fn reduced_decks_are_marked() {
        let d = deck(&Graph::complete(3), false, None).unwrap();
        let v = reduced_deck_to_json(&d, 4).unwrap();
        assert_eq!(v["modulus"], 4);
        assert_eq!(v["cards"][0], json!(["1", "0", "3"]));
        assert!(deck_from_json(&v.to_string()).is_err());
        assert!(reduced_deck_to_json(&d, 1).is_err());
    }

    #[test]
    fn poly_forms() {
        let want: Vec<BigInt> = [1, 0, -3, -2].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(poly_from_json(r#"["1","0","-3","-2"]"#).unwrap(), want);
        assert_eq!(poly_from_json(r#"{"phi":["1","0","-3","-2"]}"#).unwrap(), want);
        assert_eq!(poly_from_json(r#"[1,0,-3,-2]"#).unwrap(), want);
        assert!(poly_from_json("[]").is_err());
    }
}
