//! Reconstruction of graph characteristic polynomials from polynomial decks.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: graphs, graph6, walk-count oracles
//! - [`ring`], [`poly`], [`series`], [`linalg`]: exact algebra
//! - [`walks`]: walk generating functions and walk matrices
//! - [`reconstruct`]: recovering `(φ^G, φ^Ḡ)` from (partial) generalized decks
//! - [`symm`]: power sums versus elementary symmetric functions modulo prime
//!   powers, and `φ^Ḡ (mod 4)` from `φ^G (mod 4)`
//! - [`deck_mod`]: what the plain deck determines modulo 2 and 4
//! - [`oracle`]: exhaustive enumeration and verification sweeps
//! - [`io`]: JSON formats shared by the command-line tool and the web demo

pub mod deck_mod;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod realroots;
pub mod reconstruct;
pub mod ring;
pub mod series;
pub mod symm;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{emit_graph6, parse_graph6, Graph};
pub use poly::{charpoly, deck, Deck, IntPoly, Poly, TopCoeffs};
pub use ring::{Integers, Modular, Rationals, Ring, RingSpec};
pub use series::SeriesPrefix;
