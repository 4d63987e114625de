//! Stable-degree polynomial transformation groups over finite rings, built
//! from walks on the incidence graphs `D(n, K)` and their double directed
//! flag graphs, with a symbolic key exchange and a public-key map on top.

pub mod bench;
pub mod error;
pub mod flag;
pub mod graph;
pub mod keyex;
pub mod poly;
pub mod ring;
pub mod verify;

#[cfg(test)]
mod props;

pub use error::{Error, Result};
pub use flag::{Flag, FlagGraph, FlagSide, ZStep, ZWalk, ZWord};
pub use graph::{DGraph, DWalk, Side, Vertex};
pub use keyex::{PrivateKey, PrivateSeed, PublicRule, Transcript, Variant};
pub use poly::{AffineForm, AffineMap, Monomial, Poly, PolyMap};
pub use ring::{Ring, RingElem, RingKind};
