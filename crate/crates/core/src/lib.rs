//! Exact-arithmetic toolkit for evolutionary stability in finite symmetric
//! games: Nash and strict Nash tests, ESS, stability against multiple
//! simultaneous mutations (M-ESS), local dominance, invasion barriers, a
//! brute-force oracle that certifies every decision at the definition
//! level, and replicator-dynamics invasion simulations.
//!
//! All decision-relevant arithmetic is exact rational; floating point
//! appears only in the dynamics module.

pub mod barriers;
pub mod catalog;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod oracle;
pub mod rat;
pub mod stability;

pub use error::Error;
pub use game::{MixedStrategy, SymmetricGame};
pub use rat::Rat;
