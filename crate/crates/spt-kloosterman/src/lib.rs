//! Certified arithmetic for the smallest-parts function and its Kloosterman
//! sums.
//!
//! The crate computes Dedekind sums s(d,c) exactly, evaluates the
//! eta-multiplier Kloosterman sums A_c(n) through an exact integer-angle
//! representation, sums the Rademacher-type series for spt(n) and S(n) with
//! enclosure arithmetic, and mechanically checks every explicit inequality
//! the accompanying tables rely on. All real-analytic quantities are carried
//! as midpoint-radius enclosures, so every pass/fail verdict is rigorous at
//! the working precision.

pub mod arith;
pub mod ball;
pub mod dedekind;
pub mod error;
pub mod kloosterman;
pub mod series;
pub mod special;
pub mod verify;

pub use ball::{Dyadic, Enclosure, PrecisionContext, Trilean};
pub use error::{Error, Result};
