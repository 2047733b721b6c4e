//! Arbitrary-precision midpoint-radius (ball) arithmetic with rigorous
//! elementary functions: the substrate every analytic quantity in this crate
//! is computed on.

pub mod constants;
mod context;
mod dyadic;
mod enclosure;
pub mod format;
pub mod functions;

pub use context::{resolve_with_escalation, PrecisionContext, DEFAULT_PREC, MIN_PREC, PREC_CAP};
pub use dyadic::{Dyadic, Round};
pub use enclosure::{Enclosure, Trilean};
