//! Working-precision context shared by an evaluation, with a doubling
//! escalation policy capped at 2^16 bits.

use crate::error::{Error, Result};

pub const MIN_PREC: u32 = 53;
pub const DEFAULT_PREC: u32 = 64;
pub const PREC_CAP: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { bits: DEFAULT_PREC }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PREC {
            return Err(Error::Domain(format!("precision {bits} below minimum {MIN_PREC}")));
        }
        if bits > PREC_CAP {
            return Err(Error::Domain(format!("precision {bits} above cap {PREC_CAP}")));
        }
        Ok(PrecisionContext { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Doubled-precision context, or None at the cap.
    pub fn escalate(&self) -> Option<Self> {
        if self.bits >= PREC_CAP {
            None
        } else {
            Some(PrecisionContext { bits: (self.bits * 2).min(PREC_CAP) })
        }
    }
}

/// Re-run `f` at doubling precision until it returns `Some`, starting from
/// `ctx`. Returns `UnknownAtCap` if the cap is reached without a verdict.
pub fn resolve_with_escalation<T>(
    ctx: &PrecisionContext,
    f: impl Fn(&PrecisionContext) -> Option<T>,
) -> Result<T> {
    let mut cur = *ctx;
    loop {
        if let Some(v) = f(&cur) {
            return Ok(v);
        }
        match cur.escalate() {
            Some(next) => cur = next,
            None => return Err(Error::UnknownAtCap(cur.bits())),
        }
    }
}
