//! Decimal rendering of dyadics and enclosures ("mid ± rad", scientific
//! notation, and width-checked significant-figure output).

use super::dyadic::Dyadic;
use super::enclosure::Enclosure;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Decimal exponent e10 and a `digits`-digit decimal mantissa m so that
/// |x| ~ 0.m... * 10^(e10+1); more precisely m = round(|x| * 10^(digits-1-e10))
/// with 10^(digits-1) <= m < 10^digits.
fn sci_parts(x: &Dyadic, digits: u32) -> (BigInt, i64) {
    debug_assert!(!x.is_zero());
    debug_assert!(digits >= 1);
    // First estimate of floor(log10 |x|) from the binary magnitude.
    let mut e10 = (((x.msb_exp() - 1) as f64) * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        let m = scale_to_integer(x, digits as i64 - 1 - e10);
        let lo = BigInt::from(10).pow(digits - 1);
        let hi = BigInt::from(10).pow(digits);
        if m < lo {
            e10 -= 1;
        } else if m >= hi {
            e10 += 1;
        } else {
            return (m, e10);
        }
    }
}

/// round(|x| * 10^k) as a BigInt (k may be negative).
fn scale_to_integer(x: &Dyadic, k: i64) -> BigInt {
    let mag = x.abs();
    if k >= 0 {
        let p = BigInt::from(10).pow(k as u32);
        mag.mul_exact(&Dyadic::from_bigint(p)).round_to_integer()
    } else {
        let p = BigInt::from(10).pow((-k) as u32);
        // mag / 10^p, rounded to nearest
        let (q, _) = mag.div_round(&Dyadic::from_bigint(p), (mag.bits() + 64) as u32, super::dyadic::Round::Nearest);
        q.round_to_integer()
    }
}

/// `x` in scientific notation with `digits` significant digits.
pub fn dyadic_to_sci(x: &Dyadic, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (m, e10) = sci_parts(x, digits.max(1));
    let s = m.to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    if digits == 1 {
        return format!("{sign}{s}e{e10}");
    }
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

/// `mid ± rad` rendering. Exact values print as plain decimals when they are
/// integers, otherwise scientific.
pub fn enclosure_to_string(e: &Enclosure, digits: u32) -> String {
    if e.is_exact() {
        let m = e.mid();
        if m.is_zero() {
            return "0".to_string();
        }
        if m.exponent() >= 0 && m.msb_exp() < 128 {
            return (m.mantissa() << m.exponent() as u64).to_string();
        }
        return dyadic_to_sci(m, digits);
    }
    let mid = e.mid();
    let rad = e.rad();
    if mid.is_zero() {
        return format!("0 ± {}", dyadic_to_sci(rad, 2));
    }
    // Show mid down to about the radius scale, between 1 and `digits` digits.
    let mid_e10 = (((mid.msb_exp() - 1) as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let rad_e10 = (((rad.msb_exp() - 1) as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let shown = (mid_e10 - rad_e10 + 1).clamp(1, digits as i64) as u32;
    format!("{} ± {}", dyadic_to_sci(mid, shown), dyadic_to_sci(rad, 2))
}

/// Two significant figures of the value enclosed by `e`, as (mantissa_tenths,
/// exp10): the value is mantissa_tenths/10 * 10^exp10, e.g. (21, 15) renders
/// as `2.1e15`. Returns None when the enclosure is wide enough that its
/// endpoints round to different two-figure strings.
pub fn two_sig_figs(e: &Enclosure) -> Option<(u32, i64)> {
    if e.mid().is_zero() || e.lower().is_negative() {
        return None;
    }
    let (m_mid, e_mid) = sci_parts(e.mid(), 2);
    let (m_lo, e_lo) = sci_parts(&e.lower(), 2);
    let (m_hi, e_hi) = sci_parts(&e.upper(), 2);
    if (m_lo.cmp(&m_mid), e_lo != e_mid) != (Ordering::Equal, false) {
        return None;
    }
    if (m_hi.cmp(&m_mid), e_hi != e_mid) != (Ordering::Equal, false) {
        return None;
    }
    let m: u32 = m_mid.to_string().parse().ok()?;
    Some((m, e_mid))
}

/// Render the output of [`two_sig_figs`] the way the comparison tables do.
pub fn format_two_sig_figs(m: u32, e10: i64) -> String {
    format!("{}.{}e{}", m / 10, m % 10, e10)
}

pub fn bigint_is_zero(n: &BigInt) -> bool {
    n.is_zero()
}

pub fn bigint_abs(n: &BigInt) -> BigInt {
    n.abs()
}
