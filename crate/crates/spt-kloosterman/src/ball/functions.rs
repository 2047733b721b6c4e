//! Rigorous elementary functions on enclosures. Each routine returns a ball
//! containing the exact image of the input ball: truncation tails are added
//! to the radius explicitly and all arithmetic goes through ball operations,
//! so rounding is accounted for automatically.

use super::constants::{ln2, pi};
use super::dyadic::Dyadic;
use super::enclosure::{div_up, mul_up, Enclosure};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;

/// Largest permitted binary magnitude of arguments to exp/trig reduction.
const MAX_ARG_MSB: i64 = 44;

fn isqrt_u32(n: u32) -> u32 {
    (n as f64).sqrt() as u32
}

/// Upper bound on u^m / m! rounded upward, for u >= 0.
fn pow_over_factorial_up(u: &Dyadic, m: u64) -> Dyadic {
    let mut t = Dyadic::one();
    for i in 1..=m {
        t = mul_up(&t, u);
        t = div_up(&t, &Dyadic::from_i64(i as i64));
    }
    t
}

/// e^x over the ball.
pub fn exp(x: &Enclosure, prec: u32) -> Enclosure {
    let wp = prec + 32;
    // Wide input: exp is monotone, evaluate at the endpoints.
    if !x.rad().is_zero() && x.rad().cmp_value(&Dyadic::new(BigInt::from(1), -2)) == Ordering::Greater
    {
        let lo = exp(&Enclosure::exact(x.lower()), prec);
        let hi = exp(&Enclosure::exact(x.upper()), prec);
        return Enclosure::from_interval(&lo.lower(), &hi.upper(), prec);
    }
    // Argument reduction x = k ln2 + r.
    let k: BigInt = if x.mid().is_zero() {
        BigInt::zero()
    } else {
        assert!(
            x.mid().msb_exp() < MAX_ARG_MSB,
            "exp argument out of supported range"
        );
        let inv_ln2 = Enclosure::one().div(&ln2(64), 64).unwrap();
        x.mid().mul_exact(inv_ln2.mid()).round_to_integer()
    };
    let kbits = k.bits() as u32;
    let wp2 = wp + kbits + 8;
    let r = if k.is_zero() {
        x.clone()
    } else {
        x.sub(&ln2(wp2).mul_bigint(&k, wp2), wp2)
    };
    // Halve j more times so the Taylor series is short.
    let j = isqrt_u32(wp2).clamp(4, 64) as i64;
    let rj = r.shl(-j);
    let u = rj.mag_upper();
    // Choose the term count from the tail requirement u^(N+1)/(N+1)! small.
    let target = -((wp2 + j as u32 + 8) as f64);
    let log2u = if u.is_zero() { -1.0e9 } else { (u.msb_exp()) as f64 };
    let mut n_terms = 1u64;
    let mut acc = log2u;
    while acc > target && n_terms < 10_000 {
        n_terms += 1;
        acc += log2u - ((n_terms + 1) as f64).log2();
    }
    // Horner evaluation of sum_{i<=N} rj^i / i!.
    let one = Enclosure::one();
    let mut s = one.clone();
    for i in (1..=n_terms).rev() {
        s = s.div_bigint(&BigInt::from(i), wp2).mul(&rj, wp2).add(&one, wp2);
    }
    // Tail <= u^(N+1)/(N+1)! * 1/(1-u) <= 2 * u^(N+1)/(N+1)!.
    if !u.is_zero() {
        let tail = pow_over_factorial_up(&u, n_terms + 1).shl(1);
        s = s.widen(&tail);
    }
    for _ in 0..j {
        s = s.mul(&s, wp2);
    }
    let kshift = k.to_i64().expect("exp reduction count fits i64");
    s.shl(kshift)
}

/// Natural logarithm over a positive ball.
pub fn ln(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !x.lower().is_positive() {
        return Err(Error::Domain("log of an interval not strictly positive".into()));
    }
    let wp = prec + 24;
    // Wide input: monotone endpoint evaluation.
    let four_rad = x.rad().shl(2);
    if four_rad.cmp_value(&x.mid().abs()) == Ordering::Greater {
        let lo = ln(&Enclosure::exact(x.lower()), prec)?;
        let hi = ln(&Enclosure::exact(x.upper()), prec)?;
        return Ok(Enclosure::from_interval(&lo.lower(), &hi.upper(), prec));
    }
    // Normalize: x = m * 2^e with mid(m) in [sqrt(1/2), sqrt(2)).
    let mut e = x.mid().msb_exp();
    let mut m = x.shl(-e);
    // 0.70710678 ~ 23170/2^15
    let sqrt_half = Dyadic::new(BigInt::from(23170), -15);
    if m.mid().cmp_value(&sqrt_half) == Ordering::Less {
        m = m.shl(1);
        e -= 1;
    }
    let one = Enclosure::one();
    let u = m.sub(&one, wp).div(&m.add(&one, wp), wp)?;
    let u2 = u.mul(&u, wp);
    // |u| <= 0.1716..; each series term gains ~5 bits.
    let n_terms = (wp / 5 + 4) as u64;
    let mut pw = u.clone();
    let mut s = Enclosure::zero();
    for k in 0..n_terms {
        s = s.add(&pw.div_bigint(&BigInt::from(2 * k + 1), wp), wp);
        pw = pw.mul(&u2, wp);
    }
    // Tail <= |u|^(2N+1) / ((2N+1)(1-u^2)) <= 1.03 |u|^(2N+1) / (2N+1).
    let uu = u.mag_upper();
    if !uu.is_zero() {
        let mut t = Dyadic::one();
        for _ in 0..(2 * n_terms + 1) {
            t = mul_up(&t, &uu);
        }
        let t = div_up(&t, &Dyadic::from_i64((2 * n_terms + 1) as i64));
        // factor 1.03 < 33/32
        let t = mul_up(&t, &Dyadic::new(BigInt::from(33), -5));
        s = s.widen(&t);
    }
    let mut v = s.shl(1);
    if e != 0 {
        let ebits = 64 - (e.unsigned_abs().leading_zeros());
        v = v.add(&ln2(wp + ebits + 4).mul_bigint(&BigInt::from(e), wp), wp);
    }
    Ok(v)
}

/// cos over the ball.
pub fn cos(x: &Enclosure, prec: u32) -> Enclosure {
    trig(x, prec, false)
}

/// sin over the ball.
pub fn sin(x: &Enclosure, prec: u32) -> Enclosure {
    trig(x, prec, true)
}

fn unit_ball(prec: u32) -> Enclosure {
    Enclosure::from_interval(&Dyadic::from_i64(-1), &Dyadic::from_i64(1), prec)
}

fn trig(x: &Enclosure, prec: u32, want_sin: bool) -> Enclosure {
    let wp = prec + 24;
    // Reduce a point, then widen by the input radius (|f'| <= 1).
    if x.rad().cmp_value(&Dyadic::from_i64(4)) == Ordering::Greater {
        return unit_ball(prec);
    }
    let point = Enclosure::exact(x.mid().clone());
    let v = trig_point(&point, wp, want_sin);
    let v = if x.rad().is_zero() { v } else { v.widen(x.rad()) };
    // Clamp into [-1, 1] if the radius overshoots.
    if v.mag_upper().cmp_value(&Dyadic::from_i64(1)) == Ordering::Greater
        && v.rad().cmp_value(&Dyadic::one()) == Ordering::Greater
    {
        return unit_ball(prec);
    }
    v
}

fn trig_point(x: &Enclosure, wp: u32, want_sin: bool) -> Enclosure {
    if !x.mid().is_zero() {
        assert!(x.mid().msb_exp() < MAX_ARG_MSB, "trig argument out of supported range");
    }
    // q = round(x / (pi/2)); r = x - q pi/2 with |r| <= pi/4 + eps.
    let q: BigInt = if x.mid().is_zero() {
        BigInt::zero()
    } else {
        let two_over_pi = Enclosure::from_i64(2).div(&pi(64), 64).unwrap();
        x.mid().mul_exact(two_over_pi.mid()).round_to_integer()
    };
    let qbits = q.bits() as u32;
    let wp2 = wp + qbits + 8;
    let r = if q.is_zero() {
        x.clone()
    } else {
        x.sub(&pi(wp2).shl(-1).mul_bigint(&q, wp2), wp2)
    };
    let quadrant = q.mod_floor(&BigInt::from(4)).to_i64().unwrap();
    let (v, negate) = match (quadrant, want_sin) {
        (0, false) => (cos_core(&r, wp2), false),
        (1, false) => (sin_core(&r, wp2), true),
        (2, false) => (cos_core(&r, wp2), true),
        (3, false) => (sin_core(&r, wp2), false),
        (0, true) => (sin_core(&r, wp2), false),
        (1, true) => (cos_core(&r, wp2), false),
        (2, true) => (sin_core(&r, wp2), true),
        (3, true) => (cos_core(&r, wp2), true),
        _ => unreachable!(),
    };
    if negate {
        v.neg()
    } else {
        v
    }
}

/// cos on |r| <= 0.8: alternating series, tail bounded by the first omitted
/// term.
fn cos_core(r: &Enclosure, wp: u32) -> Enclosure {
    let r2 = r.mul(r, wp);
    let mut term = Enclosure::one();
    let mut s = Enclosure::one();
    let n_terms = series_len_trig(wp);
    for k in 1..=n_terms {
        term = term.mul(&r2, wp).div_bigint(&BigInt::from((2 * k - 1) * (2 * k)), wp);
        s = if k % 2 == 1 { s.sub(&term, wp) } else { s.add(&term, wp) };
    }
    let u = r.mag_upper();
    let tail = pow_over_factorial_up(&u, 2 * n_terms + 2);
    s.widen(&tail)
}

/// sin on |r| <= 0.8.
fn sin_core(r: &Enclosure, wp: u32) -> Enclosure {
    let r2 = r.mul(r, wp);
    let mut term = r.clone();
    let mut s = r.clone();
    let n_terms = series_len_trig(wp);
    for k in 1..=n_terms {
        term = term.mul(&r2, wp).div_bigint(&BigInt::from((2 * k) * (2 * k + 1)), wp);
        s = if k % 2 == 1 { s.sub(&term, wp) } else { s.add(&term, wp) };
    }
    let u = r.mag_upper();
    let tail = pow_over_factorial_up(&u, 2 * n_terms + 3);
    s.widen(&tail)
}

fn series_len_trig(wp: u32) -> u64 {
    // |r| <= 0.8: need 0.8^(2N)/(2N)! < 2^-(wp+8); factorial growth makes
    // this quick: 2N ~ wp / log2(2N) loosely. Solve numerically.
    let target = -((wp + 8) as f64);
    let mut n = 1u64;
    let mut acc: f64 = 0.0;
    loop {
        // log2 of 0.8^(2n)/(2n)! after incrementing n by 1
        acc += 2.0 * (-0.3219) - (((2 * n - 1) * 2 * n) as f64).log2();
        if acc < target || n > 5_000 {
            return n;
        }
        n += 1;
    }
}

/// sinh over the ball; series below 1/4 to dodge cancellation, exp-based
/// above.
pub fn sinh(x: &Enclosure, prec: u32) -> Enclosure {
    let wp = prec + 16;
    let quarter = Dyadic::new(BigInt::from(1), -2);
    if x.mag_upper().cmp_value(&quarter) != Ordering::Greater {
        // x + x^3/3! + ...
        let x2 = x.mul(x, wp);
        let mut term = x.clone();
        let mut s = x.clone();
        let n_terms = (wp / 4 + 4) as u64;
        for k in 1..=n_terms {
            term = term.mul(&x2, wp).div_bigint(&BigInt::from((2 * k) * (2 * k + 1)), wp);
            s = s.add(&term, wp);
        }
        let u = x.mag_upper();
        let tail = pow_over_factorial_up(&u, 2 * n_terms + 3).shl(1);
        return s.widen(&tail);
    }
    let e = exp(x, wp);
    let ei = exp(&x.neg(), wp);
    e.sub(&ei, wp).shl(-1)
}

/// cosh over the ball.
pub fn cosh(x: &Enclosure, prec: u32) -> Enclosure {
    let wp = prec + 16;
    let e = exp(x, wp);
    let ei = exp(&x.neg(), wp);
    e.add(&ei, wp).shl(-1)
}

/// x^y = exp(y ln x) for positive x.
pub fn pow(x: &Enclosure, y: &Enclosure, prec: u32) -> Result<Enclosure> {
    let wp = prec + 16;
    let l = ln(x, wp)?;
    Ok(exp(&l.mul(y, wp), prec))
}

/// Integer power by squaring (n >= 0).
pub fn powi(x: &Enclosure, n: u64, prec: u32) -> Enclosure {
    let mut result = Enclosure::one();
    let mut base = x.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(&base, prec);
        }
        base = base.mul(&base, prec);
        k >>= 1;
    }
    result
}

/// Fourth root via two square roots.
pub fn root4(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    x.sqrt(prec)?.sqrt(prec)
}

/// Named elementary operations (mirrors the library surface exposed to the
/// CLI).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

pub fn elementary(x: &Enclosure, f: Elementary, prec: u32) -> Result<Enclosure> {
    match f {
        Elementary::Exp => Ok(exp(x, prec)),
        Elementary::Log => ln(x, prec),
        Elementary::Sqrt => x.sqrt(prec),
        Elementary::Sin => Ok(sin(x, prec)),
        Elementary::Cos => Ok(cos(x, prec)),
        Elementary::Sinh => Ok(sinh(x, prec)),
        Elementary::Cosh => Ok(cosh(x, prec)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn assert_contains_rational(e: &Enclosure, num: i64, den: i64) {
        let r = Enclosure::from_ratio(&BigInt::from(num), &BigInt::from(den), 256);
        assert!(
            e.upper().cmp_value(&r.lower()) != Ordering::Less
                && e.lower().cmp_value(&r.upper()) != Ordering::Greater,
            "{e} does not contain {num}/{den}"
        );
    }

    #[test]
    fn exp_zero_is_exactly_one() {
        let v = exp(&Enclosure::zero(), 64);
        assert!(v.is_exact());
        assert_eq!(v.mid(), &Dyadic::one());
    }

    #[test]
    fn exp_one_matches_reference() {
        let v = exp(&Enclosure::one(), 128);
        // e = 2.71828182845904523536...
        let num: BigInt = "271828182845904523536".parse().unwrap();
        let den: BigInt = "100000000000000000000".parse().unwrap();
        let lo = Enclosure::from_ratio(&num, &den, 256);
        assert!(v.contains(lo.mid()) || v.upper().cmp_value(&lo.lower()) != Ordering::Less);
        assert!(v.rad().cmp_value(&Dyadic::pow2(-120)) == Ordering::Less);
        // containment of the 21-digit reference within 1 ulp of its own scale
        assert!(v.sub(&lo, 256).mag_upper().cmp_value(&Dyadic::pow2(-60)) == Ordering::Less);
    }

    #[test]
    fn exp_ln_round_trip() {
        for k in [1i64, 2, 3, 10, 100] {
            let x = Enclosure::from_i64(k);
            let l = ln(&x, 128).unwrap();
            let back = exp(&l, 128);
            assert!(back.contains(&Dyadic::from_i64(k)), "round trip failed for {k}");
        }
    }

    #[test]
    fn ln_rejects_nonpositive_intervals() {
        assert!(ln(&Enclosure::zero(), 64).is_err());
        let straddling = Enclosure::new(Dyadic::from_i64(1), Dyadic::from_i64(2));
        assert!(ln(&straddling, 64).is_err());
    }

    #[test]
    fn ln2_consistency() {
        let l = ln(&Enclosure::from_i64(2), 128).unwrap();
        let c = ln2(128);
        assert!(l.sub(&c, 160).contains_zero());
    }

    #[test]
    fn trig_at_one_vs_rational_taylor_oracle() {
        // Independent oracle: exact rational partial sums of the alternating
        // Taylor series for sin(1) and cos(1); 30 factorial terms go far
        // beyond 1e-20.
        let one = Enclosure::one();
        let s = sin(&one, 128);
        let c = cos(&one, 128);
        let mut fact = BigRational::from_integer(1.into());
        let mut sin_sum = BigRational::zero();
        let mut cos_sum = BigRational::zero();
        for m in 0u32..60 {
            if m > 0 {
                fact *= BigRational::from_integer(BigInt::from(m));
            }
            let term = BigRational::from_integer(1.into()) / fact.clone();
            let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
            let signed = BigRational::from_integer(BigInt::from(sign)) * term;
            if m % 2 == 0 {
                cos_sum += signed;
            } else {
                sin_sum += signed;
            }
        }
        let sref = crate::ball::constants::rational_ball(&sin_sum, 256);
        let cref = crate::ball::constants::rational_ball(&cos_sum, 256);
        assert!(s.sub(&sref, 256).mag_upper().cmp_value(&Dyadic::pow2(-70)) == Ordering::Less);
        assert!(c.sub(&cref, 256).mag_upper().cmp_value(&Dyadic::pow2(-70)) == Ordering::Less);
        // sin^2 + cos^2 = 1
        let id = s.mul(&s, 160).add(&c.mul(&c, 160), 160);
        assert!(id.contains(&Dyadic::one()));
    }

    #[test]
    fn sqrt_23_vs_bisection_oracle() {
        // Bisection oracle with exact rationals to ~1e-30.
        let x = Enclosure::from_i64(23);
        let s = x.sqrt(160).unwrap();
        let mut lo = BigRational::from_integer(4.into());
        let mut hi = BigRational::from_integer(5.into());
        let target = BigRational::from_integer(23.into());
        for _ in 0..110 {
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if &mid * &mid <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lo_b = crate::ball::constants::rational_ball(&lo, 256);
        let hi_b = crate::ball::constants::rational_ball(&hi, 256);
        assert!(s.upper().cmp_value(&lo_b.lower()) != Ordering::Less);
        assert!(s.lower().cmp_value(&hi_b.upper()) != Ordering::Greater);
        // 1e-30 ~ 2^-99.6
        assert!(s.rad().cmp_value(&Dyadic::pow2(-100)) == Ordering::Less);
    }

    #[test]
    fn sinh_cosh_identity() {
        for (num, den) in [(1i64, 8i64), (1, 2), (3, 1), (20, 1)] {
            let x = Enclosure::from_ratio(&BigInt::from(num), &BigInt::from(den), 128);
            let sh = sinh(&x, 128);
            let ch = cosh(&x, 128);
            // cosh^2 - sinh^2 = 1
            let id = ch.mul(&ch, 160).sub(&sh.mul(&sh, 160), 160);
            assert!(id.contains(&Dyadic::one()), "identity fails at {num}/{den}");
        }
    }

    #[test]
    fn pow_matches_sqrt_chain() {
        let x = Enclosure::from_i64(7);
        let quarter = Enclosure::from_ratio(&BigInt::from(1), &BigInt::from(4), 128);
        let via_pow = pow(&x, &quarter, 128).unwrap();
        let via_roots = root4(&x, 128).unwrap();
        assert!(via_pow.sub(&via_roots, 160).contains_zero());
    }

    #[test]
    fn radius_shrinks_with_precision() {
        let x = Enclosure::from_i64(3);
        for f in [Elementary::Exp, Elementary::Log, Elementary::Sqrt, Elementary::Sin, Elementary::Cos]
        {
            let lo = elementary(&x, f, 64).unwrap();
            let hi = elementary(&x, f, 256).unwrap();
            assert!(
                hi.rad().cmp_value(lo.rad()) != Ordering::Greater,
                "radius grew with precision for {f:?}"
            );
        }
    }
}
