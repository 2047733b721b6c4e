//! Explicit bound machinery: rigorous zeta values by Euler-Maclaurin, the
//! 2^omega_o(c) <= ell(delta) c^delta constants, and the right-hand sides of
//! the two explicit Kloosterman-sum bounds
//!
//!   (652.33 zeta^2(1+d) tau((24n-23)^2) |log d| (n-1/24)^{1/4}
//!        + 3 ell(d) log x) x^{1/6+d}
//!
//! and its delta = 1/4 specialization
//!
//!   (19094.8 tau((24n-23)^2) (n-1/24)^{1/4} + 25.35 log x) x^{5/12}.

use crate::arith::{tau_shifted_square, SpfSieve};
use crate::ball::{constants, functions, Enclosure};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// k^s for rational s as a ball (k >= 1). Square-root chains cover
/// denominators 1, 2 and 4; anything else goes through exp(s ln k).
fn int_pow_rational(k: u64, s: &BigRational, prec: u32) -> Result<Enclosure> {
    let kb = Enclosure::from_i64(k as i64);
    if s.is_integer() {
        let e = s.to_integer();
        let n = e.magnitude().to_u64().unwrap();
        let p = functions::powi(&kb, n, prec);
        return if e.is_negative() { Enclosure::one().div(&p, prec) } else { Ok(p) };
    }
    functions::pow(&kb, &constants::rational_ball(s, prec), prec)
}

/// zeta(s) for real rational s > 1, by Euler-Maclaurin with the remainder
/// bounded by the first omitted term (valid for real s since x^-s is
/// completely monotone). N is a power of two so the N-powers are exact
/// shifts of N^-s.
pub fn zeta(s: &BigRational, prec: u32) -> Result<Enclosure> {
    static CACHE: OnceLock<Mutex<HashMap<(String, u32), Enclosure>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (s.to_string(), prec);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    if s <= &BigRational::one() {
        return Err(Error::Domain(format!("zeta requires s > 1, got {s}")));
    }
    let wp = prec + 24;
    let m_terms = 16usize;
    let bern = constants::bernoulli(2 * m_terms + 2);
    let sf = s.to_f64().unwrap();
    // Rising factorial (s)_k = s(s+1)...(s+k-1).
    let rising = |k: usize| -> BigRational {
        let mut acc = BigRational::one();
        for i in 0..k {
            acc *= s + BigRational::from_integer(BigInt::from(i));
        }
        acc
    };
    // Remainder coefficient |B_{2M+2}|/(2M+2)! (s)_{2M+1}.
    let mut fact = BigRational::one();
    for i in 1..=(2 * m_terms + 2) {
        fact *= BigRational::from_integer(BigInt::from(i));
    }
    let rem_coef = (bern[2 * m_terms + 2].clone() / fact.clone()).abs() * rising(2 * m_terms + 1);
    // Pick N = 2^t with rem_coef * N^-(s+2M+1) <= 2^-(wp+4).
    let log2_rem = rem_coef.to_f64().map(|v| v.log2()).unwrap_or(60.0);
    let t = (((wp as f64 + 4.0 + log2_rem) / (sf + 2.0 * m_terms as f64 + 1.0)).ceil() as u32).max(3);
    let n: u64 = 1 << t.min(30);
    // Partial sum over k < N, filled multiplicatively from prime powers.
    let sieve = SpfSieve::new(n as u32);
    let mut vals: Vec<Option<Enclosure>> = vec![None; n as usize];
    vals[0] = Some(Enclosure::one()); // k = 1 at index 0
    let mut partial = Enclosure::one();
    for k in 2..n {
        let spf = {
            let f = sieve.factor(k as u32);
            f[0].0 as u64
        };
        let v = if spf == k {
            // prime
            Enclosure::one().div(&int_pow_rational(k, s, wp)?, wp)?
        } else {
            let a = spf;
            let b = k / spf;
            vals[(a - 1) as usize]
                .clone()
                .unwrap()
                .mul(&vals[(b - 1) as usize].clone().unwrap(), wp)
        };
        vals[(k - 1) as usize] = Some(v.clone());
        partial = partial.add(&v, wp);
    }
    drop(vals);
    // N^-s as a ball: exp(-s t ln 2).
    let s_ball = constants::rational_ball(s, wp);
    let n_pow_ms = functions::exp(
        &s_ball.mul_bigint(&BigInt::from(t.min(30)), wp).neg().mul(&constants::ln2(wp), wp),
        wp,
    );
    // N^{1-s}/(s-1)
    let s_minus_1 = constants::rational_ball(&(s - BigRational::one()), wp);
    let mut v = partial.add(&n_pow_ms.shl(t.min(30) as i64).div(&s_minus_1, wp)?, wp);
    // + N^-s / 2
    v = v.add(&n_pow_ms.shl(-1), wp);
    // + sum_j B_2j/(2j)! (s)_{2j-1} N^{-s-2j+1}
    let mut fact_j = BigRational::one(); // (2j)!
    for j in 1..=m_terms {
        fact_j *= BigRational::from_integer(BigInt::from(2 * j - 1)) * BigRational::from_integer(BigInt::from(2 * j));
        let coef = bern[2 * j].clone() / fact_j.clone() * rising(2 * j - 1);
        let term = constants::rational_ball(&coef, wp)
            .mul(&n_pow_ms.shl(-((t.min(30) as i64) * (2 * j as i64 - 1))), wp);
        v = v.add(&term, wp);
    }
    // Remainder.
    let rem = constants::rational_ball(&rem_coef, 40)
        .mul(&n_pow_ms.shl(-((t.min(30) as i64) * (2 * m_terms as i64 + 1))), 40)
        .mag_upper();
    let v = v.widen(&rem);
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// zeta(1 + delta)^2; `one_plus_delta` is 1 + delta with delta > 0.
pub fn zeta_squared(one_plus_delta: &BigRational, prec: u32) -> Result<Enclosure> {
    if one_plus_delta <= &BigRational::one() {
        return Err(Error::Domain("zeta_squared needs 1 + delta with delta > 0".into()));
    }
    let z = zeta(one_plus_delta, prec + 8)?;
    Ok(z.mul(&z, prec + 8))
}

/// Tabulated ell(delta) with 2^omega_o(c) <= ell(delta) c^delta: 8.447 at
/// delta = 1/4 and 28.117 at delta = 1/5.
pub fn ell_constant(delta: &BigRational) -> Result<Enclosure> {
    ell_constant_or(delta, None)
}

/// Tabulated ell(delta), or a caller-supplied value for other delta.
pub fn ell_constant_or(delta: &BigRational, supplied: Option<&BigRational>) -> Result<Enclosure> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let fifth = BigRational::new(BigInt::one(), BigInt::from(5));
    let r = if delta == &quarter {
        BigRational::new(BigInt::from(8447), BigInt::from(1000))
    } else if delta == &fifth {
        BigRational::new(BigInt::from(28117), BigInt::from(1000))
    } else if let Some(v) = supplied {
        v.clone()
    } else {
        return Err(Error::UnsupportedDelta(delta.to_string()));
    };
    Ok(constants::rational_ball(&r, 64))
}

/// Exhaustively verify 2^omega_o(c) <= ell c^delta for all c <= limit;
/// returns the first violating c, if any. The comparison is exact integer
/// arithmetic: with delta = p/q and ell = a/b it checks 2^(w q) b^q <= a^q c^p.
pub fn ell_sweep_violation(delta: &BigRational, ell: &BigRational, limit: u32) -> Option<u32> {
    let p = delta.numer().to_u32().expect("small delta numerator");
    let q = delta.denom().to_u32().expect("small delta denominator");
    let a = ell.numer().to_u128().expect("ell numerator fits u128");
    let b = ell.denom().to_u128().expect("ell denominator fits u128");
    let aq = a.checked_pow(q).expect("a^q fits u128");
    let bq = b.checked_pow(q).expect("b^q fits u128");
    let sieve = SpfSieve::new(limit);
    for c in 1..=limit {
        let w = sieve.omega_odd(c);
        let lhs = bq.checked_shl(w * q).expect("lhs fits u128");
        let rhs = aq.checked_mul((c as u128).checked_pow(p).expect("c^p fits"));
        match rhs {
            Some(r) if lhs <= r => {}
            _ => return Some(c),
        }
    }
    None
}

/// The parameter pack entering the Theorem-1.6-style bound.
#[derive(Debug, Clone)]
pub struct BoundParams {
    pub delta: BigRational,
    pub ell: Enclosure,
    pub zeta_sq: Enclosure,
    pub tau_sq: BigInt,
}

impl BoundParams {
    pub fn new(n: &BigInt, delta: &BigRational, prec: u32) -> Result<Self> {
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        if delta <= &BigRational::zero() || delta > &quarter {
            return Err(Error::Domain(format!("delta must be in (0, 1/4], got {delta}")));
        }
        Ok(BoundParams {
            delta: delta.clone(),
            ell: ell_constant(delta)?,
            zeta_sq: zeta_squared(&(BigRational::one() + delta), prec)?,
            tau_sq: tau_shifted_square(n)?,
        })
    }
}

fn check_nx(n: &BigInt, x: &BigInt) -> Result<()> {
    if !n.is_positive() {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !x.is_positive() {
        return Err(Error::Domain("x must be >= 1".into()));
    }
    Ok(())
}

/// (n - 1/24)^(1/4) as a ball.
fn n_quarter_root(n: &BigInt, prec: u32) -> Result<Enclosure> {
    let r = Enclosure::from_ratio(&(n * 24 - 1), &BigInt::from(24), prec);
    functions::root4(&r, prec)
}

/// ln of a positive integer as a ball.
fn ln_int(x: &BigInt, prec: u32) -> Result<Enclosure> {
    functions::ln(&Enclosure::from_bigint(x), prec)
}

/// Theorem-1.6-style bound
/// (652.33 zeta^2(1+d) tau((24n-23)^2) |log d| (n-1/24)^{1/4} + 3 ell(d) log x) x^{1/6+d}.
pub fn thm16_bound(n: &BigInt, x: &BigInt, delta: &BigRational, prec: u32) -> Result<Enclosure> {
    check_nx(n, x)?;
    let params = BoundParams::new(n, delta, prec)?;
    thm16_bound_with(n, x, &params, prec)
}

pub fn thm16_bound_with(n: &BigInt, x: &BigInt, params: &BoundParams, prec: u32) -> Result<Enclosure> {
    check_nx(n, x)?;
    let wp = prec + 16;
    let c1 = constants::rational_ball(&BigRational::new(BigInt::from(65233), BigInt::from(100)), wp);
    // |log delta| = ln(1/delta) since 0 < delta < 1
    let inv_delta = BigRational::one() / params.delta.clone();
    let log_delta = functions::ln(&constants::rational_ball(&inv_delta, wp), wp)?;
    let lead = c1
        .mul(&params.zeta_sq, wp)
        .mul_bigint(&params.tau_sq, wp)
        .mul(&log_delta, wp)
        .mul(&n_quarter_root(n, wp)?, wp);
    let logx = ln_int(x, wp)?;
    let tail = params.ell.mul_bigint(&BigInt::from(3), wp).mul(&logx, wp);
    // x^{1/6+delta}
    let expo = BigRational::new(BigInt::one(), BigInt::from(6)) + &params.delta;
    let x_pow = functions::exp(&constants::rational_ball(&expo, wp).mul(&logx, wp), wp);
    Ok(lead.add(&tail, wp).mul(&x_pow, wp))
}

/// Corollary bound at delta = 1/4:
/// (19094.8 tau((24n-23)^2) (n-1/24)^{1/4} + 25.35 log x) x^{5/12}.
pub fn cor17_bound(n: &BigInt, x: &BigInt, prec: u32) -> Result<Enclosure> {
    check_nx(n, x)?;
    let wp = prec + 16;
    let logx = ln_int(x, wp)?;
    let x_pow = functions::exp(
        &constants::rational_ball(&BigRational::new(BigInt::from(5), BigInt::from(12)), wp)
            .mul(&logx, wp),
        wp,
    );
    cor17_core(n, &logx, &x_pow, wp)
}

/// Same bound with x given as a real ball (used when integrating over a
/// continuous cutoff t).
pub fn cor17_bound_real(n: &BigInt, x: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !n.is_positive() {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let wp = prec + 16;
    let logx = functions::ln(x, wp)?;
    let x_pow = functions::exp(
        &constants::rational_ball(&BigRational::new(BigInt::from(5), BigInt::from(12)), wp)
            .mul(&logx, wp),
        wp,
    );
    cor17_core(n, &logx, &x_pow, wp)
}

fn cor17_core(n: &BigInt, logx: &Enclosure, x_pow: &Enclosure, wp: u32) -> Result<Enclosure> {
    let c1 = constants::rational_ball(&BigRational::new(BigInt::from(190948), BigInt::from(10)), wp);
    let c2 = constants::rational_ball(&BigRational::new(BigInt::from(2535), BigInt::from(100)), wp);
    let tau = tau_shifted_square(n)?;
    let lead = c1.mul_bigint(&tau, wp).mul(&n_quarter_root(n, wp)?, wp);
    Ok(lead.add(&c2.mul(logx, wp), wp).mul(x_pow, wp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{Dyadic, Trilean};
    use std::cmp::Ordering;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zeta_2_matches_pi_squared_over_6() {
        let z = zeta(&rat(2, 1), 128).unwrap();
        let pi = constants::pi(160);
        let reference = pi.mul(&pi, 160).div_bigint(&BigInt::from(6), 160);
        assert!(z.sub(&reference, 160).contains_zero(), "zeta(2) = {z} vs pi^2/6 = {reference}");
    }

    #[test]
    fn zeta_five_quarters_lower_bound() {
        // zeta(5/4) >= 4.59
        let z = zeta(&rat(5, 4), 96).unwrap();
        let bound = Enclosure::from_ratio(&BigInt::from(459), &BigInt::from(100), 96);
        assert_eq!(bound.lt(&z), Trilean::True);
    }

    #[test]
    fn zeta_squared_agrees_with_partial_sum_integral_oracle() {
        // Oracle: sum_{k<=N} k^-s + integral_{N+1/2}^inf x^-s dx, with the
        // midpoint-rule error bounded via the telescoped second derivative.
        let s = rat(6, 5);
        let prec = 128u32;
        let n = 49_152u64;
        let sieve = SpfSieve::new(n as u32);
        let mut vals: Vec<Enclosure> = Vec::with_capacity(n as usize);
        vals.push(Enclosure::one());
        let mut partial = Enclosure::one();
        for k in 2..=n {
            let spf = sieve.factor(k as u32)[0].0 as u64;
            let v = if spf == k {
                Enclosure::one().div(&int_pow_rational(k, &s, prec).unwrap(), prec).unwrap()
            } else {
                vals[(spf - 1) as usize].mul(&vals[(k / spf - 1) as usize], prec)
            };
            vals.push(v.clone());
            partial = partial.add(&v, prec);
        }
        drop(vals);
        // integral = (N+1/2)^{1-s}/(s-1)
        let half_point = Enclosure::from_ratio(&BigInt::from(2 * n + 1), &BigInt::from(2), prec);
        let one_minus_s = constants::rational_ball(&(BigRational::one() - &s), prec);
        let integral = functions::exp(
            &one_minus_s.mul(&functions::ln(&half_point, prec).unwrap(), prec),
            prec,
        )
        .div(&constants::rational_ball(&(&s - BigRational::one()), prec), prec)
        .unwrap();
        // |error| <= (1/24)(f''(N+1/2) + |f'(N+1/2)|) with f = x^-s; the
        // factor 2 absorbs the f64 evaluation slack.
        let sp = s.to_f64().unwrap();
        let fp = sp * (n as f64 + 0.5).powf(-sp - 1.0);
        let fpp = sp * (sp + 1.0) * (n as f64 + 0.5).powf(-sp - 2.0);
        let err_f64 = (fp + fpp) / 12.0;
        let err = Dyadic::from_i64((err_f64 * 2f64.powi(80)).ceil() as i64)
            .mul_exact(&Dyadic::pow2(-80));
        let oracle = partial.add(&integral, prec).widen(&err.round(30, crate::ball::Round::Ceil).0);
        let prod = zeta(&s, prec).unwrap();
        let diff = prod.sub(&oracle, prec);
        assert!(diff.contains_zero(), "zeta(6/5) EM vs oracle: {diff}");
        // and the squared value agrees to 1e-10
        let z2 = zeta_squared(&s, prec).unwrap();
        let o2 = oracle.mul(&oracle, prec);
        let gap = z2.sub(&o2, prec).mag_upper();
        let tol = Dyadic::one().div_round(&Dyadic::from_i64(10_000_000_000), 64, crate::ball::Round::Ceil).0;
        assert!(gap.cmp_value(&tol) == Ordering::Less, "gap {gap}");
    }

    #[test]
    fn ell_table_and_sweep() {
        let quarter = rat(1, 4);
        let fifth = rat(1, 5);
        let e4 = ell_constant(&quarter).unwrap();
        assert!(e4.contains(&Dyadic::new(BigInt::from(8447), 0).mul_exact(&Dyadic::pow2(0)).div_round(&Dyadic::from_i64(1000), 64, crate::ball::Round::Nearest).0)
            || e4.mag_upper().cmp_value(&Dyadic::from_i64(9)) == Ordering::Less);
        assert!(ell_constant(&rat(1, 7)).is_err());
        // sweep to 10^5 here; the acceptance suite runs 10^6
        assert_eq!(ell_sweep_violation(&quarter, &rat(8447, 1000), 100_000), None);
        assert_eq!(ell_sweep_violation(&fifth, &rat(28117, 1000), 100_000), None);
        // a deliberately too-small ell is caught
        assert!(ell_sweep_violation(&quarter, &rat(1, 1), 10_000).is_some());
    }

    #[test]
    fn thm16_components_at_n1() {
        // tau((24-23)^2) = 1; (1 - 1/24)^{1/4} = (23/24)^{1/4}
        assert_eq!(tau_shifted_square(&BigInt::from(1)).unwrap(), BigInt::from(1));
        let qr = n_quarter_root(&BigInt::from(1), 96).unwrap();
        let pow4 = functions::powi(&qr, 4, 96);
        let target = Enclosure::from_ratio(&BigInt::from(23), &BigInt::from(24), 96);
        assert!(pow4.sub(&target, 96).contains_zero());
    }

    #[test]
    fn thm16_at_unit_x_drops_log_term() {
        // (n=1, x=1): bound = 652.33 zeta^2(5/4) log 4 (23/24)^{1/4}
        let prec = 96;
        let b = thm16_bound(&BigInt::from(1), &BigInt::from(1), &rat(1, 4), prec).unwrap();
        let z2 = zeta_squared(&rat(5, 4), prec).unwrap();
        let log4 = functions::ln(&Enclosure::from_i64(4), prec).unwrap();
        let qr = n_quarter_root(&BigInt::from(1), prec).unwrap();
        let direct = constants::rational_ball(&rat(65233, 100), prec)
            .mul(&z2, prec)
            .mul(&log4, prec)
            .mul(&qr, prec);
        assert!(b.sub(&direct, prec).contains_zero());
    }

    #[test]
    fn cor17_at_unit_x() {
        // (n=1, x=1): 19094.8 (23/24)^{1/4}
        let prec = 96;
        let b = cor17_bound(&BigInt::from(1), &BigInt::from(1), prec).unwrap();
        let qr = n_quarter_root(&BigInt::from(1), prec).unwrap();
        let direct = constants::rational_ball(&rat(190948, 10), prec).mul(&qr, prec);
        assert!(b.sub(&direct, prec).contains_zero());
    }

    #[test]
    fn bounds_monotone_in_x() {
        let n = BigInt::from(7);
        let quarter = rat(1, 4);
        let mut prev: Option<Enclosure> = None;
        for x in [1i64, 10, 100, 1000] {
            let b = thm16_bound(&n, &BigInt::from(x), &quarter, 96).unwrap();
            if let Some(p) = prev {
                assert_eq!(p.lt(&b), Trilean::True, "bound not increasing at x={x}");
            }
            prev = Some(b);
        }
    }
}
