//! Cached rigorous constants: pi, ln 2, the Euler-Mascheroni constant, and
//! exact Bernoulli numbers.

use super::dyadic::Dyadic;
use super::enclosure::Enclosure;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn cache() -> &'static Mutex<HashMap<(u8, u32), Enclosure>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u32), Enclosure>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

const KIND_PI: u8 = 0;
const KIND_LN2: u8 = 1;
const KIND_GAMMA: u8 = 2;

/// arctan(1/q) as a ball at `prec` working bits, via the alternating Taylor
/// series with exact rational terms; the tail is bounded by the first omitted
/// term.
fn atan_inv(q: u64, prec: u32) -> Enclosure {
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut den = BigInt::from(q);
    let mut k = 0u64;
    let mut sum = Enclosure::zero();
    loop {
        let term_den = &den * BigInt::from(2 * k + 1);
        // Term magnitude below target: stop and absorb the tail.
        if term_den.bits() > (prec + 4) as u64 {
            let tail = Enclosure::from_ratio(&BigInt::one(), &term_den, 32).mag_upper();
            return sum.widen(&tail);
        }
        let term = Enclosure::from_ratio(&BigInt::one(), &term_den, prec);
        sum = if k % 2 == 0 { sum.add(&term, prec) } else { sum.sub(&term, prec) };
        den *= &q2;
        k += 1;
    }
}

/// artanh(1/q) as a ball; positive series, tail bounded by a geometric
/// majorant of ratio 1/q^2.
fn atanh_inv(q: u64, prec: u32) -> Enclosure {
    assert!(q >= 2);
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut den = BigInt::from(q);
    let mut k = 0u64;
    let mut sum = Enclosure::zero();
    loop {
        let term_den = &den * BigInt::from(2 * k + 1);
        if term_den.bits() > (prec + 4) as u64 {
            // tail <= term * q^2/(q^2-1)
            let tail = Enclosure::from_ratio(
                &(&q2 * BigInt::one()),
                &(&term_den * (&q2 - BigInt::one())),
                32,
            )
            .mag_upper();
            return sum.widen(&tail);
        }
        let term = Enclosure::from_ratio(&BigInt::one(), &term_den, prec);
        sum = sum.add(&term, prec);
        den *= &q2;
        k += 1;
    }
}

/// Enclosure of pi with radius at most 2^(-prec+2) (Machin's formula).
pub fn pi(prec: u32) -> Enclosure {
    if let Some(v) = cache().lock().unwrap().get(&(KIND_PI, prec)) {
        return v.clone();
    }
    let wp = prec + 16;
    let a = atan_inv(5, wp).mul_bigint(&BigInt::from(16), wp);
    let b = atan_inv(239, wp).mul_bigint(&BigInt::from(4), wp);
    let v = a.sub(&b, wp);
    cache().lock().unwrap().insert((KIND_PI, prec), v.clone());
    v
}

/// Enclosure of ln 2.
pub fn ln2(prec: u32) -> Enclosure {
    if let Some(v) = cache().lock().unwrap().get(&(KIND_LN2, prec)) {
        return v.clone();
    }
    let wp = prec + 16;
    let v = atanh_inv(3, wp).shl(1);
    cache().lock().unwrap().insert((KIND_LN2, prec), v.clone());
    v
}

/// Exact Bernoulli numbers B_0..B_n (inclusive) by the defining recurrence.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut t = table.lock().unwrap();
    while t.len() <= n {
        let m = t.len(); // computing B_m
        // sum_{k=0}^{m} C(m+1,k) B_k = 0  =>  B_m = -1/C(m+1,m) * sum_{k<m} ...
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (k, b) in t.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * b;
            // C(m+1, k+1) = C(m+1,k) * (m+1-k)/(k+1)
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let bm = -acc / BigRational::from_integer(BigInt::from(m + 1));
        t.push(bm);
    }
    t[..=n].to_vec()
}

/// Ball containing an exact rational, at `prec` bits.
pub fn rational_ball(r: &BigRational, prec: u32) -> Enclosure {
    Enclosure::from_ratio(r.numer(), r.denom(), prec)
}

/// Euler-Mascheroni constant via Euler-Maclaurin applied to the harmonic sum:
/// gamma = H_N - ln N - 1/(2N) + sum_{j=1}^{M} B_2j/(2j N^2j) - R,
/// |R| <= |B_(2M+2)| / ((2M+2) N^(2M+2)), with N a power of two.
pub fn euler_gamma(prec: u32) -> Enclosure {
    if let Some(v) = cache().lock().unwrap().get(&(KIND_GAMMA, prec)) {
        return v.clone();
    }
    let wp = prec + 24;
    let m_terms = 28usize;
    // Choose N = 2^t so the remainder bound clears 2^-(wp+4).
    // |B_58|/(58 N^58): log2|B_58| ~ 205, so t >= (wp + 4 + 205) / 58.
    let t = ((wp as i64 + 4 + 205 + 57) / 58).max(4) as u64;
    let n: u64 = 1u64 << t.min(40);
    // Harmonic number H_N as a ball.
    let mut h = Enclosure::zero();
    for k in 1..=n {
        h = h.add(&Enclosure::from_ratio(&BigInt::one(), &BigInt::from(k), wp), wp);
    }
    // ln N = t * ln 2.
    let ln_n = ln2(wp).mul_bigint(&BigInt::from(t.min(40)), wp);
    let mut v = h.sub(&ln_n, wp);
    v = v.sub(&Enclosure::from_ratio(&BigInt::one(), &BigInt::from(2 * n), wp), wp);
    let bern = bernoulli(2 * m_terms + 2);
    for j in 1..=m_terms {
        // B_2j / (2j N^2j)
        let den = BigInt::from(2 * j) * BigInt::from(n).pow(2 * j as u32);
        let term_r = &bern[2 * j] / BigRational::from_integer(den);
        v = v.add(&rational_ball(&term_r, wp), wp);
    }
    // Remainder bound.
    let rem_den = BigInt::from(2 * m_terms + 2) * BigInt::from(n).pow(2 * m_terms as u32 + 2);
    let rem = (&bern[2 * m_terms + 2] / BigRational::from_integer(rem_den)).abs();
    let rem_up = rational_ball(&rem, 32).mag_upper();
    let v = v.widen(&rem_up);
    debug_assert!(
        v.rad().cmp_value(&Dyadic::pow2(-(prec as i64))) == std::cmp::Ordering::Less,
        "gamma radius too large for requested precision"
    );
    cache().lock().unwrap().insert((KIND_GAMMA, prec), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    /// Check that a ball agrees with a decimal reference to its displayed
    /// precision: the reference, parsed exactly, must lie inside the ball.
    fn assert_encloses_decimal(e: &Enclosure, decimal: &str) {
        let (int_part, frac_part) = decimal.split_once('.').unwrap();
        let digits = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().unwrap();
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        // value in [num/den, (num+1)/den): require overlap with that interval
        let lo = Enclosure::from_ratio(&num, &den, 256);
        let hi = Enclosure::from_ratio(&(num + BigInt::one()), &den, 256);
        assert!(
            e.upper().cmp_value(&lo.lower()) != Ordering::Less
                && e.lower().cmp_value(&hi.upper()) != Ordering::Greater,
            "ball {} does not meet reference {}",
            e,
            decimal
        );
    }

    #[test]
    fn pi_matches_reference_digits() {
        let p = pi(128);
        assert_encloses_decimal(&p, "3.14159265358979323846264338327950288419");
        assert!(p.rad().cmp_value(&Dyadic::pow2(-126)) == Ordering::Less);
    }

    #[test]
    fn pi_is_deterministic_and_radius_shrinks() {
        let a = pi(64);
        let b = pi(64);
        assert_eq!(a, b);
        let c = pi(256);
        assert!(c.rad().cmp_value(&Dyadic::pow2(-254)) == Ordering::Less);
        assert!(c.rad().cmp_value(a.rad()) == Ordering::Less);
    }

    #[test]
    fn ln2_matches_reference_digits() {
        let l = ln2(128);
        assert_encloses_decimal(&l, "0.69314718055994530941723212145817656807");
    }

    #[test]
    fn gamma_matches_reference_digits() {
        let g = euler_gamma(96);
        assert_encloses_decimal(&g, "0.57721566490153286060651209008240243104");
    }

    #[test]
    fn bernoulli_small_values() {
        let b = bernoulli(8);
        assert_eq!(b[0], BigRational::one());
        assert_eq!(b[1], BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(b[2], BigRational::new(BigInt::from(1), BigInt::from(6)));
        assert!(b[3].is_zero());
        assert_eq!(b[4], BigRational::new(BigInt::from(-1), BigInt::from(30)));
        assert_eq!(b[8], BigRational::new(BigInt::from(-1), BigInt::from(30)));
    }
}
