//! Exact Dedekind sums s(d,c) and the eta-multiplier phase.
//!
//! Two evaluation paths are kept deliberately: the O(c) defining sum as the
//! oracle, and the O(log c) reciprocity recursion as the production path.
//! Everything is exact rational arithmetic; 6c*s(d,c) is always an integer,
//! which is what the Kloosterman angle representation depends on.

use crate::arith::gcd_i64;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Reciprocity,
}

/// An evaluated Dedekind sum with its provenance.
#[derive(Debug, Clone)]
pub struct DedekindValue {
    pub d: BigInt,
    pub c: BigInt,
    pub value: BigRational,
    pub method: Method,
}

fn validate(d: &BigInt, c: &BigInt) -> Result<BigInt> {
    if !c.is_positive() {
        return Err(Error::Domain(format!("c must be >= 1, got {c}")));
    }
    let dm = d.mod_floor(c);
    if dm.gcd(c) != BigInt::one() {
        return Err(Error::NotCoprime { d: d.to_string(), c: c.to_string() });
    }
    Ok(dm)
}

/// s(d,c) by the defining sum: sum_{r=1}^{c-1} (r/c)(dr/c - floor(dr/c) - 1/2).
///
/// Under gcd(d,c) = 1 this equals (sum_r r*(dr mod c))/c^2 - (c-1)/4, which is
/// what we accumulate (exactly, in machine words).
pub fn dedekind_direct(d: &BigInt, c: &BigInt) -> Result<BigRational> {
    let dm = validate(d, c)?;
    let cu = c
        .to_u64()
        .filter(|&v| v <= 1 << 31)
        .ok_or_else(|| Error::ResourceLimit(format!("direct Dedekind sum for c = {c}")))?;
    if cu == 1 {
        return Ok(BigRational::zero());
    }
    let dmu = dm.to_u64().unwrap();
    let mut acc: u128 = 0;
    let mut dr: u64 = 0;
    for r in 1..cu {
        dr += dmu;
        if dr >= cu {
            dr -= cu;
            while dr >= cu {
                dr -= cu;
            }
        }
        acc += r as u128 * dr as u128;
    }
    // s = acc/c^2 - (c-1)/4 = (4 acc - c^2 (c-1)) / (4 c^2)
    let c2 = BigInt::from(cu) * BigInt::from(cu);
    let num = BigInt::from(acc) * 4 - &c2 * BigInt::from(cu - 1);
    Ok(BigRational::new(num, c2 * 4))
}

/// s(d,c) via the reciprocity law
/// s(d,c) + s(c,d) = -1/4 + (d^2 + c^2 + 1)/(12dc), applied Euclid-style.
pub fn dedekind_fast(d: &BigInt, c: &BigInt) -> Result<BigRational> {
    let dm = validate(d, c)?;
    let mut acc = BigRational::zero();
    let mut sign = BigInt::one();
    let mut dd = dm;
    let mut cc = c.clone();
    while cc > BigInt::one() {
        // s(dd, cc) = (dd^2 + cc^2 + 1 - 3 dd cc)/(12 dd cc) - ... folded into
        // one rational: (dd^2 + cc^2 + 1)/(12 dd cc) - 1/4.
        let num = &dd * &dd + &cc * &cc + BigInt::one();
        let den = BigInt::from(12) * &dd * &cc;
        let term = BigRational::new(num, den.clone()) - BigRational::new(BigInt::one(), BigInt::from(4));
        acc += BigRational::from_integer(sign.clone()) * term;
        sign = -sign;
        // (dd, cc) <- (cc mod dd, dd)
        let r = cc.mod_floor(&dd);
        cc = std::mem::replace(&mut dd, r);
    }
    Ok(acc)
}

pub fn dedekind_value(d: &BigInt, c: &BigInt, method: Method) -> Result<DedekindValue> {
    let value = match method {
        Method::Direct => dedekind_direct(d, c)?,
        Method::Reciprocity => dedekind_fast(d, c)?,
    };
    Ok(DedekindValue { d: d.clone(), c: c.clone(), value, method })
}

/// 6c*s(d,c) as an exact machine integer; the fast path the angle machinery
/// uses in sweeps. Valid for c up to ~10^6 (intermediates fit i128, which the
/// debug assertions check).
pub fn six_c_s(d: i64, c: i64) -> i128 {
    debug_assert!(c >= 1);
    let dm = d.rem_euclid(c);
    debug_assert!(gcd_i64(dm, c) == 1);
    if c == 1 {
        return 0;
    }
    // Accumulate s(d,c) as num/den with running gcd reduction.
    let (mut num, mut den): (i128, i128) = (0, 1);
    let (mut dd, mut cc) = (dm as i128, c as i128);
    let mut sign = 1i128;
    while cc > 1 {
        let tnum = dd * dd + cc * cc + 1 - 3 * dd * cc;
        let tden = 12 * dd * cc;
        num = num * tden + sign * tnum * den;
        den *= tden;
        let g = gcd_i128(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        sign = -sign;
        let r = cc % dd;
        cc = dd;
        dd = r;
    }
    let t = num * 6 * c as i128;
    debug_assert!(t % den == 0, "6c*s(d,c) not integral: {num}/{den} for ({d},{c})");
    t / den
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The eta-multiplier phase: chi(gamma) = e(theta) with theta in [0,1),
/// computed exactly as -1/8 - s(d,c)/2 + (a+d)/(24c) mod 1.
#[derive(Debug, Clone)]
pub struct MultiplierPhase {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub theta: BigRational,
}

pub fn eta_multiplier_phase(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<MultiplierPhase> {
    if !c.is_positive() {
        return Err(Error::Domain(format!("c must be > 0, got {c}")));
    }
    if a * d - b * c != BigInt::one() {
        return Err(Error::NotUnimodular);
    }
    let s = dedekind_fast(d, c)?;
    let theta = BigRational::new(BigInt::from(-1), BigInt::from(8))
        - s / BigRational::from_integer(BigInt::from(2))
        + BigRational::new(a + d, BigInt::from(24) * c);
    let theta = &theta - theta.floor();
    Ok(MultiplierPhase { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone(), theta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(big(n), big(d))
    }

    #[test]
    fn defining_sum_examples() {
        assert_eq!(dedekind_direct(&big(0), &big(1)).unwrap(), BigRational::zero());
        assert_eq!(dedekind_direct(&big(1), &big(2)).unwrap(), BigRational::zero());
        assert_eq!(dedekind_direct(&big(1), &big(3)).unwrap(), rat(1, 18));
        assert_eq!(dedekind_fast(&big(1), &big(1)).unwrap(), BigRational::zero());
        assert_eq!(dedekind_fast(&big(5), &big(7)).unwrap(), rat(-1, 14));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(dedekind_direct(&big(2), &big(4)), Err(Error::NotCoprime { .. })));
        assert!(matches!(dedekind_direct(&big(1), &big(0)), Err(Error::Domain(_))));
        assert!(matches!(dedekind_fast(&big(3), &big(-6)), Err(Error::Domain(_))));
    }

    #[test]
    fn fast_equals_direct_small_exhaustive() {
        for c in 1i64..=60 {
            for d in 0..c.max(1) {
                if gcd_i64(d, c) != 1 {
                    continue;
                }
                let sd = dedekind_direct(&big(d), &big(c)).unwrap();
                let sf = dedekind_fast(&big(d), &big(c)).unwrap();
                assert_eq!(sd, sf, "mismatch at ({d},{c})");
                // 6c*s is an integer, and the machine path agrees.
                let six = &sd * BigRational::from_integer(big(6 * c));
                assert!(six.is_integer(), "6c*s not integral at ({d},{c})");
                assert_eq!(six.to_integer(), BigInt::from(six_c_s(d, c)));
            }
        }
    }

    #[test]
    fn periodicity_and_antisymmetry() {
        for (d, c) in [(3i64, 10i64), (7, 12), (9, 20), (11, 35)] {
            let s = dedekind_fast(&big(d), &big(c)).unwrap();
            assert_eq!(dedekind_fast(&big(d + c), &big(c)).unwrap(), s);
            assert_eq!(dedekind_fast(&big(d - 3 * c), &big(c)).unwrap(), s);
            assert_eq!(dedekind_fast(&big(c - d), &big(c)).unwrap(), -s);
        }
    }

    #[test]
    fn reciprocity_residual_vanishes() {
        for (d, c) in [(3i64, 10i64), (7, 12), (5, 7), (101, 1024), (999, 1000)] {
            if gcd_i64(d, c) != 1 {
                continue;
            }
            let sdc = dedekind_fast(&big(d), &big(c)).unwrap();
            let scd = dedekind_fast(&big(c), &big(d)).unwrap();
            let lhs = sdc + scd + rat(1, 4);
            let rhs = (rat(d, c) + rat(c, d) + BigRational::new(BigInt::one(), big(d) * big(c)))
                / BigRational::from_integer(big(12));
            assert_eq!(lhs, rhs, "reciprocity fails for ({d},{c})");
        }
    }

    #[test]
    fn large_pair_matches_direct() {
        // also regression-tests the recursion depth
        let d = big(1_000_001);
        let c = big(1_000_003);
        let fast = dedekind_fast(&d, &c).unwrap();
        let direct = dedekind_direct(&d, &c).unwrap();
        assert_eq!(fast, direct);
    }

    #[test]
    fn eta_phase_example() {
        // gamma = (1,0;1,1): theta = -1/8 - s(1,1)/2 + 2/24 = 23/24 mod 1
        let p = eta_multiplier_phase(&big(1), &big(0), &big(1), &big(1)).unwrap();
        assert_eq!(p.theta, rat(23, 24));
    }

    #[test]
    fn eta_phase_shift_by_translation() {
        // Left-multiplying by T = (1,1;0,1) shifts theta by -alpha_chi = -23/24.
        let alpha = rat(23, 24);
        for (a, b, c, d) in [(1i64, 0i64, 1i64, 1i64), (2, 1, 5, 3), (3, 2, 7, 5)] {
            let p = eta_multiplier_phase(&big(a), &big(b), &big(c), &big(d)).unwrap();
            let q = eta_multiplier_phase(&big(a + c), &big(b + d), &big(c), &big(d)).unwrap();
            let shift = &q.theta - &p.theta + &alpha;
            assert!(shift.is_integer(), "translation shift wrong for ({a},{b};{c},{d})");
        }
    }

    #[test]
    fn eta_phase_rejects_non_unimodular() {
        assert!(matches!(
            eta_multiplier_phase(&big(2), &big(0), &big(1), &big(1)),
            Err(Error::NotUnimodular)
        ));
        assert!(matches!(
            eta_multiplier_phase(&big(1), &big(0), &big(-1), &big(1)),
            Err(Error::Domain(_))
        ));
    }
}
