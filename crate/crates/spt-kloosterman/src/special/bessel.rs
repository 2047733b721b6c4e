//! Half-integer modified Bessel functions through their closed forms:
//!
//!   I_{1/2}(x)  = sqrt(2/(pi x)) sinh x
//!   I_{-1/2}(x) = sqrt(2/(pi x)) cosh x
//!   I_{3/2}(x)  = sqrt(2/(pi x)) (cosh x - sinh x / x)
//!   I_{5/2}(x)  = sqrt(2/(pi x)) ((1 + 3/x^2) sinh x - (3/x) cosh x)
//!
//! The hyperbolic cancellation inside I_{3/2} and I_{5/2} is dodged below
//! x < 1/4 by the ascending series, whose coefficients are exact rationals.

use crate::ball::{constants, functions, Enclosure};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfOrder {
    MinusHalf,
    Half,
    ThreeHalves,
    FiveHalves,
}

fn require_positive(x: &Enclosure) -> Result<()> {
    if !x.lower().is_positive() {
        return Err(Error::Domain("Bessel argument must be > 0".into()));
    }
    Ok(())
}

/// sqrt(2/(pi x)).
fn prefactor(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    Enclosure::from_i64(2).div(&constants::pi(prec).mul(x, prec), prec)?.sqrt(prec)
}

/// Ascending series for I_nu, nu = 3/2 or 5/2:
/// I_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_k c_k (x^2/4)^k,
/// c_0 = 1, c_{k+1} = c_k * 2/((k+1)(2k+2nu+2)). Rapid for x < 1/4.
fn series_half_order(x: &Enclosure, two_nu: u32, prec: u32) -> Result<Enclosure> {
    let wp = prec + 16;
    let x2_over_4 = x.mul(x, wp).shl(-2);
    let mut coef = BigRational::one();
    let mut pw = Enclosure::one();
    let mut sum = Enclosure::one();
    let n_terms = 8 + wp / 4;
    for k in 0..n_terms as u64 {
        // c_{k+1} = c_k / ((k+1)(k + nu + 1))
        coef *= BigRational::new(BigInt::from(2), BigInt::from((k + 1) * (2 * k + two_nu as u64 + 2)));
        pw = pw.mul(&x2_over_4, wp);
        let term = constants::rational_ball(&coef, wp).mul(&pw, wp);
        sum = sum.add(&term, wp);
        if term.mag_upper().cmp_value(&crate::ball::Dyadic::pow2(-(wp as i64) - 8)) == Ordering::Less {
            break;
        }
    }
    // tail <= 2 * last term bound (ratio < 1/2 for x <= 1/4)
    let tail = pw
        .mul(&x2_over_4, wp)
        .mul(&constants::rational_ball(&coef, wp), wp)
        .mag_upper();
    let sum = sum.widen(&tail.mul_exact(&crate::ball::Dyadic::from_i64(2)).round(30, crate::ball::Round::Ceil).0);
    // (x/2)^nu = (x/2)^(two_nu/2) = sqrt((x/2)^two_nu)
    let half_x = x.shl(-1);
    let pow_part = functions::powi(&half_x, two_nu as u64, wp).sqrt(wp)?;
    // Gamma(nu+1): Gamma(5/2) = 3 sqrt(pi)/4, Gamma(7/2) = 15 sqrt(pi)/8
    let sqrt_pi = constants::pi(wp).sqrt(wp)?;
    let gamma = match two_nu {
        3 => sqrt_pi.mul_bigint(&BigInt::from(3), wp).shl(-2),
        5 => sqrt_pi.mul_bigint(&BigInt::from(15), wp).shl(-3),
        _ => unreachable!("series only used for nu = 3/2, 5/2"),
    };
    Ok(pow_part.div(&gamma, wp)?.mul(&sum, wp))
}

/// Threshold below which the series replaces the closed forms.
fn small_x(x: &Enclosure) -> bool {
    x.mag_upper().cmp_value(&crate::ball::Dyadic::new(BigInt::from(1), -2)) == Ordering::Less
}

pub fn bessel_i(order: HalfOrder, x: &Enclosure, prec: u32) -> Result<Enclosure> {
    require_positive(x)?;
    let wp = prec + 16;
    match order {
        HalfOrder::Half => {
            let s = functions::sinh(x, wp);
            Ok(prefactor(x, wp)?.mul(&s, wp))
        }
        HalfOrder::MinusHalf => {
            let c = functions::cosh(x, wp);
            Ok(prefactor(x, wp)?.mul(&c, wp))
        }
        HalfOrder::ThreeHalves => {
            if small_x(x) {
                return series_half_order(x, 3, prec);
            }
            let s = functions::sinh(x, wp);
            let c = functions::cosh(x, wp);
            let inner = c.sub(&s.div(x, wp)?, wp);
            Ok(prefactor(x, wp)?.mul(&inner, wp))
        }
        HalfOrder::FiveHalves => {
            if x.mag_upper().cmp_value(&crate::ball::Dyadic::from_i64(1)) == Ordering::Less {
                return series_half_order(x, 5, prec);
            }
            let s = functions::sinh(x, wp);
            let c = functions::cosh(x, wp);
            let x2 = x.mul(x, wp);
            let one = Enclosure::one();
            let inner = one
                .add(&Enclosure::from_i64(3).div(&x2, wp)?, wp)
                .mul(&s, wp)
                .sub(&Enclosure::from_i64(3).div(x, wp)?.mul(&c, wp), wp);
            Ok(prefactor(x, wp)?.mul(&inner, wp))
        }
    }
}

/// The spt-series kernel (I_{1/2} - I_{3/2})(x) = sqrt(2/(pi x)) (sinh x / x - e^{-x}).
pub fn kernel_spt(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    require_positive(x)?;
    let wp = prec + 16;
    if small_x(x) {
        let a = bessel_i(HalfOrder::Half, x, wp)?;
        let b = bessel_i(HalfOrder::ThreeHalves, x, wp)?;
        return Ok(a.sub(&b, wp));
    }
    let s = functions::sinh(x, wp);
    let em = functions::exp(&x.neg(), wp);
    let inner = s.div(x, wp)?.sub(&em, wp);
    Ok(prefactor(x, wp)?.mul(&inner, wp))
}

/// The S(n)-series kernel I_{1/2}(x).
pub fn kernel_s(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    bessel_i(HalfOrder::Half, x, prec)
}

/// Upper bound for the absolute derivative of either series kernel:
/// |(I_{1/2})'| = (I_{-1/2} + I_{3/2})/2 and
/// |(I_{1/2} - I_{3/2})'| <= ((I_{-1/2} + I_{3/2}) + (I_{1/2} + I_{5/2}))/2,
/// so J(x) = sum of the four orders dominates both.
pub fn kernel_derivative_majorant(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    let wp = prec + 8;
    let j = bessel_i(HalfOrder::MinusHalf, x, wp)?
        .add(&bessel_i(HalfOrder::Half, x, wp)?, wp)
        .add(&bessel_i(HalfOrder::ThreeHalves, x, wp)?, wp)
        .add(&bessel_i(HalfOrder::FiveHalves, x, wp)?, wp);
    Ok(j.shl(-1))
}

/// Self-certified constant c_J with
/// (I_{-1/2}+I_{1/2}+I_{3/2}+I_{5/2})(x) <= c_J x^{-1/2} for 0 < x <= 1:
/// x^{1/2} J(x) is a power series with nonnegative coefficients, hence
/// increasing, so its supremum on (0,1] is at x = 1.
pub fn majorant_constant_cj(prec: u32) -> Result<Enclosure> {
    let one = Enclosure::one();
    let j = kernel_derivative_majorant(&one, prec)?.shl(1);
    Ok(Enclosure::exact(j.mag_upper()))
}
