//! Certified truncation bound for the conditionally convergent series.
//!
//! Writing M(t) = sum_{c<=t} A_c(n)/c and k for the series kernel, Abel
//! summation gives
//!
//!   |sum_{c>C} (A_c(n)/c) k(lam/c)|
//!       <= int_C^inf (|M(t)| + |M(C)|) (lam/t^2) D(lam/t) dt,
//!
//! where D majorizes |k'|; D(x) <= (c_J/2) x^{-1/2} on x <= 1 with the
//! self-certified constant c_J (sum of the four half-integer orders at 1).
//! The integral is split three ways: exactly computed partial sums M(c) on
//! [C, T*]; the trivial |M(t)| <= t up to the crossover T0; and the explicit
//! delta = 1/4 Kloosterman bound (A_n + 25.35 log t) t^{5/12} beyond. Every
//! piece has a closed-form antiderivative majorant, so the result is a
//! rigorous (if at accessible C very conservative) enclosure of the tail.

use crate::ball::{constants, functions, Enclosure};
use crate::error::{Error, Result};
use crate::kloosterman::{SweepEvaluator, TableAccuracy};
use crate::special::bessel::majorant_constant_cj;
use crate::special::{lambda, lambda_f64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::Target;

/// Rigorous upper bound on the absolute truncation tail of the unprefactored
/// series sum_{c>C} (A_c(n)/c) kernel(lam/c). The caller multiplies by the
/// series prefactor.
pub fn raw_tail_bound(n: u64, c_trunc: u64, prec: u32) -> Result<Enclosure> {
    let wp = prec.max(96) + 16;
    let lam = lambda(&BigInt::from(n), wp)?;
    // Need lam/t <= 1 on [C, inf) for the x^{-1/2} majorant of D.
    let c_min = lam.upper().ceil_int().to_u64().unwrap_or(u64::MAX).max(2);
    if c_trunc < c_min {
        return Err(Error::TruncationTooSmall(format!(
            "certified tail needs C >= max(2, lambda(n)) = {c_min}, got {c_trunc}"
        )));
    }
    let cj = majorant_constant_cj(wp)?;
    let half_cj_sqrt_lam = cj.shl(-1).mul(&lam.sqrt(wp)?, wp);

    // Exact partial sums M(c) for c in [1, T*].
    let t_star = (2 * c_trunc).max(c_trunc + 64);
    let mut m_vals: Vec<Enclosure> = Vec::with_capacity(t_star as usize + 1);
    m_vals.push(Enclosure::zero()); // M(0)
    let mut acc = Enclosure::zero();
    for c in 1..=t_star {
        let ev = SweepEvaluator::new(c, TableAccuracy::Anchored { step: 256 });
        let a = ev.eval_real(n as i64).value();
        acc = acc.add(&a.div_bigint(&BigInt::from(c), wp), wp);
        m_vals.push(acc.clone());
    }
    let m_at_c = m_vals[c_trunc as usize].clone();

    // |M(C)| c_J sqrt(lam/C).
    let m_c_mag = Enclosure::exact(m_at_c.mag_upper());
    let sqrt_c = Enclosure::from_i64(c_trunc as i64).sqrt(wp)?;
    let mut total = m_c_mag.mul(&cj, wp).mul(&lam.sqrt(wp)?, wp).div(&sqrt_c, wp)?;

    // Exact region: sum_{c=C}^{T*-1} |M(c)| (c_J/2) sqrt(lam) 2(c^{-1/2}-(c+1)^{-1/2}).
    let mut inv_sqrt_prev = Enclosure::one().div(&sqrt_c, wp)?;
    for c in c_trunc..t_star {
        let next = Enclosure::from_i64((c + 1) as i64).sqrt(wp)?;
        let inv_sqrt_next = Enclosure::one().div(&next, wp)?;
        let weight = inv_sqrt_prev.sub(&inv_sqrt_next, wp).shl(1);
        let m_mag = Enclosure::exact(m_vals[c as usize].mag_upper());
        total = total.add(&m_mag.mul(&half_cj_sqrt_lam, wp).mul(&weight, wp), wp);
        inv_sqrt_prev = inv_sqrt_next;
    }

    // Crossover T0 where (A_n + 25.35 ln t) t^{5/12} drops below t.
    let tau = crate::arith::tau_shifted_square(&BigInt::from(n))?.to_f64().unwrap();
    let a_n_f = 19094.8 * tau * (n as f64 - 1.0 / 24.0).powf(0.25);
    let mut t0_f = a_n_f.powf(12.0 / 7.0).max(t_star as f64);
    for _ in 0..6 {
        t0_f = (a_n_f + 25.35 * t0_f.ln()).powf(12.0 / 7.0).max(t_star as f64);
    }
    let t0 = BigInt::from((t0_f.ceil() as u64).max(t_star) + 1);
    let t0_ball = Enclosure::from_bigint(&t0);

    // Trivial region [T*, T0]: (c_J/2) sqrt(lam) * 2 (sqrt(T0) - sqrt(T*)).
    let sqrt_t0 = t0_ball.sqrt(wp)?;
    let sqrt_tstar = Enclosure::from_i64(t_star as i64).sqrt(wp)?;
    let trivial = half_cj_sqrt_lam.mul(&sqrt_t0.sub(&sqrt_tstar, wp).shl(1), wp);
    total = total.add(&Enclosure::exact(trivial.mag_upper()), wp);

    // Explicit-bound region [T0, inf):
    // (c_J/2) sqrt(lam) [A_n 12 T0^{-1/12} + 25.35*12 T0^{-1/12}(ln T0 + 12)].
    let a_n = constants::rational_ball(
        &BigRational::new(BigInt::from(190948), BigInt::from(10)),
        wp,
    )
    .mul_bigint(&crate::arith::tau_shifted_square(&BigInt::from(n))?, wp)
    .mul(
        &functions::root4(&Enclosure::from_ratio(&(BigInt::from(n) * 24 - 1), &BigInt::from(24), wp), wp)?,
        wp,
    );
    let ln_t0 = functions::ln(&t0_ball, wp)?;
    // T0^{-1/12} = exp(-ln T0 / 12)
    let t0_pow = functions::exp(&ln_t0.div_bigint(&BigInt::from(12), wp).neg(), wp);
    let b_log = constants::rational_ball(&BigRational::new(BigInt::from(2535), BigInt::from(100)), wp)
        .mul(&ln_t0.add(&Enclosure::from_i64(12), wp), wp);
    let far = half_cj_sqrt_lam
        .mul(&a_n.add(&b_log, wp), wp)
        .mul_bigint(&BigInt::from(12), wp)
        .mul(&t0_pow, wp);
    total = total.add(&Enclosure::exact(far.mag_upper()), wp);

    Ok(Enclosure::exact(total.mag_upper()))
}

/// Prefactored tail bound for a series target.
pub fn truncation_tail_bound(n: u64, c_trunc: u64, target: Target, prec: u32) -> Result<Enclosure> {
    let wp = prec.max(96) + 16;
    let raw = raw_tail_bound(n, c_trunc, prec)?;
    let pref = super::prefactor(n, target, wp)?;
    Ok(Enclosure::exact(raw.mul(&pref, wp).mag_upper()))
}

/// Convenience: the smallest admissible truncation point.
pub fn min_certified_trunc(n: u64) -> u64 {
    (lambda_f64(n).ceil() as u64 + 1).max(2)
}
