//! Midpoint-radius enclosures. Every operation returns a ball that contains
//! the exact image of its input balls; all rounding errors are folded into
//! the radius, which is itself always rounded upward.

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::cmp::Ordering;
use std::fmt;

/// Bits carried by radius mantissas. Radii only ever need a couple of
/// significant digits; what matters is that they are upper bounds.
pub const RAD_PREC: u32 = 30;

/// Upper-bound addition for nonnegative dyadics at radius precision.
pub(crate) fn add_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    debug_assert!(!a.is_negative() && !b.is_negative());
    if a.is_zero() {
        return b.round(RAD_PREC, Round::Ceil).0;
    }
    if b.is_zero() {
        return a.round(RAD_PREC, Round::Ceil).0;
    }
    let (hi, lo) = if a.msb_exp() >= b.msb_exp() { (a, b) } else { (b, a) };
    if lo.msb_exp() < hi.msb_exp() - RAD_PREC as i64 - 4 {
        // One ulp of the rounded hi dominates |lo|.
        let v = hi.round(RAD_PREC, Round::Ceil).0;
        let bump = Dyadic::pow2(v.msb_exp() - RAD_PREC as i64);
        return v.add_exact(&bump).round(RAD_PREC, Round::Ceil).0;
    }
    hi.add_exact(lo).round(RAD_PREC, Round::Ceil).0
}

/// Upper-bound product for nonnegative dyadics at radius precision.
pub(crate) fn mul_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    debug_assert!(!a.is_negative() && !b.is_negative());
    a.mul_exact(b).round(RAD_PREC, Round::Ceil).0
}

/// Upper-bound quotient for nonnegative dyadics (b > 0).
pub(crate) fn div_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    debug_assert!(!a.is_negative() && b.is_positive());
    a.div_round(b, RAD_PREC, Round::Ceil).0
}

/// A real number known to lie in `[mid - rad, mid + rad]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    mid: Dyadic,
    rad: Dyadic,
}

/// Three-valued verdict of an enclosure comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trilean {
    True,
    False,
    Unknown,
}

impl Trilean {
    pub fn is_true(self) -> bool {
        self == Trilean::True
    }
}

impl fmt::Display for Trilean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trilean::True => write!(f, "true"),
            Trilean::False => write!(f, "false"),
            Trilean::Unknown => write!(f, "unknown"),
        }
    }
}

impl Enclosure {
    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        debug_assert!(!rad.is_negative());
        Enclosure { mid, rad }
    }

    pub fn exact(mid: Dyadic) -> Self {
        Enclosure { mid, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::exact(Dyadic::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::exact(Dyadic::from_i64(n))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::exact(Dyadic::from_bigint(n.clone()))
    }

    /// Ball containing `num/den`, at `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let a = Dyadic::from_bigint(num.clone());
        let b = Dyadic::from_bigint(den.clone());
        let (v, e) = a.div_round(&b, prec, Round::Nearest);
        Enclosure { mid: v, rad: e.round(RAD_PREC, Round::Ceil).0 }
    }

    /// Ball spanning `[lo, hi]` exactly (then midpoint rounded to prec).
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        debug_assert!(lo.cmp_value(hi) != Ordering::Greater);
        let sum = lo.add_exact(hi);
        let (mid, e1) = sum.shl(-1).round(prec, Round::Nearest);
        let half_width = hi.sub_exact(lo).shl(-1);
        let rad = add_up(&half_width.round(RAD_PREC, Round::Ceil).0, &e1);
        Enclosure { mid, rad }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub_exact(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add_exact(&self.rad)
    }

    /// Upper bound of |x| over the ball.
    pub fn mag_upper(&self) -> Dyadic {
        add_up(&self.mid.abs().round(RAD_PREC, Round::Ceil).0, &self.rad)
    }

    /// Lower bound of |x| over the ball (zero if the ball straddles 0).
    pub fn mag_lower(&self) -> Dyadic {
        let m = self.mid.abs();
        if m.cmp_value(&self.rad) != Ordering::Greater {
            return Dyadic::zero();
        }
        m.sub_exact(&self.rad).round(RAD_PREC, Round::Floor).0
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs().cmp_value(&self.rad) != Ordering::Greater
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        self.mid.sub_exact(v).abs().cmp_value(&self.rad) != Ordering::Greater
    }

    /// True if every point of `self` lies within `other`.
    pub fn subset_of(&self, other: &Enclosure) -> bool {
        other.lower().cmp_value(&self.lower()) != Ordering::Greater
            && self.upper().cmp_value(&other.upper()) != Ordering::Greater
    }

    pub fn neg(&self) -> Self {
        Enclosure { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    /// A ball containing |x| for all x in self.
    pub fn abs_enclosure(&self, prec: u32) -> Self {
        if !self.contains_zero() {
            return Enclosure { mid: self.mid.abs(), rad: self.rad.clone() };
        }
        let hi = self.mag_upper();
        Self::from_interval(&Dyadic::zero(), &hi, prec)
    }

    /// Inflate the radius by `extra` (an absolute error bound, must be >= 0).
    pub fn widen(&self, extra: &Dyadic) -> Self {
        Enclosure { mid: self.mid.clone(), rad: add_up(&self.rad, extra) }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        let (mid, e) = self.mid.add_round(&other.mid, prec, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &other.rad), &e);
        Enclosure { mid, rad }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let (mid, e) = self.mid.mul_round(&other.mid, prec, Round::Nearest);
        // |a||rb| + |b||ra| + ra rb + rounding
        let ma = self.mid.abs().round(RAD_PREC, Round::Ceil).0;
        let mb = other.mid.abs().round(RAD_PREC, Round::Ceil).0;
        let rad = add_up(
            &add_up(&mul_up(&ma, &other.rad), &mul_up(&mb, &self.rad)),
            &add_up(&mul_up(&self.rad, &other.rad), &e),
        );
        Enclosure { mid, rad }
    }

    /// Multiply by an exact integer.
    pub fn mul_bigint(&self, n: &BigInt, prec: u32) -> Self {
        let d = Dyadic::from_bigint(n.clone());
        let (mid, e) = self.mid.mul_round(&d, prec, Round::Nearest);
        let rad = add_up(&mul_up(&self.rad, &d.abs()), &e);
        Enclosure { mid, rad }
    }

    /// Exact scaling by 2^k.
    pub fn shl(&self, k: i64) -> Self {
        Enclosure { mid: self.mid.shl(k), rad: self.rad.shl(k) }
    }

    pub fn div(&self, other: &Self, prec: u32) -> Result<Self> {
        let blo = other.mag_lower();
        if blo.is_zero() {
            return Err(Error::Domain("division by an enclosure containing zero".into()));
        }
        let (mid, e) = self.mid.div_round(&other.mid, prec, Round::Nearest);
        // |a/b - m/mb| <= (ra + |m/mb| rb) / |b|_lo
        let mq = self.mid.div_round(&other.mid, RAD_PREC, Round::Ceil).0.abs();
        let num = add_up(&self.rad, &mul_up(&mq, &other.rad));
        let rad = add_up(&div_up(&num, &blo), &e);
        Ok(Enclosure { mid, rad })
    }

    /// Divide by an exact nonzero integer.
    pub fn div_bigint(&self, n: &BigInt, prec: u32) -> Self {
        let d = Dyadic::from_bigint(n.clone());
        let (mid, e) = self.mid.div_round(&d, prec, Round::Nearest);
        let rad = add_up(&div_up(&self.rad, &d.abs()), &e);
        Enclosure { mid, rad }
    }

    /// Enclosure of sqrt over the ball; requires the ball to be >= 0.
    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        let lo = self.lower();
        if lo.is_negative() {
            return Err(Error::Domain("sqrt of an interval extending below zero".into()));
        }
        let hi = self.upper();
        let slo = lo.sqrt_round(prec + 2, Round::Floor);
        let shi = hi.sqrt_round(prec + 2, Round::Ceil);
        Ok(Self::from_interval(&slo, &shi, prec))
    }

    /// Trilean `self < other`.
    pub fn lt(&self, other: &Self) -> Trilean {
        if self.upper().cmp_value(&other.lower()) == Ordering::Less {
            Trilean::True
        } else if self.lower().cmp_value(&other.upper()) != Ordering::Less {
            Trilean::False
        } else {
            Trilean::Unknown
        }
    }

    /// Trilean `self <= other`.
    pub fn le(&self, other: &Self) -> Trilean {
        if self.upper().cmp_value(&other.lower()) != Ordering::Greater {
            Trilean::True
        } else if self.lower().cmp_value(&other.upper()) == Ordering::Greater {
            Trilean::False
        } else {
            Trilean::Unknown
        }
    }

    /// The unique integer within distance < 1/2 of every point of the ball,
    /// if one exists.
    pub fn certified_round_to_integer(&self) -> Result<BigInt> {
        let k = self.mid.round_to_integer();
        let kd = Dyadic::from_bigint(k.clone());
        let half = Dyadic::new(BigInt::from(1), -1);
        let hi_ok =
            self.upper().sub_exact(&kd).cmp_value(&half) == Ordering::Less;
        let lo_ok =
            kd.sub_exact(&self.lower()).cmp_value(&half) == Ordering::Less;
        if hi_ok && lo_ok {
            Ok(k)
        } else {
            Err(Error::RoundingAmbiguous(self.to_string()))
        }
    }

    /// Display as `mid ± rad` in decimal.
    pub fn display_string(&self, digits: u32) -> String {
        crate::ball::format::enclosure_to_string(self, digits)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_string(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(m: i64, me: i64, r: i64, re: i64) -> Enclosure {
        Enclosure::new(Dyadic::new(BigInt::from(m), me), Dyadic::new(BigInt::from(r), re))
    }

    #[test]
    fn exact_integer_addition_stays_exact() {
        let a = Enclosure::from_i64(1);
        let b = Enclosure::from_i64(2);
        let s = a.add(&b, 64);
        assert!(s.is_exact());
        assert_eq!(s.mid(), &Dyadic::from_i64(3));
    }

    #[test]
    fn zero_times_anything_is_zero() {
        let z = Enclosure::zero();
        let x = ball(123, -5, 1, -9);
        let p = z.mul(&x, 64);
        assert!(p.is_exact());
        assert!(p.mid().is_zero());
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let one = Enclosure::one();
        let z = ball(1, -10, 1, 0); // [~-1, ~1]
        assert!(one.div(&z, 64).is_err());
    }

    #[test]
    fn division_result_contains_truth() {
        let a = Enclosure::from_i64(1);
        let b = Enclosure::from_i64(3);
        let q = a.div(&b, 64).unwrap();
        // 1/3 in [lo, hi]: check 3*lo <= 1 <= 3*hi
        let lo = q.lower();
        let hi = q.upper();
        let three = Dyadic::from_i64(3);
        assert!(lo.mul_exact(&three).cmp_value(&Dyadic::one()) != Ordering::Greater);
        assert!(hi.mul_exact(&three).cmp_value(&Dyadic::one()) != Ordering::Less);
    }

    #[test]
    fn certified_rounding_examples() {
        // [9.8, 10.2] -> 10
        let e = Enclosure::from_interval(
            &Dyadic::new(BigInt::from(98), 0),
            &Dyadic::new(BigInt::from(102), 0),
            64,
        );
        let e = e.div_bigint(&BigInt::from(10), 64);
        assert_eq!(e.certified_round_to_integer().unwrap(), BigInt::from(10));

        // [9.4, 10.6] -> ambiguous
        let w = Enclosure::from_interval(
            &Dyadic::new(BigInt::from(94), 0),
            &Dyadic::new(BigInt::from(106), 0),
            64,
        )
        .div_bigint(&BigInt::from(10), 64);
        assert!(w.certified_round_to_integer().is_err());

        // [2.9999, 3.0001] -> 3
        let t = Enclosure::from_interval(
            &Dyadic::new(BigInt::from(29999), 0),
            &Dyadic::new(BigInt::from(30001), 0),
            64,
        )
        .div_bigint(&BigInt::from(10000), 64);
        assert_eq!(t.certified_round_to_integer().unwrap(), BigInt::from(3));
    }

    #[test]
    fn half_integer_point_is_ambiguous() {
        let h = Enclosure::exact(Dyadic::new(BigInt::from(19), -1)); // 9.5
        assert!(h.certified_round_to_integer().is_err());
    }

    #[test]
    fn trilean_comparisons() {
        let a = ball(1, 0, 1, -4);
        let b = ball(2, 0, 1, -4);
        assert_eq!(a.lt(&b), Trilean::True);
        assert_eq!(b.lt(&a), Trilean::False);
        let c = ball(33, -5, 1, -4); // overlaps 1
        assert_eq!(a.lt(&c), Trilean::Unknown);
    }
}
