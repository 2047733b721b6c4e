//! Dyadic (binary) floating point: `man * 2^exp` with an arbitrary-precision
//! mantissa and explicit directed rounding.
//!
//! This is the representation layer under [`crate::ball::Enclosure`]; all
//! rounding directions are explicit so the ball layer can account for every
//! rounding error in its radius.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Round to nearest, ties to even.
    Nearest,
    /// Round toward minus infinity.
    Floor,
    /// Round toward plus infinity.
    Ceil,
}

/// Arbitrary-precision dyadic rational `man * 2^exp`, canonicalized so that
/// the mantissa is odd (or zero with exponent zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::from(1), exp: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic { man: n, exp: 0 }.normalized()
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    /// `man * 2^exp` without assuming canonical form.
    pub fn new(man: BigInt, exp: i64) -> Self {
        Dyadic { man, exp }.normalized()
    }

    /// Exact power of two `2^exp`.
    pub fn pow2(exp: i64) -> Self {
        Dyadic { man: BigInt::from(1), exp }
    }

    fn normalized(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.man.sign() == Sign::Plus
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the most significant bit: the value v satisfies
    /// `2^(msb_exp()-1) <= |v| < 2^msb_exp()` for nonzero v.
    pub fn msb_exp(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.man.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Exact addition. The caller is responsible for exponent gaps staying
    /// reasonable; use [`Dyadic::add_round`] when they may not.
    pub fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Dyadic { man: a + b, exp: e }.normalized()
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    /// Exact product.
    pub fn mul_exact(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Dyadic { man: &self.man * &other.man, exp: self.exp + other.exp }.normalized()
    }

    /// Round to `prec` significant bits. Returns the rounded value and a bound
    /// on the absolute rounding error (zero when exact).
    pub fn round(&self, prec: u32, mode: Round) -> (Self, Self) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), Self::zero());
        }
        let shift = bits - prec as u64;
        let neg = self.is_negative();
        let mag = self.man.abs();
        let q = &mag >> shift;
        let rem = &mag - (&q << shift);
        let inexact = !rem.is_zero();
        if !inexact {
            return (
                Dyadic { man: if neg { -q } else { q }, exp: self.exp + shift as i64 }.normalized(),
                Self::zero(),
            );
        }
        // Decide whether the magnitude rounds up.
        let up_mag = match mode {
            Round::Floor => neg,
            Round::Ceil => !neg,
            Round::Nearest => {
                let half = BigInt::from(1) << (shift - 1);
                match rem.cmp(&half) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => q.is_odd(),
                }
            }
        };
        let q = if up_mag { q + 1 } else { q };
        let err = Dyadic::pow2(self.exp + shift as i64);
        (
            Dyadic { man: if neg { -q } else { q }, exp: self.exp + shift as i64 }.normalized(),
            err,
        )
    }

    /// Addition rounded to `prec` bits; immune to huge exponent gaps: when one
    /// operand lies entirely below the rounding granule of the other it is
    /// absorbed into the returned error bound instead of being aligned.
    /// Returns (value, absolute error bound).
    pub fn add_round(&self, other: &Self, prec: u32, mode: Round) -> (Self, Self) {
        if self.is_zero() {
            return (other.round(prec, mode).0, other.round(prec, mode).1);
        }
        if other.is_zero() {
            return self.round(prec, mode);
        }
        let (hi, lo) = if self.msb_exp() >= other.msb_exp() { (self, other) } else { (other, self) };
        // Cut off when the small operand cannot influence bits above
        // 2^(msb(hi) - prec - 4).
        let cutoff = hi.msb_exp() - prec as i64 - 4;
        if lo.msb_exp() < cutoff {
            let (v, e) = hi.round(prec, mode);
            // |lo| < 2^lo.msb_exp() <= 2^cutoff
            let err = e.add_exact(&Dyadic::pow2(lo.msb_exp()));
            return (v, err);
        }
        let sum = self.add_exact(other);
        sum.round(prec, mode)
    }

    /// Product rounded to `prec` bits. Returns (value, absolute error bound).
    pub fn mul_round(&self, other: &Self, prec: u32, mode: Round) -> (Self, Self) {
        self.mul_exact(other).round(prec, mode)
    }

    /// Quotient to `prec` bits with directed rounding. The rounding is exact
    /// in direction: Floor result <= true quotient <= Ceil result.
    /// Returns (value, absolute error bound). `other` must be nonzero.
    pub fn div_round(&self, other: &Self, prec: u32, mode: Round) -> (Self, Self) {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        // Shift numerator so the raw quotient carries prec + 2 bits.
        let na = self.man.bits() as i64;
        let nb = other.man.bits() as i64;
        let s = (prec as i64 + 2 - (na - nb)).max(0) as u64;
        let num = &self.man << s;
        let (q, r) = num.div_rem(&other.man);
        let exact = r.is_zero();
        let exp = self.exp - other.exp - s as i64;
        if exact {
            return Dyadic { man: q, exp }.normalized().round(prec, mode);
        }
        // q is truncated toward zero; nudge per rounding mode. A half-ulp
        // tie cannot be detected from (q, r) alone, so Nearest here means
        // "within one ulp", which the returned error bound covers.
        let neg = self.is_negative() ^ other.is_negative();
        let q = match mode {
            Round::Floor => {
                if neg {
                    q - 1
                } else {
                    q
                }
            }
            Round::Ceil => {
                if neg {
                    q
                } else {
                    q + 1
                }
            }
            Round::Nearest => q,
        };
        let raw = Dyadic { man: q, exp }.normalized();
        let (v, e) = raw.round(prec, mode);
        let err = e.add_exact(&Dyadic::pow2(exp + 1));
        (v, err)
    }

    /// Directed square root to `prec` bits: Floor gives a lower bound,
    /// Ceil an upper bound. Requires `self >= 0`.
    pub fn sqrt_round(&self, prec: u32, mode: Round) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let bits = self.man.bits() as i64;
        let mut s = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = &self.man << s as u64;
        let q = m.sqrt(); // floor sqrt
        let e = (self.exp - s) / 2;
        match mode {
            Round::Floor => Dyadic { man: q, exp: e }.normalized(),
            Round::Ceil => {
                if &q * &q == m {
                    Dyadic { man: q, exp: e }.normalized()
                } else {
                    Dyadic { man: q + 1, exp: e }.normalized()
                }
            }
            Round::Nearest => {
                // within one ulp either way; callers wanting rigor use
                // Floor/Ceil.
                Dyadic { man: q, exp: e }.normalized()
            }
        }
    }

    /// Exact comparison.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if other.is_positive() { Ordering::Less } else { Ordering::Greater }
            }
            (false, true) => {
                return if self.is_positive() { Ordering::Greater } else { Ordering::Less }
            }
            _ => {}
        }
        match (self.is_negative(), other.is_negative()) {
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            _ => {}
        }
        // Same sign: compare magnitudes via msb first to avoid alignment.
        let (ma, mb) = (self.msb_exp(), other.msb_exp());
        let mag = if ma != mb {
            if ma > mb {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else {
            let e = self.exp.min(other.exp);
            let a = self.man.abs() << (self.exp - e) as u64;
            let b = other.man.abs() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if self.is_negative() {
            mag.reverse()
        } else {
            mag
        }
    }

    /// Nearest integer (ties toward even).
    pub fn round_to_integer(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        let neg = self.is_negative();
        let mag = self.man.abs();
        let q = &mag >> shift;
        let rem = &mag - (&q << shift);
        let half = BigInt::from(1) << (shift - 1);
        let q = match rem.cmp(&half) {
            Ordering::Greater => q + 1,
            Ordering::Less => q,
            Ordering::Equal => {
                if q.is_odd() {
                    q + 1
                } else {
                    q
                }
            }
        };
        if neg {
            -q
        } else {
            q
        }
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        // BigInt >> rounds toward negative infinity for num-bigint (arithmetic shift).
        &self.man >> shift
    }

    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        -((-&self.man) >> shift)
    }

    /// Best-effort f64 conversion (diagnostics only; saturates on overflow).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            let t: BigInt = &self.man >> shift;
            (t, self.exp + shift as i64)
        } else {
            (self.man.clone(), self.exp)
        };
        let mf = m.to_string().parse::<f64>().unwrap_or(f64::NAN);
        mf * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Decimal string with `digits` significant digits, scientific notation.
    /// Rounds to nearest; good for display, not a substitute for enclosure
    /// comparisons.
    pub fn to_decimal_sci(&self, digits: u32) -> String {
        crate::ball::format::dyadic_to_sci(self, digits)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_sci(20))
    }
}
