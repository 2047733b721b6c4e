//! K_0 through its integral representation
//!
//!   K_0(z) = (1/2) int_0^infty exp(-t - z^2/4t) dt/t,
//!
//! evaluated after the symmetric substitution t = (z/2) e^v, which turns the
//! integrand into exp(-z cosh v): an even, entire function that the
//! trapezoidal rule integrates with exponential accuracy. The enclosure
//! carries three explicit error terms: node rounding (through the ball sum),
//! truncation of |v| > V (bounded via cosh v >= cosh V + sinh V (v - V)),
//! and the discretization error of step h (bounded by the strip estimate
//! 2 M(1) / (e^{2 pi / h} - 1) with M(1) = int |exp(-z cosh(v + i))| dv
//! <= 2 K_0(z cos 1) <= 2 e^{-z cos 1} sqrt(pi / (2 z cos 1))).

use crate::ball::{constants, functions, Dyadic, Enclosure, Round};
use crate::error::{Error, Result};
use num_bigint::BigInt;

/// Crude rigorous upper bound K_0(z) <= e^{-z} sqrt(pi/(2z)) (from
/// cosh v >= 1 + v^2/2), used only inside the error terms.
fn k0_upper(z: &Enclosure, prec: u32) -> Result<Dyadic> {
    let e = functions::exp(&z.neg(), prec);
    let f = constants::pi(prec).div(&z.shl(1), prec)?.sqrt(prec)?;
    Ok(e.mul(&f, prec).mag_upper())
}

/// Node/width parameters for a target of roughly `prec` bits at argument y.
fn parameters(y_f64: f64, prec: u32) -> (i64, u32) {
    // Strip error ~ 2 M(1) e^{-2 pi/h}; relative to K_0(y) ~ e^{-y} this
    // costs e^{0.46 y}, so 2 pi / h = 0.46 y + (prec + 10) ln 2.
    let two_pi_over_h = 0.4597 * y_f64 + (prec as f64 + 10.0) * std::f64::consts::LN_2;
    // h as a power of two times small integer; keep nodes dyadic.
    let h_log2 = (std::f64::consts::TAU / two_pi_over_h).log2().floor() as i64;
    // Truncation: y (cosh V - 1) >= (prec + 12) ln 2 + margin.
    let target = (prec as f64 + 12.0) * std::f64::consts::LN_2 + 20.0;
    let cosh_v = 1.0 + target / y_f64;
    let v = (cosh_v + (cosh_v * cosh_v - 1.0).sqrt()).ln();
    let h = 2f64.powi(h_log2 as i32);
    let k = (v / h).ceil() as u32 + 1;
    (h_log2, k)
}

/// Rigorous enclosure of K_0(y) for y > 0.
pub fn k0_quadrature(y: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !y.lower().is_positive() {
        return Err(Error::Domain("K_0 needs y > 0".into()));
    }
    let wp = prec + 24;
    let y_f64 = y.mid().to_f64().max(1e-12);
    let (h_log2, k_nodes) = parameters(y_f64, prec);
    let h = Dyadic::pow2(h_log2);
    // Trapezoid sum: h (f(0)/2 + sum_{k=1..K} f(kh)) doubled by evenness:
    // h f(0) + 2h sum_{k>=1} f(kh), with f(v) = exp(-y cosh v) / ... and the
    // integral over the whole line equals 2 K_0(y).
    let mut sum = functions::exp(&y.neg(), wp).shl(-1); // f(0)/2 = e^{-y}/2
    for k in 1..=k_nodes {
        let v = Enclosure::exact(h.mul_exact(&Dyadic::from_i64(k as i64)));
        let ch = functions::cosh(&v, wp);
        let f = functions::exp(&y.mul(&ch, wp).neg(), wp);
        sum = sum.add(&f, wp);
    }
    // K_0(y) = (1/2) int_{-inf}^{inf} f = h * sum (using evenness).
    let mut out = sum.mul(&Enclosure::exact(h.clone()), wp);
    // Truncation tail: int_V^inf e^{-y cosh v} dv <= e^{-y cosh V}/(y sinh V).
    let v_end = Enclosure::exact(h.mul_exact(&Dyadic::from_i64(k_nodes as i64)));
    let ch_v = functions::cosh(&v_end, wp);
    let sh_v = functions::sinh(&v_end, wp);
    let tail = functions::exp(&y.mul(&ch_v, wp).neg(), wp)
        .div(&y.mul(&sh_v, wp), wp)?
        .mag_upper();
    out = out.widen(&tail);
    // Strip (discretization) error: 2 M(1)/(e^{2 pi/h} - 1), halved since we
    // enclose K_0 = I/2. cos 1 > 0.5403.
    let cos1_low = Enclosure::from_ratio(&BigInt::from(5403), &BigInt::from(10000), wp);
    let m1 = k0_upper(&y.mul(&cos1_low, wp), wp)?.mul_exact(&Dyadic::from_i64(2));
    let two_pi_over_h = constants::pi(64).shl(1 - h_log2);
    // e^{2 pi / h} - 1 >= e^{floor} - 1; take a dyadic lower bound via exp of
    // the lower endpoint.
    let denom = functions::exp(&Enclosure::exact(two_pi_over_h.lower()), 64)
        .lower()
        .sub_exact(&Dyadic::one());
    let strip = m1.div_round(&denom, 30, Round::Ceil).0;
    out = out.widen(&strip.round(30, Round::Ceil).0);
    Ok(out)
}

/// Independent series oracle:
/// K_0(y) = -(ln(y/2) + gamma) I_0(y) + sum_{k>=1} H_k (y^2/4)^k / (k!)^2,
/// with rigorous tails; intended for moderate y (the cross-check grid).
pub fn k0_series_reference(y: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !y.lower().is_positive() {
        return Err(Error::Domain("K_0 needs y > 0".into()));
    }
    if y.mag_upper().cmp_value(&Dyadic::from_i64(8)) == std::cmp::Ordering::Greater {
        return Err(Error::Domain("series reference restricted to y <= 8".into()));
    }
    let wp = prec + 32;
    let q = y.mul(y, wp).shl(-2); // y^2/4
    let mut term = Enclosure::one(); // (y^2/4)^k / (k!)^2
    let mut i0 = Enclosure::one();
    let mut hsum = Enclosure::zero(); // sum H_k term_k
    let mut h_k = Enclosure::zero();
    let n_terms = 10 + wp / 2;
    for k in 1..=(n_terms as u64) {
        term = term.mul(&q, wp).div_bigint(&BigInt::from(k * k), wp);
        h_k = h_k.add(&Enclosure::from_ratio(&BigInt::from(1), &BigInt::from(k), wp), wp);
        i0 = i0.add(&term, wp);
        hsum = hsum.add(&h_k.mul(&term, wp), wp);
    }
    // Tails: ratio q/(k+1)^2 < 1/2 for k >= 2y, so both tails are below
    // twice the next term (with H_{k+1} <= k+1 for the weighted one).
    let next = term.mul(&q, wp).div_bigint(&BigInt::from((n_terms as u64 + 1).pow(2)), wp);
    let t0 = next.mag_upper().mul_exact(&Dyadic::from_i64(2)).round(30, Round::Ceil).0;
    let t1 = next
        .mag_upper()
        .mul_exact(&Dyadic::from_i64(2 * (n_terms as i64 + 1)))
        .round(30, Round::Ceil)
        .0;
    let i0 = i0.widen(&t0);
    let hsum = hsum.widen(&t1);
    let log_half_y = functions::ln(&y.shl(-1), wp)?;
    let gamma = constants::euler_gamma(wp.min(512));
    let lead = log_half_y.add(&gamma, wp).neg().mul(&i0, wp);
    Ok(lead.add(&hsum, wp))
}
