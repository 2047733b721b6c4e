//! Eta-multiplier Kloosterman sums.
//!
//! A_c(n) = sum_{d mod c, (d,c)=1} e^{pi i s(d,c)} e^{-2 pi i d n / c} is
//! evaluated through exact integer angles: 6c s(d,c) is an integer, so each
//! term is e(t_d / 12c) with t_d = 6c s(d,c) - 12 d n mod 12c. All
//! transcendence funnels through one cosine table per c.

pub mod bounds;
mod table;

pub use table::{CosTable, RawKloosterman, SweepEvaluator, TableAccuracy};

use crate::arith::{gcd_u64, modinv_u64};
use crate::ball::{constants, functions, Dyadic, Enclosure};
use crate::dedekind::six_c_s;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use rayon::prelude::*;

/// Rectangular complex enclosure: the pair of real balls this crate needs for
/// Kloosterman sums (nothing more).
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub re: Enclosure,
    pub im: Enclosure,
}

impl ComplexBall {
    pub fn zero() -> Self {
        ComplexBall { re: Enclosure::zero(), im: Enclosure::zero() }
    }

    pub fn one() -> Self {
        ComplexBall { re: Enclosure::one(), im: Enclosure::zero() }
    }

    /// e(t / modulus) = cos(2 pi t/modulus) + i sin(2 pi t/modulus).
    pub fn from_angle_units(t: i64, modulus: u64, prec: u32) -> Self {
        let theta = constants::pi(prec)
            .mul_bigint(&BigInt::from(2 * t), prec)
            .div_bigint(&BigInt::from(modulus), prec);
        ComplexBall { re: functions::cos(&theta, prec), im: functions::sin(&theta, prec) }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        ComplexBall { re: self.re.add(&other.re, prec), im: self.im.add(&other.im, prec) }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        ComplexBall { re: self.re.sub(&other.re, prec), im: self.im.sub(&other.im, prec) }
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.mul(&other.re, prec).sub(&self.im.mul(&other.im, prec), prec),
            im: self.re.mul(&other.im, prec).add(&self.im.mul(&other.re, prec), prec),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn scale(&self, k: &Enclosure, prec: u32) -> Self {
        ComplexBall { re: self.re.mul(k, prec), im: self.im.mul(k, prec) }
    }

    pub fn abs_sq(&self, prec: u32) -> Enclosure {
        self.re.mul(&self.re, prec).add(&self.im.mul(&self.im, prec), prec)
    }

    pub fn div(&self, other: &Self, prec: u32) -> Result<Self> {
        let den = other.abs_sq(prec);
        let num = self.mul(&other.conj(), prec);
        Ok(ComplexBall { re: num.re.div(&den, prec)?, im: num.im.div(&den, prec)? })
    }
}

/// A_c(n) with its exact angle multiset and the enclosed real value. The
/// companion imaginary enclosure is retained as a self-check.
#[derive(Debug, Clone)]
pub struct KloostermanEvaluation {
    pub c: u64,
    pub n: i64,
    pub angles: Vec<u64>,
    pub value: Enclosure,
    pub imag: Enclosure,
}

fn check_c(c: u64) -> Result<()> {
    if c == 0 {
        return Err(Error::Domain("c must be >= 1".into()));
    }
    Ok(())
}

/// The exact angle multiset t_d = 6c s(d,c) - 12 d n mod 12c, one angle per
/// reduced residue d mod c, so that A_c(n) = sum_d e(t_d / 12c).
pub fn kloosterman_angles(c: u64, n: i64) -> Result<Vec<u64>> {
    check_c(c)?;
    Ok(SweepEvaluator::new(c, TableAccuracy::Tight).angles(n))
}

/// A_c(n) as an enclosure at `prec` bits, summing ball cosines over the angle
/// multiset. Errors with `ImaginaryPartNonzero` if the sine sum excludes 0.
pub fn a_c_n(c: u64, n: i64, prec: u32) -> Result<KloostermanEvaluation> {
    check_c(c)?;
    let angles = kloosterman_angles(c, n)?;
    let m = 12 * c;
    let mut re = Enclosure::zero();
    let mut im = Enclosure::zero();
    for &t in &angles {
        let e = ComplexBall::from_angle_units(t as i64, m, prec);
        re = re.add(&e.re, prec);
        im = im.add(&e.im, prec);
    }
    if !im.contains_zero() {
        return Err(Error::ImaginaryPartNonzero(format!("A_{c}({n}) imag = {im}")));
    }
    Ok(KloostermanEvaluation { c, n, angles, value: re, imag: im })
}

/// General eta-multiplier Kloosterman sum S(m, n, c, chi).
#[derive(Debug, Clone)]
pub struct GeneralKloosterman {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub value: ComplexBall,
}

/// S(m,n,c,chi) = sum over gamma = (a,*;c,d), ad = 1 mod c, of
/// conj(chi(gamma)) e((m_chi a + n_chi d)/c) with m_chi = m - 23/24.
/// Every term is e(T_d / 24c) with the exact integer angle
/// T_d = 24(m-1)a + 24(n-1)d + 3c + 12c s(d,c) mod 24c.
pub fn s_general(m: i64, n: i64, c: u64, prec: u32) -> Result<GeneralKloosterman> {
    check_c(c)?;
    let modulus = 24 * c;
    let mut value = ComplexBall::zero();
    if c == 1 {
        // single term gamma = (0,-1;1,0): T = 3
        value = ComplexBall::from_angle_units(3, 24, prec);
        return Ok(GeneralKloosterman { m, n, c, value });
    }
    for d in 0..c {
        if gcd_u64(d, c) != 1 {
            continue;
        }
        let a = modinv_u64(d % c, c).expect("inverse exists for reduced residue");
        let s6 = six_c_s(d as i64, c as i64);
        let t = (24 * (m as i128 - 1) * a as i128
            + 24 * (n as i128 - 1) * d as i128
            + 3 * c as i128
            + 2 * s6)
            .rem_euclid(modulus as i128) as i64;
        let term = ComplexBall::from_angle_units(t, modulus, prec);
        value = value.add(&term, prec);
    }
    Ok(GeneralKloosterman { m, n, c, value })
}

/// sqrt(-i) * S(1, 1-n, c, chi), which equals A_c(n); used to cross-validate
/// the two evaluation paths.
pub fn a_c_n_via_s_general(c: u64, n: i64, prec: u32) -> Result<ComplexBall> {
    let s = s_general(1, 1 - n, c, prec)?;
    // sqrt(-i) = e(-1/8) = e(-3c / 24c)
    let rot = ComplexBall::from_angle_units(-3 * c as i64, 24 * c, prec);
    Ok(s.value.mul(&rot, prec))
}

/// An enclosed partial sum sum_{c<=x} A_c(n)/c.
#[derive(Debug, Clone)]
pub struct PartialSum {
    pub n: i64,
    pub x: u64,
    pub value: Enclosure,
}

/// Partial sums for several n at several cutoffs in one sweep over c.
/// Per-c work runs in parallel; the final reduction is in increasing c, so
/// the result is deterministic.
pub fn partial_sums_grid(ns: &[i64], snapshots: &[u64], prec: u32) -> Result<Vec<Vec<PartialSum>>> {
    if snapshots.is_empty() {
        return Ok(ns.iter().map(|_| Vec::new()).collect());
    }
    let mut xs = snapshots.to_vec();
    xs.sort_unstable();
    if xs[0] == 0 {
        return Err(Error::Domain("cutoff x must be >= 1".into()));
    }
    let x_max = *xs.last().unwrap();
    let accuracy = if x_max <= 512 {
        TableAccuracy::Tight
    } else {
        TableAccuracy::Anchored { step: 512 }
    };
    let per_c: Vec<Vec<(i128, i128)>> = (1..=x_max)
        .into_par_iter()
        .map(|c| {
            let ev = SweepEvaluator::new(c, accuracy);
            ns.iter()
                .map(|&n| {
                    let r = ev.eval_real(n);
                    (r.cos_q62, r.err_q62)
                })
                .collect()
        })
        .collect();
    let mut out: Vec<Vec<PartialSum>> = Vec::with_capacity(ns.len());
    for (i, &n) in ns.iter().enumerate() {
        let mut acc = Enclosure::zero();
        let mut row = Vec::with_capacity(xs.len());
        let mut next = 0usize;
        for c in 1..=x_max {
            let (cs, err) = per_c[(c - 1) as usize][i];
            let val = Enclosure::new(
                Dyadic::new(BigInt::from(cs), -62),
                Dyadic::new(BigInt::from(err), -62),
            )
            .div_bigint(&BigInt::from(c), prec);
            acc = acc.add(&val, prec);
            while next < xs.len() && xs[next] == c {
                row.push(PartialSum { n, x: c, value: acc.clone() });
                next += 1;
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// sum_{c<=x} A_c(n)/c, summed in increasing c.
pub fn partial_sum(n: i64, x: u64, prec: u32) -> Result<PartialSum> {
    let grid = partial_sums_grid(&[n], &[x], prec)?;
    Ok(grid.into_iter().next().unwrap().into_iter().next().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dedekind::dedekind_direct;
    use num_rational::BigRational;
    use std::cmp::Ordering;

    /// Naive oracle: sum e(s(d,c)/2 - dn/c) straight from the definition,
    /// exact rational phases through the generic ball trig.
    fn a_c_naive(c: u64, n: i64, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for d in 0..c.max(1) {
            if c > 1 && gcd_u64(d, c) != 1 {
                continue;
            }
            if c == 1 && d > 0 {
                break;
            }
            let s = dedekind_direct(&BigInt::from(d), &BigInt::from(c)).unwrap();
            let r = s / BigRational::from_integer(BigInt::from(2))
                - BigRational::new(BigInt::from(d as i64 * n), BigInt::from(c));
            // e(r): angle 2 pi r
            let theta = constants::pi(prec)
                .mul_bigint(&(r.numer() * 2), prec)
                .div_bigint(r.denom(), prec);
            let term = ComplexBall { re: functions::cos(&theta, prec), im: functions::sin(&theta, prec) };
            acc = acc.add(&term, prec);
        }
        acc
    }

    #[test]
    fn a_c_agrees_with_naive_oracle() {
        for c in 1u64..=20 {
            for n in 1i64..=8 {
                let fast = a_c_n(c, n, 96).unwrap();
                let naive = a_c_naive(c, n, 96);
                assert!(
                    fast.value.sub(&naive.re, 96).contains_zero(),
                    "A_{c}({n}): angle path {} vs naive {}",
                    fast.value,
                    naive.re
                );
                assert!(naive.im.contains_zero(), "naive imag nonzero at c={c},n={n}");
            }
        }
    }

    #[test]
    fn a1_is_one_and_a2_alternates() {
        for n in 1i64..=5 {
            let e = a_c_n(1, n, 64).unwrap();
            assert!(e.value.is_exact() && e.value.mid() == &Dyadic::one());
        }
        let e = a_c_n(2, 1, 64).unwrap();
        assert!(e.value.contains(&Dyadic::from_i64(-1)));
        assert!(e.value.rad().cmp_value(&Dyadic::pow2(-40)) == Ordering::Less);
    }

    #[test]
    fn sweep_evaluator_matches_public_path() {
        for c in [3u64, 12, 30, 97] {
            let ev = SweepEvaluator::new(c, TableAccuracy::Tight);
            for n in [1i64, 5, 23] {
                let pubv = a_c_n(c, n, 96).unwrap();
                let raw = ev.eval_real(n).value();
                assert!(
                    pubv.value.sub(&raw, 96).contains_zero(),
                    "paths disagree at c={c}, n={n}"
                );
            }
        }
    }

    #[test]
    fn s_general_relation_reproduces_a_c() {
        for c in 1u64..=24 {
            for n in [1i64, 2, 7] {
                let via_s = a_c_n_via_s_general(c, n, 96).unwrap();
                let direct = a_c_n(c, n, 96).unwrap();
                assert!(
                    via_s.re.sub(&direct.value, 96).contains_zero(),
                    "relation fails at c={c}, n={n}"
                );
                assert!(via_s.im.contains_zero(), "imag part nonzero at c={c}, n={n}");
            }
        }
    }

    #[test]
    fn s_general_c1_is_eighth_root() {
        let s = s_general(1, 0, 1, 96).unwrap();
        // e(1/8) = (sqrt2/2)(1 + i)
        let half_sqrt2 = Enclosure::from_i64(2).sqrt(96).unwrap().shl(-1);
        assert!(s.value.re.sub(&half_sqrt2, 96).contains_zero());
        assert!(s.value.im.sub(&half_sqrt2, 96).contains_zero());
        // |S| = 1
        assert!(s.value.abs_sq(96).contains(&Dyadic::one()));
    }

    #[test]
    fn partial_sum_basics() {
        // x = 1: single term A_1(n)/1 = 1
        let p = partial_sum(7, 1, 80).unwrap();
        assert!(p.value.contains(&Dyadic::one()));
        // naive check at (n=1, x=10)
        let p10 = partial_sum(1, 10, 96).unwrap();
        let mut acc = Enclosure::zero();
        for c in 1u64..=10 {
            let naive = a_c_naive(c, 1, 96);
            acc = acc.add(&naive.re.div_bigint(&BigInt::from(c), 96), 96);
        }
        assert!(p10.value.sub(&acc, 96).contains_zero());
        // |partial| <= x trivially
        for (n, x) in [(1i64, 10u64), (3, 25), (10, 50)] {
            let p = partial_sum(n, x, 80).unwrap();
            assert!(
                p.value.mag_upper().cmp_value(&Dyadic::from_i64(x as i64)) != Ordering::Greater
            );
        }
    }

    #[test]
    fn eta_product_consistency_for_multiplier_phase() {
        // chi(gamma) from the phase formula must reproduce
        // eta(gamma z)/(sqrt(cz+d) eta(z)) at z = i, gamma = (1,0;1,1).
        // gamma i = (1+i)/2.
        let prec = 128u32;
        let eta_i = eta_at(&Enclosure::zero(), &Enclosure::one(), prec); // z = i
        let half = Enclosure::from_ratio(&BigInt::from(1), &BigInt::from(2), prec);
        let eta_gi = eta_at(&half, &half, prec); // z = (1+i)/2
        // sqrt(cz+d) = sqrt(i + 1): modulus 2^(1/4), phase pi/8 = e(1/16)
        let r = Enclosure::from_i64(2).sqrt(prec).unwrap().sqrt(prec).unwrap();
        let e16 = ComplexBall::from_angle_units(1, 16, prec);
        let sqrt_czd = e16.scale(&r, prec);
        // chi = eta(gamma z) / (sqrt(cz+d) eta(z))
        let chi = eta_gi.div(&sqrt_czd.mul(&eta_i, prec), prec).unwrap();
        let phase =
            crate::dedekind::eta_multiplier_phase(&BigInt::from(1), &BigInt::from(0), &BigInt::from(1), &BigInt::from(1))
                .unwrap();
        // theta = 23/24
        let expect = ComplexBall::from_angle_units(
            phase.theta.numer().try_into().unwrap(),
            phase.theta.denom().try_into().unwrap(),
            prec,
        );
        let diff = chi.sub(&expect, prec);
        // agreement to ~1e-20
        assert!(diff.re.mag_upper().cmp_value(&Dyadic::pow2(-66)) == Ordering::Less);
        assert!(diff.im.mag_upper().cmp_value(&Dyadic::pow2(-66)) == Ordering::Less);
    }

    /// eta(x + iy) = e((x+iy)/24) prod (1 - e(n(x+iy))) with a rigorous
    /// product tail; test-only oracle.
    fn eta_at(x: &Enclosure, y: &Enclosure, prec: u32) -> ComplexBall {
        // e(w) for w = u + iv: e^{-2 pi v} (cos 2 pi u + i sin 2 pi u)
        let e_of = |u: &Enclosure, v: &Enclosure| -> ComplexBall {
            let two_pi = constants::pi(prec).shl(1);
            let modulus = functions::exp(&two_pi.mul(v, prec).neg(), prec);
            let ang = two_pi.mul(u, prec);
            ComplexBall {
                re: functions::cos(&ang, prec).mul(&modulus, prec),
                im: functions::sin(&ang, prec).mul(&modulus, prec),
            }
        };
        let day = BigInt::from(24);
        let mut acc = e_of(&x.div_bigint(&day, prec), &y.div_bigint(&day, prec));
        let n_terms = 60u32;
        for n in 1..=n_terms {
            let nb = BigInt::from(n);
            let term = e_of(&x.mul_bigint(&nb, prec), &y.mul_bigint(&nb, prec));
            let factor = ComplexBall::one().sub(&term, prec);
            acc = acc.mul(&factor, prec);
        }
        // |log prod_{n>N} (1 - q^n)| <= sum |q|^n / (1-|q|) with |q| = e^{-2 pi y}
        // <= |q|^{N+1} / ((1-|q|)^2); widen both components multiplicatively.
        let two_pi = constants::pi(prec).shl(1);
        let qmag = functions::exp(&two_pi.mul(y, prec).neg(), prec).mag_upper();
        let mut qn = Dyadic::one();
        for _ in 0..=n_terms {
            qn = qn.mul_exact(&qmag).round(40, crate::ball::Round::Ceil).0;
        }
        // y >= 1/2 in our tests: |q| <= e^{-pi} < 0.05, so (1-|q|)^2 > 0.9
        let tail = qn.mul_exact(&Dyadic::from_i64(2)).round(40, crate::ball::Round::Ceil).0;
        let scale = acc.abs_sq(prec).sqrt(prec).unwrap().mag_upper();
        let bump = tail.mul_exact(&scale).round(40, crate::ball::Round::Ceil).0;
        ComplexBall { re: acc.re.widen(&bump), im: acc.im.widen(&bump) }
    }
}
