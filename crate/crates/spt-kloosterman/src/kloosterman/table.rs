//! Shared trigonometry for the exact-angle Kloosterman evaluation.
//!
//! For fixed c every angle is an integer t mod 12c, so one table of
//! cos(pi t / 6c) for t in [0, 3c] covers all evaluations of A_c(n) for every
//! n. Entries are Q62 fixed point with a per-entry error bound in ulps;
//! summing phi(c) entries in i128 is exact, so the only error is the tabled
//! one.

use crate::arith::gcd_u64;
use crate::ball::{constants, functions, Dyadic, Enclosure};
use crate::dedekind::six_c_s;
use num_bigint::BigInt;

const Q: i64 = 62;

/// How table entries are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableAccuracy {
    /// Every entry from a direct ball cosine: ~2 ulps each. Needed when the
    /// realness width of A_c(n) must come out near the working precision.
    Tight,
    /// Rotation by a fixed angle with periodic re-anchoring: ~5*step ulps.
    /// Plenty for bound sweeps whose margins are orders of magnitude.
    Anchored { step: u32 },
}

/// Q62 cosine table for angles pi t/(6c), t in [0, 3c].
pub struct CosTable {
    c: u64,
    half: Vec<i64>,
    err_ulps: i64,
}

fn ball_cos_q62(t: u64, c: u64, prec: u32) -> (i64, i64) {
    // cos(pi t / (6c)) in Q62 with an error bound in ulps.
    let pi = constants::pi(prec);
    let theta = pi
        .mul_bigint(&BigInt::from(t), prec)
        .div_bigint(&BigInt::from(6 * c), prec);
    let v = functions::cos(&theta, prec);
    let q = v.mid().shl(Q).round_to_integer();
    // |q*2^-62 - cos| <= rounding(1/2 ulp) + radius
    let rad_ulps = v.rad().shl(Q).ceil_int();
    let extra: i64 = rad_ulps.try_into().unwrap_or(i64::MAX / 2);
    (q.try_into().expect("Q62 cosine fits i64"), 1 + extra)
}

impl CosTable {
    pub fn build(c: u64, accuracy: TableAccuracy) -> Self {
        let prec = 96;
        let len = (3 * c + 1) as usize;
        let mut half = vec![0i64; len];
        let mut err: i64 = 0;
        match accuracy {
            TableAccuracy::Tight => {
                for (t, slot) in half.iter_mut().enumerate() {
                    let (v, e) = ball_cos_q62(t as u64, c, prec);
                    *slot = v;
                    err = err.max(e);
                }
            }
            TableAccuracy::Anchored { step } => {
                let step = step.max(1) as usize;
                // Rotation by delta = pi/(6c).
                let (cd, ecd) = ball_cos_q62(1, c, prec);
                let pi = constants::pi(prec);
                let theta = pi.div_bigint(&BigInt::from(6 * c), prec);
                let sball = functions::sin(&theta, prec);
                let sd: i64 = sball.mid().shl(Q).round_to_integer().try_into().unwrap();
                let esd: i64 = 1 + i64::try_from(sball.rad().shl(Q).ceil_int()).unwrap_or(4);
                let rot_err = ecd.max(esd);
                let mut t = 0usize;
                while t < len {
                    let (c0, e0) = ball_cos_q62(t as u64, c, prec);
                    half[t] = c0;
                    // companion sine at the anchor
                    let pi = constants::pi(prec);
                    let th = pi
                        .mul_bigint(&BigInt::from(t as u64), prec)
                        .div_bigint(&BigInt::from(6 * c), prec);
                    let sb = functions::sin(&th, prec);
                    let mut s_cur: i64 = sb.mid().shl(Q).round_to_integer().try_into().unwrap();
                    let mut c_cur = c0;
                    let mut e_cur = e0.max(1 + i64::try_from(sb.rad().shl(Q).ceil_int()).unwrap_or(4));
                    for u in (t + 1)..(t + step).min(len) {
                        // (c,s) <- (c cd - s sd, s cd + c sd), Q62 products
                        let nc = ((c_cur as i128 * cd as i128) - (s_cur as i128 * sd as i128)) >> Q;
                        let ns = ((s_cur as i128 * cd as i128) + (c_cur as i128 * sd as i128)) >> Q;
                        c_cur = nc as i64;
                        s_cur = ns as i64;
                        // error: previous + 2*rot_err + shift truncations
                        e_cur += 2 * rot_err + 3;
                        half[u] = c_cur;
                        err = err.max(e_cur);
                    }
                    err = err.max(e_cur);
                    t += step;
                }
            }
        }
        CosTable { c, half, err_ulps: err.max(1) }
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn err_ulps(&self) -> i64 {
        self.err_ulps
    }

    /// cos(pi t / 6c) in Q62 for any angle t mod 12c.
    #[inline]
    pub fn cos_of(&self, t: u64) -> i64 {
        let m = 12 * self.c;
        let mut t = t % m;
        if t > 6 * self.c {
            t = m - t;
        }
        if t > 3 * self.c {
            -self.half[(6 * self.c - t) as usize]
        } else {
            self.half[t as usize]
        }
    }

    /// sin(pi t / 6c) = cos(pi (t - 3c) / 6c).
    #[inline]
    pub fn sin_of(&self, t: u64) -> i64 {
        let m = 12 * self.c;
        self.cos_of((t + m - 3 * self.c) % m)
    }
}

/// Per-c state for evaluating A_c(n) across many n: the cosine table plus the
/// Dedekind angle offsets u_d = 6c s(d,c) mod 12c for d < c/2.
pub struct SweepEvaluator {
    c: u64,
    table: CosTable,
    /// (d, u_d) for coprime d in (0, c/2); pairs (d, c-d) carry angles
    /// (t, -t), which is what makes A_c(n) exactly real.
    base: Vec<(u32, u32)>,
}

/// A_c(n) as Q62 integer data: (cos sum, sin sum, error bound in ulps applied
/// to each of the summed terms).
#[derive(Debug, Clone, Copy)]
pub struct RawKloosterman {
    pub cos_q62: i128,
    pub sin_q62: i128,
    pub err_q62: i128,
}

impl RawKloosterman {
    pub fn value(&self) -> Enclosure {
        Enclosure::new(
            Dyadic::new(BigInt::from(self.cos_q62), -Q),
            Dyadic::new(BigInt::from(self.err_q62), -Q),
        )
    }

    pub fn imag(&self) -> Enclosure {
        Enclosure::new(
            Dyadic::new(BigInt::from(self.sin_q62), -Q),
            Dyadic::new(BigInt::from(self.err_q62), -Q),
        )
    }
}

impl SweepEvaluator {
    pub fn new(c: u64, accuracy: TableAccuracy) -> Self {
        let table = CosTable::build(c, accuracy);
        let mut base = Vec::new();
        if c >= 3 {
            base.reserve((c as usize) / 2);
            for d in 1..c.div_ceil(2) {
                if gcd_u64(d, c) == 1 {
                    let u = six_c_s(d as i64, c as i64).rem_euclid(12 * c as i128) as u64;
                    base.push((d as u32, u as u32));
                }
            }
        }
        SweepEvaluator { c, table, base }
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// Number of reduced residues (phi(c)).
    pub fn phi(&self) -> u64 {
        match self.c {
            1 | 2 => 1,
            _ => 2 * self.base.len() as u64,
        }
    }

    /// Full evaluation: both residues of each +-pair are summed, so the sine
    /// sum is a genuine enclosure of the imaginary part.
    pub fn eval_full(&self, n: i64) -> RawKloosterman {
        let c = self.c;
        let m = 12 * c;
        if c == 1 {
            return RawKloosterman { cos_q62: 1i128 << Q, sin_q62: 0, err_q62: 0 };
        }
        if c == 2 {
            let t = (-12 * n).rem_euclid(m as i64) as u64;
            let cv = self.table.cos_of(t);
            let sv = self.table.sin_of(t);
            return RawKloosterman {
                cos_q62: cv as i128,
                sin_q62: sv as i128,
                err_q62: 2 * self.table.err_ulps() as i128,
            };
        }
        let mut cs: i128 = 0;
        let mut ss: i128 = 0;
        let nm = (12 * n).rem_euclid(m as i64) as u64;
        for &(d, u) in &self.base {
            // t_d = u_d - 12 d n mod 12c; partner angle is -t_d.
            let t = (u as u64 + m - (d as u64 * nm) % m) % m;
            cs += self.table.cos_of(t) as i128;
            ss += self.table.sin_of(t) as i128;
            let t2 = (m - t) % m;
            cs += self.table.cos_of(t2) as i128;
            ss += self.table.sin_of(t2) as i128;
        }
        RawKloosterman {
            cos_q62: cs,
            sin_q62: ss,
            err_q62: self.phi() as i128 * self.table.err_ulps() as i128,
        }
    }

    /// Paired evaluation: A_c(n) = 2 sum_{d < c/2} cos(...), exactly real.
    pub fn eval_real(&self, n: i64) -> RawKloosterman {
        let c = self.c;
        if c <= 2 {
            return self.eval_full(n);
        }
        let m = 12 * c;
        let mut cs: i128 = 0;
        let nm = (12 * n).rem_euclid(m as i64) as u64;
        for &(d, u) in &self.base {
            let t = (u as u64 + m - (d as u64 * nm) % m) % m;
            cs += self.table.cos_of(t) as i128;
        }
        RawKloosterman {
            cos_q62: 2 * cs,
            sin_q62: 0,
            err_q62: self.phi() as i128 * self.table.err_ulps() as i128,
        }
    }

    /// The exact angle multiset t_d mod 12c over all reduced residues d.
    pub fn angles(&self, n: i64) -> Vec<u64> {
        let c = self.c;
        let m = 12 * c;
        if c == 1 {
            return vec![0];
        }
        if c == 2 {
            return vec![(-12 * n).rem_euclid(m as i64) as u64];
        }
        let nm = (12 * n).rem_euclid(m as i64) as u64;
        let mut out = Vec::with_capacity(2 * self.base.len());
        for &(d, u) in &self.base {
            let t = (u as u64 + m - (d as u64 * nm) % m) % m;
            out.push(t);
            out.push((m - t) % m);
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn table_symmetries() {
        let t = CosTable::build(7, TableAccuracy::Tight);
        assert_eq!(t.cos_of(0), 1i64 << Q);
        assert_eq!(t.cos_of(21), 0); // cos(pi/2)
        assert_eq!(t.cos_of(42), -(1i64 << Q)); // cos(pi)
        assert_eq!(t.sin_of(21), 1i64 << Q); // sin(pi/2)
        for a in 0..84u64 {
            assert_eq!(t.cos_of(a), t.cos_of(84 - a % 84), "even symmetry at {a}");
            assert_eq!(t.sin_of(a % 84), -t.sin_of((84 - a % 84) % 84), "odd symmetry at {a}");
        }
    }

    #[test]
    fn anchored_matches_tight_within_error() {
        for c in [5u64, 12, 101] {
            let tight = CosTable::build(c, TableAccuracy::Tight);
            let fast = CosTable::build(c, TableAccuracy::Anchored { step: 64 });
            let tol = tight.err_ulps() + fast.err_ulps();
            for t in 0..=(3 * c) {
                let a = tight.cos_of(t);
                let b = fast.cos_of(t);
                assert!(
                    (a - b).abs() <= tol,
                    "entry {t} of c={c} differs by {} ulps (tol {tol})",
                    (a - b).abs()
                );
            }
        }
    }

    #[test]
    fn a1_and_a2_are_exact() {
        let e1 = SweepEvaluator::new(1, TableAccuracy::Tight);
        let r = e1.eval_full(5);
        assert_eq!(r.cos_q62, 1i128 << Q);
        assert_eq!(r.sin_q62, 0);

        // A_2(1) = -1
        let e2 = SweepEvaluator::new(2, TableAccuracy::Tight);
        let r = e2.eval_full(1);
        let v = r.value();
        assert!(v.contains(&Dyadic::from_i64(-1)));
        assert!(v.rad().cmp_value(&Dyadic::pow2(-50)) == Ordering::Less);
    }

    #[test]
    fn full_and_real_paths_agree() {
        for c in [3u64, 4, 5, 12, 35, 101] {
            let ev = SweepEvaluator::new(c, TableAccuracy::Tight);
            for n in [1i64, 2, 7, 19] {
                let f = ev.eval_full(n);
                let r = ev.eval_real(n);
                let diff = (f.cos_q62 - r.cos_q62).abs();
                assert!(
                    diff <= f.err_q62 + r.err_q62,
                    "cos sums differ at c={c}, n={n}: {diff}"
                );
                // imaginary part encloses zero
                assert!(f.sin_q62.abs() <= f.err_q62, "imag excludes 0 at c={c}, n={n}");
            }
        }
    }

    #[test]
    fn angle_multiset_is_symmetric_and_periodic() {
        for c in [3u64, 8, 15, 60] {
            let ev = SweepEvaluator::new(c, TableAccuracy::Tight);
            for n in [1i64, 4] {
                let angles = ev.angles(n);
                assert_eq!(angles.len() as u64, ev.phi());
                let m = 12 * c;
                let mut mirrored: Vec<u64> = angles.iter().map(|&t| (m - t) % m).collect();
                mirrored.sort_unstable();
                assert_eq!(angles, mirrored, "angle multiset not symmetric at c={c}");
                // periodicity in n mod c
                assert_eq!(angles, ev.angles(n + c as i64), "angles not periodic at c={c}");
            }
        }
    }
}
