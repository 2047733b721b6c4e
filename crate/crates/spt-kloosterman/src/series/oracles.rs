//! Exact integer oracles: p(n) by the pentagonal recurrence, spt(n) by
//! direct partition enumeration (small n) and by the generating function
//!
//!   sum_n spt(n) q^n = sum_{k>=1} q^k/(1-q^k)^2 prod_{j>k} 1/(1-q^j),
//!
//! and the exact combination S(n) = 12 spt(n) + (24n-1) p(n).

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// p(0..=n_max) by Euler's pentagonal recurrence
/// p(n) = sum_k (-1)^{k+1} [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)].
pub fn partition_exact(n_max: u64) -> Vec<BigUint> {
    let n = n_max as usize;
    let mut p = vec![BigUint::zero(); n + 1];
    p[0] = BigUint::one();
    for i in 1..=n {
        let mut acc = BigInt::zero();
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = k % 2 == 1;
            if sign {
                acc += BigInt::from(p[i - g1].clone());
            } else {
                acc -= BigInt::from(p[i - g1].clone());
            }
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                if sign {
                    acc += BigInt::from(p[i - g2].clone());
                } else {
                    acc -= BigInt::from(p[i - g2].clone());
                }
            }
            k += 1;
        }
        p[i] = acc.to_biguint().expect("partition counts are positive");
    }
    p
}

/// spt(n) by enumerating every partition of n and summing the multiplicity
/// of its smallest part. Exponential; capped at n <= 60.
pub fn spt_bruteforce(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("spt is defined for n >= 1".into()));
    }
    if n > 60 {
        return Err(Error::ResourceLimit(format!(
            "brute-force spt enumeration capped at n = 60, asked for {n}"
        )));
    }
    fn walk(rem: u64, max: u64, last: u64, run: u64, total: &mut u128) {
        if rem == 0 {
            *total += run as u128;
            return;
        }
        let top = rem.min(max);
        for part in 1..=top {
            walk(rem - part, part, part, if part == last { run + 1 } else { 1 }, total);
        }
    }
    let mut total = 0u128;
    walk(n, n, 0, 0, &mut total);
    Ok(BigUint::from(total))
}

/// spt(0..=n_max) from the generating function, evaluated as an O(n^2)
/// coefficient convolution: iterate k downward maintaining
/// r = prod_{j>k} 1/(1-q^j) (one stride-k prefix pass per step) and add
/// q^k/(1-q^k)^2 r (two stride-k passes on a scratch copy). spt(0) = 0.
pub fn spt_genfun(n_max: u64) -> Vec<BigUint> {
    let n = n_max as usize;
    let mut acc = vec![BigUint::zero(); n + 1];
    let mut r = vec![BigUint::zero(); n + 1];
    r[0] = BigUint::one();
    let mut scratch: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    for k in (1..=n).rev() {
        let top = n - k;
        for i in 0..=top {
            scratch[i].clone_from(&r[i]);
        }
        // two passes of scratch[i] += scratch[i-k]: multiply by 1/(1-q^k)^2
        for _ in 0..2 {
            for i in k..=top {
                let (head, tail) = scratch.split_at_mut(i);
                tail[0] += &head[i - k];
            }
        }
        for i in 0..=top {
            acc[i + k] += &scratch[i];
        }
        // r *= 1/(1-q^k) for the next (smaller) k
        for i in k..=n {
            let (head, tail) = r.split_at_mut(i);
            tail[0] += &head[i - k];
        }
    }
    acc
}

/// S(n) = 12 spt(n) + (24n - 1) p(n).
pub fn s_exact(n: u64, p: &BigUint, spt: &BigUint) -> BigInt {
    BigInt::from(spt.clone()) * 12 + BigInt::from(p.clone()) * (BigInt::from(n) * 24 - 1)
}

/// Exact values (p, spt, S) for one n.
#[derive(Debug, Clone)]
pub struct ExactTriple {
    pub n: u64,
    pub p: BigUint,
    pub spt: BigUint,
    pub s: BigInt,
}

/// Shared oracle tables for a range of n.
pub struct ExactTables {
    pub p: Vec<BigUint>,
    pub spt: Vec<BigUint>,
}

impl ExactTables {
    pub fn build(n_max: u64) -> Self {
        ExactTables { p: partition_exact(n_max), spt: spt_genfun(n_max) }
    }

    pub fn n_max(&self) -> u64 {
        (self.p.len() - 1) as u64
    }

    pub fn triple(&self, n: u64) -> ExactTriple {
        let p = self.p[n as usize].clone();
        let spt = self.spt[n as usize].clone();
        let s = s_exact(n, &p, &spt);
        ExactTriple { n, p, spt, s }
    }
}
