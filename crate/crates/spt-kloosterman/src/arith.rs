//! Exact integer utilities: gcd/modular inverses, a smallest-prime-factor
//! sieve, trial-division + Pollard rho factorization, and the multiplicative
//! helpers tau, phi, and omega_o (count of distinct odd prime divisors).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Inverse of a modulo m (m >= 2, gcd(a, m) = 1), in [0, m).
pub fn modinv_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Smallest-prime-factor sieve; `spf[k]` is the least prime dividing k.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn factor(&self, mut n: u32) -> Vec<(u32, u32)> {
        assert!((n as usize) < self.spf.len());
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Number of distinct odd primes dividing n.
    pub fn omega_odd(&self, n: u32) -> u32 {
        self.factor(n).iter().filter(|(p, _)| *p != 2).count() as u32
    }

    pub fn phi(&self, n: u32) -> u64 {
        let mut out = 1u64;
        for (p, e) in self.factor(n) {
            out *= (p as u64 - 1) * (p as u64).pow(e - 1);
        }
        out
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, b, m);
        }
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd composite.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization of a u64 (trial division to 10^6, then Pollard rho).
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        for entry in out.iter_mut() {
            if entry.0 == p {
                entry.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for p in [2u64, 3, 5] {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    let mut d = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut w = 0;
    while d <= 1_000_000 && d * d <= n {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += wheel[w];
        w = (w + 1) % wheel.len();
    }
    // Remaining cofactor: prime, or split it recursively.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out
}

/// Number of divisors.
pub fn tau_u64(n: u64) -> u64 {
    factor_u64(n).iter().map(|(_, e)| (*e as u64) + 1).product()
}

/// Number of divisors of n^2, from the factorization of n.
pub fn tau_of_square_u64(n: u64) -> u64 {
    factor_u64(n).iter().map(|(_, e)| 2 * (*e as u64) + 1).product()
}

pub fn phi_u64(n: u64) -> u64 {
    factor_u64(n).iter().map(|(p, e)| (p - 1) * p.pow(e - 1)).product()
}

pub fn omega_odd_u64(n: u64) -> u32 {
    factor_u64(n).iter().filter(|(p, _)| *p != 2).count() as u32
}

fn to_u64(n: &BigInt, what: &str) -> Result<u64> {
    if n.is_negative() {
        return Err(Error::Domain(format!("{what} must be nonnegative")));
    }
    n.to_u64()
        .ok_or_else(|| Error::ResourceLimit(format!("{what} = {n} exceeds the 64-bit factorization range")))
}

/// omega_o(c), tau(c), phi(c) for a positive integer c.
pub fn arithmetic_helpers(c: &BigInt) -> Result<(u32, BigInt, BigInt)> {
    if !c.is_positive() {
        return Err(Error::Domain("c must be >= 1".into()));
    }
    let n = to_u64(c, "c")?;
    Ok((
        omega_odd_u64(n),
        BigInt::from(tau_u64(n)),
        BigInt::from(phi_u64(n)),
    ))
}

/// tau((24n - 23)^2) as used by the explicit Kloosterman-sum bounds.
pub fn tau_shifted_square(n: &BigInt) -> Result<BigInt> {
    if !n.is_positive() {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let m = n * 24 - 23;
    let m = to_u64(&m, "24n-23")?;
    Ok(BigInt::from(tau_of_square_u64(m)))
}

impl Default for SpfSieve {
    fn default() -> Self {
        Self::new(1 << 20)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers_on_small_numbers() {
        // 12 = 2^2 * 3
        let (w, t, p) = arithmetic_helpers(&BigInt::from(12)).unwrap();
        assert_eq!(w, 1);
        assert_eq!(t, BigInt::from(6));
        assert_eq!(p, BigInt::from(4));
        // tau((24*1-23)^2) = tau(1) = 1
        assert_eq!(tau_shifted_square(&BigInt::from(1)).unwrap(), BigInt::from(1));
        // power of two has no odd primes
        for k in 0..=20u32 {
            assert_eq!(omega_odd_u64(1u64 << k), 0);
        }
    }

    #[test]
    fn factorization_round_trips() {
        for n in [2u64, 97, 1_000_003, 600_851_475_143, 10_000_000_000_037] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n, "factorization of {n} wrong: {f:?}");
            for (p, _) in f {
                assert!(is_prime_u64(p), "{p} not prime");
            }
        }
    }

    #[test]
    fn sieve_agrees_with_direct_factorization() {
        let sieve = SpfSieve::new(10_000);
        for n in 2u32..2_000 {
            let a: Vec<(u64, u32)> = sieve.factor(n).iter().map(|(p, e)| (*p as u64, *e)).collect();
            assert_eq!(a, factor_u64(n as u64));
            assert_eq!(sieve.phi(n), phi_u64(n as u64));
            assert_eq!(sieve.omega_odd(n), omega_odd_u64(n as u64));
        }
    }

    #[test]
    fn modinv_works() {
        for (a, m) in [(3u64, 7u64), (10, 17), (12345, 1_000_003)] {
            let inv = modinv_u64(a, m).unwrap();
            assert_eq!(mulmod_u64(a, inv, m), 1 % m);
        }
        assert!(modinv_u64(6, 9).is_none());
    }

    #[test]
    fn phi_summatory_sanity() {
        // sum_{d | n} phi(d) = n
        for n in [12u64, 36, 100, 5040] {
            let mut s = 0;
            for d in 1..=n {
                if n % d == 0 {
                    s += phi_u64(d);
                }
            }
            assert_eq!(s, n);
        }
    }
}
