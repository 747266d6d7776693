//! Factorization, the Legendre symbol and closed-form counts of modular square roots.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{Limits, DEFAULT_MAX_MODULUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// `value = ∏ prime^exponent`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<PrimePower>,
}

impl Factorization {
    /// The single prime power when `value` is one, else `None`.
    pub fn as_prime_power(&self) -> Option<PrimePower> {
        match self.factors.as_slice() {
            [pp] => Some(*pp),
            _ => None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization with the default bound of 2^31.
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_within(n, DEFAULT_MAX_MODULUS)
}

pub fn factorize_within(n: u64, bound: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositiveModulus(0));
    }
    if n > bound {
        return Err(Error::OutOfRange {
            what: "modulus",
            value: n as u128,
            bound,
        });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut exponent = 0;
            while rest % p == 0 {
                rest /= p;
                exponent += 1;
            }
            factors.push(PrimePower { prime: p, exponent });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push(PrimePower {
            prime: rest,
            exponent: 1,
        });
    }
    Ok(Factorization { value: n, factors })
}

/// `base^exp mod m`.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut base = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(k/p)` by Euler's criterion. Negative `k` is reduced mod `p`.
pub fn legendre(k: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let k = (k as i128).rem_euclid(p as i128) as u64;
    if k == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(k, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// A request to count `#{x mod p^j : x² ≡ t}`.
///
/// The target is kept reduced, with its decomposition `t = k·p^i`, `p ∤ k` precomputed
/// (`None` when `t ≡ 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtCountQuery {
    pub target: u64,
    pub prime: u64,
    pub exponent: u32,
    pub decomposition: Option<(u32, u64)>,
}

impl SqrtCountQuery {
    pub fn new(target: i64, prime: u64, exponent: u32) -> Result<Self> {
        Self::new_within(target, prime, exponent, &Limits::default())
    }

    pub fn new_within(target: i64, prime: u64, exponent: u32, limits: &Limits) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if exponent == 0 {
            return Err(Error::Precondition("exponent must be at least 1".into()));
        }
        let modulus = (prime as u128).checked_pow(exponent);
        let modulus = match modulus {
            Some(m) if m <= limits.max_modulus as u128 => m as u64,
            _ => {
                return Err(Error::OutOfRange {
                    what: "modulus",
                    value: modulus.unwrap_or(u128::MAX),
                    bound: limits.max_modulus,
                })
            }
        };
        let target = (target as i128).rem_euclid(modulus as i128) as u64;
        let decomposition = (target != 0).then(|| {
            let (mut i, mut k) = (0u32, target);
            while k % prime == 0 {
                k /= prime;
                i += 1;
            }
            (i, k)
        });
        Ok(SqrtCountQuery {
            target,
            prime,
            exponent,
            decomposition,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Number of `x mod p^r` with `x² ≡ k`, for `p ∤ k` and `r ≥ 1`.
fn count_coprime(k: u64, p: u64, r: u32) -> u64 {
    if p == 2 {
        match r {
            1 => 1,
            2 => {
                if k % 4 == 1 {
                    2
                } else {
                    0
                }
            }
            _ => {
                if k % 8 == 1 {
                    4
                } else {
                    0
                }
            }
        }
    } else {
        let symbol = legendre(k as i64, p).expect("odd prime checked by the query");
        (1 + symbol as i64) as u64
    }
}

/// Closed-form `#{x mod p^j : x² ≡ t}`.
///
/// `t ≡ 0` counts `p^⌊j/2⌋`. Otherwise `t = k·p^i` with `p ∤ k`: odd `i` has no roots,
/// even `i` lifts to `p^(i/2)` times the count of `x² ≡ k mod p^(j-i)`.
pub fn count_sqrt_closed(q: &SqrtCountQuery) -> u64 {
    let p = q.prime;
    match q.decomposition {
        None => p.pow(q.exponent / 2),
        Some((i, _)) if i % 2 == 1 => 0,
        Some((i, k)) => p.pow(i / 2) * count_coprime(k, p, q.exponent - i),
    }
}

fn check_odd(n: u64) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::EvenArgument(n as i64));
    }
    Ok(())
}

/// `#{(s, t) : 0 ≤ s < b, 0 ≤ t < a, as + bt > ab}` in closed form, `(a-1)(b-1)/2`.
pub fn sylvester_count(a: u64, b: u64) -> Result<u64> {
    check_sylvester_args(a, b)?;
    Ok((a - 1) * (b - 1) / 2)
}

pub(crate) fn check_sylvester_args(a: u64, b: u64) -> Result<()> {
    check_odd(a)?;
    check_odd(b)?;
    if a.gcd(&b) != 1 {
        return Err(Error::NotCoprime(a as i128, b as i128));
    }
    Ok(())
}

/// `(p, k)` with `n = p^k`, `k ≥ 1`, or `None`.
pub fn prime_power(n: u64) -> Option<PrimePower> {
    if n < 2 {
        return None;
    }
    factorize_within(n, u64::MAX).ok()?.as_prime_power()
}
