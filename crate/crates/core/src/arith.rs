//! Integer combinatorics shared by every other module: base-`p` digits,
//! binomials (exact and modulo `p`), and symmetric-power dimensions.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// A validated prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    /// Validates `p` by trial division.
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(param(format!("p = {p} is not a prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = crate::Error;
    fn try_from(p: u64) -> Result<Prime> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut q = 3u64;
    while q.saturating_mul(q) <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

/// Base-`p` digits, little-endian, with no trailing zero. Empty encodes 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    base: Prime,
    digits: Vec<u64>,
}

impl DigitVector {
    /// Validates raw digits; each must lie in `[0, p-1]` and the last must be nonzero.
    pub fn from_digits(base: Prime, digits: Vec<u64>) -> Result<DigitVector> {
        if let Some(&d) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(param(format!("digit {d} out of range for base {base}")));
        }
        if digits.last() == Some(&0) {
            return Err(param("digit vector has a trailing zero"));
        }
        Ok(DigitVector { base, digits })
    }

    pub fn base(&self) -> Prime {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at position `j`, zero beyond the top.
    pub fn digit(&self, j: usize) -> u64 {
        self.digits.get(j).copied().unwrap_or(0)
    }

    /// Exact value `sum digits[j] * p^j`.
    pub fn value(&self) -> BigUint {
        let p = BigUint::from(self.base.get());
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &p + BigUint::from(d))
    }
}

/// Little-endian base-`p` expansion of `x`.
pub fn padic_digits(x: u64, p: Prime) -> DigitVector {
    let base = p.get();
    let mut digits = Vec::new();
    let mut rest = x;
    while rest > 0 {
        digits.push(rest % base);
        rest /= base;
    }
    DigitVector { base: p, digits }
}

/// Inverse of [`padic_digits`].
pub fn digits_value(dv: &DigitVector) -> BigUint {
    dv.value()
}

/// Exact binomial coefficient; zero when `b < 0` or `b > a`.
pub fn binom(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for t in 0..b {
        acc *= a - t;
        acc /= t + 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `binom(a, b) mod p` for `0 <= a < p`, via Fermat inversion of `b!`.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let m = p as u128;
    let b = b.min(a - b);
    let (mut num, mut den) = (1u128, 1u128);
    for t in 0..b as u128 {
        num = num * ((a as u128 - t) % m) % m;
        den = den * ((t + 1) % m) % m;
    }
    (num * pow_mod(den, m - 2, m) % m) as u64
}

/// `binom(i, k) mod p` as the digitwise product of small binomials.
pub fn binom_mod_p_lucas(i: u64, k: u64, p: Prime) -> u64 {
    let base = p.get();
    let (mut i, mut k) = (i, k);
    let mut acc = 1u128;
    while k > 0 || i > 0 {
        let r = small_binom_mod(i % base, k % base, base) as u128;
        if r == 0 {
            return 0;
        }
        acc = acc * r % base as u128;
        i /= base;
        k /= base;
    }
    acc as u64
}

/// Whether `p` does not divide `binom(i, k)`, i.e. every digit of `k` is at
/// most the matching digit of `i`.
pub fn is_binom_unit_mod_p(i: u64, k: u64, p: Prime) -> Result<bool> {
    if k > i {
        return Err(param(format!("k = {k} exceeds i = {i}")));
    }
    Ok(digitwise_leq(k, i, p))
}

pub(crate) fn digitwise_leq(j: u64, i: u64, p: Prime) -> bool {
    let base = p.get();
    let (mut j, mut i) = (j, i);
    while j > 0 {
        if j % base > i % base {
            return false;
        }
        j /= base;
        i /= base;
    }
    true
}

/// `|S^a(V_1)|` for `dim V_1 = n`: the number of degree-`a` monomials in `n` variables.
pub fn dim_sym(n: u64, a: u64) -> BigUint {
    if n == 0 {
        return if a == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    binom(a + n - 1, (n - 1) as i64)
}

/// `h^0(P^n, O(a))`: degree-`a` monomials in `n + 1` variables.
pub fn h0(n: u64, a: u64) -> BigUint {
    binom(a + n, n as i64)
}

pub fn ceil_half(d: u64) -> u64 {
    d.div_ceil(2)
}
