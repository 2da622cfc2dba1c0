//! Ranks, degrees and slopes of the syzygy bundle `V_d` on `P^n` and of its
//! graded homogeneous blocks `S^{d-i}(V_1) ⊗ O(i)`.
//!
//! "Degree" is the integer `m` with `det = O(m)`; slopes are exact rationals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{dim_sym, h0, padic_digits, DigitVector, Prime};
use crate::error::{param, Result};
use crate::rational::Rat;

/// `d = d' * p^valuation` with `p` not dividing `d'`, plus the digits of `d'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicExpansion {
    valuation: u32,
    core: DigitVector,
}

impl PadicExpansion {
    pub fn prime(&self) -> Prime {
        self.core.base()
    }

    pub fn valuation(&self) -> u32 {
        self.valuation
    }

    /// Digits `a_0..a_m` of the core `d'`.
    pub fn core_digits(&self) -> &[u64] {
        self.core.digits()
    }

    pub fn core(&self) -> &DigitVector {
        &self.core
    }

    /// Index `m` of the top core digit.
    pub fn top(&self) -> usize {
        self.core.len() - 1
    }

    /// Core digit `a_j` (zero beyond the top).
    pub fn digit(&self, j: usize) -> u64 {
        self.core.digit(j)
    }

    pub fn core_value(&self) -> u64 {
        self.core_prefix(self.top())
    }

    /// `a_0 + a_1 p + ... + a_k p^k` of the core.
    pub fn core_prefix(&self, k: usize) -> u64 {
        let p = self.prime().get();
        self.core.digits()[..=k.min(self.top())]
            .iter()
            .rev()
            .fold(0u64, |acc, &a| acc * p + a)
    }

    /// `p^valuation`.
    pub fn scale(&self) -> u64 {
        self.prime().get().pow(self.valuation)
    }

    pub fn value(&self) -> u64 {
        self.core_value() * self.scale()
    }

    pub fn nonzero_digit_count(&self) -> usize {
        self.core.digits().iter().filter(|&&a| a != 0).count()
    }
}

/// Strips the largest power of `p` dividing `d` and expands the rest.
pub fn expansion(d: u64, p: Prime) -> Result<PadicExpansion> {
    if d == 0 {
        return Err(param("d must be positive"));
    }
    let base = p.get();
    let mut core = d;
    let mut valuation = 0;
    while core.is_multiple_of(base) {
        core /= base;
        valuation += 1;
    }
    Ok(PadicExpansion {
        valuation,
        core: padic_digits(core, p),
    })
}

pub(crate) fn check_nd(n: u64, d: u64) -> Result<()> {
    if n < 2 {
        return Err(param(format!("n = {n} must be at least 2")));
    }
    if d == 0 {
        return Err(param("d must be positive"));
    }
    Ok(())
}

/// Numeric invariants of the syzygy bundle `V_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyBundle {
    pub n: u64,
    pub p: Prime,
    pub d: u64,
    pub rank: BigUint,
    pub degree: BigInt,
    pub slope: Rat,
}

impl SyzygyBundle {
    pub fn new(n: u64, p: Prime, d: u64) -> Result<SyzygyBundle> {
        Ok(SyzygyBundle {
            n,
            p,
            d,
            rank: syzygy_rank(n, d)?,
            degree: -BigInt::from(d),
            slope: syzygy_slope(n, d)?,
        })
    }
}

/// `h^0(O(d)) - 1`.
pub fn syzygy_rank(n: u64, d: u64) -> Result<BigUint> {
    check_nd(n, d)?;
    Ok(h0(n, d) - BigUint::one())
}

/// `-d / rank(V_d)`.
pub fn syzygy_slope(n: u64, d: u64) -> Result<Rat> {
    let rank = syzygy_rank(n, d)?;
    Ok(Rat::ratio(-BigInt::from(d), BigInt::from(rank)))
}

/// `mu(S^e(V_1) ⊗ O(i)) = i - e/n`.
pub fn block_slope(n: u64, e: u64, i: u64) -> Result<Rat> {
    if n == 0 {
        return Err(param("n must be positive"));
    }
    Ok(Rat::from(i as i64) - Rat::ratio(e, n))
}

/// Frobenius pullback `F^{t*}` multiplies slopes by `p^t`.
pub fn frobenius_slope_scale(s: &Rat, t: u32, p: Prime) -> Rat {
    s * &Rat::integer(BigInt::from(p.get()).pow(t))
}

/// One summand `S^{d-i}(V_1) ⊗ z^i` of `V_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBlock {
    pub twist: u64,
    pub inner_degree: u64,
    pub rank: BigUint,
    pub slope: Rat,
    pub degree: BigInt,
}

impl GradedBlock {
    pub fn new(n: u64, d: u64, twist: u64) -> Result<GradedBlock> {
        check_nd(n, d)?;
        if twist >= d {
            return Err(param(format!("twist {twist} outside [0, {}]", d - 1)));
        }
        let inner_degree = d - twist;
        let rank = dim_sym(n, inner_degree);
        let slope = block_slope(n, inner_degree, twist)?;
        // n always divides e * |S^e(V_1)|
        let degree = (&slope * &Rat::from(rank.clone()))
            .to_integer()
            .expect("block degree is integral");
        Ok(GradedBlock {
            twist,
            inner_degree,
            rank,
            slope,
            degree,
        })
    }
}

/// The blocks of `V_d` for twists `0..d`.
pub fn degree_decomposition(n: u64, d: u64) -> Result<Vec<GradedBlock>> {
    check_nd(n, d)?;
    (0..d).map(|i| GradedBlock::new(n, d, i)).collect()
}

/// `(a+1) |S^{a+1}| = n (|S^a| + ... + |S^0|)`.
pub fn sym_identity_check(n: u64, a: u64) -> bool {
    let lhs = dim_sym(n, a + 1) * (a + 1);
    let rhs: BigUint = (0..=a).map(|k| dim_sym(n, k)).sum::<BigUint>() * n;
    lhs == rhs
}

/// `-deg` of the sum of the blocks with twist `<= top_twist`.
pub(crate) fn truncation_neg_degree(blocks: &[GradedBlock], top_twist: u64) -> BigInt {
    -blocks[..=top_twist as usize]
        .iter()
        .fold(BigInt::zero(), |acc, b| acc + &b.degree)
}
