//! Digit-dominance poset on the twists `{0, .., d-1}` and the admissible
//! supports of homogeneous subbundles of `V_d`.
//!
//! A homogeneous subbundle `W` is graded by twist; its support
//! `{i : W(i) != 0}` is downward closed under digit dominance, and each
//! nonzero `W(i)` contains the minimal `SL(n)`-submodule of `S^{d-i}(V_1)`.
//! [`crude_margin`] minimizes the slope gap over those dimension boxes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::arith::{digitwise_leq, dim_sym, padic_digits, Prime};
use crate::bundle::{check_nd, syzygy_rank};
use crate::error::{param, Error, Result};
use crate::rational::Rat;

pub const DEFAULT_CAP: usize = 1_000_000;

/// `j ≼ i`: every base-`p` digit of `j` is at most the matching digit of `i`.
pub fn dominance_leq(j: u64, i: u64, p: Prime) -> bool {
    digitwise_leq(j, i, p)
}

/// Dimension of the smallest `SL(n)`-submodule of `S^e(V_1)`: the product of
/// `|S^{t_j}(V_1)|` over the base-`p` digits `t_j` of `e`.
pub fn minimal_block_dim(n: u64, p: Prime, e: u64) -> BigUint {
    padic_digits(e, p)
        .digits()
        .iter()
        .map(|&t| dim_sym(n, t))
        .product()
}

/// Whether `set` (a subset of `[0, d-1]`) is closed under `≼`.
pub fn is_downward_closed(set: &[u64], p: Prime, d: u64) -> bool {
    if set.iter().any(|&i| i >= d) {
        return false;
    }
    let mut member = vec![false; d as usize];
    for &i in set {
        member[i as usize] = true;
    }
    set.iter()
        .all(|&i| lower_covers(i, p).all(|j| member[j as usize]))
}

/// Elements covered by `i`: lower one nonzero digit by one.
fn lower_covers(i: u64, p: Prime) -> impl Iterator<Item = u64> {
    let base = p.get();
    let mut place = 1u64;
    let mut rest = i;
    std::iter::from_fn(move || {
        while rest > 0 {
            let digit = rest % base;
            let here = place;
            rest /= base;
            place = place.saturating_mul(base);
            if digit > 0 {
                return Some(i - here);
            }
        }
        None
    })
}

/// A downward-closed set of twists for the parameters `(n, p, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportSet {
    n: u64,
    p: Prime,
    d: u64,
    indices: Vec<u64>,
}

impl SupportSet {
    pub fn new(n: u64, p: Prime, d: u64, mut indices: Vec<u64>) -> Result<SupportSet> {
        check_nd(n, d)?;
        indices.sort_unstable();
        indices.dedup();
        if !is_downward_closed(&indices, p, d) {
            return Err(param(format!(
                "support {indices:?} is not downward closed for p = {p}, d = {d}"
            )));
        }
        Ok(SupportSet { n, p, d, indices })
    }

    /// The whole index range `[0, d-1]`.
    pub fn full(n: u64, p: Prime, d: u64) -> Result<SupportSet> {
        SupportSet::new(n, p, d, (0..d).collect())
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn params(&self) -> (u64, Prime, u64) {
        (self.n, self.p, self.d)
    }

    pub fn profile(&self) -> SupportProfile {
        let bounds = self
            .indices
            .iter()
            .map(|&i| {
                let e = self.d - i;
                BlockBounds {
                    twist: i,
                    lo: minimal_block_dim(self.n, self.p, e),
                    hi: dim_sym(self.n, e),
                }
            })
            .collect();
        SupportProfile { bounds }
    }
}

/// Per-twist bounds `lo <= dim W(i) <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBounds {
    pub twist: u64,
    pub lo: BigUint,
    pub hi: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportProfile {
    pub bounds: Vec<BlockBounds>,
}

/// Whether every block of `V_d` equals its own minimal submodule, in which
/// case the full support pins `W = V_d`.
fn full_support_is_whole_bundle(n: u64, p: Prime, d: u64) -> bool {
    (1..=d).all(|e| minimal_block_dim(n, p, e) == dim_sym(n, e))
}

/// All nonempty downward-closed supports of proper homogeneous subbundles,
/// ordered by size then lexicographically.
///
/// The full index range is included unless it forces `W = V_d` (every block
/// irreducible, i.e. `d < p`).
pub fn enumerate_supports(n: u64, p: Prime, d: u64, cap: usize) -> Result<Vec<SupportSet>> {
    check_nd(n, d)?;
    let size = usize::try_from(d).map_err(|_| param("d too large"))?;
    let skip_full = full_support_is_whole_bundle(n, p, d);
    let covers: Vec<Vec<usize>> = (0..d)
        .map(|i| lower_covers(i, p).map(|j| j as usize).collect())
        .collect();

    // Backtracking over the natural order, a linear extension of `≼`:
    // an index may join only if all its lower covers already have.
    let mut found: Vec<Vec<u64>> = Vec::new();
    let mut member = vec![false; size];
    let mut open: Vec<usize> = Vec::new();
    let mut pos = 0usize;
    loop {
        while pos < size {
            if covers[pos].iter().all(|&j| member[j]) {
                member[pos] = true;
                open.push(pos);
            }
            pos += 1;
        }
        let set: Vec<u64> = (0..size).filter(|&i| member[i]).map(|i| i as u64).collect();
        if !set.is_empty() && !(skip_full && set.len() == size) {
            if found.len() == cap {
                return Err(Error::EnumerationOverflow { cap });
            }
            found.push(set);
        }
        match open.pop() {
            None => break,
            Some(q) => {
                member[q..].iter_mut().for_each(|m| *m = false);
                pos = q + 1;
            }
        }
    }
    log::debug!("enumerated {} supports for n={n} p={p} d={d}", found.len());

    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found
        .into_iter()
        .map(|indices| SupportSet { n, p, d, indices })
        .collect())
}

/// Partition of a support into the classes `C_j`: twist `i` lands in `C_j`
/// for the largest digit position `j` where `i` and `d` differ.
pub fn classify_support(support: &SupportSet) -> BTreeMap<usize, Vec<u64>> {
    let (_, p, d) = support.params();
    let top = padic_digits(d, p);
    let mut classes: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for &i in support.indices() {
        let digits = padic_digits(i, p);
        let j = (0..top.len())
            .rev()
            .find(|&j| digits.digit(j) != top.digit(j))
            .expect("i < d differs from d somewhere");
        classes.entry(j).or_default().push(i);
    }
    classes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimChoice {
    Lo,
    Hi,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginResult {
    pub margin: Rat,
    pub choice: BTreeMap<u64, DimChoice>,
    pub conclusive: bool,
}

/// Gap coefficient `c_i = -mu(S^{d-i}(V_1) ⊗ O(i)) + mu(V_d)`.
pub fn margin_coefficient(n: u64, d: u64, i: u64) -> Result<Rat> {
    check_nd(n, d)?;
    let rank = syzygy_rank(n, d)?;
    Ok(Rat::ratio(d - i, n) - Rat::from(i as i64) - Rat::ratio(d, BigInt::from(rank)))
}

/// Minimum of `sum c_i w_i` over the vertices `w_i ∈ {lo_i, hi_i}`.
///
/// A positive margin certifies `mu(W) < mu(V_d)` for every homogeneous `W`
/// with this support. A nonpositive margin proves nothing.
pub fn crude_margin(support: &SupportSet) -> Result<MarginResult> {
    let (n, _, d) = support.params();
    let mut margin = Rat::zero();
    let mut choice = BTreeMap::new();
    for b in support.profile().bounds {
        let c = margin_coefficient(n, d, b.twist)?;
        let (w, pick) = if c.is_negative() {
            (b.hi, DimChoice::Hi)
        } else {
            (b.lo, DimChoice::Lo)
        };
        margin = margin + c * Rat::from(w);
        choice.insert(b.twist, pick);
    }
    let conclusive = margin.is_positive();
    Ok(MarginResult {
        margin,
        choice,
        conclusive,
    })
}
