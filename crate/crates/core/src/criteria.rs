//! Case classification and inequality certificates for the semistability of
//! `V_d`, the `mu_max` sandwich, the restriction-degree threshold, and the
//! curve-case slope arithmetic.
//!
//! Every obligation is an exact rational comparison. A certificate's verdict
//! is `Stable` only when a case's digit hypotheses hold *and* every numeric
//! obligation attached to that case holds.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binom, ceil_half, dim_sym, h0, padic_digits, Prime};
use crate::bundle::{
    check_nd, degree_decomposition, expansion, syzygy_rank, syzygy_slope, truncation_neg_degree,
    PadicExpansion,
};
use crate::error::{param, Error, Result};
use crate::rational::Rat;

/// Hypothesis families under which `V_d` is stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `n = 2`, any `d`.
    P2,
    /// At most two nonzero `p`-adic digits.
    TwoDigit,
    /// `n >= d'/p`.
    LowDegree,
    /// `p <= n` and `a_2, .., a_m >= 1`.
    SmallP,
    /// `p >= n` and `a_2, .., a_m >= p - n + 1`.
    LargeP,
    /// `n >= m + 1`, `h^0(O(a_m)) >= 1 + a_m m n`, monotone digits.
    RemarkCase,
}

impl Case {
    /// Precedence used by [`classify`]; the first match wins.
    pub const ORDER: [Case; 6] = [
        Case::P2,
        Case::TwoDigit,
        Case::LowDegree,
        Case::SmallP,
        Case::LargeP,
        Case::RemarkCase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::P2 => "P2",
            Case::TwoDigit => "TwoDigit",
            Case::LowDegree => "LowDegree",
            Case::SmallP => "SmallP",
            Case::LargeP => "LargeP",
            Case::RemarkCase => "RemarkCase",
        }
    }

    /// Whether this case's hypotheses hold for the core digits of `exp`.
    pub fn applies(self, n: u64, exp: &PadicExpansion) -> bool {
        let p = exp.prime().get();
        let a = exp.core_digits();
        let m = exp.top();
        match self {
            Case::P2 => n == 2,
            Case::TwoDigit => exp.nonzero_digit_count() <= 2,
            Case::LowDegree => u128::from(n) * u128::from(p) >= u128::from(exp.core_value()),
            Case::SmallP => p <= n && a.iter().skip(2).all(|&x| x >= 1),
            Case::LargeP => p >= n && a.iter().skip(2).all(|&x| x + n > p),
            Case::RemarkCase => {
                m >= 2
                    && n > m as u64
                    && h0(n, a[m]) >= BigUint::from(1 + a[m] * m as u64 * n)
                    && remark_digits_monotone(a)
            }
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `a_0 <= .. <= a_{m-2} < a_{m-1}` and `a_{m-2} <= a_m`, for `m >= 2`.
fn remark_digits_monotone(a: &[u64]) -> bool {
    let m = a.len() - 1;
    a[..m - 1].windows(2).all(|w| w[0] <= w[1]) && a[m - 2] < a[m - 1] && a[m - 2] <= a[m]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityVerdict {
    Stable(Case),
    Unknown,
}

impl StabilityVerdict {
    pub fn is_stable(self) -> bool {
        matches!(self, StabilityVerdict::Stable(_))
    }

    pub fn case(self) -> Option<Case> {
        match self {
            StabilityVerdict::Stable(c) => Some(c),
            StabilityVerdict::Unknown => None,
        }
    }

    pub fn label(self) -> Verdict {
        if self.is_stable() {
            Verdict::Stable
        } else {
            Verdict::Unknown
        }
    }
}

/// Serialized verdict label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Unknown => "unknown",
        })
    }
}

fn check_np(n: u64, d: u64) -> Result<()> {
    check_nd(n, d)
}

/// The first case (in [`Case::ORDER`]) whose hypotheses hold for the core of `d`.
pub fn matched_case(n: u64, p: Prime, d: u64) -> Result<Option<Case>> {
    check_np(n, d)?;
    let exp = expansion(d, p)?;
    Ok(Case::ORDER.into_iter().find(|c| c.applies(n, &exp)))
}

/// Classifies `(n, p, d)` by hypotheses alone.
pub fn classify(n: u64, p: Prime, d: u64) -> Result<StabilityVerdict> {
    Ok(match matched_case(n, p, d)? {
        Some(c) => StabilityVerdict::Stable(c),
        None => StabilityVerdict::Unknown,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn eval(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// The index an obligation is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Context {
    A(u64),
    K(u64),
    TopTwist(u64),
    Position(u64),
}

/// One exactly checked inequality `lhs rel rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obligation {
    pub name: String,
    pub lhs: Rat,
    pub rel: Relation,
    pub rhs: Rat,
    pub holds: bool,
    pub context: Option<Context>,
}

impl Obligation {
    pub fn check(
        name: impl Into<String>,
        lhs: Rat,
        rel: Relation,
        rhs: Rat,
        context: Option<Context>,
    ) -> Obligation {
        let holds = rel.eval(&lhs, &rhs);
        Obligation {
            name: name.into(),
            lhs,
            rel,
            rhs,
            holds,
            context,
        }
    }

    /// Distance from the boundary, positive when the obligation holds.
    pub fn slack(&self) -> Rat {
        match self.rel {
            Relation::Ge | Relation::Gt => &self.lhs - &self.rhs,
            Relation::Le | Relation::Lt => &self.rhs - &self.lhs,
        }
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.lhs,
            self.rel.symbol(),
            self.rhs,
            if self.holds { "ok" } else { "FAILED" }
        )
    }
}

fn rat(x: impl Into<BigInt>) -> Rat {
    Rat::integer(x)
}

fn urat(x: BigUint) -> Rat {
    Rat::from(x)
}

/// The slope-ratio inequalities: `A_a` for every `a` in `[1, d]`, and `B`
/// when `d` has more than one nonzero digit after stripping `p^valuation`.
pub fn certify_r3_obligations(n: u64, p: Prime, d: u64) -> Result<Vec<Obligation>> {
    check_np(n, d)?;
    let mut out = Vec::with_capacity(d as usize + 1);
    for a in 1..=d {
        let lhs = Rat::ratio(
            BigInt::from(dim_sym(n, a) * a),
            BigInt::from(h0(n, a) - BigUint::one()),
        );
        out.push(Obligation::check(
            "r3.A",
            lhs,
            Relation::Lt,
            rat(n),
            Some(Context::A(a)),
        ));
    }
    let exp = expansion(d, p)?;
    if exp.top() >= 1 {
        let full = padic_digits(d, p);
        let top = full.len() - 1;
        let rest = d - full.digit(top) * p.get().pow(top as u32);
        out.push(Obligation::check(
            "r3.B",
            urat(dim_sym(n, rest) * n),
            Relation::Lt,
            urat(dim_sym(n, d)),
            None,
        ));
    }
    Ok(out)
}

/// `|S^a(V_1)| / rank(V_a) >= n / (n + a)` for `a` in `[1, a_max]`.
pub fn certify_cm1_ratio(n: u64, a_max: u64) -> Result<Vec<Obligation>> {
    if n < 2 {
        return Err(param(format!("n = {n} must be at least 2")));
    }
    (1..=a_max)
        .map(|a| {
            let rank = syzygy_rank(n, a)?;
            Ok(Obligation::check(
                "cm1.ratio",
                Rat::ratio(BigInt::from(dim_sym(n, a)), BigInt::from(rank)),
                Relation::Ge,
                Rat::ratio(n, n + a),
                Some(Context::A(a)),
            ))
        })
        .collect()
}

/// The subbundle `⊕_{j <= top_twist} S^{d-j}(V_1) ⊗ z^j` for `d < p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub top_twist: u64,
    pub neg_degree: BigInt,
    pub rank: BigUint,
    pub slope: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub truncations: Vec<Truncation>,
    pub obligations: Vec<Obligation>,
    pub notes: Vec<String>,
}

/// For `d < p` the homogeneous subbundles are exactly the truncations; each
/// proper one has `-deg > d` and smaller slope, the full one has `-deg = d`.
pub fn certify_l8_truncations(n: u64, p: Prime, d: u64) -> Result<TruncationReport> {
    check_np(n, d)?;
    if d >= p.get() {
        return Err(Error::CaseNotApplicable(format!(
            "truncation analysis needs d < p (d = {d}, p = {p})"
        )));
    }
    let blocks = degree_decomposition(n, d)?;
    let bundle_slope = syzygy_slope(n, d)?;
    let d_rat = rat(d);
    let mut truncations = Vec::new();
    let mut obligations = Vec::new();
    let mut notes = Vec::new();
    let mut rank = BigUint::zero();
    for top in 0..d {
        rank += &blocks[top as usize].rank;
        let neg_degree = truncation_neg_degree(&blocks, top);
        let slope = Rat::ratio(-neg_degree.clone(), BigInt::from(rank.clone()));
        let ctx = Some(Context::TopTwist(top));
        let nd = rat(neg_degree.clone());
        if top + 1 < d {
            obligations.push(Obligation::check(
                "l8.neg_degree",
                nd,
                Relation::Gt,
                d_rat.clone(),
                ctx,
            ));
            obligations.push(Obligation::check(
                "l8.slope",
                slope.clone(),
                Relation::Lt,
                bundle_slope.clone(),
                ctx,
            ));
        } else {
            obligations.push(Obligation::check(
                "l8.full_neg_degree",
                nd.clone(),
                Relation::Ge,
                d_rat.clone(),
                ctx,
            ));
            obligations.push(Obligation::check(
                "l8.full_neg_degree",
                nd,
                Relation::Le,
                d_rat.clone(),
                ctx,
            ));
        }
        let closed_form = dim_sym(n, d - top - 1) * (top + 1);
        if BigInt::from(closed_form.clone()) != neg_degree {
            notes.push(format!(
                "top_twist {top}: direct block sum gives -deg {neg_degree}, \
                 closed form (i+1)|S^(d-i-1)| gives {closed_form}; the direct sum is used"
            ));
        }
        truncations.push(Truncation {
            top_twist: top,
            neg_degree,
            rank: rank.clone(),
            slope,
        });
    }
    Ok(TruncationReport {
        truncations,
        obligations,
        notes,
    })
}

fn k_in_range(exp: &PadicExpansion, k: usize) -> Result<()> {
    let m = exp.top();
    if k < 1 || k + 1 > m {
        return Err(param(format!("k = {k} outside [1, m-1] with m = {m}")));
    }
    Ok(())
}

fn core_bound_l3(n: u64, exp: &PadicExpansion, k: usize) -> BigUint {
    let m = exp.top();
    let tail: BigUint = (k + 2..=m)
        .map(|t| h0(n, exp.digit(t)) - BigUint::one())
        .product();
    BigUint::from(exp.core_prefix(k)) * h0(n, exp.digit(k + 1)) * tail
}

fn core_bound_r7(n: u64, exp: &PadicExpansion, k: usize) -> BigUint {
    let tail: BigUint = (k + 1..=exp.top())
        .map(|t| dim_sym(n, exp.digit(t)))
        .product();
    BigUint::from(exp.core_prefix(k)) * tail
}

fn r6_valid(n: u64, exp: &PadicExpansion, k: usize) -> bool {
    exp.prime().get() <= n && (k + 1..exp.top()).all(|t| exp.digit(t) == 1)
}

fn core_bound_r6(n: u64, exp: &PadicExpansion, k: usize) -> BigUint {
    let tail: BigUint = (k + 1..=exp.top()).map(|t| h0(n, exp.digit(t))).product();
    BigUint::from(exp.core_prefix(k)) * tail
}

fn scaled(exp: &PadicExpansion, core: BigUint) -> BigUint {
    core * exp.scale()
}

/// `(a_0 + .. + a_k p^k) h(a_{k+1}) (h(a_{k+2}) - 1) .. (h(a_m) - 1)`, on the
/// core digits, times `p^valuation`.
pub fn bound_l3(n: u64, p: Prime, d: u64, k: usize) -> Result<BigUint> {
    check_np(n, d)?;
    let exp = expansion(d, p)?;
    k_in_range(&exp, k)?;
    Ok(scaled(&exp, core_bound_l3(n, &exp, k)))
}

/// `(a_0 + .. + a_k p^k) |S^{a_{k+1}}| .. |S^{a_m}|`, times `p^valuation`.
pub fn bound_r7(n: u64, p: Prime, d: u64, k: usize) -> Result<BigUint> {
    check_np(n, d)?;
    let exp = expansion(d, p)?;
    k_in_range(&exp, k)?;
    Ok(scaled(&exp, core_bound_r7(n, &exp, k)))
}

/// `(a_0 + .. + a_k p^k) h(a_{k+1}) .. h(a_m)`, valid when `p <= n` and
/// `a_{k+1} = .. = a_{m-1} = 1`.
pub fn bound_r6(n: u64, p: Prime, d: u64, k: usize) -> Result<BigUint> {
    check_np(n, d)?;
    let exp = expansion(d, p)?;
    k_in_range(&exp, k)?;
    if !r6_valid(n, &exp, k) {
        return Err(Error::CaseNotApplicable(format!(
            "full-h0 bound needs p <= n and unit middle digits (n = {n}, p = {p}, digits {:?})",
            exp.core_digits()
        )));
    }
    Ok(scaled(&exp, core_bound_r6(n, &exp, k)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertParams {
    pub n: u64,
    pub p: Prime,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub digits: Vec<u64>,
    pub valuation: u32,
}

impl From<&PadicExpansion> for ExpansionRecord {
    fn from(e: &PadicExpansion) -> Self {
        ExpansionRecord {
            digits: e.core_digits().to_vec(),
            valuation: e.valuation(),
        }
    }
}

/// The obligations backing one `(n, p, d)` and the resulting verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub params: CertParams,
    pub expansion: ExpansionRecord,
    /// The case whose hypotheses matched, if any.
    pub case: Option<Case>,
    pub verdict: Verdict,
    pub obligations: Vec<Obligation>,
    pub notes: Vec<String>,
    pub all_hold: bool,
}

impl Certificate {
    pub fn stability(&self) -> StabilityVerdict {
        match (self.verdict, self.case) {
            (Verdict::Stable, Some(c)) => StabilityVerdict::Stable(c),
            _ => StabilityVerdict::Unknown,
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Obligation> {
        self.obligations.iter().filter(|o| !o.holds)
    }

    /// The holding obligation closest to its boundary.
    pub fn tightest(&self) -> Option<&Obligation> {
        self.obligations
            .iter()
            .min_by(|a, b| a.slack().cmp(&b.slack()))
    }
}

fn k_obligations(
    name: &str,
    range_end: usize,
    core_d: u64,
    rel: Relation,
    mut bound: impl FnMut(usize) -> BigUint,
) -> Vec<Obligation> {
    (1..range_end)
        .map(|k| {
            Obligation::check(
                name,
                urat(bound(k)),
                rel,
                rat(core_d),
                Some(Context::K(k as u64)),
            )
        })
        .collect()
}

/// Classifies `(n, p, d)` and assembles the per-case obligations on the core
/// `d' = d / p^valuation`.
pub fn certify_case(n: u64, p: Prime, d: u64) -> Result<Certificate> {
    check_np(n, d)?;
    let exp = expansion(d, p)?;
    let case = Case::ORDER.into_iter().find(|c| c.applies(n, &exp));
    let core_d = exp.core_value();
    let m = exp.top();
    let mut obligations = Vec::new();
    let mut notes = Vec::new();
    if exp.valuation() > 0 {
        notes.push(format!(
            "d = {core_d} * {p}^{}: obligations are checked on the core {core_d}",
            exp.valuation()
        ));
    }

    match case {
        Some(Case::P2) => {
            notes.push("n = 2: stable for every d; no numeric obligations".into());
        }
        Some(Case::TwoDigit) => {
            obligations.extend(certify_r3_obligations(n, p, d)?);
        }
        Some(Case::SmallP) => {
            obligations.extend(certify_r3_obligations(n, p, d)?);
            obligations.extend(k_obligations("l4.k_bound", m, core_d, Relation::Ge, |k| {
                let l3 = core_bound_l3(n, &exp, k);
                if r6_valid(n, &exp, k) {
                    l3.max(core_bound_r6(n, &exp, k))
                } else {
                    l3
                }
            }));
        }
        Some(Case::LargeP) => {
            obligations.extend(certify_r3_obligations(n, p, d)?);
            let top = exp.digit(m);
            obligations.push(Obligation::check(
                "l5.h0_top",
                urat(h0(n, top)),
                Relation::Ge,
                rat((p.get() + 1) * top),
                Some(Context::Position(m as u64)),
            ));
            obligations.extend(k_obligations("l5.k_bound", m, core_d, Relation::Ge, |k| {
                core_bound_l3(n, &exp, k)
            }));
        }
        Some(Case::LowDegree) => {
            obligations.extend(certify_r3_obligations(n, p, d)?);
            obligations.extend(k_obligations("c2.k_bound", m, core_d, Relation::Gt, |k| {
                core_bound_r7(n, &exp, k)
            }));
        }
        Some(Case::RemarkCase) => {
            let a = exp.core_digits();
            obligations.push(Obligation::check(
                "remark.n_vs_m",
                rat(n),
                Relation::Ge,
                rat(m as u64 + 1),
                None,
            ));
            obligations.push(Obligation::check(
                "remark.h0_top",
                urat(h0(n, a[m])),
                Relation::Ge,
                rat(1 + a[m] * m as u64 * n),
                Some(Context::Position(m as u64)),
            ));
            for t in 0..m - 2 {
                obligations.push(Obligation::check(
                    "remark.digits_nondecreasing",
                    rat(a[t]),
                    Relation::Le,
                    rat(a[t + 1]),
                    Some(Context::Position(t as u64)),
                ));
            }
            obligations.push(Obligation::check(
                "remark.digits_increasing",
                rat(a[m - 2]),
                Relation::Lt,
                rat(a[m - 1]),
                Some(Context::Position(m as u64 - 2)),
            ));
            obligations.push(Obligation::check(
                "remark.digits_top",
                rat(a[m - 2]),
                Relation::Le,
                rat(a[m]),
                Some(Context::Position(m as u64 - 2)),
            ));
        }
        None => {
            notes.push("no case hypotheses hold for these digits".into());
        }
    }

    let all_hold = obligations.iter().all(|o| o.holds);
    let verdict = if case.is_some() && all_hold {
        Verdict::Stable
    } else {
        Verdict::Unknown
    };
    if let (Some(c), false) = (case, all_hold) {
        let failed = obligations.iter().filter(|o| !o.holds).count();
        notes.push(format!(
            "case {c} matched but {failed} obligation(s) failed"
        ));
    }
    Ok(Certificate {
        params: CertParams { n, p, d },
        expansion: ExpansionRecord::from(&exp),
        case,
        verdict,
        obligations,
        notes,
        all_hold,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuMaxBounds {
    pub lower: Rat,
    pub upper: Rat,
}

/// `d / (h^0(O(d)) - 1) <= mu_max(V_d^*) <= d / |S^{ceil(d/2)}(V_1)|`.
pub fn mu_max_bounds(n: u64, d: u64) -> Result<MuMaxBounds> {
    check_np(n, d)?;
    Ok(MuMaxBounds {
        lower: Rat::ratio(d, BigInt::from(syzygy_rank(n, d)?)),
        upper: Rat::ratio(d, BigInt::from(dim_sym(n, ceil_half(d)))),
    })
}

/// The two dimension inequalities behind the upper bound, on the full `d`
/// with top digit `a` at position `T`:
/// `a p^T >= ceil(d/2)` and `sum_{i < a} |S^{(a-i) p^T}| >= |S^{ceil(d/2)}|`.
pub fn mu_max_proof_check(n: u64, p: Prime, d: u64) -> Result<Vec<Obligation>> {
    check_np(n, d)?;
    let digits = padic_digits(d, p);
    let top = digits.len() - 1;
    let a = digits.digit(top);
    let place = p.get().pow(top as u32);
    let half = ceil_half(d);
    let sum: BigUint = (0..a).map(|i| dim_sym(n, (a - i) * place)).sum();
    Ok(vec![
        Obligation::check(
            "mu.top_term",
            rat(a * place),
            Relation::Ge,
            rat(half),
            Some(Context::Position(top as u64)),
        ),
        Obligation::check(
            "mu.dim_sum",
            urat(sum),
            Relation::Ge,
            urat(dim_sym(n, half)),
            Some(Context::Position(top as u64)),
        ),
    ])
}

pub const DEFAULT_SCAN_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdQuery {
    pub n: u64,
    pub r: u64,
    pub hn: u64,
    /// `Δ(E) H^{n-2}`.
    pub disc: Rat,
    pub horizon: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub d: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub first_pass: u64,
    pub stable_from: u64,
    pub evidence: Vec<Evidence>,
}

impl ThresholdQuery {
    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.r < 2 || self.hn < 1 || self.horizon < 2 {
            return Err(param(format!(
                "threshold needs n >= 2, r >= 2, hn >= 1, horizon >= 2 (got n={}, r={}, hn={}, horizon={})",
                self.n, self.r, self.hn, self.horizon
            )));
        }
        Ok(())
    }

    /// `(r-1)/r Δ + 1/(r(r-1) H^n)`; `d` must exceed it.
    pub fn degree_floor(&self) -> Rat {
        Rat::ratio(self.r - 1, self.r) * &self.disc + Rat::ratio(1, self.r * (self.r - 1) * self.hn)
    }

    /// `H^n max{(r^2-1)/4, 1} + 1`; the growth ratio must exceed it.
    pub fn ratio_floor(&self) -> Rat {
        let spread = Rat::ratio(self.r * self.r - 1, 4).max(Rat::from(1));
        Rat::from(self.hn as i64) * spread + Rat::from(1)
    }

    /// `(binom(d+2, 2) - 1)/d` on surfaces, `|S^{ceil(d/2)}(V_1)|/d` otherwise.
    pub fn growth_ratio(&self, d: u64) -> Rat {
        let num = if self.n == 2 {
            binom(d + 2, 2) - BigUint::one()
        } else {
            dim_sym(self.n, ceil_half(d))
        };
        Rat::ratio(BigInt::from(num), d)
    }

    pub fn passes(&self, d: u64) -> bool {
        Rat::from(d as i64) > self.degree_floor() && self.growth_ratio(d) > self.ratio_floor()
    }
}

/// Scans `d = 1, 2, ..` for the least degree from which both restriction
/// conditions hold for good.
///
/// `stable_from` is the least `d` such that every degree in
/// `[d, d + horizon]` passes and the growth ratio is nondecreasing along both
/// parity classes at the window end. Per parity class the ratio's successive
/// quotient is `>= 1` exactly when a linear condition in `ceil(d/2)` holds, so
/// once it holds it keeps holding and every later degree passes too.
pub fn restriction_threshold(q: &ThresholdQuery) -> Result<ThresholdResult> {
    restriction_threshold_with_limit(q, DEFAULT_SCAN_LIMIT)
}

pub fn restriction_threshold_with_limit(q: &ThresholdQuery, limit: u64) -> Result<ThresholdResult> {
    q.validate()?;
    let floor = q.degree_floor();
    let ratio_floor = q.ratio_floor();
    let mut first_pass = None;
    let mut run_start: Option<u64> = None;
    let mut passes = Vec::new();
    for end in 1..=limit {
        let pass = Rat::from(end as i64) > floor && q.growth_ratio(end) > ratio_floor;
        passes.push(pass);
        if !pass {
            run_start = None;
            continue;
        }
        first_pass.get_or_insert(end);
        let start = *run_start.get_or_insert(end);
        if end - start < q.horizon {
            continue;
        }
        let growing = q.growth_ratio(end - 1) <= q.growth_ratio(end + 1)
            && q.growth_ratio(end) <= q.growth_ratio(end + 2);
        if growing {
            let stable_from = end - q.horizon;
            let evidence = passes
                .iter()
                .enumerate()
                .map(|(i, &pass)| Evidence {
                    d: i as u64 + 1,
                    pass,
                })
                .collect();
            return Ok(ThresholdResult {
                first_pass: first_pass.expect("set above"),
                stable_from,
                evidence,
            });
        }
    }
    Err(Error::ScanLimit { limit })
}

/// Rank and dual slope of the syzygy bundle of a line bundle on a curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveStats {
    pub genus: u64,
    pub deg_l: u64,
    pub rank: u64,
    pub deg_dual: u64,
    pub slope_dual: Rat,
}

pub fn curve_syzygy_stats(genus: u64, deg_l: u64) -> Result<CurveStats> {
    if genus < 2 {
        return Err(param(format!("genus {genus} must be at least 2")));
    }
    if deg_l <= 2 * genus {
        return Err(Error::Hypothesis(format!(
            "deg L = {deg_l} must exceed 2g = {}",
            2 * genus
        )));
    }
    let rank = deg_l - genus;
    let slope_dual = Rat::ratio(deg_l, rank);
    if slope_dual >= Rat::from(2) {
        return Err(Error::Hypothesis(format!(
            "dual slope {slope_dual} is not below 2"
        )));
    }
    Ok(CurveStats {
        genus,
        deg_l,
        rank,
        deg_dual: deg_l,
        slope_dual,
    })
}
