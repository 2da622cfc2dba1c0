//! The `syzcert` command line: argument grammar, report types and emission.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 a certificate or
//! sweep row with a failed obligation or unknown verdict (the report is still
//! written), 4 enumeration overflow, scan limit or I/O failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Prime;
use crate::bundle::expansion;
use crate::criteria::{
    bound_l3, bound_r6, bound_r7, certify_case, curve_syzygy_stats, mu_max_bounds,
    mu_max_proof_check, restriction_threshold, Case, Certificate, CurveStats, ExpansionRecord,
    MuMaxBounds, Obligation, ThresholdQuery, ThresholdResult, Verdict,
};
use crate::lattice::{classify_support, crude_margin, enumerate_supports, DEFAULT_CAP};
use crate::{Error, Rat};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "syzcert",
    version,
    about = "Exact stability certificates for syzygy bundles on P^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report which case hypotheses hold for (n, p, d).
    Classify {
        #[command(flatten)]
        params: Npd,
        #[command(flatten)]
        output: Output,
    },
    /// Build the full obligation certificate for (n, p, d).
    Certify {
        #[command(flatten)]
        params: Npd,
        #[command(flatten)]
        output: Output,
    },
    /// mu_max bounds for the dual, plus the digit bounds when -p is given.
    Bounds {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'p', value_parser = parse_prime)]
        p: Option<Prime>,
        #[arg(short = 'd')]
        d: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Least degree from which the restriction conditions hold.
    Threshold {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'r')]
        r: u64,
        #[arg(long, default_value_t = 1)]
        hn: u64,
        #[arg(long, default_value = "0")]
        disc: Rat,
        #[arg(long, default_value_t = 10)]
        horizon: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Certify every d in [dmin, dmax]; CSV by default.
    Sweep {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'p', value_parser = parse_prime)]
        p: Prime,
        #[arg(long)]
        dmin: u64,
        #[arg(long)]
        dmax: u64,
        /// Worker threads (default: available cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Crude margins over every downward-closed twist support.
    Support {
        #[command(flatten)]
        params: Npd,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Rank and dual slope of the syzygy bundle of a line bundle on a curve.
    Curve {
        #[arg(short = 'g', long = "genus")]
        genus: u64,
        #[arg(long = "deg-l")]
        deg_l: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct Npd {
    #[arg(short = 'n')]
    n: u64,
    #[arg(short = 'p', value_parser = parse_prime)]
    p: Prime,
    #[arg(short = 'd')]
    d: u64,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Output {
    fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            default
        }
    }
}

fn parse_prime(s: &str) -> std::result::Result<Prime, String> {
    let v: u64 = s.parse().map_err(|e| format!("{e}"))?;
    Prime::new(v).map_err(|e| e.to_string())
}

/// A report envelope: `kind`, `tool_version`, then the payload's own fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report<T> {
    pub kind: String,
    pub tool_version: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: &str, body: T) -> Report<T> {
        Report {
            kind: kind.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpdParams {
    pub n: u64,
    pub p: Prime,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub params: NpdParams,
    pub expansion: ExpansionRecord,
    pub case: Option<Case>,
    pub verdict: Verdict,
}

pub fn classify_report(n: u64, p: Prime, d: u64) -> crate::Result<ClassifyReport> {
    let verdict = crate::criteria::classify(n, p, d)?;
    Ok(ClassifyReport {
        params: NpdParams { n, p, d },
        expansion: ExpansionRecord::from(&expansion(d, p)?),
        case: verdict.case(),
        verdict: verdict.label(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitBounds {
    pub k: u64,
    pub l3: String,
    pub r7: String,
    /// `None` where the full-h0 bound does not apply.
    pub r6: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsParams {
    pub n: u64,
    pub p: Option<Prime>,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub params: BoundsParams,
    pub mu_max: MuMaxBounds,
    pub proof_check: Vec<Obligation>,
    pub digit_bounds: Vec<DigitBounds>,
}

pub fn bounds_report(n: u64, p: Option<Prime>, d: u64) -> crate::Result<BoundsReport> {
    let mu_max = mu_max_bounds(n, d)?;
    let mut proof_check = Vec::new();
    let mut digit_bounds = Vec::new();
    if let Some(p) = p {
        proof_check = mu_max_proof_check(n, p, d)?;
        let m = expansion(d, p)?.top();
        for k in 1..m {
            let r6 = match bound_r6(n, p, d, k) {
                Ok(v) => Some(v.to_string()),
                Err(Error::CaseNotApplicable(_)) => None,
                Err(e) => return Err(e),
            };
            digit_bounds.push(DigitBounds {
                k: k as u64,
                l3: bound_l3(n, p, d, k)?.to_string(),
                r7: bound_r7(n, p, d, k)?.to_string(),
                r6,
            });
        }
    }
    Ok(BoundsReport {
        params: BoundsParams { n, p, d },
        mu_max,
        proof_check,
        digit_bounds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub params: ThresholdQuery,
    #[serde(flatten)]
    pub result: ThresholdResult,
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub p: u64,
    pub d: u64,
    pub valuation: u32,
    pub digits: String,
    pub case: String,
    pub verdict: Verdict,
    pub n_obligations: usize,
    pub n_failed: usize,
    pub min_margin_note: String,
}

impl SweepRow {
    fn from_certificate(c: &Certificate) -> SweepRow {
        let digits = c
            .expansion
            .digits
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        SweepRow {
            n: c.params.n,
            p: c.params.p.get(),
            d: c.params.d,
            valuation: c.expansion.valuation,
            digits,
            case: c.case.map_or("none".to_string(), |k| k.name().to_string()),
            verdict: c.verdict,
            n_obligations: c.obligations.len(),
            n_failed: c.failed().count(),
            min_margin_note: c.tightest().map_or("none".to_string(), tightness_note),
        }
    }

    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Stable && self.n_failed == 0
    }
}

fn tightness_note(o: &Obligation) -> String {
    let ctx = match o.context {
        Some(c) => serde_json::to_string(&c).expect("context serializes"),
        None => String::new(),
    };
    format!("{}{} slack {}", o.name, ctx, o.slack())
}

/// Certificates for `d` in `[d_min, d_max]`, in order of `d`.
pub fn sweep(
    n: u64,
    p: Prime,
    d_min: u64,
    d_max: u64,
    jobs: Option<usize>,
) -> crate::Result<Vec<SweepRow>> {
    if d_min < 1 || d_min > d_max {
        return Err(Error::Parameter(format!(
            "sweep needs 1 <= dmin <= dmax (got {d_min}, {d_max})"
        )));
    }
    let work = || {
        (d_min..=d_max)
            .into_par_iter()
            .map(|d| certify_case(n, p, d).map(|c| SweepRow::from_certificate(&c)))
            .collect::<crate::Result<Vec<_>>>()
    };
    match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::Parameter(format!("cannot start {j} workers: {e}")))?;
            pool.install(work)
        }
        None => work(),
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportRow {
    pub indices: Vec<u64>,
    pub margin: Rat,
    pub conclusive: bool,
    /// Number of twists in each class `C_j`.
    pub class_sizes: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSummary {
    pub supports: usize,
    pub conclusive: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportReport {
    pub params: NpdParams,
    pub cap: usize,
    pub rows: Vec<SupportRow>,
    pub summary: SupportSummary,
    /// Verdict of the case certificate, independent of the crude margins.
    pub certificate_verdict: Verdict,
    pub notes: Vec<String>,
}

/// Crude margin for every support; fails as a whole if the cap is exceeded.
pub fn support_explore(n: u64, p: Prime, d: u64, cap: usize) -> crate::Result<SupportReport> {
    let supports = enumerate_supports(n, p, d, cap)?;
    let mut rows = Vec::with_capacity(supports.len());
    for s in &supports {
        let m = crude_margin(s)?;
        rows.push(SupportRow {
            indices: s.indices().to_vec(),
            margin: m.margin,
            conclusive: m.conclusive,
            class_sizes: classify_support(s)
                .into_iter()
                .map(|(j, v)| (j, v.len()))
                .collect(),
        });
    }
    let conclusive = rows.iter().filter(|r| r.conclusive).count();
    let certificate_verdict = certify_case(n, p, d)?.verdict;
    let mut notes = Vec::new();
    if conclusive < rows.len() {
        notes.push(
            "a non-positive crude margin is inconclusive for that support; \
             it does not refute the certificate verdict"
                .to_string(),
        );
    }
    Ok(SupportReport {
        params: NpdParams { n, p, d },
        cap,
        summary: SupportSummary {
            supports: rows.len(),
            conclusive,
            inconclusive: rows.len() - conclusive,
        },
        rows,
        certificate_verdict,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    #[serde(flatten)]
    pub stats: CurveStats,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EnumerationOverflow { .. } | Error::ScanLimit { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter("SYZ_LOG");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    log::debug!("{:?}", cli.command);
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_RESOURCE
        }
    }
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn no_csv(output: &Output, command: &str) -> Result<(), Failure> {
    if output.csv {
        return Err(Failure::Usage(format!(
            "--csv is not supported by `{command}`"
        )));
    }
    Ok(())
}

fn emit(output: &Output, text: &str) -> io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn execute(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Classify { params, output } => {
            no_csv(&output, "classify")?;
            let r = classify_report(params.n, params.p, params.d)?;
            let text = match output.format(Format::Text) {
                Format::Json => Report::new("classify", &r).to_json(),
                _ => format!(
                    "n={} p={} d={} digits={:?} valuation={}: {} ({})\n",
                    params.n,
                    params.p.get(),
                    params.d,
                    r.expansion.digits,
                    r.expansion.valuation,
                    r.case.map_or("no case", Case::name),
                    r.verdict
                ),
            };
            emit(&output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Certify { params, output } => {
            no_csv(&output, "certify")?;
            let c = certify_case(params.n, params.p, params.d)?;
            let text = match output.format(Format::Text) {
                Format::Json => Report::new("certificate", &c).to_json(),
                _ => certificate_text(&c),
            };
            emit(&output, &text)?;
            Ok(if c.verdict == Verdict::Stable && c.all_hold {
                EXIT_OK
            } else {
                EXIT_UNCERTIFIED
            })
        }
        Command::Bounds { n, p, d, output } => {
            no_csv(&output, "bounds")?;
            let r = bounds_report(n, p, d)?;
            let text = match output.format(Format::Text) {
                Format::Json => Report::new("bounds", &r).to_json(),
                _ => bounds_text(&r),
            };
            emit(&output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Threshold {
            n,
            r,
            hn,
            disc,
            horizon,
            output,
        } => {
            no_csv(&output, "threshold")?;
            let q = ThresholdQuery {
                n,
                r,
                hn,
                disc,
                horizon,
            };
            let result = restriction_threshold(&q)?;
            let report = ThresholdReport { params: q, result };
            let text = match output.format(Format::Text) {
                Format::Json => Report::new("threshold", &report).to_json(),
                _ => format!(
                    "first_pass {}\nstable_from {}\n",
                    report.result.first_pass, report.result.stable_from
                ),
            };
            emit(&output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            n,
            p,
            dmin,
            dmax,
            jobs,
            output,
        } => {
            if jobs == Some(0) {
                return Err(Failure::Usage("--jobs must be positive".into()));
            }
            let rows = sweep(n, p, dmin, dmax, jobs)?;
            let text = match output.format(Format::Csv) {
                Format::Json => Report::new("sweep", SweepReport { rows: rows.clone() }).to_json(),
                _ => sweep_csv(&rows),
            };
            emit(&output, &text)?;
            Ok(if rows.iter().all(SweepRow::certified) {
                EXIT_OK
            } else {
                EXIT_UNCERTIFIED
            })
        }
        Command::Support {
            params,
            cap,
            output,
        } => {
            no_csv(&output, "support")?;
            let r = support_explore(params.n, params.p, params.d, cap)?;
            let text = match output.format(Format::Text) {
                Format::Json => Report::new("support", &r).to_json(),
                _ => support_text(&r),
            };
            emit(&output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Curve {
            genus,
            deg_l,
            output,
        } => {
            no_csv(&output, "curve")?;
            let stats = curve_syzygy_stats(genus, deg_l)?;
            let text = match output.format(Format::Text) {
                Format::Json => Report::new("curve", CurveReport { stats }).to_json(),
                _ => format!(
                    "rank {}\ndeg_dual {}\nslope_dual {}\n",
                    stats.rank, stats.deg_dual, stats.slope_dual
                ),
            };
            emit(&output, &text)?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n={} p={} d={} digits={:?} valuation={}",
        c.params.n,
        c.params.p.get(),
        c.params.d,
        c.expansion.digits,
        c.expansion.valuation
    );
    let _ = writeln!(
        s,
        "case {}  verdict {}",
        c.case.map_or("none", Case::name),
        c.verdict
    );
    for o in &c.obligations {
        let ctx = o
            .context
            .map(|x| serde_json::to_string(&x).expect("context serializes"))
            .unwrap_or_default();
        let _ = writeln!(s, "  {}{}: {}", o.name, ctx, o);
    }
    for note in &c.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn bounds_text(r: &BoundsReport) -> String {
    let mut s = format!("mu_max in [{}, {}]\n", r.mu_max.lower, r.mu_max.upper);
    for o in &r.proof_check {
        let _ = writeln!(s, "  {}: {}", o.name, o);
    }
    for b in &r.digit_bounds {
        let _ = writeln!(
            s,
            "  k={}: l3 {} r7 {} r6 {}",
            b.k,
            b.l3,
            b.r7,
            b.r6.as_deref().unwrap_or("n/a")
        );
    }
    s
}

fn support_text(r: &SupportReport) -> String {
    let mut s = String::new();
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{:?} margin {} {} classes {:?}",
            row.indices,
            row.margin,
            if row.conclusive {
                "conclusive"
            } else {
                "inconclusive"
            },
            row.class_sizes
        );
    }
    let _ = writeln!(
        s,
        "{} supports: {} conclusive, {} inconclusive; certificate verdict {}",
        r.summary.supports, r.summary.conclusive, r.summary.inconclusive, r.certificate_verdict
    );
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}
